#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "roadweights/graph.hpp"

namespace roadweights {

// A dual edge links two road segments traversable back to back; `junction`
// is the primal vertex they share.
struct DualEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  std::size_t junction = 0;
};

// Line graph of a RoadGraph. Dual vertex i stands for primal edge i. Dual
// edges are stored grouped by source in ascending (from, to) order, which
// makes the construction deterministic for a given edge ordering.
class DualGraph {
 public:
  explicit DualGraph(const RoadGraph& graph);

  std::size_t num_vertices() const noexcept { return tails_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }

  std::span<const DualEdge> edges() const noexcept { return edges_; }
  const DualEdge& edge(std::size_t index) const { return edges_.at(index); }

  // Dual edges leaving `v`, sorted by target.
  std::span<const DualEdge> out_edges(std::size_t v) const;
  // First index into edges() of the out-edges of `v`.
  std::size_t out_begin(std::size_t v) const { return out_offsets_.at(v); }
  std::size_t out_degree(std::size_t v) const;
  std::size_t in_degree(std::size_t v) const;

  // Primal edge represented by dual vertex `v`.
  std::size_t d2p_vertex(std::size_t v) const;
  // Primal vertex shared by the two segments of dual edge `e`.
  std::size_t d2p_edge(std::size_t e) const { return edges_.at(e).junction; }

  std::optional<std::size_t> find_edge(std::size_t from, std::size_t to) const;

  // True when the primal edges of u and v are (a, b) and (b, a).
  bool reverse_pair(std::size_t u, std::size_t v) const;

  std::size_t primal_tail(std::size_t v) const { return tails_.at(v); }
  std::size_t primal_head(std::size_t v) const { return heads_.at(v); }

 private:
  std::vector<std::size_t> tails_;
  std::vector<std::size_t> heads_;
  std::vector<DualEdge> edges_;
  std::vector<std::size_t> out_offsets_;
  std::vector<std::size_t> in_degrees_;
};

DualGraph build_dual(const RoadGraph& graph);

}  // namespace roadweights
