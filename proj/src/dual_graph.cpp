#include "roadweights/dual_graph.hpp"

#include <algorithm>

#include "roadweights/errors.hpp"

namespace roadweights {

DualGraph::DualGraph(const RoadGraph& graph) {
  const std::size_t n = graph.num_edges();
  tails_.reserve(n);
  heads_.reserve(n);
  for (const auto& e : graph.edges()) {
    tails_.push_back(e.tail);
    heads_.push_back(e.head);
  }
  out_offsets_.assign(n + 1, 0);
  in_degrees_.assign(n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    const std::size_t junction = heads_[a];
    for (std::size_t b : graph.out_edges(junction)) {
      edges_.push_back({a, b, junction});
      ++in_degrees_[b];
    }
    out_offsets_[a + 1] = edges_.size();
  }
}

std::span<const DualEdge> DualGraph::out_edges(std::size_t v) const {
  if (v >= num_vertices()) throw_index("dual vertex out of range");
  return std::span<const DualEdge>(edges_).subspan(
      out_offsets_[v], out_offsets_[v + 1] - out_offsets_[v]);
}

std::size_t DualGraph::out_degree(std::size_t v) const {
  if (v >= num_vertices()) throw_index("dual vertex out of range");
  return out_offsets_[v + 1] - out_offsets_[v];
}

std::size_t DualGraph::in_degree(std::size_t v) const {
  if (v >= num_vertices()) throw_index("dual vertex out of range");
  return in_degrees_[v];
}

std::size_t DualGraph::d2p_vertex(std::size_t v) const {
  if (v >= num_vertices()) throw_index("dual vertex out of range");
  return v;
}

std::optional<std::size_t> DualGraph::find_edge(std::size_t from,
                                                std::size_t to) const {
  auto out = out_edges(from);
  auto it = std::lower_bound(
      out.begin(), out.end(), to,
      [](const DualEdge& e, std::size_t target) { return e.to < target; });
  if (it == out.end() || it->to != to) return std::nullopt;
  return out_offsets_[from] + static_cast<std::size_t>(it - out.begin());
}

bool DualGraph::reverse_pair(std::size_t u, std::size_t v) const {
  return tails_.at(u) == heads_.at(v) && heads_.at(u) == tails_.at(v);
}

DualGraph build_dual(const RoadGraph& graph) { return DualGraph(graph); }

}  // namespace roadweights
