#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "roadweights/dual_graph.hpp"
#include "roadweights/trips.hpp"

namespace roadweights {

// Row-stochastic transition matrix over dual vertices for one tag. Entries
// live on the dual edges (same indexing as DualGraph::edges()). A dual vertex
// without out-edges is "dangling": its row is implicitly uniform over every
// dual vertex.
class TransitionMatrix {
 public:
  TransitionMatrix(const DualGraph& dual, std::vector<double> edge_weights,
                   std::size_t tag);

  std::size_t tag() const noexcept { return tag_; }
  std::size_t size() const noexcept { return offsets_.size() - 1; }

  // Weight of the i-th dual edge.
  std::span<const double> edge_weights() const noexcept { return weights_; }
  bool is_dangling(std::size_t v) const { return offsets_.at(v) == offsets_.at(v + 1); }

  double at(std::size_t i, std::size_t j) const;
  double row_sum(std::size_t i) const;

  // out = Mᵀ · v
  void apply_transpose(std::span<const double> v, std::span<double> out) const;

  // Successors of `v` in the repaired chain, used for class detection.
  std::span<const std::size_t> targets(std::size_t v) const;

 private:
  std::size_t tag_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> targets_;
  std::vector<double> weights_;
  std::vector<std::size_t> dangling_;
};

// Number of times each dual edge is traversed back to back by the trips
// (occurrences, not distinct trips).
std::vector<double> transition_counts(const DualGraph& dual,
                                      const TripSet& trips);

// Laplace-smoothed dual weights: (count(u→v) + 1) / (Σ_x count(u→x) + |OUT(u)|).
TransitionMatrix dual_weights(const DualGraph& dual, const TripSet& trips,
                              std::size_t tag = 0);

struct PageRankOptions {
  double tol = 1e-10;
  int max_iters = 10'000;
};

struct PageRankVector {
  std::size_t tag = 0;
  std::vector<double> values;
  int iterations = 0;
  double residual = 0.0;      // ‖Mᵀv − v‖₁ of the returned vector
  bool averaged = false;      // lazy-chain averaging was switched on
  std::size_t closed_classes = 0;
  std::size_t transient_vertices = 0;  // vertices outside every closed class
};

// Stationary distribution with damping factor 1, by power iteration started
// from the uniform vector. When the chain has several closed classes each is
// solved separately and weighted by its size; transient vertices get 0.
// Throws ConvergenceError if the tolerance is not met within max_iters.
PageRankVector pagerank(const TransitionMatrix& m,
                        const PageRankOptions& options = {});

// One PageRank vector per tag, each on the transition matrix built from the
// trips of that tag's partition.
std::vector<TransitionMatrix> tag_transitions(
    const DualGraph& dual, const std::vector<TripSet>& partitions);
std::vector<PageRankVector> tag_pageranks(
    const std::vector<TransitionMatrix>& transitions,
    const PageRankOptions& options = {});

// Values normalized to (0, 100] by the maximum and bucketed into
// (b - 1, b], b = 1..100. Zero values are counted in bucket 1.
struct PageRankHistogram {
  std::array<double, 100> percentage{};
  double max_value = 0.0;
};

PageRankHistogram pagerank_stats(std::span<const double> values);

struct DegreeStats {
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::size_t max_in_degree = 0;
  std::size_t max_out_degree = 0;
  double average_degree = 0.0;  // |E'| / |V'|
  std::vector<double> in_degree_percentage;   // index = degree
  std::vector<double> out_degree_percentage;
};

DegreeStats degree_stats(const DualGraph& dual);

}  // namespace roadweights
