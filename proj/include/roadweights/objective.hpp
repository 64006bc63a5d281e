#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "roadweights/conjugate_gradient.hpp"
#include "roadweights/dual_graph.hpp"
#include "roadweights/graph.hpp"
#include "roadweights/pagerank.hpp"
#include "roadweights/trips.hpp"

namespace roadweights {

using SparseMatrix = Eigen::SparseMatrix<double>;

// Q: one column per trip, one row per (edge, tag) cost entry. Entry
// [flat(e, k), t] accumulates length(e) · weight(record, k) over the records
// of trip t on edge e, so that (Qᵀd)[t] is the estimated cost of trip t.
SparseMatrix build_design_matrix(const TripSet& trips, const RoadGraph& graph);

Eigen::VectorXd cost_vector_of(const TripSet& trips);

// min / max of two positive PageRank values.
double similarity(double pr_i, double pr_j);

enum class SimilarityMode {
  kAuto,         // all pairs up to kAllPairsLimit edges, sorted sweep above
  kAllPairs,
  kSortedSweep,  // link neighbours in PageRank order only
};

inline constexpr std::size_t kAllPairsLimit = 2000;

// Block-diagonal PageRank similarity matrix A, |d| × |d|. Within the block of
// tag k, entry (i, j), i ≠ j, is similarity(PR_k(i), PR_k(j)) when that is at
// least `threshold`, else 0. Dual vertices with zero PageRank (transient in a
// reducible chain) are left unlinked.
SparseMatrix build_similarity(std::span<const PageRankVector> pageranks,
                              std::size_t num_edges, double threshold,
                              SimilarityMode mode = SimilarityMode::kAuto);

enum class RoadCategory { kUrban, kHighway };

// Highway when the speed limit is strictly above `highway_cutoff_kmh`; edges
// without a speed limit count as urban.
std::vector<RoadCategory> classify_edges(const RoadGraph& graph,
                                         double highway_cutoff_kmh = 90.0);

// Block-diagonal directional adjacency matrix B. Within tag k, entry (i, j) is
// the larger of W'_k(i→j) and W'_k(j→i), where W' is the dual weight with
// reverse pairs zeroed. Pairs of edges in different categories get 0.
SparseMatrix build_adjacency(std::span<const TransitionMatrix> transitions,
                             const DualGraph& dual,
                             std::span<const RoadCategory> categories);

// Graph Laplacian diag(row sums) − S of a symmetric non-negative matrix.
SparseMatrix laplacian(const SparseMatrix& similarity);

// Hyper-parameters weighting the PageRank term (alpha), the adjacency term
// (beta) and the L2 term (gamma).
struct Penalties {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1e-4;
};

struct SolverOptions {
  double tol = 1e-8;
  int max_iters = 0;  // 0 selects 10 · |d|
  bool jacobi = false;
};

struct SolveResult {
  Eigen::VectorXd d;
  int iterations = 0;
  double relative_residual = 0.0;
};

// The normal-equation operator QQᵀ + α·L_A + β·L_B + γ·I, applied without
// forming QQᵀ.
class SystemOperator {
 public:
  SystemOperator(const SparseMatrix& q, const SparseMatrix& laplacian_a,
                 const SparseMatrix& laplacian_b, const Penalties& penalties);

  Eigen::Index dim() const noexcept { return q_.rows(); }
  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
  Eigen::VectorXd diagonal() const;

 private:
  const SparseMatrix& q_;
  SparseMatrix regularizer_;  // α·L_A + β·L_B
  double gamma_;
};

// Minimizer of ‖c − Qᵀd‖² + α·dᵀL_A d + β·dᵀL_B d + γ·‖d‖², i.e. the
// solution of [QQᵀ + α·L_A + β·L_B + γ·I] d = Qc, by conjugate gradient.
// Requires γ > 0.
SolveResult solve(const SparseMatrix& q, const Eigen::VectorXd& c,
                  const SparseMatrix& laplacian_a,
                  const SparseMatrix& laplacian_b, const Penalties& penalties,
                  const SolverOptions& options = {});

struct ObjectiveTerms {
  double rss = 0.0;
  double prtc = 0.0;
  double datc = 0.0;
  double l2 = 0.0;
  double total = 0.0;
};

ObjectiveTerms objective_value(const Eigen::VectorXd& d, const SparseMatrix& q,
                               const Eigen::VectorXd& c,
                               const SparseMatrix& laplacian_a,
                               const SparseMatrix& laplacian_b,
                               const Penalties& penalties);

// Cost entries reachable from an entry touched by some trip, moving along
// non-zero entries of `a` and/or `b` (either may be null).
std::vector<bool> annotated_entries(const SparseMatrix& q,
                                    const SparseMatrix* a,
                                    const SparseMatrix* b);

}  // namespace roadweights
