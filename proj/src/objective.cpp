#include "roadweights/objective.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "roadweights/errors.hpp"

namespace roadweights {

namespace {

using Triplet = Eigen::Triplet<double>;

bool is_empty(const SparseMatrix& m) { return m.rows() == 0 && m.cols() == 0; }

void check_square(const SparseMatrix& m, Eigen::Index dim, const char* name) {
  if (is_empty(m)) return;
  if (m.rows() != dim || m.cols() != dim)
    throw_contract(std::string(name) + " has the wrong dimension");
}

}  // namespace

SparseMatrix build_design_matrix(const TripSet& trips, const RoadGraph& graph) {
  const auto rows = static_cast<Eigen::Index>(graph.cost_dimension());
  const auto cols = static_cast<Eigen::Index>(trips.size());
  std::vector<Triplet> entries;
  for (std::size_t t = 0; t < trips.size(); ++t) {
    for (const auto& r : trips[t].records) {
      if (r.edge >= graph.num_edges()) throw_index("edge index out of range");
      const double length = graph.edge(r.edge).length_m;
      const auto w = tag_weights(r, graph.schedule());
      for (std::size_t k = 0; k < w.size(); ++k)
        if (w[k] != 0.0)
          entries.emplace_back(
              static_cast<Eigen::Index>(graph.flat_index(r.edge, k)),
              static_cast<Eigen::Index>(t), length * w[k]);
    }
  }
  SparseMatrix q(rows, cols);
  q.setFromTriplets(entries.begin(), entries.end());
  return q;
}

Eigen::VectorXd cost_vector_of(const TripSet& trips) {
  Eigen::VectorXd c(static_cast<Eigen::Index>(trips.size()));
  for (std::size_t i = 0; i < trips.size(); ++i)
    c[static_cast<Eigen::Index>(i)] = trips[i].cost;
  return c;
}

double similarity(double pr_i, double pr_j) {
  if (!(pr_i > 0.0) || !(pr_j > 0.0))
    throw_contract("similarity needs positive PageRank values");
  return std::min(pr_i, pr_j) / std::max(pr_i, pr_j);
}

SparseMatrix build_similarity(std::span<const PageRankVector> pageranks,
                              std::size_t num_edges, double threshold,
                              SimilarityMode mode) {
  if (!(threshold > 0.0 && threshold <= 1.0))
    throw_contract("similarity threshold must lie in (0, 1]");
  if (mode == SimilarityMode::kAuto)
    mode = num_edges <= kAllPairsLimit ? SimilarityMode::kAllPairs
                                       : SimilarityMode::kSortedSweep;
  const auto dim = static_cast<Eigen::Index>(num_edges * pageranks.size());
  std::vector<Triplet> entries;
  for (std::size_t k = 0; k < pageranks.size(); ++k) {
    const auto& pr = pageranks[k].values;
    if (pr.size() != num_edges)
      throw_contract("PageRank vector length does not match |E|");
    const std::size_t offset = k * num_edges;

    // Positive entries ordered by decreasing PageRank; ties by index.
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < num_edges; ++i)
      if (pr[i] > 0.0) order.push_back(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pr[a] > pr[b]; });

    auto link = [&](std::size_t i, std::size_t j, double s) {
      entries.emplace_back(static_cast<Eigen::Index>(offset + i),
                           static_cast<Eigen::Index>(offset + j), s);
      entries.emplace_back(static_cast<Eigen::Index>(offset + j),
                           static_cast<Eigen::Index>(offset + i), s);
    };
    for (std::size_t a = 0; a < order.size(); ++a) {
      // Along the sorted order the similarity to order[a] only decreases, so
      // the scan can stop at the first pair under the threshold.
      for (std::size_t b = a + 1; b < order.size(); ++b) {
        const double s = similarity(pr[order[a]], pr[order[b]]);
        if (s < threshold) break;
        link(order[a], order[b], s);
        if (mode == SimilarityMode::kSortedSweep) break;
      }
    }
  }
  SparseMatrix a(dim, dim);
  a.setFromTriplets(entries.begin(), entries.end());
  return a;
}

std::vector<RoadCategory> classify_edges(const RoadGraph& graph,
                                         double highway_cutoff_kmh) {
  std::vector<RoadCategory> out;
  out.reserve(graph.num_edges());
  for (const auto& e : graph.edges())
    out.push_back(e.speed_limit_kmh && *e.speed_limit_kmh > highway_cutoff_kmh
                      ? RoadCategory::kHighway
                      : RoadCategory::kUrban);
  return out;
}

SparseMatrix build_adjacency(std::span<const TransitionMatrix> transitions,
                             const DualGraph& dual,
                             std::span<const RoadCategory> categories) {
  const std::size_t n = dual.num_vertices();
  if (categories.size() != n)
    throw_contract("one road category per edge expected");
  const auto dim = static_cast<Eigen::Index>(n * transitions.size());
  std::vector<Triplet> entries;
  for (std::size_t k = 0; k < transitions.size(); ++k) {
    const auto weights = transitions[k].edge_weights();
    if (weights.size() != dual.num_edges())
      throw_contract("transition matrix built on a different dual graph");
    const std::size_t offset = k * n;
    for (std::size_t e = 0; e < dual.num_edges(); ++e) {
      const auto& de = dual.edge(e);
      if (dual.reverse_pair(de.from, de.to)) continue;
      if (categories[de.from] != categories[de.to]) continue;
      const double w = weights[e];
      if (w == 0.0) continue;
      entries.emplace_back(static_cast<Eigen::Index>(offset + de.from),
                           static_cast<Eigen::Index>(offset + de.to), w);
      entries.emplace_back(static_cast<Eigen::Index>(offset + de.to),
                           static_cast<Eigen::Index>(offset + de.from), w);
    }
  }
  SparseMatrix b(dim, dim);
  b.setFromTriplets(entries.begin(), entries.end(),
                    [](double x, double y) { return std::max(x, y); });
  return b;
}

SparseMatrix laplacian(const SparseMatrix& s) {
  if (s.rows() != s.cols()) throw_contract("laplacian of a non-square matrix");
  double scale = 0.0;
  for (Eigen::Index j = 0; j < s.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(s, j); it; ++it) {
      if (it.value() < 0.0) throw_contract("laplacian of a negative matrix");
      scale = std::max(scale, it.value());
    }
  const SparseMatrix st = s.transpose();
  const double asymmetry =
      is_empty(s) ? 0.0 : SparseMatrix(s - st).coeffs().cwiseAbs().maxCoeff();
  if (asymmetry > 1e-12 * std::max(1.0, scale))
    throw_contract("laplacian of an asymmetric matrix");

  std::vector<Triplet> entries;
  std::vector<double> degree(static_cast<std::size_t>(s.rows()), 0.0);
  for (Eigen::Index j = 0; j < s.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(s, j); it; ++it) {
      if (it.row() == it.col()) continue;
      entries.emplace_back(it.row(), it.col(), -it.value());
      degree[static_cast<std::size_t>(it.row())] += it.value();
    }
  for (std::size_t i = 0; i < degree.size(); ++i)
    if (degree[i] != 0.0)
      entries.emplace_back(static_cast<Eigen::Index>(i),
                           static_cast<Eigen::Index>(i), degree[i]);
  SparseMatrix l(s.rows(), s.cols());
  l.setFromTriplets(entries.begin(), entries.end());
  return l;
}

SystemOperator::SystemOperator(const SparseMatrix& q,
                               const SparseMatrix& laplacian_a,
                               const SparseMatrix& laplacian_b,
                               const Penalties& penalties)
    : q_(q), regularizer_(q.rows(), q.rows()), gamma_(penalties.gamma) {
  if (penalties.alpha < 0.0 || penalties.beta < 0.0 || penalties.gamma < 0.0)
    throw_contract("penalty weights must be non-negative");
  check_square(laplacian_a, q.rows(), "L_A");
  check_square(laplacian_b, q.rows(), "L_B");
  if (penalties.alpha != 0.0 && !is_empty(laplacian_a))
    regularizer_ += penalties.alpha * laplacian_a;
  if (penalties.beta != 0.0 && !is_empty(laplacian_b))
    regularizer_ += penalties.beta * laplacian_b;
  regularizer_.makeCompressed();
}

void SystemOperator::apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  const Eigen::VectorXd projected = q_.transpose() * x;
  y.noalias() = q_ * projected;
  y.noalias() += regularizer_ * x;
  y += gamma_ * x;
}

Eigen::VectorXd SystemOperator::diagonal() const {
  Eigen::VectorXd diag = Eigen::VectorXd::Constant(dim(), gamma_);
  for (Eigen::Index j = 0; j < q_.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(q_, j); it; ++it)
      diag[it.row()] += it.value() * it.value();
  for (Eigen::Index j = 0; j < regularizer_.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(regularizer_, j); it; ++it)
      if (it.row() == it.col()) diag[it.row()] += it.value();
  return diag;
}

SolveResult solve(const SparseMatrix& q, const Eigen::VectorXd& c,
                  const SparseMatrix& laplacian_a,
                  const SparseMatrix& laplacian_b, const Penalties& penalties,
                  const SolverOptions& options) {
  if (!(penalties.gamma > 0.0))
    throw_contract("gamma must be positive for a positive definite system");
  if (c.size() != q.cols())
    throw_contract("one observed cost per design-matrix column expected");
  const SystemOperator op(q, laplacian_a, laplacian_b, penalties);
  const Eigen::VectorXd rhs = q * c;
  CgOptions cg{options.tol, options.max_iters};
  auto apply = [&op](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    op.apply(x, y);
  };
  CgResult r;
  if (options.jacobi) {
    const Eigen::VectorXd inverse = op.diagonal().cwiseInverse();
    r = conjugate_gradient(apply, rhs, cg, &inverse);
  } else {
    r = conjugate_gradient(apply, rhs, cg);
  }
  return {std::move(r.x), r.iterations, r.relative_residual};
}

ObjectiveTerms objective_value(const Eigen::VectorXd& d, const SparseMatrix& q,
                               const Eigen::VectorXd& c,
                               const SparseMatrix& laplacian_a,
                               const SparseMatrix& laplacian_b,
                               const Penalties& penalties) {
  if (d.size() != q.rows() || c.size() != q.cols())
    throw_contract("objective_value: inconsistent dimensions");
  check_square(laplacian_a, q.rows(), "L_A");
  check_square(laplacian_b, q.rows(), "L_B");
  ObjectiveTerms t;
  t.rss = (c - q.transpose() * d).squaredNorm();
  if (!is_empty(laplacian_a)) t.prtc = d.dot(laplacian_a * d);
  if (!is_empty(laplacian_b)) t.datc = d.dot(laplacian_b * d);
  t.l2 = d.squaredNorm();
  t.total = t.rss + penalties.alpha * t.prtc + penalties.beta * t.datc +
            penalties.gamma * t.l2;
  return t;
}

std::vector<bool> annotated_entries(const SparseMatrix& q,
                                    const SparseMatrix* a,
                                    const SparseMatrix* b) {
  const auto n = static_cast<std::size_t>(q.rows());
  std::vector<bool> seen(n, false);
  std::queue<Eigen::Index> frontier;
  for (Eigen::Index j = 0; j < q.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(q, j); it; ++it)
      if (it.value() != 0.0 && !seen[static_cast<std::size_t>(it.row())]) {
        seen[static_cast<std::size_t>(it.row())] = true;
        frontier.push(it.row());
      }
  for (const SparseMatrix* m : {a, b})
    if (m && !is_empty(*m) && (m->rows() != q.rows() || m->cols() != q.rows()))
      throw_contract("constraint matrix has the wrong dimension");
  while (!frontier.empty()) {
    const Eigen::Index v = frontier.front();
    frontier.pop();
    for (const SparseMatrix* m : {a, b}) {
      if (!m || is_empty(*m)) continue;
      // Symmetric, so column v lists the neighbours of v.
      for (SparseMatrix::InnerIterator it(*m, v); it; ++it) {
        const auto w = static_cast<std::size_t>(it.row());
        if (it.value() != 0.0 && !seen[w]) {
          seen[w] = true;
          frontier.push(it.row());
        }
      }
    }
  }
  return seen;
}

}  // namespace roadweights
