#include "roadweights/pagerank.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "roadweights/errors.hpp"

namespace roadweights {

TransitionMatrix::TransitionMatrix(const DualGraph& dual,
                                   std::vector<double> edge_weights,
                                   std::size_t tag)
    : tag_(tag), weights_(std::move(edge_weights)) {
  if (weights_.size() != dual.num_edges())
    throw_contract("one weight per dual edge expected");
  const std::size_t n = dual.num_vertices();
  offsets_.resize(n + 1);
  for (std::size_t v = 0; v <= n; ++v)
    offsets_[v] = v < n ? dual.out_begin(v) : dual.num_edges();
  targets_.reserve(dual.num_edges());
  for (const auto& e : dual.edges()) targets_.push_back(e.to);
  for (std::size_t v = 0; v < n; ++v)
    if (offsets_[v] == offsets_[v + 1]) dangling_.push_back(v);
}

double TransitionMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= size() || j >= size()) throw_index("transition index out of range");
  if (is_dangling(i)) return 1.0 / static_cast<double>(size());
  double w = 0.0;
  for (std::size_t e = offsets_[i]; e < offsets_[i + 1]; ++e)
    if (targets_[e] == j) w += weights_[e];
  return w;
}

double TransitionMatrix::row_sum(std::size_t i) const {
  if (i >= size()) throw_index("transition index out of range");
  if (is_dangling(i)) return 1.0;
  double s = 0.0;
  for (std::size_t e = offsets_[i]; e < offsets_[i + 1]; ++e) s += weights_[e];
  return s;
}

void TransitionMatrix::apply_transpose(std::span<const double> v,
                                       std::span<double> out) const {
  const std::size_t n = size();
  if (v.size() != n || out.size() != n)
    throw_contract("vector length does not match transition matrix");
  std::fill(out.begin(), out.end(), 0.0);
  double dangling_mass = 0.0;
  for (std::size_t u : dangling_) dangling_mass += v[u];
  for (std::size_t u = 0; u < n; ++u) {
    const double mass = v[u];
    if (mass == 0.0) continue;
    for (std::size_t e = offsets_[u]; e < offsets_[u + 1]; ++e)
      out[targets_[e]] += mass * weights_[e];
  }
  if (dangling_mass != 0.0) {
    const double share = dangling_mass / static_cast<double>(n);
    for (double& x : out) x += share;
  }
}

std::span<const std::size_t> TransitionMatrix::targets(std::size_t v) const {
  return std::span<const std::size_t>(targets_).subspan(
      offsets_.at(v), offsets_.at(v + 1) - offsets_.at(v));
}

std::vector<double> transition_counts(const DualGraph& dual,
                                      const TripSet& trips) {
  std::vector<double> counts(dual.num_edges(), 0.0);
  for (const auto& t : trips) {
    for (std::size_t m = 0; m + 1 < t.records.size(); ++m) {
      const std::size_t a = t.records[m].edge;
      const std::size_t b = t.records[m + 1].edge;
      if (a >= dual.num_vertices() || b >= dual.num_vertices()) continue;
      if (auto e = dual.find_edge(a, b)) counts[*e] += 1.0;
    }
  }
  return counts;
}

TransitionMatrix dual_weights(const DualGraph& dual, const TripSet& trips,
                              std::size_t tag) {
  const auto counts = transition_counts(dual, trips);
  std::vector<double> weights(dual.num_edges(), 0.0);
  for (std::size_t u = 0; u < dual.num_vertices(); ++u) {
    const std::size_t begin = dual.out_begin(u);
    const std::size_t degree = dual.out_degree(u);
    double total = 0.0;
    for (std::size_t e = begin; e < begin + degree; ++e) total += counts[e];
    const double denominator = total + static_cast<double>(degree);
    for (std::size_t e = begin; e < begin + degree; ++e)
      weights[e] = (counts[e] + 1.0) / denominator;
  }
  return TransitionMatrix(dual, std::move(weights), tag);
}

namespace {

// Closed communicating classes of the repaired chain. Dangling rows reach
// every vertex; they are modelled by a virtual vertex n with edges
// dangling → n → all.
std::vector<std::vector<std::size_t>> closed_classes(const TransitionMatrix& m) {
  const std::size_t n = m.size();
  const std::size_t virtual_vertex = n;
  bool has_dangling = false;
  for (std::size_t v = 0; v < n; ++v) has_dangling |= m.is_dangling(v);
  const std::size_t total = has_dangling ? n + 1 : n;

  auto successor_count = [&](std::size_t v) -> std::size_t {
    if (v == virtual_vertex) return n;
    return m.is_dangling(v) ? 1 : m.targets(v).size();
  };
  auto successor = [&](std::size_t v, std::size_t i) -> std::size_t {
    if (v == virtual_vertex) return i;
    return m.is_dangling(v) ? virtual_vertex : m.targets(v)[i];
  };

  // Iterative Tarjan.
  constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> index(total, kUnvisited), low(total, 0),
      component(total, kUnvisited);
  std::vector<char> on_stack(total, 0);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> call;  // (vertex, next child)
  std::size_t counter = 0, num_components = 0;
  for (std::size_t root = 0; root < total; ++root) {
    if (index[root] != kUnvisited) continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, child] = call.back();
      if (child < successor_count(v)) {
        const std::size_t w = successor(v, child++);
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          component[w] = num_components;
        } while (w != v);
        ++num_components;
      }
      const std::size_t finished = v;
      call.pop_back();
      if (!call.empty())
        low[call.back().first] = std::min(low[call.back().first], low[finished]);
    }
  }

  std::vector<char> closed(num_components, 1);
  for (std::size_t v = 0; v < total; ++v)
    for (std::size_t i = 0; i < successor_count(v); ++i)
      if (component[successor(v, i)] != component[v]) closed[component[v]] = 0;

  std::vector<std::vector<std::size_t>> members(num_components);
  for (std::size_t v = 0; v < n; ++v)
    if (closed[component[v]]) members[component[v]].push_back(v);
  std::vector<std::vector<std::size_t>> out;
  for (auto& c : members)
    if (!c.empty()) out.push_back(std::move(c));
  std::sort(out.begin(), out.end());
  return out;
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

void normalize(std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  if (s > 0.0)
    for (double& x : v) x /= s;
}

struct PowerResult {
  std::vector<double> values;
  int iterations = 0;
  double residual = 0.0;
  bool averaged = false;
};

PowerResult power_iterate(const TransitionMatrix& m, std::vector<double> v,
                          const PageRankOptions& options) {
  constexpr int kStallWindow = 10;
  std::vector<double> next(v.size());
  PowerResult out;
  double best = std::numeric_limits<double>::infinity();
  int stalled = 0;
  for (int it = 0; it <= options.max_iters; ++it) {
    m.apply_transpose(v, next);
    const double residual = l1_distance(next, v);
    out.iterations = it;
    out.residual = residual;
    if (residual <= options.tol) {
      out.values = std::move(v);
      return out;
    }
    if (it == options.max_iters) break;
    if (residual < 0.999 * best) {
      best = residual;
      stalled = 0;
    } else {
      ++stalled;
    }
    // A periodic chain makes the residual cycle without improving; averaging consecutive
    // iterates runs the lazy chain (I + M)/2, which is aperiodic and has the
    // same stationary vector.
    if (stalled >= kStallWindow) out.averaged = true;
    if (out.averaged) {
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.5 * (v[i] + next[i]);
    } else {
      v.swap(next);
    }
    normalize(v);
  }
  throw ConvergenceError("pagerank power iteration", out.residual,
                         options.max_iters);
}

}  // namespace

PageRankVector pagerank(const TransitionMatrix& m,
                        const PageRankOptions& options) {
  if (!(options.tol > 0.0) || options.max_iters < 0)
    throw_contract("pagerank needs tol > 0 and max_iters >= 0");
  PageRankVector out;
  out.tag = m.tag();
  const std::size_t n = m.size();
  out.values.assign(n, 0.0);
  if (n == 0) return out;

  const auto classes = closed_classes(m);
  std::size_t recurrent = 0;
  for (const auto& c : classes) recurrent += c.size();
  out.closed_classes = classes.size();
  out.transient_vertices = n - recurrent;

  for (const auto& c : classes) {
    std::vector<double> start(n, 0.0);
    for (std::size_t v : c) start[v] = 1.0 / static_cast<double>(c.size());
    auto r = power_iterate(m, std::move(start), options);
    const double share =
        static_cast<double>(c.size()) / static_cast<double>(recurrent);
    for (std::size_t v : c) out.values[v] += share * r.values[v];
    out.iterations = std::max(out.iterations, r.iterations);
    out.averaged = out.averaged || r.averaged;
  }
  normalize(out.values);
  std::vector<double> check(n);
  m.apply_transpose(out.values, check);
  out.residual = l1_distance(check, out.values);
  return out;
}

std::vector<TransitionMatrix> tag_transitions(
    const DualGraph& dual, const std::vector<TripSet>& partitions) {
  std::vector<TransitionMatrix> out;
  out.reserve(partitions.size());
  for (std::size_t k = 0; k < partitions.size(); ++k)
    out.push_back(dual_weights(dual, partitions[k], k));
  return out;
}

std::vector<PageRankVector> tag_pageranks(
    const std::vector<TransitionMatrix>& transitions,
    const PageRankOptions& options) {
  std::vector<PageRankVector> out;
  out.reserve(transitions.size());
  for (const auto& m : transitions) out.push_back(pagerank(m, options));
  return out;
}

PageRankHistogram pagerank_stats(std::span<const double> values) {
  PageRankHistogram out;
  if (values.empty()) throw_contract("pagerank_stats of an empty vector");
  for (double x : values)
    if (!(x >= 0.0)) throw_contract("pagerank values must be non-negative");
  out.max_value = *std::max_element(values.begin(), values.end());
  if (!(out.max_value > 0.0)) throw_contract("pagerank_stats of a zero vector");
  std::array<std::size_t, 100> counts{};
  for (double x : values) {
    const double y = 100.0 * x / out.max_value;
    const auto bucket = static_cast<std::size_t>(
        std::clamp(std::ceil(y), 1.0, 100.0));
    ++counts[bucket - 1];
  }
  const double n = static_cast<double>(values.size());
  for (std::size_t b = 0; b < 100; ++b)
    out.percentage[b] = 100.0 * static_cast<double>(counts[b]) / n;
  return out;
}

DegreeStats degree_stats(const DualGraph& dual) {
  DegreeStats out;
  out.vertices = dual.num_vertices();
  out.edges = dual.num_edges();
  if (out.vertices == 0) return out;
  std::vector<std::size_t> in_counts, out_counts;
  auto bump = [](std::vector<std::size_t>& h, std::size_t d) {
    if (h.size() <= d) h.resize(d + 1, 0);
    ++h[d];
  };
  for (std::size_t v = 0; v < out.vertices; ++v) {
    const std::size_t in = dual.in_degree(v), od = dual.out_degree(v);
    out.max_in_degree = std::max(out.max_in_degree, in);
    out.max_out_degree = std::max(out.max_out_degree, od);
    bump(in_counts, in);
    bump(out_counts, od);
  }
  out.average_degree =
      static_cast<double>(out.edges) / static_cast<double>(out.vertices);
  const double n = static_cast<double>(out.vertices);
  for (auto c : in_counts)
    out.in_degree_percentage.push_back(100.0 * static_cast<double>(c) / n);
  for (auto c : out_counts)
    out.out_degree_percentage.push_back(100.0 * static_cast<double>(c) / n);
  return out;
}

}  // namespace roadweights
