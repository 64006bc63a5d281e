#include "roadweights/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <string>
#include <tuple>

#include "roadweights/dual_graph.hpp"
#include "roadweights/errors.hpp"
#include "roadweights/pagerank.hpp"
#include "roadweights/random.hpp"

namespace roadweights {

void SyntheticSpec::validate() const {
  if (rows < 2 || cols < 2) throw_contract("synthetic grid needs at least 2x2 junctions");
  if (!(min_length_m > 0.0) || !(max_length_m >= min_length_m))
    throw_contract("synthetic edge lengths must satisfy 0 < min <= max");
  if (!(local_speed_kmh > 0.0) || !(arterial_speed_kmh > 0.0))
    throw_contract("synthetic speed limits must be positive");
  if (!(missing_speed_limit_fraction >= 0.0 && missing_speed_limit_fraction <= 1.0))
    throw_contract("missing_speed_limit_fraction must lie in [0, 1]");
  const std::size_t tags = schedule ? schedule->size() : 3;
  if (!factor_ranges.empty() && factor_ranges.size() != tags)
    throw_contract("one factor range per tag expected");
  for (const auto& [lo, hi] : factor_ranges)
    if (!(lo > 0.0) || !(hi >= lo)) throw_contract("factor ranges must satisfy 0 < low <= high");
  if (!(factor_jitter >= 0.0 && factor_jitter < 1.0))
    throw_contract("factor_jitter must lie in [0, 1)");
  if (!(flow_congestion >= 0.0 && flow_congestion <= 1.0))
    throw_contract("flow_congestion must lie in [0, 1]");
  if (min_trip_edges < 1 || max_trip_edges < min_trip_edges)
    throw_contract("trip lengths must satisfy 1 <= min <= max");
  if (!(arterial_preference > 0.0)) throw_contract("arterial_preference must be positive");
  if (!(weekend_probability >= 0.0 && weekend_probability <= 1.0))
    throw_contract("weekend_probability must lie in [0, 1]");
  if (!(coverage_fraction > 0.0 && coverage_fraction <= 1.0))
    throw_contract("coverage_fraction must lie in (0, 1]");
  if (!(noise >= 0.0)) throw_contract("noise must be non-negative");
}

double edge_coverage(const TripSet& trips, std::size_t num_edges) {
  if (num_edges == 0) return 0.0;
  std::vector<char> seen(num_edges, 0);
  for (const auto& t : trips)
    for (const auto& r : t.records)
      if (r.edge < num_edges) seen[r.edge] = 1;
  return static_cast<double>(std::count(seen.begin(), seen.end(), 1)) /
         static_cast<double>(num_edges);
}

namespace {

struct Layout {
  std::vector<EdgeSpec> specs;
  std::vector<double> true_speed_kmh;
  std::vector<bool> arterial;
  std::vector<double> centre_distance;  // normalized, 0 in the centre
};

std::string junction_id(std::size_t r, std::size_t c) {
  return std::to_string(r) + "_" + std::to_string(c);
}

Layout lay_out_grid(const SyntheticSpec& spec, Rng& rng) {
  Layout g;
  const double mid_r = 0.5 * static_cast<double>(spec.rows - 1);
  const double mid_c = 0.5 * static_cast<double>(spec.cols - 1);
  const double radius = std::max(mid_r, mid_c);
  auto is_arterial_line = [&](std::size_t i) {
    return spec.arterial_spacing > 0 && i % spec.arterial_spacing == 0;
  };
  auto add_segment = [&](std::size_t r0, std::size_t c0, std::size_t r1,
                         std::size_t c1, bool arterial) {
    const double length = rng.uniform(spec.min_length_m, spec.max_length_m);
    const double speed = arterial ? spec.arterial_speed_kmh : spec.local_speed_kmh;
    const double dr = 0.5 * static_cast<double>(r0 + r1) - mid_r;
    const double dc = 0.5 * static_cast<double>(c0 + c1) - mid_c;
    const double dist = std::sqrt(dr * dr + dc * dc) / radius;
    for (int dir = 0; dir < 2; ++dir) {
      const auto [ra, ca, rb, cb] =
          dir == 0 ? std::tuple{r0, c0, r1, c1} : std::tuple{r1, c1, r0, c0};
      EdgeSpec e;
      e.id = "e" + std::to_string(g.specs.size());
      e.tail = junction_id(ra, ca);
      e.head = junction_id(rb, cb);
      e.length_m = length;
      if (!(rng.uniform() < spec.missing_speed_limit_fraction))
        e.speed_limit_kmh = speed;
      g.specs.push_back(std::move(e));
      g.true_speed_kmh.push_back(speed);
      g.arterial.push_back(arterial);
      g.centre_distance.push_back(dist);
    }
  };
  for (std::size_t r = 0; r < spec.rows; ++r)
    for (std::size_t c = 0; c < spec.cols; ++c) {
      if (c + 1 < spec.cols) add_segment(r, c, r, c + 1, is_arterial_line(r));
      if (r + 1 < spec.rows) add_segment(r, c, r + 1, c, is_arterial_line(c));
    }
  return g;
}

// Edges of a connected region grown breadth-first from a random junction
// until it holds at least `share` of all edges.
std::vector<bool> grow_region(const RoadGraph& graph, double share, Rng& rng) {
  const std::size_t n = graph.num_edges();
  std::vector<bool> allowed(n, share >= 1.0);
  if (share >= 1.0) return allowed;
  const auto target = static_cast<std::size_t>(std::ceil(share * static_cast<double>(n)));
  std::vector<bool> inside(graph.num_vertices(), false);
  std::queue<std::size_t> frontier;
  const std::size_t start = rng.below(graph.num_vertices());
  frontier.push(start);
  inside[start] = true;
  std::size_t count = 0;
  while (!frontier.empty() && count < target) {
    const std::size_t v = frontier.front();
    frontier.pop();
    for (std::size_t e : graph.out_edges(v)) {
      const std::size_t w = graph.edge(e).head;
      if (inside[w]) continue;
      inside[w] = true;
      frontier.push(w);
      // Both directions of every segment between region junctions.
      for (std::size_t x : graph.out_edges(w)) {
        const std::size_t u = graph.edge(x).head;
        if (!inside[u]) continue;
        for (std::size_t y : graph.out_edges(u))
          if (graph.edge(y).head == w && !allowed[y]) {
            allowed[y] = true;
            ++count;
          }
        if (!allowed[x]) {
          allowed[x] = true;
          ++count;
        }
      }
      if (count >= target) break;
    }
  }
  return allowed;
}

std::string trip_id(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "t%06zu", i);
  return buf;
}

Trip random_trip(const RoadGraph& graph, const CostVector& truth,
                 const std::vector<bool>& allowed,
                 const std::vector<std::size_t>& allowed_list,
                 const std::vector<bool>& arterial, const SyntheticSpec& spec,
                 std::size_t index, Rng& rng) {
  Trip trip;
  trip.id = trip_id(index);
  const DayClass day = rng.uniform() < spec.weekend_probability
                           ? DayClass::kWeekend
                           : DayClass::kWeekday;
  const std::size_t target_len =
      spec.min_trip_edges + rng.below(spec.max_trip_edges - spec.min_trip_edges + 1);
  // Whole seconds keep the textual HH:MM:SS form exact.
  long second = static_cast<long>(rng.below(22 * 3600));
  std::size_t edge = allowed_list[rng.below(allowed_list.size())];
  std::vector<std::size_t> options;
  std::vector<double> weights;
  while (trip.records.size() < target_len) {
    const double enter_min = static_cast<double>(second) / 60.0;
    const std::size_t tag = graph.schedule().tag_of(day, enter_min);
    const double secs = graph.edge(edge).length_m * truth(edge, tag);
    const long duration = std::max(1L, std::lround(secs));
    if (second + duration > 24L * 3600) break;
    LinkRecord r;
    r.edge = edge;
    r.day = day;
    r.enter_minute = enter_min;
    r.exit_minute = static_cast<double>(second + duration) / 60.0;
    trip.records.push_back(r);
    second += duration;

    const auto& cur = graph.edge(edge);
    options.clear();
    weights.clear();
    std::size_t u_turn = SIZE_MAX;
    for (std::size_t e : graph.out_edges(cur.head)) {
      if (!allowed[e]) continue;
      if (graph.edge(e).head == cur.tail) {
        u_turn = e;
        continue;
      }
      options.push_back(e);
      weights.push_back(arterial[e] ? spec.arterial_preference : 1.0);
    }
    if (options.empty()) {
      if (u_turn == SIZE_MAX) break;
      edge = u_turn;
      continue;
    }
    double total = 0.0;
    for (double w : weights) total += w;
    double pick = rng.uniform() * total;
    std::size_t chosen = options.back();
    for (std::size_t i = 0; i < options.size(); ++i) {
      if (pick < weights[i]) {
        chosen = options[i];
        break;
      }
      pick -= weights[i];
    }
    edge = chosen;
  }
  return trip;
}

// Stationary visit frequency of the unconfined trip walk, scaled to max 1.
std::vector<double> flow_share(const RoadGraph& graph,
                               const std::vector<bool>& arterial,
                               double arterial_preference) {
  const DualGraph dual(graph);
  std::vector<double> weights(dual.num_edges(), 0.0);
  for (std::size_t u = 0; u < dual.num_vertices(); ++u) {
    const std::size_t begin = dual.out_begin(u), end = begin + dual.out_degree(u);
    double total = 0.0;
    bool has_forward = false;
    for (std::size_t e = begin; e < end; ++e)
      has_forward |= !dual.reverse_pair(u, dual.edge(e).to);
    for (std::size_t e = begin; e < end; ++e) {
      const std::size_t v = dual.edge(e).to;
      if (has_forward && dual.reverse_pair(u, v)) continue;
      weights[e] = arterial[v] ? arterial_preference : 1.0;
      total += weights[e];
    }
    for (std::size_t e = begin; e < end; ++e) weights[e] /= total;
  }
  auto values = pagerank(TransitionMatrix(dual, std::move(weights), 0)).values;
  const double top = *std::max_element(values.begin(), values.end());
  for (double& x : values) x /= top;
  return values;
}

}  // namespace

SyntheticDataset generate_synthetic(const SyntheticSpec& spec,
                                    std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  Layout layout = lay_out_grid(spec, rng);
  RoadGraph graph(layout.specs,
                  spec.schedule ? *spec.schedule : TagSchedule::commuter());

  const std::size_t n = graph.num_edges();
  const std::size_t tags = graph.num_tags();
  CostVector truth(n, tags);
  const auto flow = spec.flow_congestion > 0.0
                        ? flow_share(graph, layout.arterial, spec.arterial_preference)
                        : std::vector<double>(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double centre = std::exp(-2.0 * layout.centre_distance[i] *
                                   layout.centre_distance[i]);
    const double congestion =
        (1.0 - spec.flow_congestion) * centre + spec.flow_congestion * flow[i];
    for (std::size_t k = 0; k < tags; ++k) {
      double factor = 1.0;
      if (!spec.factor_ranges.empty()) {
        const auto [lo, hi] = spec.factor_ranges[k];
        factor = lo + (hi - lo) * congestion;
      }
      if (spec.factor_jitter > 0.0)
        factor *= 1.0 + spec.factor_jitter * (2.0 * rng.uniform() - 1.0);
      truth(i, k) = 3.6 / layout.true_speed_kmh[i] * factor;
    }
  }

  constexpr int kAttempts = 5;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    const auto allowed = grow_region(graph, spec.coverage_fraction, rng);
    std::vector<std::size_t> allowed_list;
    for (std::size_t i = 0; i < n; ++i)
      if (allowed[i]) allowed_list.push_back(i);
    TripSet trips;
    trips.reserve(spec.trip_count);
    for (std::size_t t = 0; t < spec.trip_count; ++t) {
      Trip trip = random_trip(graph, truth, allowed, allowed_list,
                              layout.arterial, spec, t, rng);
      const double exact = trip_cost(trip, graph, truth);
      const double noisy = exact * (1.0 + spec.noise * rng.normal());
      trip.cost = spec.noise > 0.0 ? std::max(0.0, noisy) : exact;
      trips.push_back(std::move(trip));
    }
    const double achieved = edge_coverage(trips, n);
    if (spec.trip_count == 0 || achieved >= 0.8 * spec.coverage_fraction)
      return SyntheticDataset{std::move(graph), std::move(truth),
                              std::move(trips), achieved};
  }
  throw_contract("synthetic trips could not reach the coverage target of " +
                 std::to_string(spec.coverage_fraction));
}

}  // namespace roadweights
