#pragma once

// Fixtures, hand-rolled generators and brute-force oracles shared by tests.

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "roadweights/graph.hpp"
#include "roadweights/random.hpp"
#include "roadweights/trips.hpp"

namespace rwtest {

using namespace roadweights;

inline EdgeSpec edge(std::string id, std::string tail, std::string head,
                     double length = 100.0,
                     std::optional<double> limit = 50.0) {
  return EdgeSpec{std::move(id), std::move(tail), std::move(head), length, limit};
}

// Junctions A..D with segments (A,B),(B,A),(B,C),(C,B),(B,D).
inline RoadGraph fig3_graph(TagSchedule schedule = TagSchedule::commuter()) {
  return RoadGraph({edge("AB", "A", "B"), edge("BA", "B", "A"),
                    edge("BC", "B", "C"), edge("CB", "C", "B"),
                    edge("BD", "B", "D")},
                   std::move(schedule));
}

inline LinkRecord record(std::size_t edge, double enter_minute,
                         double exit_minute, DayClass day = DayClass::kWeekday) {
  return LinkRecord{edge, day, enter_minute, exit_minute};
}

// `count` trips traversing `from` then `to`, starting at `minute`.
inline void add_pair_trips(TripSet& trips, std::size_t from, std::size_t to,
                           int count, double minute) {
  for (int i = 0; i < count; ++i) {
    Trip t;
    t.id = "t" + std::to_string(trips.size());
    t.records = {record(from, minute, minute + 1), record(to, minute + 1, minute + 2)};
    t.cost = 1.0;
    trips.push_back(std::move(t));
  }
}

// Tag of a weekday/weekend minute in the commuter schedule, written out
// independently of TagSchedule: 0 OFFPEAK, 1 PEAK, 2 WEEKENDS.
inline std::size_t commuter_tag(DayClass day, double minute) {
  if (day == DayClass::kWeekend) return 2;
  if ((minute >= 420 && minute < 480) || (minute >= 900 && minute < 1020)) return 1;
  return 0;
}

// Tag weights of a record with whole-second times, by counting seconds.
inline std::vector<double> commuter_weights_by_seconds(const LinkRecord& r) {
  std::vector<double> w(3, 0.0);
  const long first = std::lround(r.enter_minute * 60.0);
  const long last = std::lround(r.exit_minute * 60.0);
  for (long s = first; s < last; ++s)
    w[commuter_tag(r.day, (static_cast<double>(s) + 0.5) / 60.0)] += 1.0;
  for (double& x : w) x /= static_cast<double>(last - first);
  return w;
}

// Directed graph on `vertices` junctions: a Hamiltonian cycle (so the graph
// is strongly connected) plus `extra` random non-loop edges.
inline RoadGraph random_strong_graph(Rng& rng, std::size_t vertices,
                                     std::size_t extra,
                                     TagSchedule schedule = TagSchedule::commuter()) {
  std::vector<EdgeSpec> specs;
  auto name = [](std::size_t v) { return "v" + std::to_string(v); };
  for (std::size_t v = 0; v < vertices; ++v)
    specs.push_back(edge("c" + std::to_string(v), name(v), name((v + 1) % vertices),
                         rng.uniform(10.0, 200.0),
                         rng.uniform() < 0.3 ? 110.0 : 50.0));
  for (std::size_t i = 0; i < extra; ++i) {
    const std::size_t a = rng.below(vertices);
    std::size_t b = rng.below(vertices - 1);
    if (b >= a) ++b;
    specs.push_back(edge("x" + std::to_string(i), name(a), name(b),
                         rng.uniform(10.0, 200.0),
                         rng.uniform() < 0.3 ? 110.0 : 50.0));
  }
  return RoadGraph(specs, std::move(schedule));
}

// Random walk trips with whole-second timestamps on a weekday or weekend.
inline TripSet random_trips(const RoadGraph& g, Rng& rng, std::size_t count,
                            std::size_t max_len = 6) {
  TripSet trips;
  for (std::size_t i = 0; i < count; ++i) {
    Trip t;
    t.id = "r" + std::to_string(i);
    const DayClass day = rng.uniform() < 0.25 ? DayClass::kWeekend : DayClass::kWeekday;
    long sec = static_cast<long>(rng.below(20 * 3600));
    std::size_t e = rng.below(g.num_edges());
    const std::size_t len = 1 + rng.below(max_len);
    for (std::size_t j = 0; j < len; ++j) {
      const long dur = 1 + static_cast<long>(rng.below(1800));
      t.records.push_back(record(e, sec / 60.0, (sec + dur) / 60.0, day));
      sec += dur;
      const auto out = g.out_edges(g.edge(e).head);
      if (out.empty()) break;
      e = out[rng.below(out.size())];
    }
    t.cost = rng.uniform(1.0, 100.0);
    trips.push_back(std::move(t));
  }
  return trips;
}

inline Eigen::VectorXd random_vector(Rng& rng, Eigen::Index n, double lo = -1.0,
                                     double hi = 1.0) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.uniform(lo, hi);
  return v;
}

inline double relative_error(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace rwtest
