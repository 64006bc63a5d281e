#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "roadweights/graph.hpp"
#include "roadweights/trips.hpp"

namespace roadweights {

// Parameters of a synthetic grid city with known per-(edge, tag) unit costs.
//
// Streets form a rows × cols grid of junctions joined by two-way segments.
// Every `arterial_spacing`-th row and column is an arterial with a higher
// speed limit. Ground-truth travel cost in seconds per meter is
// 3.6 / speed_limit × factor(edge, tag), where the factor interpolates the
// tag's range with a smooth congestion field peaking in the grid centre.
// Trips are random walks without immediate U-turns that favour arterials.
struct SyntheticSpec {
  std::size_t rows = 10;
  std::size_t cols = 10;
  double min_length_m = 80.0;
  double max_length_m = 160.0;
  std::size_t arterial_spacing = 4;  // 0 disables arterials
  double local_speed_kmh = 50.0;
  double arterial_speed_kmh = 80.0;
  double missing_speed_limit_fraction = 0.0;

  // Nullopt selects the commuter schedule (OFFPEAK / PEAK / WEEKENDS).
  std::optional<TagSchedule> schedule;
  // Per-tag [low, high] congestion factors; empty means [1, 1] for every tag,
  // i.e. traffic moves exactly at the speed limit.
  std::vector<std::pair<double, double>> factor_ranges;
  // Relative amplitude of independent per-edge jitter on the factor.
  double factor_jitter = 0.0;
  // Share of the congestion level driven by traffic flow (the walk's
  // stationary visit frequency) instead of distance from the centre.
  double flow_congestion = 0.0;

  std::size_t trip_count = 200;
  std::size_t min_trip_edges = 3;
  std::size_t max_trip_edges = 20;
  double arterial_preference = 3.0;
  double weekend_probability = 0.2;
  // Target share of edges traversed by the trip set; walks are confined to
  // a connected region holding about this share of the edges.
  double coverage_fraction = 1.0;
  // Relative standard deviation of multiplicative noise on trip costs.
  double noise = 0.0;

  void validate() const;
};

struct SyntheticDataset {
  RoadGraph graph;
  CostVector truth;
  TripSet trips;
  double achieved_coverage = 0.0;  // share of edges touched by the trips
};

// Deterministic for a given spec and seed. Throws a contract error when the
// coverage target cannot be met after a bounded number of attempts.
SyntheticDataset generate_synthetic(const SyntheticSpec& spec,
                                    std::uint64_t seed);

double edge_coverage(const TripSet& trips, std::size_t num_edges);

}  // namespace roadweights
