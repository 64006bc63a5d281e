#include "roadweights/trips.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "roadweights/errors.hpp"
#include "roadweights/random.hpp"

namespace roadweights {

void validate_trip(const Trip& trip, const RoadGraph& graph) {
  const std::string who = "trip '" + trip.id + "'";
  if (trip.records.empty()) throw_contract(who + " has no link records");
  if (!(trip.cost >= 0.0) || !std::isfinite(trip.cost))
    throw_contract(who + " has a negative or non-finite cost");
  for (std::size_t m = 0; m < trip.records.size(); ++m) {
    const auto& r = trip.records[m];
    if (r.edge >= graph.num_edges())
      throw_contract(who + " references edge index " + std::to_string(r.edge) +
                     " outside the graph");
    if (!(r.enter_minute >= 0.0) || !(r.exit_minute <= kMinutesPerDay))
      throw_contract(who + " has a record outside the day");
    if (!(r.enter_minute < r.exit_minute))
      throw_contract(who + " has a record that does not advance in time");
    if (m > 0) {
      const auto& prev = trip.records[m - 1];
      if (prev.day == r.day && prev.exit_minute > r.enter_minute)
        throw_contract(who + " has overlapping or unordered records");
    }
  }
}

std::vector<double> tag_weights(const LinkRecord& record,
                                const TagSchedule& schedule) {
  const double span = record.duration();
  if (!(span > 0.0)) throw_contract("link record with zero duration");
  auto w = schedule.overlap_by_tag(record.day, record.enter_minute,
                                   record.exit_minute);
  for (double& x : w) x /= span;
  return w;
}

double tag_weight(const LinkRecord& record, std::size_t tag,
                  const TagSchedule& schedule) {
  if (tag >= schedule.size()) throw_index("tag index out of range");
  return tag_weights(record, schedule)[tag];
}

double trip_cost(const Trip& trip, const RoadGraph& graph,
                 const CostVector& d) {
  d.check_matches(graph);
  double total = 0.0;
  for (const auto& r : trip.records) {
    if (r.edge >= graph.num_edges()) throw_index("edge index out of range");
    const double length = graph.edge(r.edge).length_m;
    const auto w = tag_weights(r, graph.schedule());
    for (std::size_t k = 0; k < w.size(); ++k)
      if (w[k] != 0.0) total += w[k] * d(r.edge, k) * length;
  }
  return total;
}

std::size_t dominant_tag(const Trip& trip, const TagSchedule& schedule) {
  std::vector<double> minutes(schedule.size(), 0.0);
  for (const auto& r : trip.records) {
    const auto o = schedule.overlap_by_tag(r.day, r.enter_minute, r.exit_minute);
    for (std::size_t k = 0; k < o.size(); ++k) minutes[k] += o[k];
  }
  // max_element returns the first maximum, i.e. the lowest tag on ties.
  return static_cast<std::size_t>(
      std::max_element(minutes.begin(), minutes.end()) - minutes.begin());
}

std::vector<TripSet> partition_by_tag(const TripSet& trips,
                                      const TagSchedule& schedule) {
  std::vector<TripSet> parts(schedule.size());
  for (const auto& t : trips) parts[dominant_tag(t, schedule)].push_back(t);
  return parts;
}

namespace {

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(idx.begin(), idx.end());
  return idx;
}

}  // namespace

TripSplit split(const TripSet& trips, double train_fraction,
                std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw_contract("train fraction must lie in (0, 1)");
  if (trips.size() < 2) throw_contract("need at least two trips to split");
  const auto n_train = static_cast<std::size_t>(
      std::llround(train_fraction * static_cast<double>(trips.size())));
  auto idx = shuffled_indices(trips.size(), seed);
  std::vector<char> in_train(trips.size(), 0);
  for (std::size_t i = 0; i < n_train; ++i) in_train[idx[i]] = 1;
  TripSplit out;
  for (std::size_t i = 0; i < trips.size(); ++i)
    (in_train[i] ? out.train : out.test).push_back(trips[i]);
  return out;
}

TripSet subsample(const TripSet& trips, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw_contract("subsample fraction must lie in (0, 1]");
  const auto keep = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(trips.size())));
  auto idx = shuffled_indices(trips.size(), seed);
  idx.resize(keep);
  std::sort(idx.begin(), idx.end());
  TripSet out;
  out.reserve(keep);
  for (std::size_t i : idx) out.push_back(trips[i]);
  return out;
}

std::vector<double> costs_of(const TripSet& trips) {
  std::vector<double> out;
  out.reserve(trips.size());
  for (const auto& t : trips) out.push_back(t.cost);
  return out;
}

}  // namespace roadweights
