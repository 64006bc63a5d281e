#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "roadweights/graph.hpp"

namespace roadweights {

// One traversal of one edge. Enter and exit fall on the same day: records
// that cross midnight must be split before ingestion.
struct LinkRecord {
  std::size_t edge = 0;
  DayClass day = DayClass::kWeekday;
  double enter_minute = 0.0;
  double exit_minute = 0.0;

  double duration() const noexcept { return exit_minute - enter_minute; }

  friend bool operator==(const LinkRecord&, const LinkRecord&) = default;
};

// A map-matched trip and its observed total cost (travel time, emissions or
// any other cost that is additive over edges).
struct Trip {
  std::string id;
  std::vector<LinkRecord> records;
  double cost = 0.0;

  friend bool operator==(const Trip&, const Trip&) = default;
};

using TripSet = std::vector<Trip>;

// Throws a contract error describing the first violated trip invariant.
void validate_trip(const Trip& trip, const RoadGraph& graph);

// Fraction of the record's duration that falls in each tag; entries sum to 1.
std::vector<double> tag_weights(const LinkRecord& record,
                                const TagSchedule& schedule);
double tag_weight(const LinkRecord& record, std::size_t tag,
                  const TagSchedule& schedule);

// Estimated cost of `trip` under unit costs `d`: for every record and tag,
// tag weight × unit cost × edge length.
double trip_cost(const Trip& trip, const RoadGraph& graph, const CostVector& d);

// Tag holding the largest share of the trip's traversal time. Ties go to the
// lower tag index.
std::size_t dominant_tag(const Trip& trip, const TagSchedule& schedule);

// One TripSet per tag; each trip goes to its dominant tag.
std::vector<TripSet> partition_by_tag(const TripSet& trips,
                                      const TagSchedule& schedule);

struct TripSplit {
  TripSet train;
  TripSet test;
};

// Random disjoint split with |train| = round(train_fraction · N). Trips keep
// their relative order inside each part.
TripSplit split(const TripSet& trips, double train_fraction,
                std::uint64_t seed);

// Random subset of round(fraction · N) trips, in original order.
TripSet subsample(const TripSet& trips, double fraction, std::uint64_t seed);

std::vector<double> costs_of(const TripSet& trips);

}  // namespace roadweights
