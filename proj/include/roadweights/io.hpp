#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "roadweights/graph.hpp"
#include "roadweights/trips.hpp"

namespace roadweights {

// CSV formats (UTF-8, comma separated, one header line, no quoting):
//
//   network   edge_id,tail,head,length_m,speed_limit_kmh   (limit may be blank)
//   schedule  day_class,start_hhmm,end_hhmm,tag           (weekday|weekend, HH:MM, 24:00 allowed)
//   trips     trip_id,seq,edge_id,day_class,enter_hhmmss,exit_hhmmss
//   costs     trip_id,cost
//   weights   edge_id,tag,cost_per_meter,annotated_flag   (flag 0|1)
//
// Loaders check every row and throw a ValidationError listing all violating
// rows when any is found. Unreadable files raise an I/O error.

std::vector<EdgeSpec> read_network(const std::filesystem::path& path);
void write_network(const RoadGraph& graph, const std::filesystem::path& path);

// Tags are numbered in order of first appearance in the file.
TagSchedule read_schedule(const std::filesystem::path& path);
void write_schedule(const TagSchedule& schedule,
                    const std::filesystem::path& path);

// Trips keep the order in which their ids first appear; records are ordered
// by `seq`. Every trip needs exactly one cost row.
TripSet read_trips(const std::filesystem::path& trips_path,
                   const std::filesystem::path& costs_path,
                   const RoadGraph& graph);
void write_trips(const TripSet& trips, const RoadGraph& graph,
                 const std::filesystem::path& trips_path,
                 const std::filesystem::path& costs_path);

struct WeightTable {
  CostVector weights;
  std::vector<bool> annotated;  // flat layout, one flag per entry
};

// `annotated` may be empty, meaning every entry is flagged 1.
void write_weights(const CostVector& d, const std::vector<bool>& annotated,
                   const RoadGraph& graph, const std::filesystem::path& path);
WeightTable read_weights(const std::filesystem::path& path,
                         const RoadGraph& graph);

struct DatasetPaths {
  std::filesystem::path network;
  std::optional<std::filesystem::path> schedule;  // commuter schedule if unset
  std::filesystem::path trips;
  std::filesystem::path costs;
};

struct Dataset {
  RoadGraph graph;
  TripSet trips;
};

Dataset load_dataset(const DatasetPaths& paths);

// Wall-clock text for a minute of the day: HH:MM:SS, with a fractional
// seconds part only when needed. Minute 1440 prints as 24:00:00.
std::string format_hhmmss(double minute);
std::optional<double> parse_hhmmss(std::string_view text);
std::string format_hhmm(int minute);
std::optional<int> parse_hhmm(std::string_view text);

}  // namespace roadweights
