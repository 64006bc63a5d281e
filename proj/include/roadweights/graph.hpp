#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

namespace roadweights {

inline constexpr int kMinutesPerDay = 1440;

enum class DayClass : std::uint8_t { kWeekday = 0, kWeekend = 1 };

std::string_view to_string(DayClass day);
std::optional<DayClass> parse_day_class(std::string_view text);

// A half-open minute-of-day interval [start_minute, end_minute) mapped to a
// traffic category tag on one class of day.
struct TagRule {
  DayClass day = DayClass::kWeekday;
  int start_minute = 0;
  int end_minute = kMinutesPerDay;
  std::size_t tag = 0;

  friend bool operator==(const TagRule&, const TagRule&) = default;
};

// Maps every minute of a weekday and of a weekend day to exactly one traffic
// category tag. Construction fails unless the rules of each day class tile
// [0, 1440) without gap or overlap.
class TagSchedule {
 public:
  TagSchedule(std::vector<std::string> tags, std::vector<TagRule> rules);

  // Weekday PEAK at [7:00, 8:00) and [15:00, 17:00), OFFPEAK otherwise,
  // WEEKENDS all weekend. Tag order: OFFPEAK, PEAK, WEEKENDS.
  static TagSchedule commuter();

  std::size_t size() const noexcept { return tags_.size(); }
  const std::vector<std::string>& tags() const noexcept { return tags_; }
  const std::string& tag_name(std::size_t tag) const;
  std::optional<std::size_t> find_tag(std::string_view name) const;
  std::span<const TagRule> rules() const noexcept { return rules_; }

  // Tag of the minute containing `minute` (fractional minutes allowed).
  // Minute 1440 is treated as the last minute of the day.
  std::size_t tag_of(DayClass day, double minute) const;

  // Every interval mapped to `tag`, in rule order.
  std::vector<TagRule> intervals_of(std::size_t tag) const;

  // Per-tag overlap (in minutes) of [start, end] with the schedule of `day`.
  std::vector<double> overlap_by_tag(DayClass day, double start,
                                     double end) const;

  friend bool operator==(const TagSchedule&, const TagSchedule&) = default;

 private:
  std::vector<std::string> tags_;
  std::vector<TagRule> rules_;  // sorted by (day, start_minute)
};

// Input description of one directed road segment.
struct EdgeSpec {
  std::string id;
  std::string tail;
  std::string head;
  double length_m = 0.0;
  std::optional<double> speed_limit_kmh;
};

struct Edge {
  std::string id;
  std::size_t tail = 0;
  std::size_t head = 0;
  double length_m = 0.0;
  std::optional<double> speed_limit_kmh;
};

// Directed primal road graph. Edge order is the canonical edge index used by
// every downstream structure; vertices are numbered in order of first
// appearance in the edge list.
class RoadGraph {
 public:
  RoadGraph(const std::vector<EdgeSpec>& edges, TagSchedule schedule);

  std::size_t num_vertices() const noexcept { return vertex_ids_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::size_t num_tags() const noexcept { return schedule_.size(); }

  const Edge& edge(std::size_t index) const { return edges_.at(index); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  const std::string& vertex_id(std::size_t v) const { return vertex_ids_.at(v); }
  const TagSchedule& schedule() const noexcept { return schedule_; }

  std::optional<std::size_t> find_edge(std::string_view id) const;
  std::optional<std::size_t> find_vertex(std::string_view id) const;

  // Edge indices leaving vertex `v`, ascending.
  std::span<const std::size_t> out_edges(std::size_t v) const;

  // Length of the cost vector, |E|·|TAGS|.
  std::size_t cost_dimension() const noexcept {
    return edges_.size() * schedule_.size();
  }

  // Position of d_(edge, tag) in the cost vector: tags are contiguous blocks
  // of |E| entries, so the index is tag·|E| + edge (all zero-based).
  std::size_t flat_index(std::size_t edge, std::size_t tag) const;

  std::vector<EdgeSpec> edge_specs() const;

 private:
  std::vector<std::string> vertex_ids_;
  std::vector<Edge> edges_;
  TagSchedule schedule_;
  std::unordered_map<std::string, std::size_t> edge_lookup_;
  std::unordered_map<std::string, std::size_t> vertex_lookup_;
  std::vector<std::size_t> out_offsets_;
  std::vector<std::size_t> out_edges_;
};

// Per-(edge, tag) unit costs in the layout of RoadGraph::flat_index.
class CostVector {
 public:
  CostVector() = default;
  CostVector(std::size_t num_edges, std::size_t num_tags);
  CostVector(std::size_t num_edges, std::size_t num_tags,
             Eigen::VectorXd values);

  std::size_t num_edges() const noexcept { return num_edges_; }
  std::size_t num_tags() const noexcept { return num_tags_; }
  std::size_t size() const noexcept {
    return static_cast<std::size_t>(values_.size());
  }

  double operator()(std::size_t edge, std::size_t tag) const {
    return values_[static_cast<Eigen::Index>(tag * num_edges_ + edge)];
  }
  double& operator()(std::size_t edge, std::size_t tag) {
    return values_[static_cast<Eigen::Index>(tag * num_edges_ + edge)];
  }

  const Eigen::VectorXd& values() const noexcept { return values_; }
  Eigen::VectorXd& values() noexcept { return values_; }

  // Throws a contract error unless the dimensions match `graph`.
  void check_matches(const RoadGraph& graph) const;

 private:
  std::size_t num_edges_ = 0;
  std::size_t num_tags_ = 0;
  Eigen::VectorXd values_;
};

}  // namespace roadweights
