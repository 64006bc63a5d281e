#include "roadweights/graph.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "roadweights/errors.hpp"

namespace roadweights {

std::string_view to_string(DayClass day) {
  return day == DayClass::kWeekday ? "weekday" : "weekend";
}

std::optional<DayClass> parse_day_class(std::string_view text) {
  if (text == "weekday") return DayClass::kWeekday;
  if (text == "weekend") return DayClass::kWeekend;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// TagSchedule

TagSchedule::TagSchedule(std::vector<std::string> tags,
                         std::vector<TagRule> rules)
    : tags_(std::move(tags)), rules_(std::move(rules)) {
  auto fail = [](const std::string& why) {
    throw Error(ErrorCode::kScheduleNotPartition, "tag schedule: " + why);
  };
  if (tags_.empty()) fail("no tags");
  for (std::size_t i = 0; i < tags_.size(); ++i) {
    if (tags_[i].empty()) fail("empty tag name");
    for (std::size_t j = 0; j < i; ++j)
      if (tags_[i] == tags_[j]) fail("duplicate tag '" + tags_[i] + "'");
  }
  for (const auto& r : rules_) {
    if (r.tag >= tags_.size()) fail("rule refers to unknown tag index");
    if (r.start_minute < 0 || r.end_minute > kMinutesPerDay ||
        r.start_minute >= r.end_minute)
      fail("rule interval [" + std::to_string(r.start_minute) + ", " +
           std::to_string(r.end_minute) + ") is empty or outside the day");
  }
  std::sort(rules_.begin(), rules_.end(), [](const TagRule& a, const TagRule& b) {
    return std::tie(a.day, a.start_minute) < std::tie(b.day, b.start_minute);
  });
  for (DayClass day : {DayClass::kWeekday, DayClass::kWeekend}) {
    int cursor = 0;
    for (const auto& r : rules_) {
      if (r.day != day) continue;
      if (r.start_minute != cursor)
        fail(std::string(to_string(day)) + " rules " +
             (r.start_minute < cursor ? "overlap" : "leave a gap") +
             " at minute " + std::to_string(std::min(cursor, r.start_minute)));
      cursor = r.end_minute;
    }
    if (cursor != kMinutesPerDay)
      fail(std::string(to_string(day)) + " rules do not cover minute " +
           std::to_string(cursor));
  }
}

TagSchedule TagSchedule::commuter() {
  using D = DayClass;
  return TagSchedule({"OFFPEAK", "PEAK", "WEEKENDS"},
                     {{D::kWeekday, 0, 7 * 60, 0},
                      {D::kWeekday, 7 * 60, 8 * 60, 1},
                      {D::kWeekday, 8 * 60, 15 * 60, 0},
                      {D::kWeekday, 15 * 60, 17 * 60, 1},
                      {D::kWeekday, 17 * 60, 24 * 60, 0},
                      {D::kWeekend, 0, 24 * 60, 2}});
}

const std::string& TagSchedule::tag_name(std::size_t tag) const {
  if (tag >= tags_.size()) throw_index("tag index out of range");
  return tags_[tag];
}

std::optional<std::size_t> TagSchedule::find_tag(std::string_view name) const {
  for (std::size_t i = 0; i < tags_.size(); ++i)
    if (tags_[i] == name) return i;
  return std::nullopt;
}

std::size_t TagSchedule::tag_of(DayClass day, double minute) const {
  if (!(minute >= 0.0 && minute <= kMinutesPerDay))
    throw_contract("minute of day outside [0, 1440]");
  const double m = std::min(minute, kMinutesPerDay - 0.5);
  for (const auto& r : rules_)
    if (r.day == day && r.start_minute <= m && m < r.end_minute) return r.tag;
  throw_contract("schedule does not cover the requested instant");
}

std::vector<TagRule> TagSchedule::intervals_of(std::size_t tag) const {
  std::vector<TagRule> out;
  for (const auto& r : rules_)
    if (r.tag == tag) out.push_back(r);
  return out;
}

std::vector<double> TagSchedule::overlap_by_tag(DayClass day, double start,
                                                double end) const {
  std::vector<double> out(tags_.size(), 0.0);
  for (const auto& r : rules_) {
    if (r.day != day) continue;
    const double lo = std::max(start, static_cast<double>(r.start_minute));
    const double hi = std::min(end, static_cast<double>(r.end_minute));
    if (hi > lo) out[r.tag] += hi - lo;
  }
  return out;
}

// ---------------------------------------------------------------------------
// RoadGraph

RoadGraph::RoadGraph(const std::vector<EdgeSpec>& edges, TagSchedule schedule)
    : schedule_(std::move(schedule)) {
  auto vertex = [this](const std::string& id) {
    auto [it, inserted] = vertex_lookup_.try_emplace(id, vertex_ids_.size());
    if (inserted) vertex_ids_.push_back(id);
    return it->second;
  };
  edges_.reserve(edges.size());
  for (const auto& spec : edges) {
    if (spec.id.empty()) throw_contract("edge with empty id");
    if (spec.tail == spec.head)
      throw_contract("edge '" + spec.id + "' is a self-loop");
    if (!(spec.length_m > 0.0) || !std::isfinite(spec.length_m))
      throw_contract("edge '" + spec.id + "' has non-positive length");
    if (spec.speed_limit_kmh &&
        !(*spec.speed_limit_kmh > 0.0 && std::isfinite(*spec.speed_limit_kmh)))
      throw_contract("edge '" + spec.id + "' has non-positive speed limit");
    if (!edge_lookup_.try_emplace(spec.id, edges_.size()).second)
      throw_contract("duplicate edge id '" + spec.id + "'");
    Edge e;
    e.id = spec.id;
    e.tail = vertex(spec.tail);
    e.head = vertex(spec.head);
    e.length_m = spec.length_m;
    e.speed_limit_kmh = spec.speed_limit_kmh;
    edges_.push_back(std::move(e));
  }

  out_offsets_.assign(vertex_ids_.size() + 1, 0);
  for (const auto& e : edges_) ++out_offsets_[e.tail + 1];
  for (std::size_t v = 0; v < vertex_ids_.size(); ++v)
    out_offsets_[v + 1] += out_offsets_[v];
  out_edges_.resize(edges_.size());
  std::vector<std::size_t> fill(out_offsets_.begin(), out_offsets_.end() - 1);
  for (std::size_t i = 0; i < edges_.size(); ++i)
    out_edges_[fill[edges_[i].tail]++] = i;
}

std::optional<std::size_t> RoadGraph::find_edge(std::string_view id) const {
  auto it = edge_lookup_.find(std::string(id));
  if (it == edge_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> RoadGraph::find_vertex(std::string_view id) const {
  auto it = vertex_lookup_.find(std::string(id));
  if (it == vertex_lookup_.end()) return std::nullopt;
  return it->second;
}

std::span<const std::size_t> RoadGraph::out_edges(std::size_t v) const {
  if (v >= vertex_ids_.size()) throw_index("vertex index out of range");
  return std::span<const std::size_t>(out_edges_)
      .subspan(out_offsets_[v], out_offsets_[v + 1] - out_offsets_[v]);
}

std::size_t RoadGraph::flat_index(std::size_t edge, std::size_t tag) const {
  if (edge >= edges_.size()) throw_index("edge index out of range");
  if (tag >= schedule_.size()) throw_index("tag index out of range");
  return tag * edges_.size() + edge;
}

std::vector<EdgeSpec> RoadGraph::edge_specs() const {
  std::vector<EdgeSpec> out;
  out.reserve(edges_.size());
  for (const auto& e : edges_)
    out.push_back({e.id, vertex_ids_[e.tail], vertex_ids_[e.head], e.length_m,
                   e.speed_limit_kmh});
  return out;
}

// ---------------------------------------------------------------------------
// CostVector

CostVector::CostVector(std::size_t num_edges, std::size_t num_tags)
    : num_edges_(num_edges),
      num_tags_(num_tags),
      values_(Eigen::VectorXd::Zero(
          static_cast<Eigen::Index>(num_edges * num_tags))) {}

CostVector::CostVector(std::size_t num_edges, std::size_t num_tags,
                       Eigen::VectorXd values)
    : num_edges_(num_edges), num_tags_(num_tags), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.size()) != num_edges * num_tags)
    throw_contract("cost vector length does not equal |E|·|TAGS|");
}

void CostVector::check_matches(const RoadGraph& graph) const {
  if (num_edges_ != graph.num_edges() || num_tags_ != graph.num_tags())
    throw_contract("cost vector dimension " + std::to_string(size()) +
                   " does not match graph (|E|=" +
                   std::to_string(graph.num_edges()) +
                   ", |TAGS|=" + std::to_string(graph.num_tags()) + ")");
}

}  // namespace roadweights
