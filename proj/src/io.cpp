#include "roadweights/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <unordered_map>

#include "roadweights/errors.hpp"
#include "text.hpp"

namespace roadweights {

namespace fs = std::filesystem;

namespace {

struct Row {
  std::size_t line;
  std::vector<std::string_view> fields;
};

class CsvReader {
 public:
  CsvReader(const fs::path& path, std::string_view header)
      : file_(path.string()) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIo, "cannot open " + file_);
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
      ++number;
      lines_.push_back({number, std::move(line)});
    }
    if (in.bad()) throw Error(ErrorCode::kIo, "read failure on " + file_);
    auto first = lines_.begin();
    while (first != lines_.end() && text::trim(first->second).empty()) ++first;
    if (first == lines_.end()) {
      fail(0, ErrorCode::kMalformedRow, "missing header line");
      lines_.clear();
      return;
    }
    if (text::trim(first->second) != header)
      fail(first->first, ErrorCode::kMalformedRow,
           "expected header '" + std::string(header) + "'");
    lines_.erase(lines_.begin(), first + 1);
    const std::size_t width = text::split(header, ',').size();
    for (const auto& [n, s] : lines_) {
      const auto body = text::trim(s);
      if (body.empty()) continue;
      auto fields = text::split(body, ',');
      if (fields.size() != width) {
        fail(n, ErrorCode::kMalformedRow,
             "expected " + std::to_string(width) + " fields, found " +
                 std::to_string(fields.size()));
        continue;
      }
      for (auto& f : fields) f = text::trim(f);
      rows_.push_back({n, std::move(fields)});
    }
  }

  const std::vector<Row>& rows() const { return rows_; }
  const std::string& file() const { return file_; }

  void fail(std::size_t line, ErrorCode code, std::string reason) {
    diagnostics_.push_back({code, file_, line, std::move(reason)});
  }
  void merge(std::vector<Diagnostic>& out) const {
    const auto sorted = by_line();
    out.insert(out.end(), sorted.begin(), sorted.end());
  }
  void throw_if_failed() const {
    if (!diagnostics_.empty()) throw ValidationError(by_line());
  }

 private:
  std::vector<Diagnostic> by_line() const {
    auto out = diagnostics_;
    std::stable_sort(out.begin(), out.end(),
                     [](const Diagnostic& a, const Diagnostic& b) { return a.line < b.line; });
    return out;
  }

  std::string file_;
  std::vector<std::pair<std::size_t, std::string>> lines_;
  std::vector<Row> rows_;
  std::vector<Diagnostic> diagnostics_;
};

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "write failure on " + path.string());
}

}  // namespace

std::string format_hhmmss(double minute) {
  const double total = minute * 60.0;
  const double whole = std::round(total);
  char buf[48];
  if (std::abs(total - whole) < 1e-6) {
    const auto s = static_cast<long long>(whole);
    std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld", s / 3600,
                  (s / 60) % 60, s % 60);
    return buf;
  }
  const auto h = static_cast<long long>(total / 3600.0);
  const auto m = static_cast<long long>((total - 3600.0 * h) / 60.0);
  const double s = total - 3600.0 * h - 60.0 * m;
  std::snprintf(buf, sizeof buf, "%02lld:%02lld:%s%s", h, m, s < 10 ? "0" : "",
                text::format_double(s).c_str());
  return buf;
}

std::optional<double> parse_hhmmss(std::string_view s) {
  const auto parts = text::split(text::trim(s), ':');
  if (parts.size() != 3 || parts[0].empty() || parts[1].size() != 2) return std::nullopt;
  const auto h = text::parse_int<int>(parts[0]);
  const auto m = text::parse_int<int>(parts[1]);
  const auto sec = text::parse_double(parts[2]);
  if (!h || !m || !sec || parts[2].size() < 2 || parts[2][0] == '+') return std::nullopt;
  if (*h < 0 || *m < 0 || *m > 59 || !(*sec >= 0.0) || !(*sec < 60.0))
    return std::nullopt;
  const double total = 3600.0 * *h + 60.0 * *m + *sec;
  if (total > 86400.0) return std::nullopt;
  return total / 60.0;
}

std::string format_hhmm(int minute) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d:%02d", minute / 60, minute % 60);
  return buf;
}

std::optional<int> parse_hhmm(std::string_view s) {
  s = text::trim(s);
  std::string_view hh, mm;
  if (const auto colon = s.find(':'); colon != std::string_view::npos) {
    hh = s.substr(0, colon);
    mm = s.substr(colon + 1);
  } else if (s.size() == 4) {
    hh = s.substr(0, 2);
    mm = s.substr(2);
  } else {
    return std::nullopt;
  }
  if (hh.empty() || mm.size() != 2) return std::nullopt;
  const auto h = text::parse_int<int>(hh);
  const auto m = text::parse_int<int>(mm);
  if (!h || !m || *h < 0 || *m < 0 || *m > 59) return std::nullopt;
  const int total = 60 * *h + *m;
  if (total > kMinutesPerDay) return std::nullopt;
  return total;
}

// ---------------------------------------------------------------------------
// network

std::vector<EdgeSpec> read_network(const fs::path& path) {
  CsvReader csv(path, "edge_id,tail,head,length_m,speed_limit_kmh");
  std::vector<EdgeSpec> specs;
  std::unordered_map<std::string, std::size_t> seen;
  for (const auto& row : csv.rows()) {
    const auto& f = row.fields;
    EdgeSpec e;
    e.id = std::string(f[0]);
    e.tail = std::string(f[1]);
    e.head = std::string(f[2]);
    bool ok = true;
    if (e.id.empty() || e.tail.empty() || e.head.empty()) {
      csv.fail(row.line, ErrorCode::kMalformedRow, "empty identifier");
      ok = false;
    }
    const auto length = text::parse_double(f[3]);
    if (!length || !(*length > 0.0) || !std::isfinite(*length)) {
      csv.fail(row.line, ErrorCode::kMalformedRow,
               "length_m must be a positive number");
      ok = false;
    } else {
      e.length_m = *length;
    }
    if (!f[4].empty()) {
      const auto limit = text::parse_double(f[4]);
      if (!limit || !(*limit > 0.0) || !std::isfinite(*limit)) {
        csv.fail(row.line, ErrorCode::kMalformedRow,
                 "speed_limit_kmh must be blank or a positive number");
        ok = false;
      } else {
        e.speed_limit_kmh = *limit;
      }
    }
    if (ok && e.tail == e.head) {
      csv.fail(row.line, ErrorCode::kMalformedRow, "self-loop edge " + e.id);
      ok = false;
    }
    if (!e.id.empty()) {
      if (const auto [it, fresh] = seen.emplace(e.id, row.line); !fresh) {
        csv.fail(row.line, ErrorCode::kMalformedRow,
                 "duplicate edge_id " + e.id + " (first on line " +
                     std::to_string(it->second) + ")");
        ok = false;
      }
    }
    if (ok) specs.push_back(std::move(e));
  }
  csv.throw_if_failed();
  return specs;
}

void write_network(const RoadGraph& graph, const fs::path& path) {
  auto out = open_output(path);
  out << "edge_id,tail,head,length_m,speed_limit_kmh\n";
  for (const auto& e : graph.edges()) {
    out << e.id << ',' << graph.vertex_id(e.tail) << ','
        << graph.vertex_id(e.head) << ',' << text::format_double(e.length_m)
        << ',';
    if (e.speed_limit_kmh) out << text::format_double(*e.speed_limit_kmh);
    out << '\n';
  }
  finish(out, path);
}

// ---------------------------------------------------------------------------
// schedule

TagSchedule read_schedule(const fs::path& path) {
  CsvReader csv(path, "day_class,start_hhmm,end_hhmm,tag");
  std::vector<std::string> tags;
  std::vector<TagRule> rules;
  for (const auto& row : csv.rows()) {
    const auto& f = row.fields;
    const auto day = parse_day_class(f[0]);
    const auto start = parse_hhmm(f[1]);
    const auto end = parse_hhmm(f[2]);
    if (!day) {
      csv.fail(row.line, ErrorCode::kMalformedRow,
               "day_class must be weekday or weekend");
      continue;
    }
    if (!start || !end) {
      csv.fail(row.line, ErrorCode::kMalformedRow,
               "times must be HH:MM between 00:00 and 24:00");
      continue;
    }
    if (f[3].empty()) {
      csv.fail(row.line, ErrorCode::kMalformedRow, "empty tag");
      continue;
    }
    auto it = std::find(tags.begin(), tags.end(), f[3]);
    if (it == tags.end()) it = tags.insert(tags.end(), std::string(f[3]));
    rules.push_back({*day, *start, *end,
                     static_cast<std::size_t>(it - tags.begin())});
  }
  csv.throw_if_failed();
  try {
    return TagSchedule(std::move(tags), std::move(rules));
  } catch (const Error& e) {
    throw ValidationError({{e.code(), csv.file(), 0, e.what()}});
  }
}

void write_schedule(const TagSchedule& schedule, const fs::path& path) {
  auto out = open_output(path);
  out << "day_class,start_hhmm,end_hhmm,tag\n";
  for (const auto& r : schedule.rules())
    out << to_string(r.day) << ',' << format_hhmm(r.start_minute) << ','
        << format_hhmm(r.end_minute) << ',' << schedule.tag_name(r.tag) << '\n';
  finish(out, path);
}

// ---------------------------------------------------------------------------
// trips

TripSet read_trips(const fs::path& trips_path, const fs::path& costs_path,
                   const RoadGraph& graph) {
  CsvReader csv(trips_path, "trip_id,seq,edge_id,day_class,enter_hhmmss,exit_hhmmss");
  CsvReader costs(costs_path, "trip_id,cost");

  struct Pending {
    std::string id;
    std::size_t first_line;
    std::map<long long, std::pair<std::size_t, LinkRecord>> records;  // seq -> (line, record)
    std::optional<double> cost;
    bool broken = false;
  };
  std::vector<Pending> pending;
  std::unordered_map<std::string, std::size_t> index;

  for (const auto& row : csv.rows()) {
    const auto& f = row.fields;
    if (f[0].empty()) {
      csv.fail(row.line, ErrorCode::kMalformedRow, "empty trip_id");
      continue;
    }
    const std::string id(f[0]);
    auto [it, fresh] = index.emplace(id, pending.size());
    if (fresh) pending.push_back({id, row.line, {}, std::nullopt, false});
    Pending& trip = pending[it->second];

    const auto seq = text::parse_int<long long>(f[1]);
    const auto edge = graph.find_edge(f[2]);
    const auto day = parse_day_class(f[3]);
    const auto enter = parse_hhmmss(f[4]);
    const auto exit = parse_hhmmss(f[5]);
    bool ok = true;
    auto bad = [&](ErrorCode code, const std::string& why) {
      csv.fail(row.line, code, why);
      ok = false;
    };
    if (!seq) bad(ErrorCode::kMalformedRow, "seq must be an integer");
    if (!edge)
      bad(ErrorCode::kDanglingReference,
          "unknown edge_id '" + std::string(f[2]) + "'");
    if (!day) bad(ErrorCode::kMalformedRow, "day_class must be weekday or weekend");
    if (!enter || !exit)
      bad(ErrorCode::kMalformedRow, "timestamps must be HH:MM:SS within one day");
    else if (!(*enter < *exit))
      bad(ErrorCode::kMalformedRow, "exit time must be after enter time");
    if (ok && trip.records.count(*seq))
      bad(ErrorCode::kMalformedRow,
          "duplicate seq " + std::to_string(*seq) + " in trip " + id);
    if (!ok) {
      trip.broken = true;
      continue;
    }
    trip.records.emplace(*seq, std::pair{row.line, LinkRecord{*edge, *day, *enter, *exit}});
  }

  for (const auto& row : costs.rows()) {
    const auto it = index.find(std::string(row.fields[0]));
    const auto cost = text::parse_double(row.fields[1]);
    if (!cost || !std::isfinite(*cost) || *cost < 0.0) {
      costs.fail(row.line, ErrorCode::kMalformedRow,
                 "cost must be a non-negative number");
      continue;
    }
    if (it == index.end()) {
      costs.fail(row.line, ErrorCode::kDanglingReference,
                 "cost for unknown trip '" + std::string(row.fields[0]) + "'");
      continue;
    }
    Pending& trip = pending[it->second];
    if (trip.cost) {
      costs.fail(row.line, ErrorCode::kMalformedRow,
                 "duplicate cost for trip " + trip.id);
      continue;
    }
    trip.cost = *cost;
  }

  TripSet trips;
  trips.reserve(pending.size());
  for (auto& p : pending) {
    if (!p.cost)
      costs.fail(0, ErrorCode::kDanglingReference, "no cost for trip " + p.id);
    if (p.broken || !p.cost) continue;
    Trip t;
    t.id = p.id;
    t.cost = *p.cost;
    const LinkRecord* prev = nullptr;
    std::size_t prev_line = 0;
    for (const auto& [seq, entry] : p.records) {
      const auto& [line, record] = entry;
      if (prev && prev->day == record.day &&
          record.enter_minute < prev->exit_minute) {
        csv.fail(line, ErrorCode::kMalformedRow,
                 "enter time precedes the exit time of line " +
                     std::to_string(prev_line));
        p.broken = true;
      }
      t.records.push_back(record);
      prev = &record;
      prev_line = line;
    }
    if (!p.broken) trips.push_back(std::move(t));
  }

  std::vector<Diagnostic> all;
  csv.merge(all);
  costs.merge(all);
  if (!all.empty()) throw ValidationError(std::move(all));
  return trips;
}

void write_trips(const TripSet& trips, const RoadGraph& graph,
                 const fs::path& trips_path, const fs::path& costs_path) {
  auto out = open_output(trips_path);
  auto cost_out = open_output(costs_path);
  out << "trip_id,seq,edge_id,day_class,enter_hhmmss,exit_hhmmss\n";
  cost_out << "trip_id,cost\n";
  for (const auto& t : trips) {
    for (std::size_t i = 0; i < t.records.size(); ++i) {
      const auto& r = t.records[i];
      out << t.id << ',' << i + 1 << ',' << graph.edge(r.edge).id << ','
          << to_string(r.day) << ',' << format_hhmmss(r.enter_minute) << ','
          << format_hhmmss(r.exit_minute) << '\n';
    }
    cost_out << t.id << ',' << text::format_double(t.cost) << '\n';
  }
  finish(out, trips_path);
  finish(cost_out, costs_path);
}

// ---------------------------------------------------------------------------
// weights

void write_weights(const CostVector& d, const std::vector<bool>& annotated,
                   const RoadGraph& graph, const fs::path& path) {
  d.check_matches(graph);
  if (!annotated.empty() && annotated.size() != d.size())
    throw_contract("one annotated flag per cost entry expected");
  auto out = open_output(path);
  out << "edge_id,tag,cost_per_meter,annotated_flag\n";
  for (std::size_t k = 0; k < graph.num_tags(); ++k)
    for (std::size_t i = 0; i < graph.num_edges(); ++i) {
      const bool flag = annotated.empty() || annotated[graph.flat_index(i, k)];
      out << graph.edge(i).id << ',' << graph.schedule().tag_name(k) << ','
          << text::format_double(d(i, k)) << ',' << (flag ? 1 : 0) << '\n';
    }
  finish(out, path);
}

WeightTable read_weights(const fs::path& path, const RoadGraph& graph) {
  CsvReader csv(path, "edge_id,tag,cost_per_meter,annotated_flag");
  WeightTable table{CostVector(graph.num_edges(), graph.num_tags()),
                    std::vector<bool>(graph.cost_dimension(), false)};
  std::vector<std::size_t> line_of(graph.cost_dimension(), 0);
  for (const auto& row : csv.rows()) {
    const auto& f = row.fields;
    const auto edge = graph.find_edge(f[0]);
    const auto tag = graph.schedule().find_tag(f[1]);
    const auto value = text::parse_double(f[2]);
    bool ok = true;
    if (!edge) {
      csv.fail(row.line, ErrorCode::kDanglingReference,
               "unknown edge_id '" + std::string(f[0]) + "'");
      ok = false;
    }
    if (!tag) {
      csv.fail(row.line, ErrorCode::kDanglingReference,
               "unknown tag '" + std::string(f[1]) + "'");
      ok = false;
    }
    if (!value || !std::isfinite(*value)) {
      csv.fail(row.line, ErrorCode::kMalformedRow,
               "cost_per_meter must be a finite number");
      ok = false;
    }
    if (f[3] != "0" && f[3] != "1") {
      csv.fail(row.line, ErrorCode::kMalformedRow, "annotated_flag must be 0 or 1");
      ok = false;
    }
    if (!ok) continue;
    const std::size_t flat = graph.flat_index(*edge, *tag);
    if (line_of[flat] != 0) {
      csv.fail(row.line, ErrorCode::kMalformedRow,
               "duplicate entry (first on line " + std::to_string(line_of[flat]) + ")");
      continue;
    }
    line_of[flat] = row.line;
    table.weights(*edge, *tag) = *value;
    table.annotated[flat] = f[3] == "1";
  }
  for (std::size_t k = 0; k < graph.num_tags(); ++k)
    for (std::size_t i = 0; i < graph.num_edges(); ++i)
      if (line_of[graph.flat_index(i, k)] == 0)
        csv.fail(0, ErrorCode::kMalformedRow,
                 "missing entry for edge " + graph.edge(i).id + ", tag " +
                     graph.schedule().tag_name(k));
  csv.throw_if_failed();
  return table;
}

Dataset load_dataset(const DatasetPaths& paths) {
  TagSchedule schedule =
      paths.schedule ? read_schedule(*paths.schedule) : TagSchedule::commuter();
  const auto specs = read_network(paths.network);
  RoadGraph graph = [&] {
    try {
      return RoadGraph(specs, std::move(schedule));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kIo) throw;
      throw ValidationError({{ErrorCode::kMalformedRow, paths.network.string(), 0, e.what()}});
    }
  }();
  TripSet trips = read_trips(paths.trips, paths.costs, graph);
  return Dataset{std::move(graph), std::move(trips)};
}

}  // namespace roadweights
