#include "roadweights/report.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "roadweights/errors.hpp"
#include "text.hpp"

namespace roadweights {

namespace {

using nlohmann::json;

json config_json(const RunConfig& config) {
  json out = json::object();
  for (const auto& [key, value] : config.entries()) out[key] = value;
  return out;
}

json objective_json(const ObjectiveTerms& t) {
  return {{"rss", t.rss}, {"prtc", t.prtc}, {"datc", t.datc},
          {"l2", t.l2},   {"total", t.total}};
}

std::string variant_key(Variant v) { return std::string(to_string(v)); }

}  // namespace

std::string annotation_report_json(const std::vector<Annotation>& runs,
                                   const RoadGraph& graph,
                                   const RunConfig& config,
                                   std::size_t train_trips) {
  json variants = json::object();
  for (const auto& a : runs) {
    variants[variant_key(a.variant)] = {
        {"alpha", a.penalties.alpha},
        {"beta", a.penalties.beta},
        {"gamma", a.penalties.gamma},
        {"iterations", a.iterations},
        {"relative_residual", a.relative_residual},
        {"objective", objective_json(a.objective)},
        {"coverage", coverage(graph, a.annotated)},
    };
  }
  const json report = {
      {"config", config_json(config)},
      {"edges", graph.num_edges()},
      {"tags", graph.schedule().tags()},
      {"train_trips", train_trips},
      {"variants", variants},
  };
  return report.dump(2) + "\n";
}

std::string evaluation_report_json(const EvalReport& report,
                                   const RunConfig& config,
                                   const std::vector<SweepPoint>& sweep) {
  json variants = json::object();
  for (Variant v : kAllVariants) {
    if (!report.ssl.count(v)) continue;
    json curve = json::array();
    for (const auto& [pct, frac] : report.alr_curve.at(v))
      curve.push_back({{"threshold_pct", pct}, {"fraction", frac}});
    variants[variant_key(v)] = {
        {"ssl", report.ssl.at(v)},
        {"ratio", report.ratio.at(v)},
        {"coverage", report.coverage.at(v)},
        {"iterations", report.iterations.at(v)},
        {"objective", objective_json(report.objective.at(v))},
        {"alr_curve", curve},
    };
  }
  json out = {
      {"config", config_json(config)},
      {"train_trips", report.train_trips},
      {"test_trips", report.test_trips},
      {"variants", variants},
      {"baseline",
       {{"ssl_lambda1", report.baseline_ssl_lambda1},
        {"ssl_lambda2", report.baseline_ssl_lambda2}}},
  };
  if (!sweep.empty()) {
    json points = json::array();
    for (const auto& p : sweep)
      points.push_back({{"fraction", p.fraction},
                        {"ssl_per_seed", p.ssl_per_seed},
                        {"median_ssl", p.median_ssl}});
    out["training_size_sweep"] = points;
  }
  return out.dump(2) + "\n";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "write failure on " + path.string());
}

void write_alr_curve(const AlrCurve& curve, const std::filesystem::path& path) {
  std::string s = "threshold_pct,fraction\n";
  for (const auto& [pct, frac] : curve)
    s += std::to_string(pct) + "," + text::format_double(frac) + "\n";
  write_text(path, s);
}

void write_coverage(const EvalReport& report, const std::filesystem::path& path) {
  std::string s = "variant,coverage\n";
  for (const auto& [v, c] : report.coverage)
    s += variant_key(v) + "," + text::format_double(c) + "\n";
  write_text(path, s);
}

void write_sweep(const std::vector<SweepPoint>& sweep,
                 const std::filesystem::path& path) {
  std::string s = "fraction,seed_index,ssl,median_ssl\n";
  for (const auto& p : sweep)
    for (std::size_t i = 0; i < p.ssl_per_seed.size(); ++i)
      s += text::format_double(p.fraction) + "," + std::to_string(i) + "," +
           text::format_double(p.ssl_per_seed[i]) + "," +
           text::format_double(p.median_ssl) + "\n";
  write_text(path, s);
}

}  // namespace roadweights
