// roadweights: annotate a road network with per-(edge, tag) unit costs
// learned from trip observations.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "roadweights/annotate.hpp"
#include "roadweights/config.hpp"
#include "roadweights/dual_graph.hpp"
#include "roadweights/errors.hpp"
#include "roadweights/evaluation.hpp"
#include "roadweights/io.hpp"
#include "roadweights/pagerank.hpp"
#include "roadweights/report.hpp"
#include "roadweights/synthetic.hpp"

namespace fs = std::filesystem;
using namespace roadweights;

namespace {

constexpr const char* kFormats = R"(
Input formats (CSV, UTF-8, comma separated, header line required):
  network   edge_id,tail,head,length_m,speed_limit_kmh
            speed_limit_kmh may be blank when unknown
  schedule  day_class,start_hhmm,end_hhmm,tag
            day_class is weekday or weekend; HH:MM, 24:00 allowed; the rows
            of each day class must tile the whole day. Without a schedule
            file: weekday PEAK 07:00-08:00 and 15:00-17:00, OFFPEAK otherwise,
            WEEKENDS all weekend.
  trips     trip_id,seq,edge_id,day_class,enter_hhmmss,exit_hhmmss
            one row per traversed edge, ordered by seq within a trip
  costs     trip_id,cost
  config    key=value lines, '#' starts a comment. Keys: alpha beta gamma
            similarity_threshold similarity_mode highway_cutoff_kmh
            default_speed_kmh cg_tol cg_max_iters jacobi pr_tol pr_max_iters
            seed train_fraction variant

Output formats:
  weights          edge_id,tag,cost_per_meter,annotated_flag
  alr_curve.csv    threshold_pct,fraction
  coverage.csv     variant,coverage
  sweep.csv        fraction,seed_index,ssl,median_ssl
  histogram.csv    bucket,percentage
  pagerank.csv     dual_vertex_id,pagerank
  degree_stats.csv vertices,edges,max_in_degree,max_out_degree,average_degree
  report.json      configuration, solver statistics and metrics

Exit status: 0 success, 2 invalid input, 3 solver did not converge, 4 I/O error.
Log level: ROADWEIGHTS_LOG_LEVEL=trace|debug|info|warn|error|off (default warn).
)";

struct DatasetArgs {
  std::string network, schedule, trips, costs;

  void add(CLI::App* cmd, bool need_trips = true) {
    cmd->add_option("--network", network, "network CSV")->required();
    cmd->add_option("--schedule", schedule, "tag schedule CSV");
    auto* t = cmd->add_option("--trips", trips, "trips CSV");
    auto* c = cmd->add_option("--costs", costs, "trip costs CSV");
    if (need_trips) {
      t->required();
      c->required();
    }
  }

  DatasetPaths paths() const {
    DatasetPaths p{network, std::nullopt, trips, costs};
    if (!schedule.empty()) p.schedule = schedule;
    return p;
  }
};

struct ConfigArgs {
  std::string file;
  std::map<std::string, std::string> values;
  std::vector<std::string> sets;
  bool jacobi = false;

  void add(CLI::App* cmd) {
    cmd->add_option("--config", file, "key=value configuration file");
    for (const char* key :
         {"alpha", "beta", "gamma", "similarity_threshold", "similarity_mode",
          "highway_cutoff_kmh", "default_speed_kmh", "cg_tol", "cg_max_iters",
          "pr_tol", "pr_max_iters", "seed", "train_fraction", "variant"}) {
      std::string flag = std::string("--") + key;
      for (auto& ch : flag)
        if (ch == '_') ch = '-';
      cmd->add_option(flag, values[key], std::string("override ") + key);
    }
    cmd->add_flag("--jacobi", jacobi, "Jacobi-preconditioned conjugate gradient");
    cmd->add_option("--set", sets, "extra key=value override (repeatable)");
  }

  RunConfig resolve() const {
    RunConfig config = file.empty() ? RunConfig{} : RunConfig::from_file(file);
    for (const auto& [key, value] : values)
      if (!value.empty()) config.set(key, value);
    if (jacobi) config.jacobi = true;
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw_contract("--set expects key=value, got '" + kv + "'");
      config.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    config.validate();
    return config;
  }
};

Dataset load(const DatasetArgs& args) {
  auto data = load_dataset(args.paths());
  spdlog::info("loaded {} edges, {} tags, {} trips", data.graph.num_edges(),
               data.graph.num_tags(), data.trips.size());
  return data;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());
}

std::vector<double> parse_fractions(const std::string& list) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto end = std::min(list.find(',', start), list.size());
    const std::string item = list.substr(start, end - start);
    char* stop = nullptr;
    const double f = std::strtod(item.c_str(), &stop);
    if (item.empty() || *stop != '\0' || !(f > 0.0 && f <= 1.0))
      throw_contract("sweep fractions must be numbers in (0, 1], got '" + item + "'");
    out.push_back(f);
    start = end + 1;
  }
  return out;
}

int run_annotate(const DatasetArgs& data_args, const ConfigArgs& config_args,
                 const std::string& out, const std::string& report_path) {
  const RunConfig config = config_args.resolve();
  const auto data = load(data_args);
  const DualGraph dual(data.graph);
  const auto model = build_model(data.graph, dual, data.trips, config);
  std::vector<Annotation> runs;
  for (Variant v : kAllVariants) {
    runs.push_back(annotate(model, data.graph, v, config));
    spdlog::info("{}: {} CG iterations, objective {}", to_string(v),
                 runs.back().iterations, runs.back().objective.total);
  }
  const auto& chosen = runs[static_cast<std::size_t>(config.variant)];
  write_weights(chosen.weights, chosen.annotated, data.graph, out);
  if (!report_path.empty())
    write_text(report_path,
               annotation_report_json(runs, data.graph, config, data.trips.size()));
  return 0;
}

int run_evaluate(const DatasetArgs& data_args, const ConfigArgs& config_args,
                 const std::string& test_trips, const std::string& test_costs,
                 const std::string& out_dir, const std::string& sweep_list,
                 int sweep_seeds) {
  const RunConfig config = config_args.resolve();
  const auto data = load(data_args);
  const DualGraph dual(data.graph);
  TripSet train, test;
  if (!test_trips.empty()) {
    train = data.trips;
    test = read_trips(test_trips, test_costs, data.graph);
  } else {
    auto parts = split(data.trips, config.train_fraction, config.seed);
    train = std::move(parts.train);
    test = std::move(parts.test);
  }
  spdlog::info("{} training and {} test trips", train.size(), test.size());
  const EvalReport report = run_comparison(train, test, data.graph, dual, config);

  std::vector<SweepPoint> sweep;
  if (!sweep_list.empty()) {
    std::vector<std::uint64_t> seeds;
    for (int i = 0; i < sweep_seeds; ++i) seeds.push_back(config.seed + static_cast<std::uint64_t>(i));
    sweep = training_size_sweep(train, test, data.graph, dual, config,
                                parse_fractions(sweep_list), seeds, config.variant);
  }

  const fs::path dir(out_dir);
  ensure_dir(dir);
  write_text(dir / "report.json", evaluation_report_json(report, config, sweep));
  write_alr_curve(report.alr_curve.at(config.variant), dir / "alr_curve.csv");
  write_coverage(report, dir / "coverage.csv");
  if (!sweep.empty()) write_sweep(sweep, dir / "sweep.csv");
  for (Variant v : kAllVariants)
    spdlog::info("{}: SSL {} ratio {} coverage {}", to_string(v), report.ssl.at(v),
                 report.ratio.at(v), report.coverage.at(v));
  return 0;
}

int run_pagerank_stats(const DatasetArgs& data_args, const ConfigArgs& config_args,
                       const std::string& tag_name, const std::string& out_dir) {
  const RunConfig config = config_args.resolve();
  const auto data = load(data_args);
  const DualGraph dual(data.graph);
  std::size_t tag = 0;
  if (!tag_name.empty()) {
    const auto t = data.graph.schedule().find_tag(tag_name);
    if (!t) throw_contract("unknown tag '" + tag_name + "'");
    tag = *t;
  }
  const auto parts = partition_by_tag(data.trips, data.graph.schedule());
  const TransitionMatrix m = dual_weights(dual, parts[tag], tag);
  const auto pr = pagerank(m, PageRankOptions{config.pr_tol, config.pr_max_iters});
  const auto hist = pagerank_stats(pr.values);
  const auto deg = degree_stats(dual);

  const fs::path dir(out_dir);
  ensure_dir(dir);
  std::string h = "bucket,percentage\n";
  for (std::size_t b = 0; b < hist.percentage.size(); ++b)
    h += std::to_string(b + 1) + "," + fmt::format("{}", hist.percentage[b]) + "\n";
  write_text(dir / "histogram.csv", h);
  std::string p = "dual_vertex_id,pagerank\n";
  for (std::size_t v = 0; v < pr.values.size(); ++v)
    p += data.graph.edge(v).id + "," + fmt::format("{}", pr.values[v]) + "\n";
  write_text(dir / "pagerank.csv", p);
  write_text(dir / "degree_stats.csv",
             fmt::format("vertices,edges,max_in_degree,max_out_degree,average_degree\n"
                         "{},{},{},{},{}\n",
                         deg.vertices, deg.edges, deg.max_in_degree,
                         deg.max_out_degree, deg.average_degree));
  spdlog::info("tag {}: {} power iterations, residual {}",
               data.graph.schedule().tag_name(tag), pr.iterations, pr.residual);
  return 0;
}

int run_split(const DatasetArgs& data_args, double fraction, std::uint64_t seed,
              const std::string& out_dir) {
  const auto data = load(data_args);
  const auto parts = split(data.trips, fraction, seed);
  const fs::path dir(out_dir);
  ensure_dir(dir);
  write_trips(parts.train, data.graph, dir / "train_trips.csv", dir / "train_costs.csv");
  write_trips(parts.test, data.graph, dir / "test_trips.csv", dir / "test_costs.csv");
  return 0;
}

int run_synth(const SyntheticSpec& spec, std::uint64_t seed,
              const std::string& out_dir) {
  const auto data = generate_synthetic(spec, seed);
  const fs::path dir(out_dir);
  ensure_dir(dir);
  write_network(data.graph, dir / "network.csv");
  write_schedule(data.graph.schedule(), dir / "schedule.csv");
  write_trips(data.trips, data.graph, dir / "trips.csv", dir / "costs.csv");
  write_weights(data.truth, {}, data.graph, dir / "truth.csv");
  spdlog::info("{} edges, {} trips, edge coverage {}", data.graph.num_edges(),
               data.trips.size(), data.achieved_coverage);
  return 0;
}

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("roadweights");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("ROADWEIGHTS_LOG_LEVEL"))
    spdlog::set_level(spdlog::level::from_str(env));
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Learn per-(edge, tag) unit costs of a road network from trips."};
  app.footer(kFormats);
  app.require_subcommand(1);

  DatasetArgs data_args;
  ConfigArgs config_args;

  auto* annotate_cmd = app.add_subcommand("annotate", "fit unit costs and write a weights file");
  std::string weights_out, report_out;
  data_args.add(annotate_cmd);
  config_args.add(annotate_cmd);
  annotate_cmd->add_option("--out", weights_out, "weights CSV for the configured variant")->required();
  annotate_cmd->add_option("--report", report_out, "JSON run report covering all variants");

  auto* evaluate_cmd = app.add_subcommand("evaluate", "compare F1-F4 and the speed-limit baselines");
  std::string test_trips, test_costs, eval_dir, sweep_list;
  int sweep_seeds = 5;
  data_args.add(evaluate_cmd);
  config_args.add(evaluate_cmd);
  auto* tt = evaluate_cmd->add_option("--test-trips", test_trips,
                                      "held-out trips (default: split by train_fraction)");
  evaluate_cmd->add_option("--test-costs", test_costs, "held-out trip costs")->needs(tt);
  tt->needs("--test-costs");
  evaluate_cmd->add_option("--out-dir", eval_dir, "output directory")->required();
  evaluate_cmd->add_option("--sweep", sweep_list,
                           "training fractions for a size sweep, e.g. 0.2,0.4,0.6,0.8,1");
  evaluate_cmd->add_option("--sweep-seeds", sweep_seeds, "subsets per sweep fraction")
      ->check(CLI::PositiveNumber);

  auto* pr_cmd = app.add_subcommand("pagerank-stats", "PageRank histogram and degree statistics");
  std::string pr_tag, pr_dir;
  data_args.add(pr_cmd);
  config_args.add(pr_cmd);
  pr_cmd->add_option("--tag", pr_tag, "tag name (default: first tag)");
  pr_cmd->add_option("--out-dir", pr_dir, "output directory")->required();

  auto* split_cmd = app.add_subcommand("split", "random train/test split of a trip set");
  double split_fraction = 0.5;
  std::uint64_t split_seed = 1;
  std::string split_dir;
  data_args.add(split_cmd);
  split_cmd->add_option("--fraction", split_fraction, "training share in (0, 1)");
  split_cmd->add_option("--seed", split_seed, "random seed");
  split_cmd->add_option("--out-dir", split_dir, "output directory")->required();

  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic grid city with trips");
  SyntheticSpec spec;
  std::uint64_t synth_seed = 1;
  std::string synth_dir;
  synth_cmd->add_option("--rows", spec.rows, "junction rows");
  synth_cmd->add_option("--cols", spec.cols, "junction columns");
  synth_cmd->add_option("--trips", spec.trip_count, "number of trips");
  synth_cmd->add_option("--min-trip-edges", spec.min_trip_edges, "shortest trip");
  synth_cmd->add_option("--max-trip-edges", spec.max_trip_edges, "longest trip");
  synth_cmd->add_option("--coverage", spec.coverage_fraction, "target edge coverage in (0, 1]");
  synth_cmd->add_option("--noise", spec.noise, "relative cost noise");
  synth_cmd->add_option("--flow-congestion", spec.flow_congestion,
                        "share of congestion driven by traffic flow in [0, 1]");
  synth_cmd->add_option("--weekend-probability", spec.weekend_probability, "share of weekend trips");
  synth_cmd->add_option("--missing-speed-limits", spec.missing_speed_limit_fraction,
                        "share of edges without a speed limit");
  synth_cmd->add_option("--seed", synth_seed, "random seed");
  synth_cmd->add_option("--out-dir", synth_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*annotate_cmd) return run_annotate(data_args, config_args, weights_out, report_out);
    if (*evaluate_cmd)
      return run_evaluate(data_args, config_args, test_trips, test_costs, eval_dir,
                          sweep_list, sweep_seeds);
    if (*pr_cmd) return run_pagerank_stats(data_args, config_args, pr_tag, pr_dir);
    if (*split_cmd) return run_split(data_args, split_fraction, split_seed, split_dir);
    if (*synth_cmd) return run_synth(spec, synth_seed, synth_dir);
  } catch (const ValidationError& e) {
    for (const auto& d : e.diagnostics()) spdlog::error("{}", d.format());
    return exit_code(e.code());
  } catch (const Error& e) {
    spdlog::error("{}: {}", to_string(e.code()), e.what());
    return exit_code(e.code());
  } catch (const fs::filesystem_error& e) {
    spdlog::error("{}", e.what());
    return 4;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 2;
  }
  return 2;
}
