#include "roadweights/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>

#include "roadweights/errors.hpp"
#include "roadweights/random.hpp"

namespace roadweights {

double ssl(const TripSet& trips, const RoadGraph& graph, const CostVector& d) {
  double total = 0.0;
  for (const auto& t : trips) {
    const double r = t.cost - trip_cost(t, graph, d);
    total += r * r;
  }
  return total;
}

double alr(const Trip& trip, const RoadGraph& graph, const CostVector& d) {
  if (!(trip.cost > 0.0))
    throw_contract("absolute loss ratio needs a positive observed cost");
  return std::abs(trip_cost(trip, graph, d) - trip.cost) / trip.cost;
}

AlrCurve alr_curve(const TripSet& trips, const RoadGraph& graph,
                   const CostVector& d) {
  std::vector<double> ratios;
  ratios.reserve(trips.size());
  for (const auto& t : trips) ratios.push_back(alr(t, graph, d));
  std::sort(ratios.begin(), ratios.end());
  AlrCurve curve;
  const double n = static_cast<double>(ratios.size());
  for (int pct = 1; pct <= 100; ++pct) {
    const double limit = pct / 100.0;
    const auto within = std::upper_bound(ratios.begin(), ratios.end(), limit) -
                        ratios.begin();
    curve.emplace_back(pct, ratios.empty() ? 0.0 : static_cast<double>(within) / n);
  }
  return curve;
}

double coverage(const RoadGraph& graph, const std::vector<bool>& annotated) {
  const std::size_t e = graph.num_edges();
  if (annotated.size() != graph.cost_dimension())
    throw_contract("one annotated flag per cost entry expected");
  if (e == 0) return 0.0;
  std::size_t covered = 0;
  for (std::size_t i = 0; i < e; ++i) {
    for (std::size_t k = 0; k < graph.num_tags(); ++k) {
      if (annotated[k * e + i]) {
        ++covered;
        break;
      }
    }
  }
  return static_cast<double>(covered) / static_cast<double>(e);
}

CostVector speed_limit_baseline(const RoadGraph& graph, double lambda,
                                double default_kmh, double highway_cutoff_kmh) {
  if (!(lambda >= 1.0)) throw_contract("baseline lambda must be at least 1");
  if (!(default_kmh > 0.0)) throw_contract("default speed must be positive");
  CostVector d(graph.num_edges(), graph.num_tags());
  const auto categories = classify_edges(graph, highway_cutoff_kmh);
  for (std::size_t i = 0; i < graph.num_edges(); ++i) {
    const double kmh = graph.edge(i).speed_limit_kmh.value_or(default_kmh);
    const double seconds_per_meter = 3.6 / kmh;
    const double w = categories[i] == RoadCategory::kHighway
                         ? seconds_per_meter
                         : lambda * seconds_per_meter;
    for (std::size_t k = 0; k < graph.num_tags(); ++k) d(i, k) = w;
  }
  return d;
}

EvalReport run_comparison(const TripSet& train, const TripSet& test,
                          const RoadGraph& graph, const DualGraph& dual,
                          const RunConfig& config) {
  const AnnotationModel model = build_model(graph, dual, train, config);
  for (const auto& t : test) validate_trip(t, graph);

  std::vector<std::future<Annotation>> jobs;
  for (Variant v : kAllVariants)
    jobs.push_back(std::async(std::launch::async, [&model, &graph, &config, v] {
      return annotate(model, graph, v, config);
    }));

  EvalReport report;
  report.train_trips = train.size();
  report.test_trips = test.size();
  for (auto& job : jobs) {
    const Annotation a = job.get();
    report.ssl[a.variant] = ssl(test, graph, a.weights);
    report.coverage[a.variant] = coverage(graph, a.annotated);
    report.alr_curve[a.variant] = alr_curve(test, graph, a.weights);
    report.iterations[a.variant] = a.iterations;
    report.objective[a.variant] = a.objective;
  }
  const double base = report.ssl.at(Variant::kF1);
  for (Variant v : kAllVariants)
    report.ratio[v] = v == Variant::kF1 ? 1.0 : report.ssl.at(v) / base;

  report.baseline_ssl_lambda1 = ssl(
      test, graph,
      speed_limit_baseline(graph, 1.0, config.default_speed_kmh,
                           config.highway_cutoff_kmh));
  report.baseline_ssl_lambda2 = ssl(
      test, graph,
      speed_limit_baseline(graph, 2.0, config.default_speed_kmh,
                           config.highway_cutoff_kmh));
  return report;
}

double median(std::vector<double> values) {
  if (values.empty()) throw_contract("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<SweepPoint> training_size_sweep(
    const TripSet& train_pool, const TripSet& test, const RoadGraph& graph,
    const DualGraph& dual, const RunConfig& config,
    const std::vector<double>& fractions,
    const std::vector<std::uint64_t>& seeds, Variant variant) {
  if (seeds.empty()) throw_contract("training sweep needs at least one seed");
  std::vector<SweepPoint> out;
  for (double f : fractions) {
    SweepPoint point;
    point.fraction = f;
    for (std::uint64_t seed : seeds) {
      const TripSet train = f >= 1.0 ? train_pool : subsample(train_pool, f, seed);
      const auto model = build_model(graph, dual, train, config);
      const auto a = annotate(model, graph, variant, config);
      point.ssl_per_seed.push_back(ssl(test, graph, a.weights));
    }
    point.median_ssl = median(point.ssl_per_seed);
    out.push_back(std::move(point));
  }
  return out;
}

GridSearchResult grid_search(const TripSet& trips, const RoadGraph& graph,
                             const DualGraph& dual, const RunConfig& config,
                             const std::vector<double>& alphas,
                             const std::vector<double>& betas,
                             const std::vector<double>& gammas,
                             std::size_t folds, Variant variant) {
  if (folds < 2 || folds > trips.size())
    throw_contract("grid search needs 2 <= folds <= number of trips");
  if (alphas.empty() || betas.empty() || gammas.empty())
    throw_contract("grid search needs at least one value per penalty");

  std::vector<std::size_t> order(trips.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(config.seed);
  rng.shuffle(order.begin(), order.end());
  std::vector<TripSet> train(folds), held_out(folds);
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t f = 0; f < folds; ++f)
      (i % folds == f ? held_out[f] : train[f]).push_back(trips[order[i]]);

  // The model depends on the training fold only, not on the penalties.
  std::vector<AnnotationModel> models;
  for (std::size_t f = 0; f < folds; ++f)
    models.push_back(build_model(graph, dual, train[f], config));

  GridSearchResult result;
  bool first = true;
  for (double a : alphas)
    for (double b : betas)
      for (double g : gammas) {
        RunConfig trial = config;
        trial.penalties = {a, b, g};
        trial.validate();
        double total = 0.0;
        for (std::size_t f = 0; f < folds; ++f) {
          const auto ann = annotate(models[f], graph, variant, trial);
          total += ssl(held_out[f], graph, ann.weights);
        }
        const double mean = total / static_cast<double>(folds);
        result.points.push_back({trial.penalties, mean});
        if (first || mean < result.best_mean_ssl) {
          result.best = trial.penalties;
          result.best_mean_ssl = mean;
          first = false;
        }
      }
  return result;
}

}  // namespace roadweights
