#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "roadweights/annotate.hpp"
#include "roadweights/config.hpp"

namespace roadweights {

// Sum over trips of (observed cost − estimated cost)².
double ssl(const TripSet& trips, const RoadGraph& graph, const CostVector& d);

// |estimated − observed| / observed. Requires a positive observed cost.
double alr(const Trip& trip, const RoadGraph& graph, const CostVector& d);

// (threshold %, fraction of trips with ALR ≤ threshold/100) at 1..100 %.
using AlrCurve = std::vector<std::pair<int, double>>;
AlrCurve alr_curve(const TripSet& trips, const RoadGraph& graph,
                   const CostVector& d);

// Share of edges with at least one annotated (edge, tag) entry.
double coverage(const RoadGraph& graph, const std::vector<bool>& annotated);

// Travel-time weights in seconds per meter from speed limits: 3.6 / limit on
// highways, λ · 3.6 / limit on urban roads. Missing limits use
// `default_kmh`. The same value is used for every tag.
CostVector speed_limit_baseline(const RoadGraph& graph, double lambda,
                                double default_kmh,
                                double highway_cutoff_kmh = 90.0);

struct EvalReport {
  std::size_t train_trips = 0;
  std::size_t test_trips = 0;
  std::map<Variant, double> ssl;
  std::map<Variant, double> ratio;     // SSL / SSL of F1
  std::map<Variant, double> coverage;  // edge coverage on the training set
  std::map<Variant, AlrCurve> alr_curve;
  std::map<Variant, int> iterations;
  std::map<Variant, ObjectiveTerms> objective;
  // Test SSL of the speed-limit baselines at λ = 1 and λ = 2. Only
  // meaningful when trip costs are travel times in seconds.
  double baseline_ssl_lambda1 = 0.0;
  double baseline_ssl_lambda2 = 0.0;
};

// Trains all four variants on `train` with the penalties of `config` and
// scores them on `test`. The variants are solved concurrently.
EvalReport run_comparison(const TripSet& train, const TripSet& test,
                          const RoadGraph& graph, const DualGraph& dual,
                          const RunConfig& config);

struct SweepPoint {
  double fraction = 0.0;
  std::vector<double> ssl_per_seed;
  double median_ssl = 0.0;
};

// Held-out SSL of `variant` when training on random subsets of `train_pool`
// of each size in `fractions`; one subset per seed.
std::vector<SweepPoint> training_size_sweep(
    const TripSet& train_pool, const TripSet& test, const RoadGraph& graph,
    const DualGraph& dual, const RunConfig& config,
    const std::vector<double>& fractions,
    const std::vector<std::uint64_t>& seeds, Variant variant);

struct GridPoint {
  Penalties penalties;
  double mean_ssl = 0.0;
};

struct GridSearchResult {
  Penalties best;
  double best_mean_ssl = 0.0;
  std::vector<GridPoint> points;
};

// k-fold cross-validated grid search over (α, β, γ) for `variant`.
GridSearchResult grid_search(const TripSet& trips, const RoadGraph& graph,
                             const DualGraph& dual, const RunConfig& config,
                             const std::vector<double>& alphas,
                             const std::vector<double>& betas,
                             const std::vector<double>& gammas,
                             std::size_t folds, Variant variant);

double median(std::vector<double> values);

}  // namespace roadweights
