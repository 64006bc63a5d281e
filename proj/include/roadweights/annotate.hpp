#pragma once

#include <vector>

#include "roadweights/config.hpp"
#include "roadweights/dual_graph.hpp"
#include "roadweights/graph.hpp"
#include "roadweights/objective.hpp"
#include "roadweights/pagerank.hpp"
#include "roadweights/trips.hpp"

namespace roadweights {

// Everything derived from a training set that does not depend on the penalty
// weights: the design matrix, per-tag transition matrices and PageRank, and
// both constraint matrices with their Laplacians.
struct AnnotationModel {
  SparseMatrix q;
  Eigen::VectorXd c;
  std::vector<TransitionMatrix> transitions;
  std::vector<PageRankVector> pageranks;
  SparseMatrix similarity;  // A
  SparseMatrix adjacency;   // B
  SparseMatrix laplacian_a;
  SparseMatrix laplacian_b;
};

AnnotationModel build_model(const RoadGraph& graph, const DualGraph& dual,
                            const TripSet& train, const RunConfig& config);

struct Annotation {
  Variant variant = Variant::kF4;
  Penalties penalties;
  CostVector weights;               // 0 on entries that are not annotated
  std::vector<bool> annotated;      // per cost entry
  int iterations = 0;
  double relative_residual = 0.0;
  ObjectiveTerms objective;
};

// Per-entry annotated flags for a variant: entries reachable from trip-touched
// entries through the constraint matrices the variant switches on.
std::vector<bool> annotated_for(const AnnotationModel& model, Variant variant);

Annotation annotate(const AnnotationModel& model, const RoadGraph& graph,
                    Variant variant, const RunConfig& config);

}  // namespace roadweights
