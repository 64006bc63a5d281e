#include "roadweights/annotate.hpp"

namespace roadweights {

AnnotationModel build_model(const RoadGraph& graph, const DualGraph& dual,
                            const TripSet& train, const RunConfig& config) {
  config.validate();
  for (const auto& t : train) validate_trip(t, graph);
  AnnotationModel m;
  m.q = build_design_matrix(train, graph);
  m.c = cost_vector_of(train);
  m.transitions =
      tag_transitions(dual, partition_by_tag(train, graph.schedule()));
  m.pageranks = tag_pageranks(
      m.transitions, PageRankOptions{config.pr_tol, config.pr_max_iters});
  m.similarity = build_similarity(m.pageranks, graph.num_edges(),
                                  config.similarity_threshold,
                                  config.similarity_mode);
  const auto categories = classify_edges(graph, config.highway_cutoff_kmh);
  m.adjacency = build_adjacency(m.transitions, dual, categories);
  m.laplacian_a = laplacian(m.similarity);
  m.laplacian_b = laplacian(m.adjacency);
  return m;
}

std::vector<bool> annotated_for(const AnnotationModel& model, Variant variant) {
  const bool use_a = variant == Variant::kF2 || variant == Variant::kF4;
  const bool use_b = variant == Variant::kF3 || variant == Variant::kF4;
  return annotated_entries(model.q, use_a ? &model.similarity : nullptr,
                           use_b ? &model.adjacency : nullptr);
}

Annotation annotate(const AnnotationModel& model, const RoadGraph& graph,
                    Variant variant, const RunConfig& config) {
  Annotation out;
  out.variant = variant;
  out.penalties = penalties_for(variant, config.penalties);
  const auto solved =
      solve(model.q, model.c, model.laplacian_a, model.laplacian_b,
            out.penalties,
            SolverOptions{config.cg_tol, config.cg_max_iters, config.jacobi});
  out.iterations = solved.iterations;
  out.relative_residual = solved.relative_residual;
  out.annotated = annotated_for(model, variant);
  Eigen::VectorXd d = solved.d;
  for (Eigen::Index i = 0; i < d.size(); ++i)
    if (!out.annotated[static_cast<std::size_t>(i)]) d[i] = 0.0;
  out.objective = objective_value(d, model.q, model.c, model.laplacian_a,
                                  model.laplacian_b, out.penalties);
  out.weights = CostVector(graph.num_edges(), graph.num_tags(), std::move(d));
  return out;
}

}  // namespace roadweights
