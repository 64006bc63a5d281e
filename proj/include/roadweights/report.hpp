#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "roadweights/annotate.hpp"
#include "roadweights/evaluation.hpp"

namespace roadweights {

// JSON run reports. Every configuration value is echoed so a run can be
// reproduced from its report alone.
std::string annotation_report_json(const std::vector<Annotation>& runs,
                                   const RoadGraph& graph,
                                   const RunConfig& config,
                                   std::size_t train_trips);
std::string evaluation_report_json(const EvalReport& report,
                                   const RunConfig& config,
                                   const std::vector<SweepPoint>& sweep = {});

void write_text(const std::filesystem::path& path, const std::string& text);

// threshold_pct,fraction
void write_alr_curve(const AlrCurve& curve, const std::filesystem::path& path);
// variant,coverage
void write_coverage(const EvalReport& report, const std::filesystem::path& path);
// fraction,seed_index,ssl,median_ssl
void write_sweep(const std::vector<SweepPoint>& sweep,
                 const std::filesystem::path& path);

}  // namespace roadweights
