#pragma once

#include "handopt/config.hpp"
#include "handopt/pipeline.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace handopt {

/// "%.6f" with negative zero folded to zero. All text reports go through it.
std::string fixed6(double v);
/// Rounds to 6 decimals for JSON reports.
double round6(double v);

std::string format_model(const HandModel& model);
std::string format_resolution_study(const ResolutionStudyReport& rep);
nlohmann::json resolution_study_json(const ResolutionStudyReport& rep, const RunConfig& cfg);

/// thumb,finger,z1,z2w,z2o,z2,z3,f,excluded
std::string pairs_csv(const OptimizationResult& res);

nlohmann::json optimization_json(const OptimizationResult& res, const MetricsRecord& thumb,
                                 const MetricsRecord& finger);
nlohmann::json optimize_report_json(const OptimizeOutcome& out, const RunConfig& cfg);

nlohmann::json case_report_json(const CaseStudy& study, const RunConfig& cfg);
std::string format_case_study(const CaseStudy& study);

std::string voxel_csv(const VoxelSet& set);
/// One "x y z" line per voxel centre, (v + 0.5) * delta.
std::string point_cloud(const VoxelSet& set);
/// Scalar metrics keyed by record id ("thumb:17-17-17").
nlohmann::json metrics_json(const std::vector<MetricsRecord>& records);

/// Writes `text` to `path`, creating parent directories. ConfigError on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace handopt
