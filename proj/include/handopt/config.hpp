#pragma once

#include "handopt/hand_model.hpp"
#include "handopt/optimizer.hpp"
#include "handopt/records.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace handopt {

struct ResolutionStudySettings {
    std::vector<double> voxel_sizes{0.05, 0.025};
    std::vector<double> resolutions_deg{30, 15, 10, 5, 3, 2};  // coarse to fine
    PhalanxTriple thumb_design{17, 17, 17};
    PhalanxTriple finger_design{15, 15, 15};
    Finger finger = Finger::Middle;
    double convergence_threshold = 0.02;
};

/// Resolved run configuration. Every field has a default, so an empty JSON
/// object is a valid config file.
struct RunConfig {
    HandModel model = HandModel::defaults();
    EvaluationSettings evaluation;
    std::vector<WeightCase> cases = default_weight_cases();
    WorkspaceNorm workspace_norm = WorkspaceNorm::SumOfMaxima;
    SensitivityTerm sensitivity_term = SensitivityTerm::Mean;
    ResolutionStudySettings resolution_study;
    std::filesystem::path output_dir = "handopt-out";
    std::filesystem::path cache_path;  // empty: <output_dir>/records.jsonl
    int jobs = 0;
    bool coarse = false;

    std::filesystem::path resolved_cache_path() const;
    /// Applies the fast preset: 15 deg thumb, 9 deg finger, delta 0.05.
    void apply_coarse_preset();
    /// ConfigError when a field violates its invariant.
    void validate() const;
};

/// Parses a config document; absent fields keep their defaults.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

/// Everything that affects results. Paths and the job count are left out so
/// that reports from runs differing only in those are byte-identical.
nlohmann::json config_to_json(const RunConfig& cfg);

}  // namespace handopt
