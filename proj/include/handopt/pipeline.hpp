#pragma once

#include "handopt/config.hpp"
#include "handopt/optimizer.hpp"
#include "handopt/records.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace handopt {

struct DesignSets {
    std::vector<PhalanxTriple> thumb_ordered;
    std::vector<PhalanxTriple> finger_ordered;
    std::vector<PhalanxTriple> thumb_relaxed;
    std::vector<PhalanxTriple> finger_relaxed;
};

DesignSets default_design_sets();

/// Records for the ordered sets and, when requested, the relaxed sets used
/// for normalization. Every list follows lexicographic design order.
struct SweepOutcome {
    std::vector<MetricsRecord> thumbs;
    std::vector<MetricsRecord> fingers;
    std::vector<MetricsRecord> relaxed_thumbs;
    std::vector<MetricsRecord> relaxed_fingers;
    std::size_t computed = 0;
    std::size_t cached = 0;
};

EvaluationSettings effective_settings(const RunConfig& cfg);

/// Fills the store (and its cache file) for both chains.
SweepOutcome run_sweep(const RunConfig& cfg, RecordStore& store, bool relaxed,
                       const RecordStore::Progress& progress = {});

struct ResolutionEntry {
    ChainKind chain = ChainKind::Thumb;
    double delta = 0.0;
    double resolution_deg = 0.0;
    std::size_t voxels = 0;
    double volume = 0.0;
    std::optional<double> relative_change;  // vs the previous (coarser) resolution
    bool converged = false;                 // first entry whose change is below the threshold
};

struct ResolutionStudyReport {
    PhalanxTriple thumb_design;
    PhalanxTriple finger_design;
    Finger finger = Finger::Middle;
    double threshold = 0.02;
    std::vector<double> voxel_sizes;
    std::vector<double> resolutions_deg;
    std::vector<ResolutionEntry> entries;  // chain, then delta, then resolution

    const ResolutionEntry* find(ChainKind chain, double delta, double resolution_deg) const;
};

ResolutionStudyReport run_resolution_study(const RunConfig& cfg);

/// Per-case changes of the winner's metrics relative to the first case, in
/// percent.
struct CaseDeltas {
    double thumb_volume = 0.0;
    double finger_volume = 0.0;
    double overlap = 0.0;
    double thumb_manipulability = 0.0;
    double finger_manipulability = 0.0;
};

struct CaseOutcome {
    WeightCase weight_case;
    OptimizationResult result;
    std::size_t thumb = 0;   // winner positions in CaseStudy::records.thumbs / .fingers
    std::size_t finger = 0;
    std::string group;
    CaseDeltas deltas;
};

struct CaseGroup {
    std::string label;
    PhalanxTriple thumb;
    PhalanxTriple finger;
    std::vector<std::string> cases;
};

struct CaseStudy {
    NormalizationConstants norms;
    SweepOutcome records;
    std::vector<CaseOutcome> cases;
    std::vector<CaseGroup> groups;
};

/// Percent change (b - a) / a * 100; zero when a is zero.
double percent_change(double a, double b);

/// Groups identical winning pairs; labels A, B, ... by first occurrence.
std::vector<CaseGroup> group_cases(std::vector<CaseOutcome>& cases);

CaseStudy run_case_study(const RunConfig& cfg, RecordStore& store, const RecordStore::Progress& progress = {});

struct OptimizeOutcome {
    NormalizationConstants norms;
    SweepOutcome records;
    OptimizationResult result;
    std::size_t thumb = 0;   // winner positions in records.thumbs / .fingers
    std::size_t finger = 0;
};

OptimizeOutcome run_optimize(const RunConfig& cfg, RecordStore& store, const Weights& weights,
                             const RecordStore::Progress& progress = {});

}  // namespace handopt
