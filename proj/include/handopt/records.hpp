#pragma once

#include "handopt/design.hpp"
#include "handopt/hand_model.hpp"
#include "handopt/metrics.hpp"
#include "handopt/voxel_set.hpp"

#include "json.hpp"

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace handopt {

enum class ChainKind { Thumb, Finger };
const char* chain_kind_name(ChainKind k);

/// Everything a per-design evaluation depends on besides the design itself.
struct EvaluationSettings {
    double voxel_delta = 0.05;
    double thumb_step_deg = 5.0;
    double finger_step_deg = 3.0;
    FixedPosture thumb_fixed;   // sensitivity posture, empty = all zero
    FixedPosture finger_fixed;
    int jobs = 0;
};

/// Per-design metrics. Finger records carry one voxel set per finger
/// (index, middle, ring, little); manipulability, volume and sensitivity are
/// those of the index finger. Thumb records carry a single voxel set.
struct MetricsRecord {
    ChainKind kind = ChainKind::Thumb;
    PhalanxTriple design;
    std::string key;  // content hash, hex
    double global_manipulability = 0.0;
    double workspace_volume = 0.0;
    double distal_sensitivity = 0.0;
    std::vector<VoxelSet> voxels;

    std::string id() const;
    const VoxelSet& primary_voxels() const { return voxels.front(); }

    friend bool operator==(const MetricsRecord&, const MetricsRecord&) = default;
};

/// 64-bit FNV-1a of `text`, as 16 lowercase hex digits.
std::string content_hash(std::string_view text);

/// Hash over the design, chain kind, model (rows, ranges, bases) and settings
/// that affect the record. jobs is excluded.
std::string record_key(const HandModel& model, ChainKind kind, const PhalanxTriple& design,
                       const EvaluationSettings& settings);

MetricsRecord compute_record(const HandModel& model, ChainKind kind, const PhalanxTriple& design,
                             const EvaluationSettings& settings);

nlohmann::json to_json(const MetricsRecord& r);
MetricsRecord record_from_json(const nlohmann::json& j);

/// Thrown for unusable configuration (bad files, empty design sets, ...).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Records keyed by content hash, optionally backed by an append-only
/// JSON-lines cache file. Corrupt lines are skipped with a warning.
class RecordStore {
public:
    using Progress = std::function<void(const MetricsRecord&, bool from_cache, std::size_t done, std::size_t total)>;

    RecordStore() = default;
    explicit RecordStore(std::filesystem::path cache_path);

    /// Reads the cache file if present; returns the number of records loaded.
    std::size_t load();
    const std::vector<std::string>& warnings() const { return warnings_; }

    const MetricsRecord* find(const std::string& key) const;

    /// Computes (or fetches) one record per design, in design order. New
    /// records are appended to the cache file as they are computed.
    std::vector<MetricsRecord> ensure(const HandModel& model, ChainKind kind, const std::vector<PhalanxTriple>& designs,
                                      const EvaluationSettings& settings, const Progress& progress = {});

    std::size_t computed_count() const { return computed_; }
    std::size_t cached_count() const { return reused_; }
    std::size_t size() const { return records_.size(); }
    const std::map<std::string, MetricsRecord>& records() const { return records_; }

private:
    std::optional<std::filesystem::path> path_;
    std::map<std::string, MetricsRecord> records_;
    std::vector<std::string> warnings_;
    std::size_t computed_ = 0;
    std::size_t reused_ = 0;
};

}  // namespace handopt
