#include "handopt/records.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace handopt {

const char* chain_kind_name(ChainKind k) { return k == ChainKind::Thumb ? "thumb" : "finger"; }

std::string MetricsRecord::id() const { return std::string(chain_kind_name(kind)) + ":" + design.id(); }

std::string content_hash(std::string_view text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

void put_pose(std::ostream& os, const BasePose& b) {
    for (int i = 0; i < 3; ++i) os << b.translation[i] << ',';
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) os << b.rotation(i, j) << ',';
    }
}

void put_template(std::ostream& os, const ChainTemplate& t) {
    for (const auto& r : t.rows) os << r.alpha_prev << ',' << r.a_prev << ',' << r.d << ',' << r.theta_offset << ',' << r.actuated << ';';
    for (const auto& r : t.ranges) os << r.min_deg << ',' << r.max_deg << ';';
    for (bool f : t.flexion) os << f;
    for (int r : t.design_rows) os << ',' << r;
}

}  // namespace

std::string record_key(const HandModel& model, ChainKind kind, const PhalanxTriple& design,
                       const EvaluationSettings& settings) {
    std::ostringstream os;
    os << std::setprecision(17) << "v1|" << chain_kind_name(kind) << '|' << design.id() << '|' << settings.voxel_delta
       << '|';
    if (kind == ChainKind::Thumb) {
        os << settings.thumb_step_deg << '|';
        for (double v : settings.thumb_fixed) os << v << ',';
        os << '|';
        put_template(os, model.thumb);
        os << '|';
        put_pose(os, model.thumb_base);
    } else {
        os << settings.finger_step_deg << '|';
        for (double v : settings.finger_fixed) os << v << ',';
        os << '|';
        put_template(os, model.finger);
        for (const auto& b : model.finger_bases) {
            os << '|';
            put_pose(os, b);
        }
    }
    return content_hash(os.str());
}

MetricsRecord compute_record(const HandModel& model, ChainKind kind, const PhalanxTriple& design,
                             const EvaluationSettings& settings) {
    MetricsRecord rec;
    rec.kind = kind;
    rec.design = design;
    rec.key = record_key(model, kind, design, settings);

    SweepOptions full;
    full.manipulability = true;
    full.voxel_deltas = {settings.voxel_delta};
    full.jobs = settings.jobs;

    if (kind == ChainKind::Thumb) {
        const SerialChain chain = model.thumb_chain(design);
        const JointGrid grid = build_joint_grid(chain.ranges(), settings.thumb_step_deg);
        SweepResult sweep = sweep_chain(chain, grid, full);
        rec.global_manipulability = sweep.global_manipulability;
        rec.voxels.push_back(std::move(sweep.voxels.front()));
        rec.distal_sensitivity =
            distal_sensitivity(chain, build_flexion_grid(chain, settings.thumb_step_deg), settings.thumb_fixed);
    } else {
        SweepOptions voxels_only = full;
        voxels_only.manipulability = false;
        for (Finger f : kAllFingers) {
            const SerialChain chain = model.finger_chain(design, f);
            const JointGrid grid = build_joint_grid(chain.ranges(), settings.finger_step_deg);
            if (f == Finger::Index) {
                SweepResult sweep = sweep_chain(chain, grid, full);
                rec.global_manipulability = sweep.global_manipulability;
                rec.voxels.push_back(std::move(sweep.voxels.front()));
                rec.distal_sensitivity = distal_sensitivity(
                    chain, build_flexion_grid(chain, settings.finger_step_deg), settings.finger_fixed);
            } else {
                rec.voxels.push_back(std::move(sweep_chain(chain, grid, voxels_only).voxels.front()));
            }
        }
    }
    rec.workspace_volume = rec.voxels.front().volume();
    return rec;
}

nlohmann::json to_json(const MetricsRecord& r) {
    nlohmann::json voxels = nlohmann::json::array();
    for (const auto& set : r.voxels) {
        std::vector<std::int32_t> flat;
        flat.reserve(set.size() * 3);
        for (const auto& v : set.cells()) {
            flat.push_back(v.x);
            flat.push_back(v.y);
            flat.push_back(v.z);
        }
        voxels.push_back(flat);
    }
    return nlohmann::json{{"key", r.key},
                          {"kind", chain_kind_name(r.kind)},
                          {"design", {r.design.proximal, r.design.middle, r.design.distal}},
                          {"global_manipulability", r.global_manipulability},
                          {"workspace_volume", r.workspace_volume},
                          {"distal_sensitivity", r.distal_sensitivity},
                          {"delta", r.voxels.empty() ? 0.0 : r.voxels.front().delta()},
                          {"voxels", voxels}};
}

MetricsRecord record_from_json(const nlohmann::json& j) {
    MetricsRecord r;
    r.key = j.at("key").get<std::string>();
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "thumb") {
        r.kind = ChainKind::Thumb;
    } else if (kind == "finger") {
        r.kind = ChainKind::Finger;
    } else {
        throw ConfigError("unknown record kind '" + kind + "'");
    }
    const auto d = j.at("design").get<std::vector<int>>();
    if (d.size() != 3) throw ConfigError("record design must have three entries");
    r.design = {d[0], d[1], d[2]};
    r.global_manipulability = j.at("global_manipulability").get<double>();
    r.workspace_volume = j.at("workspace_volume").get<double>();
    r.distal_sensitivity = j.at("distal_sensitivity").get<double>();
    const double delta = j.at("delta").get<double>();
    for (const auto& flat_json : j.at("voxels")) {
        const auto flat = flat_json.get<std::vector<std::int32_t>>();
        if (flat.size() % 3 != 0) throw ConfigError("voxel list length is not a multiple of 3");
        std::vector<VoxelIndex> cells;
        cells.reserve(flat.size() / 3);
        for (std::size_t i = 0; i < flat.size(); i += 3) cells.push_back({flat[i], flat[i + 1], flat[i + 2]});
        r.voxels.emplace_back(delta, std::move(cells));
    }
    const std::size_t expected = r.kind == ChainKind::Thumb ? 1 : 4;
    if (r.voxels.size() != expected) throw ConfigError("record has the wrong number of voxel sets");
    if (r.voxels.front().volume() != r.workspace_volume) throw ConfigError("record volume disagrees with its voxels");
    return r;
}

RecordStore::RecordStore(std::filesystem::path cache_path) : path_(std::move(cache_path)) {}

std::size_t RecordStore::load() {
    if (!path_ || !std::filesystem::exists(*path_)) return 0;
    std::ifstream in(*path_);
    if (!in) throw ConfigError("cannot read cache file " + path_->string());
    std::size_t loaded = 0;
    std::size_t line_no = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            MetricsRecord r = record_from_json(nlohmann::json::parse(line));
            records_.insert_or_assign(r.key, std::move(r));
            ++loaded;
        } catch (const std::exception& e) {
            warnings_.push_back(path_->string() + ":" + std::to_string(line_no) + ": skipped corrupt cache line (" +
                                e.what() + ")");
        }
    }
    return loaded;
}

const MetricsRecord* RecordStore::find(const std::string& key) const {
    const auto it = records_.find(key);
    return it == records_.end() ? nullptr : &it->second;
}

std::vector<MetricsRecord> RecordStore::ensure(const HandModel& model, ChainKind kind,
                                               const std::vector<PhalanxTriple>& designs,
                                               const EvaluationSettings& settings, const Progress& progress) {
    std::vector<MetricsRecord> out;
    out.reserve(designs.size());
    std::ofstream cache;
    for (std::size_t i = 0; i < designs.size(); ++i) {
        const std::string key = record_key(model, kind, designs[i], settings);
        bool cached = false;
        if (const MetricsRecord* hit = find(key); hit && hit->kind == kind && hit->design == designs[i]) {
            out.push_back(*hit);
            cached = true;
            ++reused_;
        } else {
            MetricsRecord r = compute_record(model, kind, designs[i], settings);
            // Appended and flushed per record so an interrupted sweep resumes.
            if (path_) {
                if (!cache.is_open()) {
                    if (path_->has_parent_path()) {
                        std::error_code ec;
                        std::filesystem::create_directories(path_->parent_path(), ec);
                    }
                    cache.open(*path_, std::ios::app);
                    if (!cache) throw ConfigError("cannot write cache file " + path_->string());
                }
                cache << to_json(r).dump() << '\n' << std::flush;
                if (!cache) throw ConfigError("failed writing cache file " + path_->string());
            }
            out.push_back(r);
            records_.insert_or_assign(r.key, std::move(r));
            ++computed_;
        }
        if (progress) progress(out.back(), cached, i + 1, designs.size());
    }
    return out;
}

}  // namespace handopt
