#include "handopt/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace handopt {

using nlohmann::json;

namespace {

// Degree values echoed after a rad round trip; trims the trailing ulp noise.
double clean_deg(double rad) { return std::round(rad_to_deg(rad) * 1e12) / 1e12; }

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

template <class T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

json pose_to_json(const BasePose& b) {
    json rot = json::array();
    for (int i = 0; i < 3; ++i) rot.push_back({b.rotation(i, 0), b.rotation(i, 1), b.rotation(i, 2)});
    return {{"translation", {b.translation.x(), b.translation.y(), b.translation.z()}}, {"rotation", rot}};
}

BasePose pose_from_json(const json& j, BasePose pose, const std::string& where) {
    reject_unknown(j, {"translation", "rotation"}, where);
    if (j.contains("translation")) {
        const auto t = j.at("translation").get<std::vector<double>>();
        if (t.size() != 3) throw ConfigError(where + ".translation must have 3 entries");
        pose.translation = Vec3(t[0], t[1], t[2]);
    }
    if (j.contains("rotation")) {
        const auto r = j.at("rotation").get<std::vector<std::vector<double>>>();
        if (r.size() != 3) throw ConfigError(where + ".rotation must be 3x3");
        for (int i = 0; i < 3; ++i) {
            if (r[i].size() != 3) throw ConfigError(where + ".rotation must be 3x3");
            for (int k = 0; k < 3; ++k) pose.rotation(i, k) = r[i][k];
        }
    }
    try {
        validate_rotation(pose.rotation, where);
    } catch (const ContractError& e) {
        throw ConfigError(e.what());
    }
    return pose;
}

json template_to_json(const ChainTemplate& t) {
    json rows = json::array();
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const DhRow& r = t.rows[i];
        rows.push_back({{"alpha_deg", clean_deg(r.alpha_prev)},
                        {"a", r.a_prev},
                        {"d", r.d},
                        {"theta_offset_deg", clean_deg(r.theta_offset)},
                        {"actuated", r.actuated},
                        {"a_label", t.a_labels[i]},
                        {"theta_label", t.theta_labels[i]}});
    }
    json ranges = json::array();
    for (const auto& r : t.ranges) ranges.push_back({r.min_deg, r.max_deg});
    json flexion = json::array();
    for (bool f : t.flexion) flexion.push_back(f);
    return {{"rows", rows},
            {"ranges_deg", ranges},
            {"flexion", flexion},
            {"design_rows", {t.design_rows[0], t.design_rows[1], t.design_rows[2]}}};
}

ChainTemplate template_from_json(const json& j, ChainTemplate t, const std::string& where) {
    reject_unknown(j, {"rows", "ranges_deg", "flexion", "design_rows"}, where);
    if (j.contains("rows")) {
        t.rows.clear();
        t.a_labels.clear();
        t.theta_labels.clear();
        for (const auto& rj : j.at("rows")) {
            reject_unknown(rj, {"alpha_deg", "a", "d", "theta_offset_deg", "actuated", "a_label", "theta_label"},
                           where + ".rows[]");
            DhRow r;
            r.alpha_prev = deg_to_rad(rj.value("alpha_deg", 0.0));
            r.a_prev = rj.value("a", 0.0);
            r.d = rj.value("d", 0.0);
            r.theta_offset = deg_to_rad(rj.value("theta_offset_deg", 0.0));
            r.actuated = rj.value("actuated", false);
            t.rows.push_back(r);
            t.a_labels.push_back(rj.value("a_label", std::string("-")));
            t.theta_labels.push_back(rj.value("theta_label", std::string("-")));
        }
    }
    if (j.contains("ranges_deg")) {
        t.ranges.clear();
        for (const auto& rj : j.at("ranges_deg")) {
            const auto r = rj.get<std::vector<double>>();
            if (r.size() != 2) throw ConfigError(where + ".ranges_deg entries must be [min, max]");
            t.ranges.push_back({r[0], r[1]});
        }
    }
    if (j.contains("flexion")) t.flexion = j.at("flexion").get<std::vector<bool>>();
    if (j.contains("design_rows")) {
        const auto d = j.at("design_rows").get<std::vector<int>>();
        if (d.size() != 3) throw ConfigError(where + ".design_rows must have 3 entries");
        t.design_rows = {d[0], d[1], d[2]};
    }
    return t;
}

const char* norm_name(WorkspaceNorm n) { return n == WorkspaceNorm::SumOfMaxima ? "sum_of_maxima" : "max_of_combined"; }

const char* sensitivity_name(SensitivityTerm s) {
    switch (s) {
        case SensitivityTerm::Thumb: return "thumb";
        case SensitivityTerm::Finger: return "finger";
        case SensitivityTerm::Mean: break;
    }
    return "mean";
}

PhalanxTriple triple_from_json(const json& j, const std::string& where) {
    const auto v = j.get<std::vector<int>>();
    if (v.size() != 3) throw ConfigError(where + " must have 3 entries");
    return {v[0], v[1], v[2]};
}

}  // namespace

std::filesystem::path RunConfig::resolved_cache_path() const {
    return cache_path.empty() ? output_dir / "records.jsonl" : cache_path;
}

void RunConfig::apply_coarse_preset() {
    coarse = true;
    evaluation.thumb_step_deg = 15.0;
    evaluation.finger_step_deg = 9.0;
    evaluation.voxel_delta = 0.05;
}

void RunConfig::validate() const {
    if (!(evaluation.voxel_delta > 0.0)) throw ConfigError("voxel_size must be positive");
    if (!(evaluation.thumb_step_deg > 0.0) || !(evaluation.finger_step_deg > 0.0)) {
        throw ConfigError("angular resolutions must be positive");
    }
    for (const auto& c : cases) c.weights.validate();
    for (double d : resolution_study.voxel_sizes) {
        if (!(d > 0.0)) throw ConfigError("resolution study voxel sizes must be positive");
    }
    for (double r : resolution_study.resolutions_deg) {
        if (!(r > 0.0)) throw ConfigError("resolution study resolutions must be positive");
    }
    if (!evaluation.thumb_fixed.empty() && evaluation.thumb_fixed.size() != model.thumb.ranges.size()) {
        throw ConfigError("thumb sensitivity posture needs one angle per thumb joint");
    }
    if (!evaluation.finger_fixed.empty() && evaluation.finger_fixed.size() != model.finger.ranges.size()) {
        throw ConfigError("finger sensitivity posture needs one angle per finger joint");
    }
    try {
        model.validate();
    } catch (const ContractError& e) {
        throw ConfigError(std::string("invalid hand model: ") + e.what());
    }
}

RunConfig config_from_json(const json& j) {
    RunConfig cfg;
    reject_unknown(j, {"voxel_size", "thumb_resolution_deg", "finger_resolution_deg", "coarse", "jobs", "output_dir",
                       "cache_path", "normalization", "sensitivity_term", "sensitivity_fixed_posture_deg",
                       "weight_cases", "resolution_study", "model"},
                   "config");
    try {
        if (j.value("coarse", false)) cfg.apply_coarse_preset();
        read(j, "voxel_size", cfg.evaluation.voxel_delta);
        read(j, "thumb_resolution_deg", cfg.evaluation.thumb_step_deg);
        read(j, "finger_resolution_deg", cfg.evaluation.finger_step_deg);
        read(j, "jobs", cfg.jobs);
        if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
        if (j.contains("cache_path")) cfg.cache_path = j.at("cache_path").get<std::string>();

        if (j.contains("normalization")) {
            const auto n = j.at("normalization").get<std::string>();
            if (n == "sum_of_maxima") {
                cfg.workspace_norm = WorkspaceNorm::SumOfMaxima;
            } else if (n == "max_of_combined") {
                cfg.workspace_norm = WorkspaceNorm::MaxOfCombined;
            } else {
                throw ConfigError("normalization must be sum_of_maxima or max_of_combined");
            }
        }
        if (j.contains("sensitivity_term")) {
            const auto s = j.at("sensitivity_term").get<std::string>();
            if (s == "mean") {
                cfg.sensitivity_term = SensitivityTerm::Mean;
            } else if (s == "thumb") {
                cfg.sensitivity_term = SensitivityTerm::Thumb;
            } else if (s == "finger") {
                cfg.sensitivity_term = SensitivityTerm::Finger;
            } else {
                throw ConfigError("sensitivity_term must be mean, thumb or finger");
            }
        }
        if (j.contains("sensitivity_fixed_posture_deg")) {
            const auto& p = j.at("sensitivity_fixed_posture_deg");
            reject_unknown(p, {"thumb", "finger"}, "sensitivity_fixed_posture_deg");
            read(p, "thumb", cfg.evaluation.thumb_fixed);
            read(p, "finger", cfg.evaluation.finger_fixed);
        }
        if (j.contains("weight_cases")) {
            cfg.cases.clear();
            int i = 0;
            for (const auto& cj : j.at("weight_cases")) {
                ++i;
                // "normalized" is written by the echo and recomputed here.
                reject_unknown(cj, {"name", "c", "normalized"}, "weight_cases[]");
                const auto c = cj.at("c").get<std::vector<double>>();
                if (c.size() != 3) throw ConfigError("weight case needs three coefficients");
                cfg.cases.push_back({cj.value("name", "Case " + std::to_string(i)), c[0], c[1], c[2],
                                     Weights::normalized(c[0], c[1], c[2])});
            }
        }
        if (j.contains("resolution_study")) {
            const auto& r = j.at("resolution_study");
            reject_unknown(r, {"voxel_sizes", "resolutions_deg", "thumb_design", "finger_design", "finger",
                               "convergence_threshold"},
                           "resolution_study");
            auto& rs = cfg.resolution_study;
            read(r, "voxel_sizes", rs.voxel_sizes);
            read(r, "resolutions_deg", rs.resolutions_deg);
            read(r, "convergence_threshold", rs.convergence_threshold);
            if (r.contains("thumb_design")) rs.thumb_design = triple_from_json(r.at("thumb_design"), "thumb_design");
            if (r.contains("finger_design")) rs.finger_design = triple_from_json(r.at("finger_design"), "finger_design");
            if (r.contains("finger")) {
                const auto name = r.at("finger").get<std::string>();
                bool found = false;
                for (Finger f : kAllFingers) {
                    if (name == finger_name(f)) {
                        rs.finger = f;
                        found = true;
                    }
                }
                if (!found) throw ConfigError("unknown finger '" + name + "'");
            }
        }
        if (j.contains("model")) {
            const auto& m = j.at("model");
            reject_unknown(m, {"geometry", "thumb", "finger", "thumb_base", "finger_bases"}, "model");
            if (m.contains("geometry")) {
                const auto& g = m.at("geometry");
                reject_unknown(g, {"hl", "hw", "lt", "lf", "a1", "a0p", "a1p", "d1"}, "model.geometry");
                HandGeometry geo;
                read(g, "hl", geo.hl);
                read(g, "hw", geo.hw);
                read(g, "lt", geo.lt);
                read(g, "lf", geo.lf);
                read(g, "a1", geo.a1);
                read(g, "a0p", geo.a0p);
                read(g, "a1p", geo.a1p);
                read(g, "d1", geo.d1);
                cfg.model = HandModel::from_geometry(geo);
            }
            if (m.contains("thumb")) cfg.model.thumb = template_from_json(m.at("thumb"), cfg.model.thumb, "model.thumb");
            if (m.contains("finger")) {
                cfg.model.finger = template_from_json(m.at("finger"), cfg.model.finger, "model.finger");
            }
            if (m.contains("thumb_base")) {
                cfg.model.thumb_base = pose_from_json(m.at("thumb_base"), cfg.model.thumb_base, "model.thumb_base");
            }
            if (m.contains("finger_bases")) {
                const auto& fb = m.at("finger_bases");
                reject_unknown(fb, {"index", "middle", "ring", "little"}, "model.finger_bases");
                for (Finger f : kAllFingers) {
                    if (fb.contains(finger_name(f))) {
                        auto& pose = cfg.model.finger_bases[static_cast<std::size_t>(f)];
                        pose = pose_from_json(fb.at(finger_name(f)), pose,
                                              std::string("model.finger_bases.") + finger_name(f));
                    }
                }
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json j;
    try {
        j = json::parse(in, nullptr, true, true);
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

json config_to_json(const RunConfig& cfg) {
    json cases = json::array();
    for (const auto& c : cfg.cases) {
        cases.push_back({{"name", c.name},
                         {"c", {c.raw_c1, c.raw_c2, c.raw_c3}},
                         {"normalized", {c.weights.c1, c.weights.c2, c.weights.c3}}});
    }
    const auto& rs = cfg.resolution_study;
    const auto& g = cfg.model.geometry;
    json finger_bases;
    for (Finger f : kAllFingers) finger_bases[finger_name(f)] = pose_to_json(cfg.model.finger_bases[static_cast<std::size_t>(f)]);
    return {
        {"voxel_size", cfg.evaluation.voxel_delta},
        {"thumb_resolution_deg", cfg.evaluation.thumb_step_deg},
        {"finger_resolution_deg", cfg.evaluation.finger_step_deg},
        {"coarse", cfg.coarse},
        {"normalization", norm_name(cfg.workspace_norm)},
        {"sensitivity_term", sensitivity_name(cfg.sensitivity_term)},
        {"sensitivity_fixed_posture_deg", {{"thumb", cfg.evaluation.thumb_fixed}, {"finger", cfg.evaluation.finger_fixed}}},
        {"weight_cases", cases},
        {"resolution_study",
         {{"voxel_sizes", rs.voxel_sizes},
          {"resolutions_deg", rs.resolutions_deg},
          {"thumb_design", {rs.thumb_design.proximal, rs.thumb_design.middle, rs.thumb_design.distal}},
          {"finger_design", {rs.finger_design.proximal, rs.finger_design.middle, rs.finger_design.distal}},
          {"finger", finger_name(rs.finger)},
          {"convergence_threshold", rs.convergence_threshold}}},
        {"model",
         {{"geometry",
           {{"hl", g.hl}, {"hw", g.hw}, {"lt", g.lt}, {"lf", g.lf}, {"a1", g.a1}, {"a0p", g.a0p}, {"a1p", g.a1p}, {"d1", g.d1}}},
          {"thumb", template_to_json(cfg.model.thumb)},
          {"finger", template_to_json(cfg.model.finger)},
          {"thumb_base", pose_to_json(cfg.model.thumb_base)},
          {"finger_bases", finger_bases}}},
    };
}

}  // namespace handopt
