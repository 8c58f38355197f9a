#include "handopt/reports.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace handopt {

using nlohmann::json;

std::string fixed6(double v) {
    char buf[64];
    const double r = std::round(v * 1e6) / 1e6;
    std::snprintf(buf, sizeof buf, "%.6f", r == 0.0 ? 0.0 : r);
    return buf;
}

double round6(double v) {
    const double r = std::round(v * 1e6) / 1e6;
    return r == 0.0 ? 0.0 : r;
}

namespace {

std::string deg_text(double rad) { return fixed6(std::round(rad_to_deg(rad) * 1e9) / 1e9); }

void dump_template(std::ostringstream& os, const ChainTemplate& t, const std::string& title) {
    os << title << " DH parameters (modified convention)\n";
    os << "  i | alpha_{i-1} (deg) | a_{i-1} | d_i | theta_i\n";
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const DhRow& r = t.rows[i];
        const bool design = std::find(t.design_rows.begin(), t.design_rows.end(), static_cast<int>(i)) != t.design_rows.end();
        std::string a = t.a_labels[i];
        if (design) {
            a += " (design)";
        } else if (r.a_prev == 0.0) {
            a = fixed6(0.0);
        } else {
            a += " = " + fixed6(r.a_prev);
        }
        std::string theta = t.theta_labels[i];
        if (r.actuated && r.theta_offset != 0.0) theta += " + " + deg_text(r.theta_offset) + " deg";
        if (!r.actuated) theta = deg_text(r.theta_offset) + " deg (fixed)";
        os << "  " << (i + 1) << " | " << deg_text(r.alpha_prev) << " | " << a << " | " << fixed6(r.d) << " | " << theta
           << '\n';
    }
    os << title << " range of motion\n";
    std::size_t j = 0;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        if (!t.rows[i].actuated) continue;
        os << "  " << t.theta_labels[i] << " in [" << fixed6(t.ranges[j].min_deg) << ", " << fixed6(t.ranges[j].max_deg)
           << "] deg" << (t.flexion[j] ? "  flexion" : "") << '\n';
        ++j;
    }
    os << "  design rows:";
    for (int r : t.design_rows) os << ' ' << (r + 1) << " (" << t.a_labels[r] << ')';
    os << '\n';
}

void dump_pose(std::ostringstream& os, const std::string& name, const BasePose& b) {
    os << "  " << name << ": translation (" << fixed6(b.translation.x()) << ", " << fixed6(b.translation.y()) << ", "
       << fixed6(b.translation.z()) << ") rotation [";
    for (int i = 0; i < 3; ++i) {
        os << (i ? "; " : "") << fixed6(b.rotation(i, 0)) << ' ' << fixed6(b.rotation(i, 1)) << ' ' << fixed6(b.rotation(i, 2));
    }
    os << "]\n";
}

json triple_json(const PhalanxTriple& t) { return {t.proximal, t.middle, t.distal}; }

json terms_json(const EvaluationTerms& t) {
    return {{"z1", round6(t.z1)},
            {"z2w", round6(t.z2w)},
            {"z2o", round6(t.z2o)},
            {"z2", round6(t.z2)},
            {"z3", round6(t.z3)},
            {"overlaps",
             {{"index", round6(t.overlaps[0])},
              {"middle", round6(t.overlaps[1])},
              {"ring", round6(t.overlaps[2])},
              {"little", round6(t.overlaps[3])}}}};
}

json record_scalars(const MetricsRecord& r) {
    json j = {{"design", r.design.id()},
              {"global_manipulability", round6(r.global_manipulability)},
              {"workspace_volume", round6(r.workspace_volume)},
              {"distal_sensitivity", round6(r.distal_sensitivity)},
              {"voxels", r.primary_voxels().size()}};
    if (r.kind == ChainKind::Finger) {
        json per;
        for (Finger f : kAllFingers) per[finger_name(f)] = round6(r.voxels[static_cast<std::size_t>(f)].volume());
        j["finger_volumes"] = per;
    }
    return j;
}

json norms_json(const NormalizationConstants& n) {
    return {{"z_m", round6(n.z_m)}, {"z_w", round6(n.z_w)}, {"z_s", round6(n.z_s)}};
}

json deltas_json(const CaseDeltas& d) {
    return {{"thumb_volume_pct", round6(d.thumb_volume)},
            {"finger_volume_pct", round6(d.finger_volume)},
            {"overlap_pct", round6(d.overlap)},
            {"thumb_manipulability_pct", round6(d.thumb_manipulability)},
            {"finger_manipulability_pct", round6(d.finger_manipulability)}};
}

}  // namespace

std::string format_model(const HandModel& model) {
    std::ostringstream os;
    const auto& g = model.geometry;
    os << "Hand geometry (hand length normalized)\n";
    os << "  HL = " << fixed6(g.hl) << "\n  HW = " << fixed6(g.hw) << "\n  LT = " << fixed6(g.lt) << "\n  LF = " << fixed6(g.lf)
       << "\n  a1 = " << fixed6(g.a1) << "\n  a0' = " << fixed6(g.a0p) << "\n  a1' = " << fixed6(g.a1p)
       << "\n  d1 = " << fixed6(g.d1) << "\n  finger spacing = " << fixed6(g.finger_spacing()) << "\n\n";
    dump_template(os, model.thumb, "Thumb");
    os << '\n';
    dump_template(os, model.finger, "Finger");
    os << "\nBase poses (palm frame)\n";
    dump_pose(os, "thumb", model.thumb_base);
    for (Finger f : kAllFingers) dump_pose(os, finger_name(f), model.finger_bases[static_cast<std::size_t>(f)]);
    return os.str();
}

std::string format_resolution_study(const ResolutionStudyReport& rep) {
    std::ostringstream os;
    os << "Workspace volumes at different sampling resolutions\n";
    os << "thumb design " << rep.thumb_design.id() << ", finger design " << rep.finger_design.id() << " ("
       << finger_name(rep.finger) << ")\n\n";

    auto header = [&] {
        os << "Voxel (Delta)";
        for (const char* chain : {"Thumb", "Finger"}) {
            for (double r : rep.resolutions_deg) os << " | " << chain << ' ' << fixed6(r) << " deg";
        }
        os << '\n';
    };
    header();
    for (double d : rep.voxel_sizes) {
        os << fixed6(d);
        for (ChainKind k : {ChainKind::Thumb, ChainKind::Finger}) {
            for (double r : rep.resolutions_deg) {
                const ResolutionEntry* e = rep.find(k, d, r);
                os << " | " << (e ? fixed6(e->volume) : std::string("-"));
            }
        }
        os << '\n';
    }
    os << "\nRelative change vs previous resolution |V_fine - V_coarse| / V_coarse\n";
    header();
    for (double d : rep.voxel_sizes) {
        os << fixed6(d);
        for (ChainKind k : {ChainKind::Thumb, ChainKind::Finger}) {
            for (double r : rep.resolutions_deg) {
                const ResolutionEntry* e = rep.find(k, d, r);
                os << " | ";
                if (e && e->relative_change) {
                    os << fixed6(*e->relative_change) << (e->converged ? " *" : "");
                } else {
                    os << '-';
                }
            }
        }
        os << '\n';
    }
    os << "\n* first resolution whose change is below " << fixed6(rep.threshold) << '\n';
    for (ChainKind k : {ChainKind::Thumb, ChainKind::Finger}) {
        for (double d : rep.voxel_sizes) {
            os << chain_kind_name(k) << " Delta=" << fixed6(d) << ": ";
            const ResolutionEntry* hit = nullptr;
            for (const auto& e : rep.entries) {
                if (e.chain == k && e.delta == d && e.converged) hit = &e;
            }
            if (hit) {
                os << "converged at " << fixed6(hit->resolution_deg) << " deg\n";
            } else {
                os << "not converged\n";
            }
        }
    }
    return os.str();
}

json resolution_study_json(const ResolutionStudyReport& rep, const RunConfig& cfg) {
    json entries = json::array();
    for (const auto& e : rep.entries) {
        entries.push_back({{"chain", chain_kind_name(e.chain)},
                           {"delta", e.delta},
                           {"resolution_deg", e.resolution_deg},
                           {"voxels", e.voxels},
                           {"volume", round6(e.volume)},
                           {"relative_change", e.relative_change ? json(round6(*e.relative_change)) : json(nullptr)},
                           {"converged", e.converged}});
    }
    return {{"config", config_to_json(cfg)}, {"entries", entries}};
}

std::string pairs_csv(const OptimizationResult& res) {
    std::ostringstream os;
    os << "thumb,finger,z1,z2w,z2o,z2,z3,f,excluded\n";
    for (const auto& p : res.table) {
        os << p.thumb.id() << ',' << p.finger.id() << ',' << fixed6(p.terms.z1) << ',' << fixed6(p.terms.z2w) << ','
           << fixed6(p.terms.z2o) << ',' << fixed6(p.terms.z2) << ',' << fixed6(p.terms.z3) << ',' << fixed6(p.f) << ','
           << (p.excluded ? 1 : 0) << '\n';
    }
    return os.str();
}

json optimization_json(const OptimizationResult& res, const MetricsRecord& thumb, const MetricsRecord& finger) {
    return {{"weights", {round6(res.weights.c1), round6(res.weights.c2), round6(res.weights.c3)}},
            {"best_thumb", triple_json(res.best_thumb)},
            {"best_finger", triple_json(res.best_finger)},
            {"f_star", round6(res.f_star)},
            {"terms", terms_json(res.best_terms)},
            {"contributions",
             {{"manipulability", round6(res.manipulability_contribution)},
              {"workspace", round6(res.workspace_contribution)},
              {"sensitivity", round6(res.sensitivity_contribution)}}},
            {"candidate_pairs", res.candidate_pairs},
            {"excluded_pairs", res.excluded_pairs},
            {"thumb", record_scalars(thumb)},
            {"finger", record_scalars(finger)}};
}

json optimize_report_json(const OptimizeOutcome& out, const RunConfig& cfg) {
    return {{"config", config_to_json(cfg)},
            {"normalization", norms_json(out.norms)},
            {"result", optimization_json(out.result, out.records.thumbs[out.thumb], out.records.fingers[out.finger])}};
}

json case_report_json(const CaseStudy& study, const RunConfig& cfg) {
    json cases = json::array();
    for (const auto& c : study.cases) {
        json j = optimization_json(c.result, study.records.thumbs[c.thumb], study.records.fingers[c.finger]);
        j["name"] = c.weight_case.name;
        j["raw_weights"] = {c.weight_case.raw_c1, c.weight_case.raw_c2, c.weight_case.raw_c3};
        j["group"] = c.group;
        j["relative_to_first_case"] = deltas_json(c.deltas);
        cases.push_back(j);
    }
    json groups = json::array();
    for (const auto& g : study.groups) {
        groups.push_back({{"label", g.label}, {"thumb", triple_json(g.thumb)}, {"finger", triple_json(g.finger)}, {"cases", g.cases}});
    }
    return {{"config", config_to_json(cfg)},
            {"normalization", norms_json(study.norms)},
            {"design_counts",
             {{"thumb", study.records.thumbs.size()},
              {"finger", study.records.fingers.size()},
              {"thumb_relaxed", study.records.relaxed_thumbs.size()},
              {"finger_relaxed", study.records.relaxed_fingers.size()}}},
            {"cases", cases},
            {"groups", groups}};
}

std::string format_case_study(const CaseStudy& study) {
    std::ostringstream os;
    os << "Normalization: z_m = " << fixed6(study.norms.z_m) << ", z_w = " << fixed6(study.norms.z_w)
       << ", z_s = " << fixed6(study.norms.z_s) << "\n\n";
    os << "case | c1 c2 c3 | thumb | finger | f* | excluded/candidates | group\n";
    for (const auto& c : study.cases) {
        const auto& w = c.weight_case;
        os << w.name << " | " << fixed6(w.raw_c1) << ' ' << fixed6(w.raw_c2) << ' ' << fixed6(w.raw_c3) << " | "
           << c.result.best_thumb.id() << " | " << c.result.best_finger.id() << " | " << fixed6(c.result.f_star) << " | "
           << c.result.excluded_pairs << '/' << c.result.candidate_pairs << " | " << c.group << '\n';
    }
    os << "\ngroup | thumb | finger | cases\n";
    for (const auto& g : study.groups) {
        os << g.label << " | " << g.thumb.id() << " | " << g.finger.id() << " |";
        for (std::size_t i = 0; i < g.cases.size(); ++i) os << (i ? ", " : " ") << g.cases[i];
        os << '\n';
    }
    os << "\nchange vs " << study.cases.front().weight_case.name
       << " (%) | thumb volume | finger volume | overlap | thumb manipulability | finger manipulability\n";
    for (const auto& c : study.cases) {
        os << c.weight_case.name << " | " << fixed6(c.deltas.thumb_volume) << " | " << fixed6(c.deltas.finger_volume) << " | "
           << fixed6(c.deltas.overlap) << " | " << fixed6(c.deltas.thumb_manipulability) << " | "
           << fixed6(c.deltas.finger_manipulability) << '\n';
    }
    return os.str();
}

std::string voxel_csv(const VoxelSet& set) {
    std::ostringstream os;
    os << "vx,vy,vz\n";
    for (const auto& v : set.cells()) os << v.x << ',' << v.y << ',' << v.z << '\n';
    return os.str();
}

std::string point_cloud(const VoxelSet& set) {
    std::ostringstream os;
    const double d = set.delta();
    for (const auto& v : set.cells()) {
        os << fixed6((v.x + 0.5) * d) << ' ' << fixed6((v.y + 0.5) * d) << ' ' << fixed6((v.z + 0.5) * d) << '\n';
    }
    return os.str();
}

json metrics_json(const std::vector<MetricsRecord>& records) {
    json j = json::object();
    for (const auto& r : records) {
        json s = record_scalars(r);
        s["kind"] = chain_kind_name(r.kind);
        s["key"] = r.key;
        j[r.id()] = s;
    }
    return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << text;
    out.close();
    if (!out) throw ConfigError("failed writing " + path.string());
}

}  // namespace handopt
