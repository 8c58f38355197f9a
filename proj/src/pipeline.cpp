#include "handopt/pipeline.hpp"

#include <algorithm>
#include <cmath>

namespace handopt {

namespace {

std::size_t position_of(const std::vector<MetricsRecord>& records, const PhalanxTriple& design) {
    const auto it = std::find_if(records.begin(), records.end(), [&](const MetricsRecord& r) { return r.design == design; });
    if (it == records.end()) throw ContractError("winning design " + design.id() + " has no record");
    return static_cast<std::size_t>(it - records.begin());
}

void require_sets(const SweepOutcome& s) {
    if (s.thumbs.empty() || s.fingers.empty()) throw ConfigError("the ordered design sets are empty");
}

}  // namespace

DesignSets default_design_sets() {
    DesignSets d;
    d.thumb_ordered = enumerate_feasible_designs(kThumbTotal, kMinPhalanx, true);
    d.finger_ordered = enumerate_feasible_designs(kFingerTotal, kMinPhalanx, true);
    d.thumb_relaxed = enumerate_feasible_designs(kThumbTotal, kMinPhalanx, false);
    d.finger_relaxed = enumerate_feasible_designs(kFingerTotal, kMinPhalanx, false);
    return d;
}

EvaluationSettings effective_settings(const RunConfig& cfg) {
    EvaluationSettings s = cfg.evaluation;
    s.jobs = cfg.jobs;
    return s;
}

SweepOutcome run_sweep(const RunConfig& cfg, RecordStore& store, bool relaxed, const RecordStore::Progress& progress) {
    const DesignSets sets = default_design_sets();
    const EvaluationSettings settings = effective_settings(cfg);
    const std::size_t computed0 = store.computed_count();
    const std::size_t cached0 = store.cached_count();

    SweepOutcome out;
    out.thumbs = store.ensure(cfg.model, ChainKind::Thumb, sets.thumb_ordered, settings, progress);
    out.fingers = store.ensure(cfg.model, ChainKind::Finger, sets.finger_ordered, settings, progress);
    if (relaxed) {
        out.relaxed_thumbs = store.ensure(cfg.model, ChainKind::Thumb, sets.thumb_relaxed, settings, progress);
        out.relaxed_fingers = store.ensure(cfg.model, ChainKind::Finger, sets.finger_relaxed, settings, progress);
    }
    out.computed = store.computed_count() - computed0;
    out.cached = store.cached_count() - cached0;
    return out;
}

const ResolutionEntry* ResolutionStudyReport::find(ChainKind chain, double delta, double resolution_deg) const {
    for (const auto& e : entries) {
        if (e.chain == chain && e.delta == delta && e.resolution_deg == resolution_deg) return &e;
    }
    return nullptr;
}

ResolutionStudyReport run_resolution_study(const RunConfig& cfg) {
    const auto& rs = cfg.resolution_study;
    ResolutionStudyReport rep;
    rep.thumb_design = rs.thumb_design;
    rep.finger_design = rs.finger_design;
    rep.finger = rs.finger;
    rep.threshold = rs.convergence_threshold;
    rep.voxel_sizes = rs.voxel_sizes;
    rep.resolutions_deg = rs.resolutions_deg;

    for (ChainKind kind : {ChainKind::Thumb, ChainKind::Finger}) {
        const SerialChain chain = kind == ChainKind::Thumb ? cfg.model.thumb_chain(rs.thumb_design)
                                                           : cfg.model.finger_chain(rs.finger_design, rs.finger);
        // volumes[d][r]
        std::vector<std::vector<VoxelSet>> sets(rs.voxel_sizes.size());
        for (double res : rs.resolutions_deg) {
            SweepOptions opt;
            opt.manipulability = false;
            opt.voxel_deltas = rs.voxel_sizes;
            opt.jobs = cfg.jobs;
            SweepResult sweep = sweep_chain(chain, build_joint_grid(chain.ranges(), res), opt);
            for (std::size_t d = 0; d < rs.voxel_sizes.size(); ++d) sets[d].push_back(std::move(sweep.voxels[d]));
        }
        for (std::size_t d = 0; d < rs.voxel_sizes.size(); ++d) {
            bool flagged = false;
            for (std::size_t r = 0; r < rs.resolutions_deg.size(); ++r) {
                ResolutionEntry e;
                e.chain = kind;
                e.delta = rs.voxel_sizes[d];
                e.resolution_deg = rs.resolutions_deg[r];
                e.voxels = sets[d][r].size();
                e.volume = sets[d][r].volume();
                if (r > 0) {
                    const double prev = sets[d][r - 1].volume();
                    e.relative_change = prev > 0.0 ? std::abs(e.volume - prev) / prev : 0.0;
                    if (!flagged && *e.relative_change < rs.convergence_threshold) {
                        e.converged = true;
                        flagged = true;
                    }
                }
                rep.entries.push_back(e);
            }
        }
    }
    return rep;
}

double percent_change(double a, double b) { return a == 0.0 ? 0.0 : (b - a) / a * 100.0; }

std::vector<CaseGroup> group_cases(std::vector<CaseOutcome>& cases) {
    std::vector<CaseGroup> groups;
    for (auto& c : cases) {
        auto it = std::find_if(groups.begin(), groups.end(), [&](const CaseGroup& g) {
            return g.thumb == c.result.best_thumb && g.finger == c.result.best_finger;
        });
        if (it == groups.end()) {
            std::string label;
            // A..Z, then AA, AB, ...
            for (std::size_t n = groups.size() + 1; n > 0; n = (n - 1) / 26) label.insert(label.begin(), char('A' + (n - 1) % 26));
            groups.push_back({label, c.result.best_thumb, c.result.best_finger, {}});
            it = groups.end() - 1;
        }
        it->cases.push_back(c.weight_case.name);
        c.group = it->label;
    }
    return groups;
}

CaseStudy run_case_study(const RunConfig& cfg, RecordStore& store, const RecordStore::Progress& progress) {
    if (cfg.cases.empty()) throw ConfigError("no weight cases configured");
    CaseStudy study;
    study.records = run_sweep(cfg, store, true, progress);
    require_sets(study.records);
    study.norms = compute_normalization(study.records.relaxed_thumbs, study.records.relaxed_fingers, cfg.workspace_norm,
                                        cfg.sensitivity_term, cfg.jobs);
    const PairTable pairs = score_pairs(study.records.thumbs, study.records.fingers, cfg.sensitivity_term, cfg.jobs);

    for (const auto& wc : cfg.cases) {
        CaseOutcome c;
        c.weight_case = wc;
        c.result = search_optimal_pair(pairs, wc.weights, study.norms);
        c.thumb = position_of(study.records.thumbs, c.result.best_thumb);
        c.finger = position_of(study.records.fingers, c.result.best_finger);
        study.cases.push_back(std::move(c));
    }
    study.groups = group_cases(study.cases);

    const auto& t0 = study.records.thumbs[study.cases.front().thumb];
    const auto& f0 = study.records.fingers[study.cases.front().finger];
    const double o0 = study.cases.front().result.best_terms.z2o;
    for (auto& c : study.cases) {
        const auto& t = study.records.thumbs[c.thumb];
        const auto& f = study.records.fingers[c.finger];
        c.deltas.thumb_volume = percent_change(t0.workspace_volume, t.workspace_volume);
        c.deltas.finger_volume = percent_change(f0.workspace_volume, f.workspace_volume);
        c.deltas.overlap = percent_change(o0, c.result.best_terms.z2o);
        c.deltas.thumb_manipulability = percent_change(t0.global_manipulability, t.global_manipulability);
        c.deltas.finger_manipulability = percent_change(f0.global_manipulability, f.global_manipulability);
    }
    return study;
}

OptimizeOutcome run_optimize(const RunConfig& cfg, RecordStore& store, const Weights& weights,
                             const RecordStore::Progress& progress) {
    OptimizeOutcome out;
    out.records = run_sweep(cfg, store, true, progress);
    require_sets(out.records);
    out.norms = compute_normalization(out.records.relaxed_thumbs, out.records.relaxed_fingers, cfg.workspace_norm,
                                      cfg.sensitivity_term, cfg.jobs);
    const PairTable pairs = score_pairs(out.records.thumbs, out.records.fingers, cfg.sensitivity_term, cfg.jobs);
    out.result = search_optimal_pair(pairs, weights, out.norms);
    out.thumb = position_of(out.records.thumbs, out.result.best_thumb);
    out.finger = position_of(out.records.fingers, out.result.best_finger);
    return out;
}

}  // namespace handopt
