#include "handopt/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

#ifdef HANDOPT_HAVE_OPENMP
#include <omp.h>
#endif

namespace handopt {

void Weights::validate() const {
    for (double c : {c1, c2, c3}) {
        if (!std::isfinite(c) || c < 0.0 || c > 1.0) throw ConfigError("weights must lie in [0, 1]");
    }
    if (std::abs(c1 + c2 + c3 - 1.0) > 1e-9) {
        std::ostringstream os;
        os << "weights must sum to 1, got " << (c1 + c2 + c3);
        throw ConfigError(os.str());
    }
}

Weights Weights::normalized(double c1, double c2, double c3) {
    const double s = c1 + c2 + c3;
    if (!(s > 0.0) || c1 < 0.0 || c2 < 0.0 || c3 < 0.0) throw ConfigError("weights must be non-negative with a positive sum");
    Weights w{c1 / s, c2 / s, c3 / s};
    w.validate();
    return w;
}

std::vector<WeightCase> default_weight_cases() {
    const double table[7][3] = {
        {0.33, 0.33, 0.33}, {0.8, 0.1, 0.1}, {0.1, 0.8, 0.1}, {0.1, 0.1, 0.8},
        {0.4, 0.4, 0.2},    {0.4, 0.2, 0.4}, {0.2, 0.4, 0.4},
    };
    std::vector<WeightCase> out;
    for (int i = 0; i < 7; ++i) {
        out.push_back({"Case " + std::to_string(i + 1), table[i][0], table[i][1], table[i][2],
                       Weights::normalized(table[i][0], table[i][1], table[i][2])});
    }
    return out;
}

bool EvaluationTerms::any_zero_overlap() const {
    return std::any_of(overlaps.begin(), overlaps.end(), [](double v) { return v <= 0.0; });
}

double aggregate_z1(double w_thumb, double w_index) { return 0.5 * w_thumb + 0.5 * w_index; }

EvaluationTerms aggregate_z2(double v_thumb, double v_index, std::span<const double> overlaps) {
    if (overlaps.size() != 4) throw ContractError("exactly four overlap volumes are required");
    EvaluationTerms t;
    std::copy(overlaps.begin(), overlaps.end(), t.overlaps.begin());
    t.z2w = 0.5 * v_thumb + 0.5 * v_index;
    t.z2o = 0.25 * (overlaps[0] + overlaps[1] + overlaps[2] + overlaps[3]);
    t.z2 = 0.5 * t.z2w + 0.5 * t.z2o;
    return t;
}

double aggregate_z3(double s_thumb, double s_index, SensitivityTerm mode) {
    switch (mode) {
        case SensitivityTerm::Thumb: return s_thumb;
        case SensitivityTerm::Finger: return s_index;
        case SensitivityTerm::Mean: break;
    }
    return 0.5 * s_thumb + 0.5 * s_index;
}

namespace {

EvaluationTerms pair_terms(const MetricsRecord& thumb, const VoxelMembership& thumb_cells,
                           const MetricsRecord& finger, SensitivityTerm mode) {
    if (finger.voxels.size() != 4) throw ContractError("finger record must carry four voxel sets");
    std::array<double, 4> ov{};
    const double cell = std::pow(thumb.primary_voxels().delta(), 3);
    for (std::size_t f = 0; f < 4; ++f) {
        ov[f] = static_cast<double>(thumb_cells.count_common(finger.voxels[f])) * cell;
    }
    EvaluationTerms t = aggregate_z2(thumb.workspace_volume, finger.workspace_volume, ov);
    t.z1 = aggregate_z1(thumb.global_manipulability, finger.global_manipulability);
    t.z3 = aggregate_z3(thumb.distal_sensitivity, finger.distal_sensitivity, mode);
    return t;
}

}  // namespace

EvaluationTerms evaluate_pair(const MetricsRecord& thumb, const MetricsRecord& finger, SensitivityTerm mode) {
    return pair_terms(thumb, VoxelMembership(thumb.primary_voxels()), finger, mode);
}

double objective(const EvaluationTerms& terms, const Weights& weights, const NormalizationConstants& norms) {
    if (!(norms.z_m > 0.0) || !(norms.z_w > 0.0) || !(norms.z_s > 0.0)) {
        throw ConfigError("normalization constants must be positive");
    }
    return weights.c1 * terms.z1 / norms.z_m + weights.c2 * terms.z2 / norms.z_w - weights.c3 * terms.z3 / norms.z_s;
}

PairTable score_pairs(std::span<const MetricsRecord> thumbs, std::span<const MetricsRecord> fingers,
                      SensitivityTerm mode, int jobs) {
    PairTable table;
    for (const auto& t : thumbs) table.thumbs.push_back(t.design);
    for (const auto& f : fingers) table.fingers.push_back(f.design);
    table.terms.resize(thumbs.size() * fingers.size());
    const auto n_thumb = static_cast<std::ptrdiff_t>(thumbs.size());
    (void)jobs;
#ifdef HANDOPT_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs > 0 ? jobs : omp_get_max_threads())
#endif
    for (std::ptrdiff_t t = 0; t < n_thumb; ++t) {
        const VoxelMembership cells(thumbs[t].primary_voxels());
        for (std::size_t f = 0; f < fingers.size(); ++f) {
            table.terms[static_cast<std::size_t>(t) * fingers.size() + f] = pair_terms(thumbs[t], cells, fingers[f], mode);
        }
    }
    return table;
}

NormalizationConstants compute_normalization(std::span<const MetricsRecord> relaxed_thumb,
                                             std::span<const MetricsRecord> relaxed_finger, WorkspaceNorm norm,
                                             SensitivityTerm mode, int jobs) {
    if (relaxed_thumb.empty() || relaxed_finger.empty()) {
        throw ConfigError("normalization needs non-empty relaxed design sets");
    }
    const PairTable pairs = score_pairs(relaxed_thumb, relaxed_finger, mode, jobs);
    double max_z1 = 0.0, max_z2w = 0.0, max_z2o = 0.0, max_z2 = 0.0, max_z3 = 0.0;
    for (const auto& t : pairs.terms) {
        max_z1 = std::max(max_z1, t.z1);
        max_z2w = std::max(max_z2w, t.z2w);
        max_z2o = std::max(max_z2o, t.z2o);
        max_z2 = std::max(max_z2, t.z2);
        max_z3 = std::max(max_z3, t.z3);
    }
    NormalizationConstants n;
    n.z_m = max_z1;
    n.z_w = norm == WorkspaceNorm::SumOfMaxima ? max_z2w + max_z2o : max_z2;
    n.z_s = max_z3;
    return n;
}

OptimizationResult search_optimal_pair(const PairTable& pairs, const Weights& weights,
                                       const NormalizationConstants& norms) {
    weights.validate();
    OptimizationResult res;
    res.weights = weights;
    res.candidate_pairs = pairs.terms.size();
    res.table.reserve(pairs.terms.size());

    // Thumb-major scan over lexicographically sorted designs with a strict
    // comparison keeps the smallest (thumb, finger) among exact ties.
    double best = -std::numeric_limits<double>::infinity();
    bool found = false;
    std::size_t best_t = 0, best_f = 0;
    for (std::size_t t = 0; t < pairs.thumbs.size(); ++t) {
        for (std::size_t f = 0; f < pairs.fingers.size(); ++f) {
            const EvaluationTerms& terms = pairs.at(t, f);
            ScoredPair sp{pairs.thumbs[t], pairs.fingers[f], terms, objective(terms, weights, norms), false};
            if (terms.any_zero_overlap()) {
                sp.excluded = true;
                ++res.excluded_pairs;
            } else {
                const bool better = sp.f > best ||
                                    (sp.f == best && std::tie(sp.thumb, sp.finger) <
                                                         std::tie(pairs.thumbs[best_t], pairs.fingers[best_f]));
                if (!found || better) {
                    best = sp.f;
                    best_t = t;
                    best_f = f;
                    found = true;
                }
            }
            res.table.push_back(sp);
        }
    }
    if (!found) throw NoFeasiblePairError("every thumb/finger pair has a zero overlap volume");

    res.best_thumb = pairs.thumbs[best_t];
    res.best_finger = pairs.fingers[best_f];
    res.best_terms = pairs.at(best_t, best_f);
    res.f_star = best;
    res.manipulability_contribution = weights.c1 * res.best_terms.z1 / norms.z_m;
    res.workspace_contribution = weights.c2 * res.best_terms.z2 / norms.z_w;
    res.sensitivity_contribution = -(weights.c3 * res.best_terms.z3 / norms.z_s);
    return res;
}

OptimizationResult search_optimal_pair(std::span<const MetricsRecord> thumbs, std::span<const MetricsRecord> fingers,
                                       const Weights& weights, const NormalizationConstants& norms,
                                       SensitivityTerm mode) {
    return search_optimal_pair(score_pairs(thumbs, fingers, mode), weights, norms);
}

std::vector<OptimizationResult> run_case_table(const PairTable& pairs, const std::vector<WeightCase>& cases,
                                               const NormalizationConstants& norms) {
    std::vector<OptimizationResult> out;
    out.reserve(cases.size());
    for (const auto& c : cases) out.push_back(search_optimal_pair(pairs, c.weights, norms));
    return out;
}

}  // namespace handopt
