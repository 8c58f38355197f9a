#pragma once

#include "handopt/design.hpp"
#include "handopt/records.hpp"

#include <array>
#include <span>
#include <string>
#include <vector>

namespace handopt {

/// Weighting coefficients on the probability simplex.
struct Weights {
    double c1 = 1.0 / 3.0;
    double c2 = 1.0 / 3.0;
    double c3 = 1.0 / 3.0;

    /// Each in [0, 1] and c1 + c2 + c3 = 1 within 1e-9; throws ConfigError.
    void validate() const;
    /// Divides by the sum so that e.g. (0.33, 0.33, 0.33) becomes (1/3, 1/3, 1/3).
    static Weights normalized(double c1, double c2, double c3);
};

struct WeightCase {
    std::string name;
    double raw_c1 = 0, raw_c2 = 0, raw_c3 = 0;  // as given
    Weights weights;                             // normalized
};

/// The seven weighting cases of the case study.
std::vector<WeightCase> default_weight_cases();

enum class WorkspaceNorm {
    SumOfMaxima,    // z_w = max z2w + max z2o
    MaxOfCombined,  // z_w = max z2
};

enum class SensitivityTerm { Mean, Thumb, Finger };

struct NormalizationConstants {
    double z_m = 0.0;
    double z_w = 0.0;
    double z_s = 0.0;
};

struct EvaluationTerms {
    double z1 = 0.0;
    double z2w = 0.0;
    double z2o = 0.0;
    double z2 = 0.0;
    double z3 = 0.0;
    std::array<double, 4> overlaps{};  // index, middle, ring, little

    bool any_zero_overlap() const;
};

/// 0.5 * thumb + 0.5 * index.
double aggregate_z1(double w_thumb, double w_index);
/// Fills z2w, z2o and z2; `overlaps` must hold exactly four volumes.
EvaluationTerms aggregate_z2(double v_thumb, double v_index, std::span<const double> overlaps);
double aggregate_z3(double s_thumb, double s_index, SensitivityTerm mode = SensitivityTerm::Mean);

/// All terms for one thumb/finger record pair.
EvaluationTerms evaluate_pair(const MetricsRecord& thumb, const MetricsRecord& finger,
                              SensitivityTerm mode = SensitivityTerm::Mean);

/// c1 z1 / z_m + c2 z2 / z_w - c3 z3 / z_s. ConfigError for non-positive norms.
double objective(const EvaluationTerms& terms, const Weights& weights, const NormalizationConstants& norms);

/// Per-term maxima over all relaxed thumb x relaxed finger pairs (zero-overlap
/// pairs included). ConfigError when either set is empty.
NormalizationConstants compute_normalization(std::span<const MetricsRecord> relaxed_thumb,
                                             std::span<const MetricsRecord> relaxed_finger,
                                             WorkspaceNorm norm = WorkspaceNorm::SumOfMaxima,
                                             SensitivityTerm mode = SensitivityTerm::Mean, int jobs = 0);

/// Terms for every thumb x finger pair, thumb-major in record order. Computed
/// once and shared by all weight cases.
struct PairTable {
    std::vector<PhalanxTriple> thumbs;
    std::vector<PhalanxTriple> fingers;
    std::vector<EvaluationTerms> terms;  // thumbs.size() * fingers.size()

    const EvaluationTerms& at(std::size_t t, std::size_t f) const { return terms[t * fingers.size() + f]; }
};

PairTable score_pairs(std::span<const MetricsRecord> thumbs, std::span<const MetricsRecord> fingers,
                      SensitivityTerm mode = SensitivityTerm::Mean, int jobs = 0);

struct ScoredPair {
    PhalanxTriple thumb;
    PhalanxTriple finger;
    EvaluationTerms terms;
    double f = 0.0;
    bool excluded = false;
};

struct OptimizationResult {
    Weights weights;
    PhalanxTriple best_thumb;
    PhalanxTriple best_finger;
    double f_star = 0.0;
    EvaluationTerms best_terms;
    // c1 z1 / z_m, c2 z2 / z_w and -c3 z3 / z_s; they sum to f_star.
    double manipulability_contribution = 0.0;
    double workspace_contribution = 0.0;
    double sensitivity_contribution = 0.0;
    std::size_t candidate_pairs = 0;
    std::size_t excluded_pairs = 0;
    std::vector<ScoredPair> table;
};

class NoFeasiblePairError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Best non-excluded pair; ties go to the lexicographically smallest thumb,
/// then finger. NoFeasiblePairError when every pair has a zero overlap.
OptimizationResult search_optimal_pair(const PairTable& pairs, const Weights& weights,
                                       const NormalizationConstants& norms);
OptimizationResult search_optimal_pair(std::span<const MetricsRecord> thumbs, std::span<const MetricsRecord> fingers,
                                       const Weights& weights, const NormalizationConstants& norms,
                                       SensitivityTerm mode = SensitivityTerm::Mean);

std::vector<OptimizationResult> run_case_table(const PairTable& pairs, const std::vector<WeightCase>& cases,
                                               const NormalizationConstants& norms);

}  // namespace handopt
