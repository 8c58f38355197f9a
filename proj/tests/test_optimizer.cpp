#include "doctest.h"

#include "handopt/design.hpp"
#include "handopt/optimizer.hpp"

#include <set>

using namespace handopt;

namespace {

std::vector<PhalanxTriple> brute_force(int total, int min_len, bool ordered) {
    std::vector<PhalanxTriple> out;
    for (int a = 0; a <= total; ++a) {
        for (int b = 0; b <= total; ++b) {
            for (int c = 0; c <= total; ++c) {
                if (a + b + c != total || a < min_len || b < min_len || c < min_len) continue;
                if (ordered && !(a >= b && b >= c)) continue;
                out.push_back({a, b, c});
            }
        }
    }
    return out;
}

// Synthetic record whose terms are set directly. The thumb record carries one
// voxel; finger records carry `hit` copies of it for the overlap.
MetricsRecord synthetic(ChainKind kind, PhalanxTriple d, double w, double s, int cells, bool overlap = true) {
    MetricsRecord r;
    r.kind = kind;
    r.design = d;
    r.global_manipulability = w;
    r.distal_sensitivity = s;
    std::vector<VoxelIndex> v;
    for (int i = 0; i < cells; ++i) v.push_back({i, 0, 0});
    if (kind == ChainKind::Thumb) {
        r.voxels.emplace_back(0.5, v);
    } else {
        if (!overlap) {
            for (auto& c : v) c.y = 100;
        }
        for (int f = 0; f < 4; ++f) r.voxels.emplace_back(0.5, v);
    }
    r.workspace_volume = r.voxels.front().volume();
    return r;
}

}  // namespace

TEST_CASE("design enumeration counts") {
    CHECK(enumerate_feasible_designs(kThumbTotal, kMinPhalanx, true).size() == 48);
    CHECK(enumerate_feasible_designs(kFingerTotal, kMinPhalanx, true).size() == 27);
    CHECK(enumerate_feasible_designs(kThumbTotal, kMinPhalanx, false).size() == 253);
    CHECK(enumerate_feasible_designs(kFingerTotal, kMinPhalanx, false).size() == 136);
    for (int total : {kThumbTotal, kFingerTotal, 30, 29}) {
        for (bool ordered : {true, false}) {
            CHECK(enumerate_feasible_designs(total, kMinPhalanx, ordered) == brute_force(total, kMinPhalanx, ordered));
            CHECK(enumerate_by_elimination(total, kMinPhalanx, ordered) == brute_force(total, kMinPhalanx, ordered));
        }
    }
    CHECK(enumerate_feasible_designs(29, kMinPhalanx, true).empty());
}

TEST_CASE("ordered designs satisfy the constraints and sit inside the relaxed set") {
    const auto relaxed = enumerate_feasible_designs(kThumbTotal, kMinPhalanx, false);
    const std::set<PhalanxTriple> all(relaxed.begin(), relaxed.end());
    for (const auto& d : enumerate_feasible_designs(kThumbTotal, kMinPhalanx, true)) {
        CHECK(d.sum() == kThumbTotal);
        CHECK(d.ordered());
        CHECK(d.distal >= kMinPhalanx);
        CHECK(all.count(d) == 1);
    }
    CHECK(PhalanxTriple{17, 17, 17}.id() == "17-17-17");
}

TEST_CASE("aggregates") {
    CHECK(aggregate_z1(0, 0) == 0.0);
    CHECK(aggregate_z1(0.37, 0.37) == 0.37);
    CHECK(aggregate_z1(0.02, 0.04) == doctest::Approx(0.03));

    const std::array<double, 4> zeros{};
    const auto t0 = aggregate_z2(0, 0, zeros);
    CHECK(t0.z2w == 0.0);
    CHECK(t0.z2o == 0.0);
    CHECK(t0.z2 == 0.0);
    const std::array<double, 4> same{0.2, 0.2, 0.2, 0.2};
    const auto tv = aggregate_z2(0.2, 0.2, same);
    CHECK(tv.z2w == doctest::Approx(0.2));
    CHECK(tv.z2o == doctest::Approx(0.2));
    CHECK(tv.z2 == doctest::Approx(0.2));
    const std::array<double, 4> ov{0.04, 0.05, 0.05, 0.04};
    const auto t = aggregate_z2(0.36, 0.086, ov);
    CHECK(t.z2w == doctest::Approx(0.223));
    CHECK(t.z2o == doctest::Approx(0.045));
    CHECK(t.z2 == doctest::Approx(0.134));
    const std::array<double, 3> three{1, 2, 3};
    CHECK_THROWS_AS(aggregate_z2(0, 0, three), ContractError);

    CHECK(aggregate_z3(0, 0) == 0.0);
    CHECK(aggregate_z3(0.12, 0.12) == 0.12);
    CHECK(aggregate_z3(0.17, 0.15) == doctest::Approx(0.16));
    CHECK(aggregate_z3(0.17, 0.15, SensitivityTerm::Thumb) == 0.17);
    CHECK(aggregate_z3(0.17, 0.15, SensitivityTerm::Finger) == 0.15);
}

TEST_CASE("weights") {
    CHECK_NOTHROW(Weights{0.2, 0.3, 0.5}.validate());
    CHECK_THROWS_AS(Weights({0.33, 0.33, 0.33}).validate(), ConfigError);
    CHECK_THROWS_AS(Weights({1.2, -0.1, -0.1}).validate(), ConfigError);
    const Weights n = Weights::normalized(0.33, 0.33, 0.33);
    CHECK(n.c1 == doctest::Approx(1.0 / 3));
    CHECK_NOTHROW(n.validate());
    CHECK_THROWS_AS(Weights::normalized(0, 0, 0), ConfigError);
    const auto cases = default_weight_cases();
    REQUIRE(cases.size() == 7);
    CHECK(cases[1].raw_c1 == 0.8);
    for (const auto& c : cases) CHECK_NOTHROW(c.weights.validate());
}

TEST_CASE("objective") {
    EvaluationTerms t;
    t.z1 = 0.02;
    t.z2 = 0.1;
    t.z3 = 0.2;
    const NormalizationConstants n{0.02, 0.1, 0.2};
    CHECK(objective(t, {1, 0, 0}, n) == doctest::Approx(1.0));
    CHECK(objective(t, {0, 0, 1}, n) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(objective(t, {1, 0, 0}, {0, 1, 1}), ConfigError);

    // Affine in the weights: the value at any convex combination is the same
    // combination of vertex values.
    t = {0.013, 0.2, 0.03, 0.115, 0.21, {}};
    const NormalizationConstants m{0.015, 0.25, 0.28};
    const double v1 = objective(t, {1, 0, 0}, m), v2 = objective(t, {0, 1, 0}, m), v3 = objective(t, {0, 0, 1}, m);
    for (const auto& w : {Weights{0.5, 0.5, 0}, Weights{0, 0.5, 0.5}, Weights{0.2, 0.3, 0.5}, Weights{1.0 / 3, 1.0 / 3, 1.0 / 3}}) {
        CHECK(objective(t, w, m) == doctest::Approx(w.c1 * v1 + w.c2 * v2 + w.c3 * v3).epsilon(1e-14));
    }
}

TEST_CASE("pair evaluation and search") {
    const std::vector<MetricsRecord> thumbs{synthetic(ChainKind::Thumb, {19, 16, 16}, 0.010, 0.16, 4),
                                            synthetic(ChainKind::Thumb, {21, 20, 10}, 0.020, 0.10, 6)};
    const std::vector<MetricsRecord> fingers{synthetic(ChainKind::Finger, {15, 15, 15}, 0.010, 0.15, 3),
                                             synthetic(ChainKind::Finger, {25, 10, 10}, 0.030, 0.10, 5),
                                             synthetic(ChainKind::Finger, {30, 5, 10}, 0.090, 0.01, 9, false)};

    SUBCASE("terms") {
        const EvaluationTerms t = evaluate_pair(thumbs[1], fingers[1]);
        const double cell = 0.125;
        CHECK(t.z1 == doctest::Approx(0.025));
        CHECK(t.z2w == doctest::Approx(0.5 * (6 + 5) * cell));
        CHECK(t.overlaps[2] == doctest::Approx(5 * cell));
        CHECK(t.z2o == doctest::Approx(5 * cell));
        CHECK(t.z3 == doctest::Approx(0.10));
        CHECK(evaluate_pair(thumbs[0], fingers[2]).any_zero_overlap());
    }

    SUBCASE("dominant pair wins for every weight vector and excluded pairs never win") {
        const NormalizationConstants n = compute_normalization(thumbs, fingers);
        for (const auto& c : default_weight_cases()) {
            const OptimizationResult r = search_optimal_pair(thumbs, fingers, c.weights, n);
            CHECK(r.best_thumb == PhalanxTriple{21, 20, 10});
            CHECK(r.best_finger == PhalanxTriple{25, 10, 10});
            CHECK(r.candidate_pairs == 6);
            CHECK(r.excluded_pairs == 2);
            CHECK(r.table.size() == 6);
            CHECK_FALSE(r.best_terms.any_zero_overlap());
            CHECK(r.manipulability_contribution + r.workspace_contribution + r.sensitivity_contribution ==
                  doctest::Approx(r.f_star).epsilon(1e-14));
            double best = -1e300;
            for (const auto& p : r.table) {
                if (!p.excluded) best = std::max(best, p.f);
            }
            CHECK(r.f_star == best);
        }
    }

    SUBCASE("no feasible pair") {
        const std::vector<MetricsRecord> only{fingers[2]};
        const NormalizationConstants n{1, 1, 1};
        CHECK_THROWS_AS(search_optimal_pair(thumbs, only, Weights{}, n), NoFeasiblePairError);
    }

    SUBCASE("normalization maxima include excluded pairs") {
        const NormalizationConstants n = compute_normalization(thumbs, fingers);
        CHECK(n.z_m == doctest::Approx(0.5 * (0.020 + 0.090)));
        CHECK(n.z_s == doctest::Approx(0.5 * (0.16 + 0.15)));
        // z2w max uses the finger with no overlap; z2o max the best overlapping pair.
        CHECK(n.z_w == doctest::Approx(0.5 * (6 + 9) * 0.125 + 5 * 0.125));
        const NormalizationConstants alt = compute_normalization(thumbs, fingers, WorkspaceNorm::MaxOfCombined);
        CHECK(alt.z_w < n.z_w);
        CHECK_THROWS_AS(compute_normalization({}, fingers), ConfigError);
    }

    SUBCASE("single-design normalization equals the design's own terms") {
        const std::vector<MetricsRecord> t1{thumbs[0]}, f1{fingers[0]};
        const EvaluationTerms t = evaluate_pair(thumbs[0], fingers[0]);
        const NormalizationConstants n = compute_normalization(t1, f1);
        CHECK(n.z_m == t.z1);
        CHECK(n.z_w == t.z2w + t.z2o);
        CHECK(n.z_s == t.z3);
    }
}

TEST_CASE("ties go to the lexicographically smallest pair") {
    const std::vector<MetricsRecord> thumbs{synthetic(ChainKind::Thumb, {17, 17, 17}, 0.01, 0.1, 4),
                                            synthetic(ChainKind::Thumb, {19, 16, 16}, 0.01, 0.1, 4)};
    const std::vector<MetricsRecord> fingers{synthetic(ChainKind::Finger, {15, 15, 15}, 0.01, 0.1, 4),
                                             synthetic(ChainKind::Finger, {17, 14, 14}, 0.01, 0.1, 4)};
    const auto r = search_optimal_pair(thumbs, fingers, Weights{}, {1, 1, 1});
    CHECK(r.best_thumb == PhalanxTriple{17, 17, 17});
    CHECK(r.best_finger == PhalanxTriple{15, 15, 15});
    // Same answer from a reversed scan order.
    const std::vector<MetricsRecord> rt{thumbs[1], thumbs[0]}, rf{fingers[1], fingers[0]};
    const auto rr = search_optimal_pair(rt, rf, Weights{}, {1, 1, 1});
    CHECK(rr.best_thumb == r.best_thumb);
    CHECK(rr.best_finger == r.best_finger);
}

TEST_CASE("scaled weight vectors share a winner") {
    std::vector<MetricsRecord> thumbs, fingers;
    int k = 0;
    for (const auto& d : enumerate_feasible_designs(kThumbTotal, kMinPhalanx, true)) {
        thumbs.push_back(synthetic(ChainKind::Thumb, d, 0.01 + 0.001 * (k % 7), 0.1 + 0.01 * (k % 5), 3 + k % 4));
        ++k;
    }
    for (const auto& d : enumerate_feasible_designs(kFingerTotal, kMinPhalanx, true)) {
        fingers.push_back(synthetic(ChainKind::Finger, d, 0.01 + 0.002 * (k % 3), 0.1 + 0.01 * (k % 6), 2 + k % 5));
        ++k;
    }
    const NormalizationConstants n = compute_normalization(thumbs, fingers);
    const auto a = search_optimal_pair(thumbs, fingers, Weights::normalized(0.5, 0.5, 0), n);
    const auto b = search_optimal_pair(thumbs, fingers, Weights::normalized(0.25, 0.25, 0), n);
    CHECK(a.best_thumb == b.best_thumb);
    CHECK(a.best_finger == b.best_finger);
    CHECK(a.candidate_pairs == 48u * 27u);

    // Duplicate cases give identical results.
    const PairTable pairs = score_pairs(thumbs, fingers);
    const auto cases = default_weight_cases();
    const auto res = run_case_table(pairs, {cases[0], cases[0]}, n);
    CHECK(res[0].f_star == res[1].f_star);
    CHECK(res[0].best_thumb == res[1].best_thumb);
    CHECK(score_pairs(thumbs, fingers, SensitivityTerm::Mean, 1).terms.size() == pairs.terms.size());
}

TEST_CASE("raising the sensitivity weight never raises the winner's z3") {
    // A ladder of pairs trading workspace against sensitivity.
    std::vector<MetricsRecord> thumbs, fingers;
    const std::vector<PhalanxTriple> td{{17, 17, 17}, {19, 16, 16}, {21, 20, 10}, {23, 18, 10}};
    for (int i = 0; i < 4; ++i) thumbs.push_back(synthetic(ChainKind::Thumb, td[i], 0.01, 0.10 + 0.05 * i, 2 + 3 * i));
    fingers.push_back(synthetic(ChainKind::Finger, {15, 15, 15}, 0.01, 0.1, 2));
    const NormalizationConstants n = compute_normalization(thumbs, fingers);
    double prev = 1e300;
    for (double c3 = 0.0; c3 <= 1.0; c3 += 0.05) {
        const auto r = search_optimal_pair(thumbs, fingers, Weights::normalized(0.5 * (1 - c3), 0.5 * (1 - c3), c3 + 1e-12), n);
        CHECK(r.best_terms.z3 <= prev);
        prev = r.best_terms.z3;
    }
}
