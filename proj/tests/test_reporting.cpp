#include "doctest.h"

#include "handopt/config.hpp"
#include "handopt/pipeline.hpp"
#include "handopt/reports.hpp"

#include <filesystem>
#include <fstream>

using namespace handopt;
using nlohmann::json;

TEST_CASE("fixed-point formatting") {
    CHECK(fixed6(0.35825) == "0.358250");
    CHECK(fixed6(-1e-9) == "0.000000");
    CHECK(fixed6(-0.0) == "0.000000");
    CHECK(fixed6(-2.5) == "-2.500000");
    CHECK(round6(0.1234567) == 0.123457);
}

TEST_CASE("empty config takes defaults") {
    const RunConfig c = config_from_json(json::object());
    CHECK(c.evaluation.voxel_delta == 0.05);
    CHECK(c.evaluation.thumb_step_deg == 5.0);
    CHECK(c.evaluation.finger_step_deg == 3.0);
    CHECK(c.cases.size() == 7);
    CHECK(c.workspace_norm == WorkspaceNorm::SumOfMaxima);
    CHECK(c.sensitivity_term == SensitivityTerm::Mean);
    CHECK(c.resolved_cache_path() == std::filesystem::path("handopt-out") / "records.jsonl");
    CHECK(c.model.finger_bases[3].translation.y() == doctest::Approx(-0.36));
}

TEST_CASE("config overrides") {
    const json j = json::parse(R"({
        "voxel_size": 0.025, "thumb_resolution_deg": 10, "finger_resolution_deg": 6,
        "normalization": "max_of_combined", "sensitivity_term": "finger",
        "sensitivity_fixed_posture_deg": {"finger": [10, 0, 0, 0]},
        "weight_cases": [{"name": "equal", "c": [1, 1, 1]}, {"c": [0.5, 0.5, 0]}],
        "output_dir": "somewhere", "cache_path": "cache.jsonl", "jobs": 2,
        "resolution_study": {"resolutions_deg": [10, 5], "finger": "ring"},
        "model": {
            "finger": {"ranges_deg": [[-30, 30], [-90, 0], [-90, 0], [-90, 0]]},
            "finger_bases": {"index": {"translation": [0.01, 0.2, 0.4]}}
        }
    })");
    const RunConfig c = config_from_json(j);
    CHECK(c.evaluation.voxel_delta == 0.025);
    CHECK(c.evaluation.thumb_step_deg == 10);
    CHECK(c.workspace_norm == WorkspaceNorm::MaxOfCombined);
    CHECK(c.sensitivity_term == SensitivityTerm::Finger);
    CHECK(c.evaluation.finger_fixed == std::vector<double>{10, 0, 0, 0});
    REQUIRE(c.cases.size() == 2);
    CHECK(c.cases[0].name == "equal");
    CHECK(c.cases[1].name == "Case 2");
    CHECK(c.cases[0].weights.c2 == doctest::Approx(1.0 / 3));
    CHECK(c.resolved_cache_path() == "cache.jsonl");
    CHECK(c.jobs == 2);
    CHECK(c.resolution_study.finger == Finger::Ring);
    CHECK(c.model.finger.ranges[1].max_deg == 0);
    CHECK(c.model.finger_bases[0].translation == Vec3(0.01, 0.2, 0.4));
    CHECK(c.model.finger_bases[1].translation.z() == doctest::Approx(0.37));

    // The echo parses back to the same effective config.
    const RunConfig again = config_from_json(config_to_json(c));
    CHECK(config_to_json(again) == config_to_json(c));
    CHECK_FALSE(config_to_json(c).contains("jobs"));
    CHECK_FALSE(config_to_json(c).contains("output_dir"));
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(config_from_json(json{{"voxel_size", 0}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(json{{"thumb_resolution_deg", -5}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(json{{"voxelsize", 0.05}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(json{{"normalization", "max"}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"weight_cases": [{"c": [1, 2]}]})")), ConfigError);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"weight_cases": [{"c": [0, 0, 0]}]})")), ConfigError);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"voxel_size": "big"})")), ConfigError);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"model": {"thumb_base": {"rotation": [[2,0,0],[0,1,0],[0,0,1]]}}})")),
                    ConfigError);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"model": {"finger": {"ranges_deg": [[0, 1]]}}})")), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/handopt.json"), ConfigError);

    RunConfig c;
    c.cases[0].weights = {0.5, 0.5, 0.5};
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("coarse preset") {
    RunConfig c = config_from_json(json{{"coarse", true}});
    CHECK(c.evaluation.thumb_step_deg == 15);
    CHECK(c.evaluation.finger_step_deg == 9);
    CHECK(c.evaluation.voxel_delta == 0.05);
}

TEST_CASE("model dump") {
    const std::string text = format_model(HandModel::defaults());
    CHECK(text.find("  3 | 90.000000 | a2' (design) | 0.000000 | theta3'") != std::string::npos);
    CHECK(text.find("theta2 in [-30.000000, 30.000000] deg") != std::string::npos);
    CHECK(text.find("theta1' in [-30.000000, 90.000000] deg") != std::string::npos);
    CHECK(text.find("  1 | 90.000000 | 0.000000 | 0.000000 | 90.000000 deg (fixed)") != std::string::npos);
    CHECK(text.find("a1 = 0.180000") != std::string::npos);

    const RunConfig c = config_from_json(json::parse(R"({"model": {"thumb_base": {"translation": [0.05, -0.1, 0.0]}}})"));
    CHECK(format_model(c.model).find("thumb: translation (0.050000, -0.100000, 0.000000)") != std::string::npos);
}

TEST_CASE("case grouping") {
    auto outcome = [](const std::string& name, PhalanxTriple t, PhalanxTriple f) {
        CaseOutcome c;
        c.weight_case.name = name;
        c.result.best_thumb = t;
        c.result.best_finger = f;
        return c;
    };
    std::vector<CaseOutcome> cases{outcome("1", {17, 17, 17}, {15, 15, 15}), outcome("2", {19, 16, 16}, {15, 15, 15}),
                                   outcome("3", {17, 17, 17}, {15, 15, 15}), outcome("4", {19, 16, 16}, {20, 15, 10})};
    const auto groups = group_cases(cases);
    REQUIRE(groups.size() == 3);
    CHECK(groups[0].label == "A");
    CHECK(groups[0].cases == std::vector<std::string>{"1", "3"});
    CHECK(groups[2].label == "C");
    CHECK(cases[3].group == "C");

    std::vector<CaseOutcome> single{outcome("only", {17, 17, 17}, {15, 15, 15})};
    CHECK(group_cases(single).size() == 1);

    CHECK(percent_change(2.0, 2.5) == doctest::Approx(25.0));
    CHECK(percent_change(0.0, 1.0) == 0.0);
}

TEST_CASE("voxel exports") {
    const VoxelSet s(0.05, {{0, 0, 0}, {-1, 2, 3}});
    CHECK(voxel_csv(s) == "vx,vy,vz\n-1,2,3\n0,0,0\n");
    CHECK(point_cloud(s) == "-0.025000 0.125000 0.175000\n0.025000 0.025000 0.025000\n");
}

TEST_CASE("pairs CSV layout") {
    OptimizationResult r;
    ScoredPair p;
    p.thumb = {17, 17, 17};
    p.finger = {15, 15, 15};
    p.terms.z1 = 0.0125;
    p.f = -0.5;
    p.excluded = true;
    r.table.push_back(p);
    CHECK(pairs_csv(r) ==
          "thumb,finger,z1,z2w,z2o,z2,z3,f,excluded\n"
          "17-17-17,15-15-15,0.012500,0.000000,0.000000,0.000000,0.000000,-0.500000,1\n");
}

TEST_CASE("resolution study on a small grid") {
    RunConfig c;
    c.resolution_study.resolutions_deg = {30, 15};
    c.resolution_study.voxel_sizes = {0.05};
    c.resolution_study.convergence_threshold = 1e9;
    const ResolutionStudyReport rep = run_resolution_study(c);
    REQUIRE(rep.entries.size() == 4);
    const ResolutionEntry* coarse = rep.find(ChainKind::Thumb, 0.05, 30);
    const ResolutionEntry* fine = rep.find(ChainKind::Thumb, 0.05, 15);
    REQUIRE(coarse);
    REQUIRE(fine);
    CHECK_FALSE(coarse->relative_change.has_value());
    CHECK(*fine->relative_change == doctest::Approx(std::abs(fine->volume - coarse->volume) / coarse->volume));
    CHECK(fine->converged);
    const std::string text = format_resolution_study(rep);
    CHECK(text.find("Thumb 30.000000 deg") != std::string::npos);
    CHECK(text.find("thumb Delta=0.050000: converged at 15.000000 deg") != std::string::npos);
}

TEST_CASE("case study on the coarse preset") {
    RunConfig c;
    c.apply_coarse_preset();
    RecordStore store;
    const CaseStudy study = run_case_study(c, store);
    CHECK(study.records.thumbs.size() == 48);
    CHECK(study.records.fingers.size() == 27);
    CHECK(study.records.relaxed_thumbs.size() == 253);
    CHECK(study.records.relaxed_fingers.size() == 136);
    CHECK(study.norms.z_s == doctest::Approx(0.28).epsilon(1e-12));
    REQUIRE(study.cases.size() == 7);
    for (const auto& cs : study.cases) {
        CHECK(cs.result.candidate_pairs == 1296);
        CHECK_FALSE(cs.result.best_terms.any_zero_overlap());
    }
    CHECK(study.cases[0].deltas.thumb_volume == 0.0);
    CHECK(study.groups.size() <= 7);

    // Same report from a second identical run.
    RecordStore again;
    const CaseStudy second = run_case_study(c, again);
    CHECK(case_report_json(second, c).dump() == case_report_json(study, c).dump());

    // The winner maximizes f over the non-excluded pairs.
    const auto& w2 = study.cases[1].result;
    for (const auto& p : w2.table) {
        if (!p.excluded) CHECK(p.f <= w2.f_star);
    }

    // Proportional weight vectors pick the same pair.
    const OptimizeOutcome a = run_optimize(c, store, Weights::normalized(0.5, 0.5, 0));
    const OptimizeOutcome b = run_optimize(c, store, Weights::normalized(0.25, 0.25, 0));
    CHECK(a.result.best_thumb == b.result.best_thumb);
    CHECK(a.result.best_finger == b.result.best_finger);
    CHECK(a.records.computed == 0);
}
