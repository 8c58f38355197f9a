#include "doctest.h"

#include "handopt/records.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace handopt;

namespace {

EvaluationSettings quick_settings() {
    EvaluationSettings s;
    s.thumb_step_deg = 30;
    s.finger_step_deg = 30;
    s.voxel_delta = 0.05;
    return s;
}

std::filesystem::path temp_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("handopt_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

std::vector<std::string> read_lines(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

}  // namespace

TEST_CASE("content hash") {
    CHECK(content_hash("") == "cbf29ce484222325");
    CHECK(content_hash("a") == "af63dc4c8601ec8c");
    CHECK(content_hash("abc") != content_hash("acb"));
}

TEST_CASE("record keys track everything that changes a record") {
    const HandModel m = HandModel::defaults();
    const EvaluationSettings s = quick_settings();
    const std::string k = record_key(m, ChainKind::Thumb, {17, 17, 17}, s);
    CHECK(k.size() == 16);
    CHECK(k == record_key(m, ChainKind::Thumb, {17, 17, 17}, s));
    CHECK(k != record_key(m, ChainKind::Thumb, {19, 16, 16}, s));
    CHECK(k != record_key(m, ChainKind::Finger, {17, 17, 17}, s));

    EvaluationSettings other = s;
    other.jobs = 7;
    CHECK(k == record_key(m, ChainKind::Thumb, {17, 17, 17}, other));
    other.voxel_delta = 0.025;
    CHECK(k != record_key(m, ChainKind::Thumb, {17, 17, 17}, other));
    other = s;
    other.thumb_step_deg = 15;
    CHECK(k != record_key(m, ChainKind::Thumb, {17, 17, 17}, other));
    other = s;
    other.finger_step_deg = 15;  // irrelevant to the thumb
    CHECK(k == record_key(m, ChainKind::Thumb, {17, 17, 17}, other));

    HandModel moved = m;
    moved.thumb_base.translation.x() = 0.01;
    CHECK(k != record_key(moved, ChainKind::Thumb, {17, 17, 17}, s));
    HandModel ranges = m;
    ranges.finger.ranges[1].min_deg = -80;
    CHECK(record_key(m, ChainKind::Finger, {15, 15, 15}, s) != record_key(ranges, ChainKind::Finger, {15, 15, 15}, s));
}

TEST_CASE("compute_record contents") {
    const HandModel m = HandModel::defaults();
    const MetricsRecord t = compute_record(m, ChainKind::Thumb, {21, 20, 10}, quick_settings());
    CHECK(t.id() == "thumb:21-20-10");
    CHECK(t.voxels.size() == 1);
    CHECK(t.workspace_volume == t.voxels[0].volume());
    CHECK(t.distal_sensitivity == doctest::Approx(0.10).epsilon(1e-12));
    CHECK(t.global_manipulability > 0.0);

    const MetricsRecord f = compute_record(m, ChainKind::Finger, {20, 15, 10}, quick_settings());
    CHECK(f.voxels.size() == 4);
    CHECK(f.workspace_volume == f.voxels[0].volume());
    CHECK(f.distal_sensitivity == doctest::Approx(0.10).epsilon(1e-12));
    // Distinct lateral offsets give distinct sets.
    CHECK(f.voxels[0] != f.voxels[3]);
}

TEST_CASE("record JSON round trip") {
    const MetricsRecord r = compute_record(HandModel::defaults(), ChainKind::Finger, {15, 15, 15}, quick_settings());
    const MetricsRecord back = record_from_json(nlohmann::json::parse(to_json(r).dump()));
    CHECK(back == r);

    auto j = to_json(r);
    j["workspace_volume"] = 1.0;
    CHECK_THROWS_AS(record_from_json(j), ConfigError);
    j = to_json(r);
    j["kind"] = "toe";
    CHECK_THROWS_AS(record_from_json(j), ConfigError);
    j = to_json(r);
    j["voxels"].erase(0);
    CHECK_THROWS_AS(record_from_json(j), ConfigError);
}

TEST_CASE("record store caching") {
    const auto dir = temp_dir("store");
    const auto cache = dir / "records.jsonl";
    const HandModel m = HandModel::defaults();
    const EvaluationSettings s = quick_settings();
    const std::vector<PhalanxTriple> designs{{17, 17, 17}, {19, 16, 16}, {21, 20, 10}};

    std::vector<MetricsRecord> first;
    {
        RecordStore store(cache);
        CHECK(store.load() == 0);
        std::size_t calls = 0;
        first = store.ensure(m, ChainKind::Thumb, designs, s, [&](const MetricsRecord&, bool cached, std::size_t done, std::size_t total) {
            CHECK_FALSE(cached);
            CHECK(total == 3);
            CHECK(done == ++calls);
        });
        CHECK(store.computed_count() == 3);
        CHECK(read_lines(cache).size() == 3);
    }
    SUBCASE("second run is cache only and bit-identical") {
        RecordStore store(cache);
        CHECK(store.load() == 3);
        const auto again = store.ensure(m, ChainKind::Thumb, designs, s);
        CHECK(store.computed_count() == 0);
        CHECK(store.cached_count() == 3);
        CHECK(again == first);
        CHECK(again[1] == compute_record(m, ChainKind::Thumb, designs[1], s));
    }
    SUBCASE("corrupt line is recomputed, others reused") {
        auto lines = read_lines(cache);
        lines[1] = lines[1].substr(0, lines[1].size() / 2);
        {
            std::ofstream out(cache, std::ios::trunc);
            for (const auto& l : lines) out << l << '\n';
        }
        RecordStore store(cache);
        CHECK(store.load() == 2);
        REQUIRE(store.warnings().size() == 1);
        CHECK(store.warnings()[0].find(":2:") != std::string::npos);
        const auto again = store.ensure(m, ChainKind::Thumb, designs, s);
        CHECK(store.computed_count() == 1);
        CHECK(store.cached_count() == 2);
        CHECK(again == first);
    }
    SUBCASE("unwritable cache path is fatal") {
        const auto blocker = dir / "file";
        std::ofstream(blocker) << "x";
        RecordStore store(blocker / "records.jsonl");
        CHECK_THROWS_AS(store.ensure(m, ChainKind::Thumb, {designs[0]}, s), ConfigError);
    }
    SUBCASE("in-memory store") {
        RecordStore store;
        CHECK(store.load() == 0);
        store.ensure(m, ChainKind::Thumb, {designs[0]}, s);
        store.ensure(m, ChainKind::Thumb, {designs[0]}, s);
        CHECK(store.computed_count() == 1);
        CHECK(store.cached_count() == 1);
    }
}
