// handopt: phalanx-length optimization front end.

#include "handopt/config.hpp"
#include "handopt/pipeline.hpp"
#include "handopt/reports.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cctype>
#include <iostream>
#include <random>
#include <sstream>

using namespace handopt;

namespace {

struct GlobalOptions {
    std::string config_path;
    bool coarse = false;
    int jobs = -1;
    std::string out;
    bool quiet = false;
};

RunConfig resolve_config(const GlobalOptions& g) {
    RunConfig cfg = g.config_path.empty() ? RunConfig{} : load_config(g.config_path);
    if (g.coarse) cfg.apply_coarse_preset();
    if (g.jobs >= 0) cfg.jobs = g.jobs;
    if (!g.out.empty()) cfg.output_dir = g.out;
    cfg.validate();
    return cfg;
}

RecordStore open_store(const RunConfig& cfg) {
    RecordStore store(cfg.resolved_cache_path());
    store.load();
    for (const auto& w : store.warnings()) std::cerr << "warning: " << w << '\n';
    return store;
}

RecordStore::Progress progress_printer(bool quiet) {
    if (quiet) return {};
    return [](const MetricsRecord& r, bool cached, std::size_t done, std::size_t total) {
        std::cerr << '[' << done << '/' << total << "] " << r.id() << (cached ? " cached" : " computed") << '\n';
    };
}

PhalanxTriple parse_triple(const std::string& text) {
    PhalanxTriple t;
    char d1 = 0, d2 = 0;
    std::istringstream is(text);
    if (!(is >> t.proximal >> d1 >> t.middle >> d2 >> t.distal) || d1 != '-' || d2 != '-' || !is.eof()) {
        throw ConfigError("design must look like 17-17-17, got '" + text + "'");
    }
    return t;
}

std::string file_stem(const std::string& name) {
    std::string s;
    for (char c : name) s += std::isalnum(static_cast<unsigned char>(c)) ? static_cast<char>(std::tolower(c)) : '_';
    return s;
}

int cmd_print_model(const RunConfig& cfg) {
    std::cout << format_model(cfg.model);
    return 0;
}

int cmd_resolution_study(RunConfig cfg, const std::vector<double>& resolutions, const std::vector<double>& voxels) {
    if (!resolutions.empty()) cfg.resolution_study.resolutions_deg = resolutions;
    if (!voxels.empty()) cfg.resolution_study.voxel_sizes = voxels;
    cfg.validate();
    const ResolutionStudyReport rep = run_resolution_study(cfg);
    const std::string text = format_resolution_study(rep);
    write_text(cfg.output_dir / "resolution_study.txt", text);
    write_text(cfg.output_dir / "resolution_study.json", resolution_study_json(rep, cfg).dump(2) + "\n");
    std::cout << text;
    return 0;
}

int cmd_sweep(const RunConfig& cfg, bool relaxed, bool quiet) {
    RecordStore store = open_store(cfg);
    const SweepOutcome s = run_sweep(cfg, store, relaxed, progress_printer(quiet));
    std::vector<MetricsRecord> all = s.thumbs;
    all.insert(all.end(), s.fingers.begin(), s.fingers.end());
    write_text(cfg.output_dir / "metrics.json", metrics_json(all).dump(2) + "\n");
    std::cout << "thumb designs: " << s.thumbs.size() << "\nfinger designs: " << s.fingers.size() << '\n';
    if (relaxed) {
        std::cout << "relaxed thumb designs: " << s.relaxed_thumbs.size()
                  << "\nrelaxed finger designs: " << s.relaxed_fingers.size() << '\n';
    }
    std::cout << "computed: " << s.computed << "\ncached: " << s.cached << "\ncache: " << cfg.resolved_cache_path().string()
              << '\n';
    return 0;
}

int cmd_optimize(const RunConfig& cfg, const std::vector<double>& raw, bool quiet) {
    if (raw.size() != 3) throw ConfigError("--weights needs three values c1,c2,c3");
    const Weights w = Weights::normalized(raw[0], raw[1], raw[2]);
    RecordStore store = open_store(cfg);
    const OptimizeOutcome out = run_optimize(cfg, store, w, progress_printer(quiet));
    const MetricsRecord& thumb = out.records.thumbs[out.thumb];
    const MetricsRecord& finger = out.records.fingers[out.finger];
    write_text(cfg.output_dir / "pairs.csv", pairs_csv(out.result));
    write_text(cfg.output_dir / "optimize.json", optimize_report_json(out, cfg).dump(2) + "\n");
    write_text(cfg.output_dir / "thumb_points.xyz", point_cloud(thumb.primary_voxels()));
    write_text(cfg.output_dir / "index_points.xyz", point_cloud(finger.primary_voxels()));
    write_text(cfg.output_dir / "overlap_points.xyz",
               point_cloud(overlap_volume(thumb.primary_voxels(), finger.primary_voxels()).cells));
    const auto& r = out.result;
    std::cout << "weights: " << fixed6(w.c1) << ' ' << fixed6(w.c2) << ' ' << fixed6(w.c3) << '\n'
              << "best thumb: " << r.best_thumb.id() << "\nbest finger: " << r.best_finger.id()
              << "\nf*: " << fixed6(r.f_star) << " = " << fixed6(r.manipulability_contribution) << " + "
              << fixed6(r.workspace_contribution) << " + (" << fixed6(r.sensitivity_contribution) << ")\n"
              << "excluded pairs: " << r.excluded_pairs << '/' << r.candidate_pairs << '\n';
    return 0;
}

int cmd_cases(const RunConfig& cfg, bool quiet) {
    RecordStore store = open_store(cfg);
    const CaseStudy study = run_case_study(cfg, store, progress_printer(quiet));
    const std::string text = format_case_study(study);
    write_text(cfg.output_dir / "cases.json", case_report_json(study, cfg).dump(2) + "\n");
    write_text(cfg.output_dir / "cases.txt", text);
    for (const auto& c : study.cases) {
        write_text(cfg.output_dir / "cases" / (file_stem(c.weight_case.name) + "_pairs.csv"), pairs_csv(c.result));
    }
    std::cout << text;
    return 0;
}

int cmd_export_workspace(const RunConfig& cfg, const std::string& chain_name, const std::string& design_text, bool quiet) {
    const PhalanxTriple design = parse_triple(design_text);
    const bool thumb = chain_name == "thumb";
    std::size_t finger_slot = 0;
    if (!thumb) {
        bool found = false;
        for (Finger f : kAllFingers) {
            if (chain_name == finger_name(f)) {
                finger_slot = static_cast<std::size_t>(f);
                found = true;
            }
        }
        if (!found) throw ConfigError("--chain must be thumb, index, middle, ring or little");
    }
    RecordStore store = open_store(cfg);
    const auto records = store.ensure(cfg.model, thumb ? ChainKind::Thumb : ChainKind::Finger, {design},
                                      effective_settings(cfg), progress_printer(quiet));
    const MetricsRecord& r = records.front();
    const VoxelSet& set = r.voxels[thumb ? 0 : finger_slot];
    const std::string stem = "workspace_" + chain_name + "_" + design.id();
    write_text(cfg.output_dir / (stem + ".csv"), voxel_csv(set));
    write_text(cfg.output_dir / (stem + ".xyz"), point_cloud(set));
    write_text(cfg.output_dir / (stem + "_metrics.json"), metrics_json(records).dump(2) + "\n");
    std::cout << r.id() << ' ' << chain_name << ": " << set.size() << " voxels, volume " << fixed6(set.volume()) << '\n';
    return 0;
}

int cmd_verify_cache(const RunConfig& cfg, double fraction, unsigned seed) {
    if (!(fraction > 0.0) || fraction > 1.0) throw ConfigError("--fraction must lie in (0, 1]");
    RecordStore store = open_store(cfg);
    const EvaluationSettings settings = effective_settings(cfg);

    // Only records produced under the current config can be recomputed.
    std::vector<const MetricsRecord*> eligible;
    for (const auto& [key, rec] : store.records()) {
        if (record_key(cfg.model, rec.kind, rec.design, settings) == key) eligible.push_back(&rec);
    }
    if (eligible.empty()) {
        std::cout << "no cached records for this configuration\n";
        return 0;
    }
    std::mt19937 rng(seed);
    std::shuffle(eligible.begin(), eligible.end(), rng);
    const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(fraction * eligible.size())));
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const MetricsRecord& cached = *eligible[i];
        const MetricsRecord fresh = compute_record(cfg.model, cached.kind, cached.design, settings);
        const bool same = fresh == cached;
        if (!same) ++mismatches;
        std::cout << cached.id() << ": " << (same ? "identical" : "MISMATCH") << '\n';
    }
    std::cout << "checked " << n << " of " << eligible.size() << " records, " << mismatches << " mismatches\n";
    return mismatches == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Phalanx-length optimization for a five-finger robotic hand"};
    app.require_subcommand(1);
    GlobalOptions g;
    app.add_option("--config", g.config_path, "JSON config file; missing fields take defaults");
    app.add_flag("--coarse", g.coarse, "Fast preset: thumb 15 deg, finger 9 deg, voxel 0.05");
    app.add_option("--jobs", g.jobs, "Worker threads (0 = OpenMP default)")->check(CLI::NonNegativeNumber);
    app.add_option("--out", g.out, "Output directory");
    app.add_flag("--quiet", g.quiet, "No per-design progress on stderr");

    auto* print = app.add_subcommand("print-model", "Dump DH tables, ranges, geometry and base poses");

    std::vector<double> resolutions, voxels;
    auto* study = app.add_subcommand("resolution-study", "Workspace volume vs voxel size and joint resolution");
    study->add_option("--resolutions", resolutions, "Joint resolutions in degrees, coarse to fine")->delimiter(',');
    study->add_option("--voxel-sizes", voxels, "Voxel edge lengths")->delimiter(',');

    bool relaxed = false;
    auto* sweep = app.add_subcommand("sweep", "Compute or load a metrics record for every feasible design");
    sweep->add_flag("--relaxed", relaxed, "Also cover the relaxed (unordered) design sets");

    std::vector<double> weights{1.0, 1.0, 1.0};
    auto* optimize = app.add_subcommand("optimize", "Best thumb/finger pair for one weight vector");
    optimize->add_option("--weights", weights, "c1,c2,c3 (renormalized to sum 1)")->delimiter(',')->expected(3);

    auto* cases = app.add_subcommand("cases", "Run every configured weight case and group the winners");

    std::string chain = "thumb", design = "17-17-17";
    auto* exportw = app.add_subcommand("export-workspace", "Write one design's voxel set as CSV and point cloud");
    exportw->add_option("--chain", chain, "thumb, index, middle, ring or little");
    exportw->add_option("--design", design, "Phalanx triple in hundredths, e.g. 17-17-17");

    double fraction = 0.1;
    unsigned seed = 1;
    auto* verify = app.add_subcommand("verify-cache", "Recompute a random sample of cached records and compare");
    verify->add_option("--fraction", fraction, "Share of eligible records to recompute");
    verify->add_option("--seed", seed, "Sampling seed");

    for (auto* sub : {print, study, sweep, optimize, cases, exportw, verify}) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        const RunConfig cfg = resolve_config(g);
        if (*print) return cmd_print_model(cfg);
        if (*study) return cmd_resolution_study(cfg, resolutions, voxels);
        if (*sweep) return cmd_sweep(cfg, relaxed, g.quiet);
        if (*optimize) return cmd_optimize(cfg, weights, g.quiet);
        if (*cases) return cmd_cases(cfg, g.quiet);
        if (*exportw) return cmd_export_workspace(cfg, chain, design, g.quiet);
        if (*verify) return cmd_verify_cache(cfg, fraction, seed);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
