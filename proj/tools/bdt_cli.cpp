#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bdt/abis.hpp"
#include "bdt/features.hpp"
#include "bdt/io.hpp"
#include "bdt/simulate.hpp"
#include "bdt/strategy.hpp"
#include "bdt/svg_plots.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitVision = 3;
constexpr int kExitSpecMismatch = 4;

struct CliOptions {
    std::string config_path;
    bdt::PipelineConfig config;
    std::vector<std::string> overrides; // key=value pairs

    void finalize() {
        if (!config_path.empty()) config = bdt::read_config(config_path);
        for (const std::string& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw bdt::ParseError("expected key=value override: " + kv);
            bdt::apply_config_line(config, kv.substr(0, eq), kv.substr(eq + 1));
        }
    }
};

void add_config_flags(CLI::App* cmd, CliOptions& opts) {
    cmd->add_option("--config", opts.config_path, "key=value config file");
    cmd->add_option("--set", opts.overrides, "config override, e.g. --set abis.method=kmeans");
}

std::map<std::string, std::string> settings_echo(const bdt::PipelineConfig& c) {
    std::map<std::string, std::string> echo;
    echo["abis.method"] = c.method;
    echo["abis.threshold"] = std::to_string(c.threshold);
    if (c.method == "kmeans") echo["abis.kmeans_k"] = std::to_string(c.kmeans_k);
    if (c.method == "knn") {
        echo["abis.knn_k"] = std::to_string(c.knn_k);
        echo["abis.knn_bins"] = std::to_string(c.knn_bins);
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", c.iob_threshold);
    echo["iob.threshold"] = buf;
    echo["smoothing"] = c.smoothing ? "on" : "off";
    return echo;
}

int cmd_simulate(const std::string& script_path, const std::string& out_dir, bool rle) {
    const bdt::TrialScript script = bdt::read_script(script_path);
    const bdt::RenderedTrial trial = bdt::render_trial(script);
    fs::create_directories(out_dir);
    for (std::size_t i = 0; i < trial.frames.size(); ++i)
        bdt::save_ppm(trial.frames[i], fs::path(out_dir) / bdt::frame_filename(static_cast<int>(i)));
    bdt::write_truth(trial.truth, fs::path(out_dir) / "truth.json", rle);
    bdt::write_hand_boxes(trial.truth.hand_boxes, fs::path(out_dir) / "hands.jsonl");
    std::cout << "wrote " << trial.frames.size() << " frames to " << out_dir << "\n";
    return kExitOk;
}

std::vector<std::pair<int, fs::path>> list_frames(const std::string& frames_dir) {
    std::vector<std::pair<int, fs::path>> frames;
    for (const auto& entry : fs::directory_iterator(frames_dir)) {
        const std::string name = entry.path().filename().string();
        int index = 0;
        if (std::sscanf(name.c_str(), "frame_%d.ppm", &index) == 1)
            frames.emplace_back(index, entry.path());
    }
    std::sort(frames.begin(), frames.end());
    return frames;
}

int cmd_detect(const std::string& frames_dir, const std::string& hands_path,
               CliOptions& opts, const std::string& out_path, int grid_n, bool rle) {
    opts.finalize();
    const bdt::PipelineConfig& config = opts.config;
    const auto frames = list_frames(frames_dir);
    if (frames.empty()) throw bdt::ParseError("no frame_*.ppm files in " + frames_dir);

    const bdt::RawImage first = bdt::load_ppm(frames.front().second);
    const bdt::ConstructionArea area = bdt::locate_construction_area(first, config.abis);
    bdt::GridSpec spec;
    spec.n = grid_n;
    spec.image_width = first.width;
    spec.image_height = first.height;

    const bdt::ColorMethod method = config.color_method();
    bdt::Timeline timeline;
    timeline.spec = spec;
    for (const auto& [index, path] : frames) {
        bdt::GridState state = bdt::detect_frame(bdt::load_ppm(path), area, spec, method);
        state.frame_index = index;
        timeline.states.push_back(std::move(state));
    }

    if (!hands_path.empty()) {
        const auto hands = bdt::read_hand_boxes(hands_path, spec.image_width, spec.image_height);
        timeline = bdt::filter_occlusions(timeline, hands, area.grid_box, config.iob_threshold);
    }
    if (config.smoothing) timeline = bdt::smooth(timeline);

    bdt::write_timeline(timeline, out_path, settings_echo(config), rle);
    std::cout << "wrote timeline with " << timeline.states.size() << " frames to " << out_path
              << "\n";
    return kExitOk;
}

int cmd_analyze(const std::string& timeline_path, CliOptions& opts, const std::string& out_dir) {
    opts.finalize();
    const bdt::PipelineConfig& config = opts.config;
    const bdt::Timeline timeline = bdt::read_timeline(timeline_path);
    fs::create_directories(out_dir);

    const bdt::PlacementSequence seq = bdt::derive_sequence(timeline);
    {
        json j;
        j["n"] = seq.spec.n;
        json ranks = json::array();
        for (const auto& r : seq.ranks) {
            if (r) ranks.push_back(*r);
            else ranks.push_back(nullptr);
        }
        j["ranks"] = ranks;
        std::ofstream out(fs::path(out_dir) / "sequence.json");
        out << j.dump(2) << "\n";
    }

    const bdt::FeatureReport features =
        bdt::extract_features(timeline, config.swap_window_frames);
    {
        std::ofstream out(fs::path(out_dir) / "feature_report.txt");
        out << bdt::format_feature_report(features, timeline.spec);
    }

    if (!seq.complete()) {
        std::ofstream out(fs::path(out_dir) / "strategy_report.txt");
        out << "status=skipped: incomplete\n";
        std::cout << "strategy classification skipped: incomplete trial\n";
        return kExitOk;
    }

    std::vector<bdt::SampleSet> sets;
    for (bdt::StrategyKind kind : bdt::kAllStrategies) {
        try {
            sets.push_back(bdt::generate_sample_set(kind, timeline.spec));
        } catch (const bdt::UnsupportedSpec&) {
            // e.g. sub-section on odd grids; the kind just doesn't compete
        }
    }
    bdt::StrategyReport report;
    try {
        report = bdt::classify(seq, sets, config.measure_enum());
    } catch (const bdt::AllTied&) {
        std::ofstream out(fs::path(out_dir) / "strategy_report.txt");
        out << "status=skipped: degenerate sequence (all ranks tied)\n";
        std::cout << "strategy classification skipped: all ranks tied\n";
        return kExitOk;
    }
    {
        std::ofstream out(fs::path(out_dir) / "strategy_report.txt");
        out << bdt::format_strategy_report(report);
    }
    {
        const std::vector<bdt::BlockFace>& design = timeline.states.back().faces;
        std::ofstream out(fs::path(out_dir) / "heatmap.svg");
        out << bdt::sequence_heatmap(seq, design).markup;
    }
    {
        std::ofstream out(fs::path(out_dir) / "strategy_bars.svg");
        out << bdt::strategy_bars(report).markup;
    }
    std::cout << "best strategy: " << bdt::to_string(report.best_kind)
              << (report.tie_flag ? " (tie)" : "") << "\n";
    return kExitOk;
}

int cmd_evaluate(const std::string& detected_path, const std::string& truth_path) {
    const bdt::Timeline detected = bdt::read_timeline(detected_path);
    // The truth argument accepts either a bare timeline file or a simulator
    // truth.json wrapper.
    bdt::Timeline truth;
    {
        std::ifstream probe(truth_path);
        if (!probe) throw bdt::ParseError("cannot open " + truth_path);
        json j;
        probe >> j;
        if (j.contains("timeline"))
            truth = bdt::read_truth(truth_path).timeline;
        else
            truth = bdt::read_timeline(truth_path);
    }
    const double accuracy = bdt::evaluate_accuracy(detected, truth);
    std::printf("accuracy=%.6f frames=%zu cells=%d\n", accuracy, detected.states.size(),
                detected.spec.cell_count());
    return kExitOk;
}

int cmd_viz_scatter(const std::string& csv_path, const std::string& out_path) {
    const std::vector<bdt::TrialPoint> points = bdt::read_trial_points_csv(csv_path);
    if (points.empty()) throw bdt::ParseError("no rows in " + csv_path);
    std::ofstream out(out_path);
    out << bdt::scatter(points).markup;
    std::cout << "wrote " << out_path << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Block design trial toolkit: simulate, detect, analyze, evaluate, viz"};
    app.require_subcommand(1);

    std::string script_path, out_dir = "out", hands_path, out_path, timeline_path;
    std::string detected_path, truth_path, csv_path;
    bool rle = false;
    int grid_n = 4;
    CliOptions detect_opts, analyze_opts;

    CLI::App* simulate = app.add_subcommand("simulate", "Render a scripted trial");
    simulate->add_option("script", script_path, "trial script JSON")->required();
    simulate->add_option("-o,--out", out_dir, "output directory");
    simulate->add_flag("--rle", rle, "run-length encode the truth timeline");

    CLI::App* detect = app.add_subcommand("detect", "Detect block states from frames");
    detect->add_option("frames", script_path, "directory of frame_%06d.ppm files")->required();
    detect->add_option("--hands", hands_path, "hand boxes JSONL file");
    detect->add_option("-n,--grid", grid_n, "grid side length")->check(CLI::Range(2, 16));
    detect->add_option("-o,--out", out_path, "timeline output path")->required();
    detect->add_flag("--rle", rle, "run-length encode the timeline");
    add_config_flags(detect, detect_opts);

    CLI::App* analyze = app.add_subcommand("analyze", "Sequence, strategy and feature analysis");
    analyze->add_option("timeline", timeline_path, "timeline JSON")->required();
    analyze->add_option("-o,--out", out_dir, "output directory");
    add_config_flags(analyze, analyze_opts);

    CLI::App* evaluate = app.add_subcommand("evaluate", "Compare a timeline against truth");
    evaluate->add_option("detected", detected_path, "detected timeline JSON")->required();
    evaluate->add_option("truth", truth_path, "truth timeline or truth.json")->required();

    CLI::App* viz = app.add_subcommand("viz", "Standalone visualizations");
    viz->add_option("--scatter", csv_path, "trial points CSV (participant,puzzle,errors,seconds)")
        ->required();
    viz->add_option("-o,--out", out_path, "output SVG path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return cmd_simulate(script_path, out_dir, rle);
        if (detect->parsed())
            return cmd_detect(script_path, hands_path, detect_opts, out_path, grid_n, rle);
        if (analyze->parsed()) return cmd_analyze(timeline_path, analyze_opts, out_dir);
        if (evaluate->parsed()) return cmd_evaluate(detected_path, truth_path);
        if (viz->parsed()) return cmd_viz_scatter(csv_path, out_path);
    } catch (const bdt::GridNotFound& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVision;
    } catch (const bdt::NoInnerGreen& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVision;
    } catch (const bdt::SpecMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSpecMismatch;
    } catch (const bdt::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}
