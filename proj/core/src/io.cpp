#include "bdt/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace bdt {

using nlohmann::json;

namespace {

json spec_to_json(const GridSpec& spec) {
    return json{{"n", spec.n},
                {"fps", spec.fps},
                {"image_width", spec.image_width},
                {"image_height", spec.image_height}};
}

GridSpec spec_from_json(const json& j) {
    GridSpec spec;
    spec.n = j.at("n").get<int>();
    spec.fps = j.at("fps").get<double>();
    spec.image_width = j.at("image_width").get<int>();
    spec.image_height = j.at("image_height").get<int>();
    if (spec.n < 2 || spec.fps <= 0) throw ParseError("invalid grid spec");
    return spec;
}

json timeline_to_json(const Timeline& timeline,
                      const std::map<std::string, std::string>& settings, bool rle) {
    json j;
    j["spec"] = spec_to_json(timeline.spec);
    j["sparse"] = timeline.sparse;
    if (!settings.empty()) j["settings"] = settings;
    json frame_indices = json::array();
    for (const GridState& s : timeline.states) frame_indices.push_back(s.frame_index);
    if (!rle) {
        json frames = json::array();
        for (const GridState& s : timeline.states) {
            json faces = json::array();
            for (BlockFace f : s.faces) faces.push_back(std::string(to_string(f)));
            frames.push_back(json{{"frame", s.frame_index}, {"faces", faces}});
        }
        j["frames"] = frames;
    } else {
        j["frame_indices"] = frame_indices;
        json tracks = json::array();
        const int cells = timeline.spec.cell_count();
        for (int c = 0; c < cells; ++c) {
            json runs = json::array();
            std::size_t i = 0;
            while (i < timeline.states.size()) {
                const BlockFace f = timeline.states[i].faces[c];
                std::size_t count = 1;
                while (i + count < timeline.states.size() &&
                       timeline.states[i + count].faces[c] == f)
                    ++count;
                runs.push_back(json::array({std::string(to_string(f)), count}));
                i += count;
            }
            tracks.push_back(runs);
        }
        j["cell_runs"] = tracks;
    }
    return j;
}

Timeline timeline_from_json(const json& j) {
    Timeline timeline;
    timeline.spec = spec_from_json(j.at("spec"));
    timeline.sparse = j.value("sparse", false);
    const int cells = timeline.spec.cell_count();
    if (j.contains("frames")) {
        for (const json& fj : j.at("frames")) {
            GridState state;
            state.frame_index = fj.at("frame").get<int>();
            for (const json& face : fj.at("faces"))
                state.faces.push_back(face_from_string(face.get<std::string>()));
            if (static_cast<int>(state.faces.size()) != cells)
                throw ParseError("frame face count does not match grid spec");
            timeline.states.push_back(std::move(state));
        }
    } else if (j.contains("cell_runs")) {
        const json& indices = j.at("frame_indices");
        const std::size_t frames = indices.size();
        timeline.states.resize(frames);
        for (std::size_t i = 0; i < frames; ++i) {
            timeline.states[i].frame_index = indices[i].get<int>();
            timeline.states[i].faces.resize(cells);
        }
        const json& tracks = j.at("cell_runs");
        if (static_cast<int>(tracks.size()) != cells)
            throw ParseError("cell_runs count does not match grid spec");
        for (int c = 0; c < cells; ++c) {
            std::size_t i = 0;
            for (const json& run : tracks[c]) {
                const BlockFace f = face_from_string(run.at(0).get<std::string>());
                const std::size_t count = run.at(1).get<std::size_t>();
                for (std::size_t k = 0; k < count; ++k) {
                    if (i >= frames) throw ParseError("cell run overflows frame count");
                    timeline.states[i++].faces[c] = f;
                }
            }
            if (i != frames) throw ParseError("cell run underflows frame count");
        }
    } else {
        throw ParseError("timeline file has neither frames nor cell_runs");
    }
    for (std::size_t i = 1; i < timeline.states.size(); ++i)
        if (timeline.states[i].frame_index <= timeline.states[i - 1].frame_index)
            throw ParseError("timeline frames are not strictly increasing");
    return timeline;
}

json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return j;
}

void dump_json(const json& j, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

} // namespace

void write_timeline(const Timeline& timeline, const std::filesystem::path& path,
                    const std::map<std::string, std::string>& settings, bool rle) {
    dump_json(timeline_to_json(timeline, settings, rle), path);
}

Timeline read_timeline(const std::filesystem::path& path) {
    return timeline_from_json(load_json(path));
}

std::map<std::string, std::string> read_timeline_settings(const std::filesystem::path& path) {
    const json j = load_json(path);
    std::map<std::string, std::string> settings;
    if (j.contains("settings"))
        for (const auto& [key, value] : j.at("settings").items())
            settings[key] = value.get<std::string>();
    return settings;
}

void write_hand_boxes(const std::vector<HandBoxes>& hands, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    for (const HandBoxes& h : hands) {
        json boxes = json::array();
        for (const auto& b : h.boxes) boxes.push_back(json::array({b[0], b[1], b[2], b[3]}));
        out << json{{"frame", h.frame_index}, {"boxes", boxes}}.dump() << "\n";
    }
}

std::vector<HandBoxes> read_hand_boxes(const std::filesystem::path& path,
                                       int image_width, int image_height) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    std::vector<HandBoxes> hands;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
        HandBoxes h;
        h.frame_index = j.at("frame").get<int>();
        for (const json& bj : j.at("boxes")) {
            std::array<int, 4> b{bj.at(0).get<int>(), bj.at(1).get<int>(),
                                 bj.at(2).get<int>(), bj.at(3).get<int>()};
            b[0] = std::clamp(b[0], 0, image_width);
            b[1] = std::clamp(b[1], 0, image_height);
            b[2] = std::clamp(b[2], 0, image_width);
            b[3] = std::clamp(b[3], 0, image_height);
            if (b[0] < b[2] && b[1] < b[3]) h.boxes.push_back(b);
        }
        hands.push_back(std::move(h));
    }
    return hands;
}

void write_script(const TrialScript& script, const std::filesystem::path& path) {
    json j;
    j["spec"] = spec_to_json(script.spec);
    j["frame_count"] = script.frame_count;
    j["noise_sigma"] = script.noise_sigma;
    j["seed"] = script.seed;
    j["palette"] = json{{"background", script.palette.background},
                        {"tape", script.palette.tape},
                        {"red", script.palette.red},
                        {"white", script.palette.white},
                        {"hand", script.palette.hand}};
    j["geometry"] = json{{"center_x", script.geometry.center_x},
                         {"center_y", script.geometry.center_y},
                         {"cell_px", script.geometry.cell_px},
                         {"tape_px", script.geometry.tape_px},
                         {"angle_deg", script.geometry.angle_deg}};
    json events = json::array();
    for (const PlacementEvent& e : script.events)
        events.push_back(json{{"frame", e.frame},
                              {"row", e.cell.row},
                              {"col", e.cell.col},
                              {"face", std::string(to_string(e.face))}});
    j["events"] = events;
    json moves = json::array();
    for (const HandMove& m : script.hand_moves)
        moves.push_back(json{{"frame_start", m.frame_start},
                             {"frame_end", m.frame_end},
                             {"from_box", m.from_box},
                             {"to_box", m.to_box}});
    j["hand_moves"] = moves;
    dump_json(j, path);
}

TrialScript read_script(const std::filesystem::path& path) {
    const json j = load_json(path);
    TrialScript script;
    try {
        script.spec = spec_from_json(j.at("spec"));
        script.frame_count = j.at("frame_count").get<int>();
        script.noise_sigma = j.value("noise_sigma", 0.0);
        script.seed = j.value("seed", std::uint64_t{1});
        if (j.contains("palette")) {
            const json& p = j.at("palette");
            const auto rgb = [&](const char* key, Rgb fallback) {
                if (!p.contains(key)) return fallback;
                const json& v = p.at(key);
                return Rgb{v.at(0).get<std::uint8_t>(), v.at(1).get<std::uint8_t>(),
                           v.at(2).get<std::uint8_t>()};
            };
            script.palette.background = rgb("background", script.palette.background);
            script.palette.tape = rgb("tape", script.palette.tape);
            script.palette.red = rgb("red", script.palette.red);
            script.palette.white = rgb("white", script.palette.white);
            script.palette.hand = rgb("hand", script.palette.hand);
        }
        const json& g = j.at("geometry");
        script.geometry.center_x = g.at("center_x").get<double>();
        script.geometry.center_y = g.at("center_y").get<double>();
        script.geometry.cell_px = g.at("cell_px").get<int>();
        script.geometry.tape_px = g.at("tape_px").get<int>();
        script.geometry.angle_deg = g.value("angle_deg", 0.0);
        for (const json& ej : j.value("events", json::array())) {
            PlacementEvent e;
            e.frame = ej.at("frame").get<int>();
            e.cell = {ej.at("row").get<int>(), ej.at("col").get<int>()};
            e.face = face_from_string(ej.at("face").get<std::string>());
            script.events.push_back(e);
        }
        for (const json& mj : j.value("hand_moves", json::array())) {
            HandMove m;
            m.frame_start = mj.at("frame_start").get<int>();
            m.frame_end = mj.at("frame_end").get<int>();
            const json& fb = mj.at("from_box");
            const json& tb = mj.at("to_box");
            for (int i = 0; i < 4; ++i) {
                m.from_box[i] = fb.at(i).get<int>();
                m.to_box[i] = tb.at(i).get<int>();
            }
            script.hand_moves.push_back(m);
        }
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return script;
}

void write_truth(const GroundTruth& truth, const std::filesystem::path& path, bool rle) {
    json j;
    j["timeline"] = timeline_to_json(truth.timeline, {}, rle);
    json intervals = json::array();
    for (const auto& [start, end] : truth.motion_intervals)
        intervals.push_back(json::array({start, end}));
    j["motion_intervals"] = intervals;
    j["grid_box"] = json::array(
        {truth.grid_box.x0, truth.grid_box.y0, truth.grid_box.x1, truth.grid_box.y1});
    dump_json(j, path);
}

GroundTruth read_truth(const std::filesystem::path& path) {
    const json j = load_json(path);
    GroundTruth truth;
    try {
        truth.timeline = timeline_from_json(j.at("timeline"));
        for (const json& ij : j.value("motion_intervals", json::array()))
            truth.motion_intervals.emplace_back(ij.at(0).get<int>(), ij.at(1).get<int>());
        const json& gb = j.at("grid_box");
        truth.grid_box = PixelBox{gb.at(0).get<int>(), gb.at(1).get<int>(),
                                  gb.at(2).get<int>(), gb.at(3).get<int>()};
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return truth;
}

ColorMethod PipelineConfig::color_method() const {
    if (method == "rgb") return RgbAveraging{threshold};
    if (method == "kmeans") return KMeansMethod{kmeans_k, threshold};
    if (method == "knn") return KnnMethod{knn_k, knn_bins, default_knn_training(knn_bins)};
    throw ParseError("unknown color method: " + method);
}

Measure PipelineConfig::measure_enum() const {
    if (measure == "tau") return Measure::Tau;
    if (measure == "euclid") return Measure::Euclid;
    throw ParseError("unknown measure: " + measure);
}

void apply_config_line(PipelineConfig& config, const std::string& key,
                       const std::string& value) {
    const auto as_double = [&] { return std::stod(value); };
    const auto as_int = [&] { return std::stoi(value); };
    const auto as_bool = [&] {
        if (value == "on" || value == "true" || value == "1") return true;
        if (value == "off" || value == "false" || value == "0") return false;
        throw ParseError("expected on/off for " + key);
    };
    if (key == "abis.method") config.method = value;
    else if (key == "abis.threshold") config.threshold = as_int();
    else if (key == "abis.kmeans_k") config.kmeans_k = as_int();
    else if (key == "abis.knn_k") config.knn_k = as_int();
    else if (key == "abis.knn_bins") config.knn_bins = as_int();
    else if (key == "abis.min_blue_area") config.abis.min_blue_area = as_int();
    else if (key == "hsv.blue_h_min") config.abis.blue.h_min = as_double();
    else if (key == "hsv.blue_h_max") config.abis.blue.h_max = as_double();
    else if (key == "hsv.blue_s_min") config.abis.blue.s_min = as_double();
    else if (key == "hsv.blue_v_min") config.abis.blue.v_min = as_double();
    else if (key == "hsv.green_h_min") config.abis.green.h_min = as_double();
    else if (key == "hsv.green_h_max") config.abis.green.h_max = as_double();
    else if (key == "hsv.green_s_min") config.abis.green.s_min = as_double();
    else if (key == "hsv.green_v_min") config.abis.green.v_min = as_double();
    else if (key == "iob.threshold") config.iob_threshold = as_double();
    else if (key == "smoothing") config.smoothing = as_bool();
    else if (key == "cabs.measure") config.measure = value;
    else if (key == "cabs.swap_window_frames") config.swap_window_frames = as_int();
    else throw ParseError("unknown config key: " + key);
}

PipelineConfig read_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    PipelineConfig config;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        apply_config_line(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return config;
}

std::string format_strategy_report(const StrategyReport& report) {
    std::ostringstream out;
    out << "measure=" << (report.measure == Measure::Tau ? "tau" : "euclid") << "\n";
    char buf[64];
    for (std::size_t i = 0; i < kAllStrategies.size(); ++i) {
        if (report.cardinalities[i] == 0) {
            out << "score." << to_string(kAllStrategies[i]) << "=n/a\n";
            continue;
        }
        std::snprintf(buf, sizeof(buf), "score.%s=%.6f",
                      std::string(to_string(kAllStrategies[i])).c_str(), report.scores[i]);
        out << buf << "\n";
    }
    for (std::size_t i = 0; i < kAllStrategies.size(); ++i)
        out << "cardinality." << to_string(kAllStrategies[i]) << "="
            << report.cardinalities[i] << "\n";
    out << "best=" << to_string(report.best_kind) << "\n";
    out << "tie=" << (report.tie_flag ? 1 : 0) << "\n";
    return out.str();
}

std::string format_feature_report(const FeatureReport& report, const GridSpec& spec) {
    std::ostringstream out;
    char buf[128];
    out << "error_count=" << report.error_count << "\n";
    out << "completion_frames=" << report.completion_frames << "\n";
    std::snprintf(buf, sizeof(buf), "completion_seconds=%.3f", report.completion_seconds);
    out << buf << "\n";
    if (report.progression_available) {
        std::snprintf(buf, sizeof(buf),
                      "mean_consecutive_distance=%.4f\nrightward=%.4f\nleftward=%.4f\n"
                      "downward=%.4f\nupward=%.4f",
                      report.mean_consecutive_distance, report.rightward, report.leftward,
                      report.downward, report.upward);
        out << buf << "\n";
    } else {
        out << "progression=unavailable\n";
    }
    out << "simultaneous_placements=" << report.simultaneous_placements << "\n";
    out << "swaps=" << report.swaps << "\n";
    out << "in_place_changes=" << report.in_place_changes << "\n";
    for (const PlacementRun& run : report.per_cell_durations) {
        std::snprintf(buf, sizeof(buf), "duration=%d,%d,%s,%d,%d,%.3f", run.cell.row,
                      run.cell.col, std::string(to_string(run.face)).c_str(), run.start_frame,
                      run.end_frame, (run.end_frame - run.start_frame + 1) / spec.fps);
        out << buf << "\n";
    }
    return out.str();
}

void write_trial_points_csv(const std::vector<TrialPoint>& points,
                            const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << "participant,puzzle,errors,seconds\n";
    for (const TrialPoint& p : points)
        out << p.participant << "," << p.puzzle << "," << p.error_count << ","
            << p.completion_seconds << "\n";
}

std::vector<TrialPoint> read_trial_points_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    std::vector<TrialPoint> points;
    std::string line;
    if (!std::getline(in, line) || line.rfind("participant,puzzle,errors,seconds", 0) != 0)
        throw ParseError(path.string() + ": missing CSV header");
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        TrialPoint p;
        std::string errors, seconds;
        if (!std::getline(row, p.participant, ',') || !std::getline(row, p.puzzle, ',') ||
            !std::getline(row, errors, ',') || !std::getline(row, seconds))
            throw ParseError(path.string() + ":" + std::to_string(lineno) + ": bad row");
        p.error_count = std::stoi(errors);
        p.completion_seconds = std::stod(seconds);
        points.push_back(std::move(p));
    }
    return points;
}

std::string frame_filename(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "frame_%06d.ppm", index);
    return buf;
}

} // namespace bdt
