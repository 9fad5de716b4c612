#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bdt/abis.hpp"
#include "bdt/features.hpp"
#include "bdt/simulate.hpp"
#include "bdt/strategy.hpp"
#include "bdt/types.hpp"

namespace bdt {

// Timeline files carry the grid spec header and per-frame label arrays;
// run-length encoding per cell track is available behind `rle`.
void write_timeline(const Timeline& timeline, const std::filesystem::path& path,
                    const std::map<std::string, std::string>& settings = {},
                    bool rle = false);
Timeline read_timeline(const std::filesystem::path& path);
std::map<std::string, std::string> read_timeline_settings(const std::filesystem::path& path);

// One JSON record per line: {"frame": i, "boxes": [[x0,y0,x1,y1], ...]}.
// Boxes are clipped to the frame bounds on load.
void write_hand_boxes(const std::vector<HandBoxes>& hands, const std::filesystem::path& path);
std::vector<HandBoxes> read_hand_boxes(const std::filesystem::path& path,
                                       int image_width, int image_height);

void write_script(const TrialScript& script, const std::filesystem::path& path);
TrialScript read_script(const std::filesystem::path& path);

// Ground truth minus the per-frame hand boxes, which live in their own file.
void write_truth(const GroundTruth& truth, const std::filesystem::path& path,
                 bool rle = false);
GroundTruth read_truth(const std::filesystem::path& path);

struct PipelineConfig {
    std::string method = "rgb"; // rgb | kmeans | knn
    int threshold = 140;
    int kmeans_k = 1;
    int knn_k = 3;
    int knn_bins = 8;
    AbisConfig abis;
    double iob_threshold = 0.3;
    bool smoothing = true;
    std::string measure = "tau"; // tau | euclid
    int swap_window_frames = -1; // -1: 2 seconds of frames

    ColorMethod color_method() const;
    Measure measure_enum() const;
};

// Flat key=value text with section prefixes, e.g. "abis.method=rgb".
PipelineConfig read_config(const std::filesystem::path& path);
void apply_config_line(PipelineConfig& config, const std::string& key,
                       const std::string& value);

std::string format_strategy_report(const StrategyReport& report);
std::string format_feature_report(const FeatureReport& report, const GridSpec& spec);

void write_trial_points_csv(const std::vector<TrialPoint>& points,
                            const std::filesystem::path& path);
std::vector<TrialPoint> read_trial_points_csv(const std::filesystem::path& path);

std::string frame_filename(int index); // frame_%06d.ppm

} // namespace bdt
