#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "bdt/image.hpp"
#include "bdt/types.hpp"

namespace bdt {

enum class QuadrantColor : std::uint8_t { RedQ, WhiteQ, GreenQ, OtherQ };

std::string_view to_string(QuadrantColor c);

// Mean per RGB channel, each compared against one threshold.
struct RgbAveraging {
    int threshold = 140;
};

// Lloyd's algorithm on RGB pixels; the dominant cluster centroid goes
// through the same threshold decision as RgbAveraging. Seeding is
// deterministic: initial centroids at evenly spaced pixels in row-major
// order; at most 50 iterations or max centroid movement < 0.5.
struct KMeansMethod {
    int k = 1;
    int threshold = 140;
};

struct KnnExemplar {
    QuadrantColor color; // RedQ, WhiteQ or GreenQ
    std::vector<double> feature;
};

// Per-channel histograms (bins each, unit sum) concatenated as the feature
// vector; Euclidean distance; majority vote of the k nearest exemplars,
// ties broken by smallest summed distance. Never returns OtherQ.
struct KnnMethod {
    int k = 3;
    int bins = 8;
    std::vector<KnnExemplar> training;
};

using ColorMethod = std::variant<RgbAveraging, KMeansMethod, KnnMethod>;

// Histogram feature used by KnnMethod, exposed for training-set construction.
std::vector<double> knn_feature(const RawImage& quad, int bins);

// Ten synthetic red/white/green swatches each, rendered with the default
// simulator palette plus seeded noise.
std::vector<KnnExemplar> default_knn_training(int bins);

QuadrantColor classify_quadrant(const RawImage& quad, const ColorMethod& method);

// Truth table from the four quadrant colors (Q1=TL, Q2=TR, Q3=BL, Q4=BR).
BlockFace face_from_quadrants(QuadrantColor q1, QuadrantColor q2,
                              QuadrantColor q3, QuadrantColor q4);

struct HandBoxes {
    int frame_index = 0;
    std::vector<std::array<int, 4>> boxes; // x0,y0,x1,y1
};

struct PixelBox {
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0; // half-open, x0<x1, y0<y1

    long long area() const { return static_cast<long long>(x1 - x0) * (y1 - y0); }
    bool operator==(const PixelBox&) const = default;
};

struct AbisConfig {
    HsvRange blue{200, 260, 0.40, 1.0, 0.20, 1.0};
    HsvRange green{90, 150, 0.30, 1.0, 0.15, 1.0};
    int min_blue_area = 100; // pixels; below this -> GridNotFound
};

struct ConstructionArea {
    OrientedRect rect;   // located blue contour
    PixelBox inner;      // green bounding box inside the rectified rect
    PixelBox grid_box;   // axis-aligned blue bounding box, original coords
};

// Locates the blue tape outline on the first frame; cached for the trial.
ConstructionArea locate_construction_area(const RawImage& first_frame,
                                          const AbisConfig& config = {});

GridState detect_frame(const RawImage& frame, const ConstructionArea& area,
                       const GridSpec& spec, const ColorMethod& method);

// Intersection over Blue: union area of boxes clipped to grid_box, divided
// by grid_box area. Overlaps are not double-counted.
double iob(const HandBoxes& boxes, const PixelBox& grid_box);

// Frames whose IoB exceeds the threshold take the previous output frame's
// faces. Frame 0 always passes through.
Timeline filter_occlusions(const Timeline& states, std::span<const HandBoxes> hands,
                           const PixelBox& grid_box, double threshold = 0.3);

// Drops frames inside any closed [start, end] interval; output is sparse.
Timeline filter_motion_intervals(const Timeline& states,
                                 std::span<const std::pair<int, int>> intervals);

// Per cell, rewrites Invalid runs bounded on both sides by one identical
// non-Invalid label to that label. Edge runs stay untouched.
Timeline smooth(const Timeline& states);

// Fraction of (frame, cell) pairs agreeing with truth over detected frames.
double evaluate_accuracy(const Timeline& detected, const Timeline& truth);

} // namespace bdt
