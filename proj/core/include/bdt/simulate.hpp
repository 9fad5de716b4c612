#pragma once

#include <cstdint>
#include <vector>

#include "bdt/abis.hpp"
#include "bdt/image.hpp"
#include "bdt/types.hpp"

namespace bdt {

struct Palette {
    Rgb background{40, 140, 60};
    Rgb tape{30, 60, 180};
    Rgb red{200, 30, 30};
    Rgb white{230, 230, 230};
    Rgb hand{190, 140, 110};
};

struct GridGeometry {
    double center_x = 320;
    double center_y = 240;
    int cell_px = 40;   // "desk" preset; paper-scale preset uses 7
    int tape_px = 4;
    double angle_deg = 0;
};

struct PlacementEvent {
    int frame = 0;
    CellPos cell;
    BlockFace face = BlockFace::Empty; // Empty clears the cell; Invalid rejected
};

struct HandMove {
    int frame_start = 0;
    int frame_end = 0;
    std::array<int, 4> from_box{}; // x0,y0,x1,y1, linearly interpolated
    std::array<int, 4> to_box{};
};

struct TrialScript {
    GridSpec spec;
    Palette palette;
    GridGeometry geometry;
    int frame_count = 1;
    std::vector<PlacementEvent> events;     // frame-sorted
    std::vector<HandMove> hand_moves;
    double noise_sigma = 0;
    std::uint64_t seed = 1;
};

struct GroundTruth {
    Timeline timeline;
    std::vector<HandBoxes> hand_boxes;           // one entry per frame with a hand
    std::vector<std::pair<int, int>> motion_intervals;
    PixelBox grid_box;                           // blue outline AABB, original coords
};

struct RenderedTrial {
    std::vector<RawImage> frames;
    GroundTruth truth;
};

GridGeometry desk_preset(const GridSpec& spec);
GridGeometry paper_scale_preset(const GridSpec& spec);

// Deterministic given seed. Frame t shows all events with frame <= t;
// diagonal faces draw as half-cell triangles with the red half toward the
// named direction; the hand paints over the scene during its interval;
// noise is added last and clamped.
RenderedTrial render_trial(const TrialScript& script);

// Single-frame renderer; frames are independent given the script.
RawImage render_frame(const TrialScript& script, int frame);

// Builds a trial that places `design` following `sequence`, one event per
// cell at frame rank * frames_per_move, with a hand move covering the grid
// around each placement.
TrialScript scripted_strategy_trial(const GridSpec& spec,
                                    const std::vector<BlockFace>& design,
                                    const PlacementSequence& sequence,
                                    int frames_per_move);

} // namespace bdt
