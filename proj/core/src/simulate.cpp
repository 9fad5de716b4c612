#include "bdt/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bdt/rng.hpp"

namespace bdt {

GridGeometry desk_preset(const GridSpec& spec) {
    GridGeometry g;
    g.center_x = spec.image_width / 2.0;
    g.center_y = spec.image_height / 2.0;
    g.cell_px = 40;
    g.tape_px = 4;
    return g;
}

GridGeometry paper_scale_preset(const GridSpec& spec) {
    GridGeometry g;
    g.center_x = spec.image_width / 2.0;
    g.center_y = spec.image_height / 2.0;
    g.cell_px = 7;
    g.tape_px = 3;
    return g;
}

namespace {

void validate(const TrialScript& s) {
    if (s.geometry.cell_px < 6)
        throw GeometryOverflow("cell_px must be >= 6 so quadrants are at least 3x3");
    if (s.geometry.tape_px < 1) throw GeometryOverflow("tape_px must be >= 1");
    if (s.frame_count < 1) throw EventOutOfBounds("frame_count must be >= 1");
    const double outer = s.spec.n * s.geometry.cell_px + 2.0 * s.geometry.tape_px;
    const double theta = s.geometry.angle_deg * std::numbers::pi / 180.0;
    const double half = outer / 2.0;
    const double reach = half * (std::fabs(std::cos(theta)) + std::fabs(std::sin(theta)));
    if (s.geometry.center_x - reach < 0 || s.geometry.center_x + reach > s.spec.image_width ||
        s.geometry.center_y - reach < 0 || s.geometry.center_y + reach > s.spec.image_height)
        throw GeometryOverflow("rotated grid extends past the frame");
    int prev_frame = 0;
    for (const PlacementEvent& e : s.events) {
        if (e.frame < prev_frame) throw EventOutOfBounds("events must be frame-sorted");
        prev_frame = e.frame;
        if (e.frame < 0 || e.frame >= s.frame_count)
            throw EventOutOfBounds("event frame outside the trial");
        if (e.cell.row < 0 || e.cell.row >= s.spec.n || e.cell.col < 0 || e.cell.col >= s.spec.n)
            throw EventOutOfBounds("event cell outside the grid");
        if (e.face == BlockFace::Invalid)
            throw EventOutOfBounds("scripts cannot place Invalid faces");
    }
    for (const HandMove& m : s.hand_moves) {
        if (m.frame_end < m.frame_start) throw EventOutOfBounds("hand move ends before it starts");
    }
}

std::vector<BlockFace> state_at(const TrialScript& s, int frame) {
    std::vector<BlockFace> faces(s.spec.cell_count(), BlockFace::Empty);
    for (const PlacementEvent& e : s.events) {
        if (e.frame > frame) break;
        faces[e.cell.row * s.spec.n + e.cell.col] = e.face;
    }
    return faces;
}

std::array<int, 4> hand_box_at(const HandMove& m, int frame) {
    const int span = m.frame_end - m.frame_start;
    const double t = span > 0 ? static_cast<double>(frame - m.frame_start) / span : 0.0;
    std::array<int, 4> box;
    for (int i = 0; i < 4; ++i)
        box[i] = static_cast<int>(std::lround(m.from_box[i] + t * (m.to_box[i] - m.from_box[i])));
    return box;
}

// Red side of a diagonal face in cell-local coordinates (u right, v down,
// both in [0, 1)). The diagonal boundary itself counts as red.
bool red_half(BlockFace face, double u, double v) {
    switch (face) {
        case BlockFace::NE: return u >= v;
        case BlockFace::SW: return v > u;
        case BlockFace::NW: return u + v <= 1.0;
        case BlockFace::SE: return u + v > 1.0;
        default: return false;
    }
}

} // namespace

RawImage render_frame(const TrialScript& script, int frame) {
    const GridSpec& spec = script.spec;
    const GridGeometry& geo = script.geometry;
    const Palette& pal = script.palette;
    const double inner = static_cast<double>(spec.n) * geo.cell_px;
    const double outer_half = inner / 2.0 + geo.tape_px;
    const double theta = geo.angle_deg * std::numbers::pi / 180.0;
    const double ct = std::cos(theta), st = std::sin(theta);

    const std::vector<BlockFace> faces = state_at(script, frame);
    std::vector<std::array<int, 4>> hand_boxes;
    for (const HandMove& m : script.hand_moves)
        if (frame >= m.frame_start && frame <= m.frame_end)
            hand_boxes.push_back(hand_box_at(m, frame));

    RawImage img = RawImage::filled(spec.image_width, spec.image_height, pal.background);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const double dx = x + 0.5 - geo.center_x;
            const double dy = y + 0.5 - geo.center_y;
            const double u = ct * dx + st * dy;  // rotate by -theta
            const double v = -st * dx + ct * dy;
            if (std::max(std::fabs(u), std::fabs(v)) >= outer_half) continue;
            Rgb color = pal.tape;
            if (std::fabs(u) < inner / 2.0 && std::fabs(v) < inner / 2.0) {
                const double a = u + inner / 2.0;
                const double b = v + inner / 2.0;
                const int col = std::min(spec.n - 1, static_cast<int>(a / geo.cell_px));
                const int row = std::min(spec.n - 1, static_cast<int>(b / geo.cell_px));
                const BlockFace f = faces[row * spec.n + col];
                if (f == BlockFace::Empty) {
                    color = pal.background;
                } else if (f == BlockFace::Red) {
                    color = pal.red;
                } else if (f == BlockFace::White) {
                    color = pal.white;
                } else {
                    const double fu = a / geo.cell_px - col;
                    const double fv = b / geo.cell_px - row;
                    color = red_half(f, fu, fv) ? pal.red : pal.white;
                }
            }
            img.at(x, y) = color;
        }
    }
    for (const auto& box : hand_boxes) {
        const int x0 = std::clamp(box[0], 0, img.width);
        const int y0 = std::clamp(box[1], 0, img.height);
        const int x1 = std::clamp(box[2], 0, img.width);
        const int y1 = std::clamp(box[3], 0, img.height);
        for (int y = y0; y < y1; ++y)
            for (int x = x0; x < x1; ++x) img.at(x, y) = pal.hand;
    }
    if (script.noise_sigma > 0) {
        // Per-frame stream so frames render identically in any order.
        Xorshift64Star rng(script.seed ^ (0x9E3779B97F4A7C15ULL * (frame + 1)));
        for (Rgb& p : img.pixels) {
            for (int c = 0; c < 3; ++c) {
                const double noisy = p[c] + rng.next_gaussian() * script.noise_sigma;
                p[c] = static_cast<std::uint8_t>(std::clamp(std::lround(noisy), 0L, 255L));
            }
        }
    }
    return img;
}

RenderedTrial render_trial(const TrialScript& script) {
    validate(script);
    RenderedTrial out;
    out.frames.reserve(script.frame_count);
    for (int t = 0; t < script.frame_count; ++t) out.frames.push_back(render_frame(script, t));

    GroundTruth& truth = out.truth;
    truth.timeline.spec = script.spec;
    for (int t = 0; t < script.frame_count; ++t)
        truth.timeline.states.push_back(GridState{t, state_at(script, t)});

    for (int t = 0; t < script.frame_count; ++t) {
        HandBoxes hb{t, {}};
        for (const HandMove& m : script.hand_moves)
            if (t >= m.frame_start && t <= m.frame_end) hb.boxes.push_back(hand_box_at(m, t));
        if (!hb.boxes.empty()) truth.hand_boxes.push_back(std::move(hb));
    }

    std::vector<std::pair<int, int>> intervals;
    for (const HandMove& m : script.hand_moves) intervals.emplace_back(m.frame_start, m.frame_end);
    std::sort(intervals.begin(), intervals.end());
    for (const auto& [start, end] : intervals) {
        if (!truth.motion_intervals.empty() && start <= truth.motion_intervals.back().second + 1)
            truth.motion_intervals.back().second = std::max(truth.motion_intervals.back().second, end);
        else
            truth.motion_intervals.emplace_back(start, end);
    }

    const double inner = static_cast<double>(script.spec.n) * script.geometry.cell_px;
    const double half = inner / 2.0 + script.geometry.tape_px;
    const double theta = script.geometry.angle_deg * std::numbers::pi / 180.0;
    const double reach = half * (std::fabs(std::cos(theta)) + std::fabs(std::sin(theta)));
    truth.grid_box = PixelBox{
        static_cast<int>(std::floor(script.geometry.center_x - reach)),
        static_cast<int>(std::floor(script.geometry.center_y - reach)),
        static_cast<int>(std::ceil(script.geometry.center_x + reach)),
        static_cast<int>(std::ceil(script.geometry.center_y + reach)),
    };
    return out;
}

TrialScript scripted_strategy_trial(const GridSpec& spec,
                                    const std::vector<BlockFace>& design,
                                    const PlacementSequence& sequence,
                                    int frames_per_move) {
    if (!sequence.complete())
        throw IncompleteSequence("strategy trials need a complete placement sequence");
    if (static_cast<int>(design.size()) != spec.cell_count())
        throw EventOutOfBounds("design size does not match the grid");
    for (BlockFace f : design)
        if (!is_placed_face(f)) throw EventOutOfBounds("design cells must be placeable faces");
    if (frames_per_move < 3) throw EventOutOfBounds("frames_per_move must be >= 3");

    TrialScript script;
    script.spec = spec;
    script.geometry = desk_preset(spec);

    int max_rank = 0;
    std::vector<PlacementEvent> events;
    for (int r = 0; r < spec.n; ++r) {
        for (int c = 0; c < spec.n; ++c) {
            const int rank = *sequence.ranks[r * spec.n + c];
            max_rank = std::max(max_rank, rank);
            events.push_back({rank * frames_per_move, {r, c}, design[r * spec.n + c]});
        }
    }
    std::sort(events.begin(), events.end(), [](const PlacementEvent& a, const PlacementEvent& b) {
        return a.frame < b.frame;
    });
    script.events = std::move(events);
    script.frame_count = (max_rank + 1) * frames_per_move;

    // One hand pass over the grid around every distinct placement frame.
    const double inner = static_cast<double>(spec.n) * script.geometry.cell_px;
    const double half = inner / 2.0 + script.geometry.tape_px;
    const std::array<int, 4> cover{
        static_cast<int>(std::floor(script.geometry.center_x - half)) - 2,
        static_cast<int>(std::floor(script.geometry.center_y - half)) - 2,
        static_cast<int>(std::ceil(script.geometry.center_x + half)) + 2,
        static_cast<int>(std::ceil(script.geometry.center_y + half)) + 2,
    };
    int last_frame = -1;
    for (const PlacementEvent& e : script.events) {
        if (e.frame == last_frame) continue;
        last_frame = e.frame;
        HandMove move;
        move.frame_start = std::max(0, e.frame - 2);
        move.frame_end = std::min(script.frame_count - 1, e.frame + 2);
        move.from_box = cover;
        move.to_box = cover;
        script.hand_moves.push_back(move);
    }
    return script;
}

} // namespace bdt
