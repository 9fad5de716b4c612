#include "bdt/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "bdt/strategy.hpp"

namespace bdt {

std::vector<ErrorEvent> error_events(const Timeline& timeline) {
    std::vector<ErrorEvent> events;
    const int n = timeline.spec.n;
    const int cells = timeline.spec.cell_count();
    for (int c = 0; c < cells; ++c) {
        BlockFace last_placed = BlockFace::Empty; // last non-Empty, non-Invalid label
        for (const GridState& state : timeline.states) {
            const BlockFace f = state.faces[c];
            if (!is_placed_face(f)) continue; // Empty and Invalid never count
            if (last_placed != BlockFace::Empty && f != last_placed)
                events.push_back({state.frame_index, {c / n, c % n}, last_placed, f});
            last_placed = f;
        }
    }
    std::sort(events.begin(), events.end(), [](const ErrorEvent& a, const ErrorEvent& b) {
        return a.frame < b.frame;
    });
    return events;
}

int count_errors(const Timeline& timeline) {
    return static_cast<int>(error_events(timeline).size());
}

std::vector<PlacementRun> placement_durations(const Timeline& timeline) {
    std::vector<PlacementRun> runs;
    const int n = timeline.spec.n;
    const int cells = timeline.spec.cell_count();
    for (int c = 0; c < cells; ++c) {
        bool open = false;
        PlacementRun run;
        for (const GridState& state : timeline.states) {
            const BlockFace f = state.faces[c];
            if (open && f == run.face) {
                run.end_frame = state.frame_index;
                continue;
            }
            if (open) {
                runs.push_back(run);
                open = false;
            }
            if (is_placed_face(f)) {
                run = PlacementRun{{c / n, c % n}, f, state.frame_index, state.frame_index};
                open = true;
            }
        }
        if (open) runs.push_back(run);
    }
    return runs;
}

Progression progression_and_distance(const PlacementSequence& seq) {
    const int n = seq.spec.n;
    struct Placed {
        int rank;
        int row, col;
    };
    std::vector<Placed> placed;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            if (seq.ranks[r * n + c]) placed.push_back({*seq.ranks[r * n + c], r, c});
    if (placed.size() < 2) throw TooFewPlacements("need at least 2 placed cells");
    std::sort(placed.begin(), placed.end(), [](const Placed& a, const Placed& b) {
        if (a.rank != b.rank) return a.rank < b.rank;
        return a.row != b.row ? a.row < b.row : a.col < b.col; // ties row-major
    });

    Progression out;
    int horizontal_right = 0, horizontal_left = 0, vertical_down = 0, vertical_up = 0;
    for (std::size_t i = 1; i < placed.size(); ++i) {
        const int drow = placed[i].row - placed[i - 1].row;
        const int dcol = placed[i].col - placed[i - 1].col;
        out.distances.push_back(std::hypot(drow, dcol));
        if (dcol > 0) ++horizontal_right;
        if (dcol < 0) ++horizontal_left;
        if (drow > 0) ++vertical_down;
        if (drow < 0) ++vertical_up;
    }
    const double steps = static_cast<double>(out.distances.size());
    double sum = 0;
    for (double d : out.distances) sum += d;
    out.mean_distance = sum / steps;
    out.rightward = horizontal_right / steps;
    out.leftward = horizontal_left / steps;
    out.downward = vertical_down / steps;
    out.upward = vertical_up / steps;
    return out;
}

SwapStats detect_swaps(const Timeline& timeline, int window_frames) {
    struct Modification {
        int frame;
        int cell;
        BlockFace from, to;
        bool paired = false;
    };
    std::vector<Modification> mods;
    const int cells = timeline.spec.cell_count();
    for (int c = 0; c < cells; ++c) {
        for (std::size_t i = 1; i < timeline.states.size(); ++i) {
            const BlockFace before = timeline.states[i - 1].faces[c];
            const BlockFace after = timeline.states[i].faces[c];
            if (face_transition_kind(before, after) == TransitionKind::Modification)
                mods.push_back({timeline.states[i].frame_index, c, before, after});
        }
    }
    std::sort(mods.begin(), mods.end(), [](const Modification& a, const Modification& b) {
        return a.frame != b.frame ? a.frame < b.frame : a.cell < b.cell;
    });

    SwapStats stats;
    for (std::size_t i = 0; i < mods.size(); ++i) {
        if (mods[i].paired) continue;
        for (std::size_t j = i + 1; j < mods.size(); ++j) {
            if (mods[j].paired || mods[j].cell == mods[i].cell) continue;
            if (mods[j].frame - mods[i].frame > window_frames) break;
            if (mods[j].from == mods[i].to && mods[j].to == mods[i].from) {
                mods[i].paired = mods[j].paired = true;
                ++stats.swaps;
                break;
            }
        }
    }
    for (const Modification& m : mods)
        if (!m.paired) ++stats.in_place_changes;
    return stats;
}

double pearson(std::span<const TrialPoint> points) {
    if (points.size() < 2) throw DegenerateVariance("need at least 2 points");
    const double n = static_cast<double>(points.size());
    double sx = 0, sy = 0;
    for (const TrialPoint& p : points) {
        sx += p.completion_seconds;
        sy += p.error_count;
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, syy = 0, sxy = 0;
    for (const TrialPoint& p : points) {
        const double dx = p.completion_seconds - mx;
        const double dy = p.error_count - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0 || syy == 0) throw DegenerateVariance("zero variance in a coordinate");
    return sxy / std::sqrt(sxx * syy);
}

FeatureReport extract_features(const Timeline& timeline, int swap_window_frames) {
    FeatureReport report;
    report.error_count = count_errors(timeline);
    report.per_cell_durations = placement_durations(timeline);

    const PlacementSequence seq = derive_sequence(timeline);
    std::map<int, int> placements_per_frame; // first-placement frame -> count
    const int cells = timeline.spec.cell_count();
    int last_first_placement = 0;
    for (int c = 0; c < cells; ++c) {
        if (!seq.ranks[c]) continue;
        for (const GridState& state : timeline.states) {
            if (is_placed_face(state.faces[c])) {
                ++placements_per_frame[state.frame_index];
                last_first_placement = std::max(last_first_placement, state.frame_index);
                break;
            }
        }
    }
    for (const auto& [frame, count] : placements_per_frame)
        if (count >= 2) ++report.simultaneous_placements;
    report.completion_frames = last_first_placement;
    report.completion_seconds = last_first_placement / timeline.spec.fps;

    try {
        const Progression prog = progression_and_distance(seq);
        report.mean_consecutive_distance = prog.mean_distance;
        report.rightward = prog.rightward;
        report.leftward = prog.leftward;
        report.downward = prog.downward;
        report.upward = prog.upward;
        report.progression_available = true;
    } catch (const TooFewPlacements&) {
        report.progression_available = false;
    }

    // Default swap window: 2 seconds of frames.
    const int window = swap_window_frames >= 0
                           ? swap_window_frames
                           : static_cast<int>(std::lround(2.0 * timeline.spec.fps));
    const SwapStats swaps = detect_swaps(timeline, window);
    report.swaps = swaps.swaps;
    report.in_place_changes = swaps.in_place_changes;
    return report;
}

} // namespace bdt
