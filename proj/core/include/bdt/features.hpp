#pragma once

#include <span>
#include <string>
#include <vector>

#include "bdt/types.hpp"

namespace bdt {

struct ErrorEvent {
    int frame = 0;
    CellPos cell;
    BlockFace from = BlockFace::Empty;
    BlockFace to = BlockFace::Empty;
};

// One error per change of a cell's placed label, including a removal
// followed by a re-placement of a different label. Re-placing the same
// label and Invalid frames do not count.
std::vector<ErrorEvent> error_events(const Timeline& timeline);
int count_errors(const Timeline& timeline);

struct PlacementRun {
    CellPos cell;
    BlockFace face = BlockFace::Empty;
    int start_frame = 0;
    int end_frame = 0; // inclusive
};

// Maximal constant-label runs per cell, Empty and Invalid excluded.
std::vector<PlacementRun> placement_durations(const Timeline& timeline);

struct Progression {
    std::vector<double> distances; // consecutive Euclidean steps on (row, col)
    double mean_distance = 0;
    double rightward = 0, leftward = 0, downward = 0, upward = 0;
};

// Orders placed cells by rank (ties row-major) and reports step distances
// plus direction fractions. Needs at least 2 placed cells.
Progression progression_and_distance(const PlacementSequence& seq);

struct SwapStats {
    int swaps = 0;
    int in_place_changes = 0;
};

// A swap pairs two Modification events in different cells within `window`
// frames that exchange labels; greedy earliest pairing, each event used at
// most once. Unpaired Modifications are in-place changes.
SwapStats detect_swaps(const Timeline& timeline, int window_frames);

struct TrialPoint {
    std::string participant;
    std::string puzzle;
    int error_count = 0;
    double completion_seconds = 0;
};

// Sample Pearson correlation of (completion_seconds, error_count).
double pearson(std::span<const TrialPoint> points);

struct FeatureReport {
    int error_count = 0;
    int completion_frames = 0;          // frame of the last first-placement
    double completion_seconds = 0;
    std::vector<PlacementRun> per_cell_durations;
    double mean_consecutive_distance = 0;
    double rightward = 0, leftward = 0, downward = 0, upward = 0;
    int simultaneous_placements = 0;    // frames where >= 2 cells were first placed
    int swaps = 0;
    int in_place_changes = 0;
    bool progression_available = false; // false when fewer than 2 placements
};

FeatureReport extract_features(const Timeline& timeline, int swap_window_frames = -1);

} // namespace bdt
