#pragma once

#include <span>
#include <string>

#include "bdt/features.hpp"
#include "bdt/image.hpp"
#include "bdt/strategy.hpp"
#include "bdt/types.hpp"

namespace bdt {

struct SvgDoc {
    int width = 0;
    int height = 0;
    std::string markup; // complete SVG 1.1 document, no external references
};

// Fill color of the rank gradient, lightest green at rank 1 through darkest
// at max_rank. Exposed so tests can assert monotone luminance directly.
Rgb heatmap_fill(int rank, int max_rank);

// Placement order as a green gradient over the grid, with the target design
// rendered alongside.
SvgDoc sequence_heatmap(const PlacementSequence& seq, const std::vector<BlockFace>& design);

// Five bars in r-r, c-c, s-s, p-c, v-f order; the best kind's bar is red.
// Tau scores map affinely from [-1, 1] onto the bar scale.
SvgDoc strategy_bars(const StrategyReport& report);

// Errors vs completion seconds, one color per participant.
SvgDoc scatter(std::span<const TrialPoint> points);

} // namespace bdt
