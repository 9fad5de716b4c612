#pragma once

#include <string>
#include <vector>

#include "bdt/types.hpp"

namespace bdt::testing {

// Builds a contiguous timeline from per-cell tracks: tracks[c][t] is the
// label of cell c at frame t.
inline Timeline timeline_from_tracks(const GridSpec& spec,
                                     const std::vector<std::vector<BlockFace>>& tracks) {
    Timeline timeline;
    timeline.spec = spec;
    const std::size_t frames = tracks.empty() ? 0 : tracks[0].size();
    for (std::size_t t = 0; t < frames; ++t) {
        GridState state;
        state.frame_index = static_cast<int>(t);
        for (const auto& track : tracks) state.faces.push_back(track[t]);
        timeline.states.push_back(std::move(state));
    }
    return timeline;
}

// Minimal well-formedness check: declaration, balanced tags, quoted
// attributes, no stray '<' or '&'.
bool xml_well_formed(const std::string& text);

} // namespace bdt::testing
