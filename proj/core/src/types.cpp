#include "bdt/types.hpp"

#include <algorithm>
#include <array>

namespace bdt {

namespace {
constexpr std::array<std::string_view, kFaceCount> kFaceNames = {
    "Empty", "Red", "White", "NW", "NE", "SW", "SE", "Invalid",
};
} // namespace

std::string_view to_string(BlockFace face) {
    return kFaceNames[static_cast<std::size_t>(face)];
}

BlockFace face_from_string(std::string_view text) {
    for (std::size_t i = 0; i < kFaceNames.size(); ++i) {
        if (kFaceNames[i] == text) return static_cast<BlockFace>(i);
    }
    throw ParseError("unknown block face label: " + std::string(text));
}

bool PlacementSequence::complete() const {
    if (static_cast<int>(ranks.size()) != spec.cell_count()) return false;
    return std::all_of(ranks.begin(), ranks.end(),
                       [](const std::optional<int>& r) { return r.has_value(); });
}

std::vector<int> rank_vector(const PlacementSequence& seq) {
    if (!seq.complete())
        throw IncompleteSequence("placement sequence has unplaced cells");
    std::vector<int> out;
    out.reserve(seq.ranks.size());
    for (const auto& r : seq.ranks) out.push_back(*r);
    return out;
}

TransitionKind face_transition_kind(BlockFace before, BlockFace after) {
    if (before == after) return TransitionKind::NoChange;
    if (before == BlockFace::Invalid || after == BlockFace::Invalid)
        return TransitionKind::InvalidInvolved;
    if (before == BlockFace::Empty) return TransitionKind::Placement;
    if (after == BlockFace::Empty) return TransitionKind::Removal;
    return TransitionKind::Modification;
}

} // namespace bdt
