#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bdt/errors.hpp"

namespace bdt {

// Visible top face of one grid cell. Diagonal labels name the direction the
// red half points.
enum class BlockFace : std::uint8_t {
    Empty = 0,
    Red,
    White,
    NW,
    NE,
    SW,
    SE,
    Invalid,
};

inline constexpr int kFaceCount = 8;

std::string_view to_string(BlockFace face);
BlockFace face_from_string(std::string_view text); // throws ParseError

inline bool is_placed_face(BlockFace f) {
    return f != BlockFace::Empty && f != BlockFace::Invalid;
}

struct GridSpec {
    int n = 4;               // grid side length
    double fps = 30.0;       // frames per second
    int image_width = 640;
    int image_height = 480;

    int cell_count() const { return n * n; }
    bool operator==(const GridSpec&) const = default;
};

struct CellPos {
    int row = 0; // 0 = top
    int col = 0; // 0 = left
    bool operator==(const CellPos&) const = default;
};

// One frame's n x n face labels, row-major.
struct GridState {
    int frame_index = 0;
    std::vector<BlockFace> faces;

    BlockFace at(int row, int col, int n) const { return faces[row * n + col]; }
    BlockFace& at(int row, int col, int n) { return faces[row * n + col]; }
};

struct Timeline {
    GridSpec spec;
    std::vector<GridState> states;
    bool sparse = false; // set when frames were removed (motion filtering)
};

// Per-cell rank of first placement. nullopt = never placed.
// Ties use competition ranking: tied cells share a rank, the next rank
// skips by the tie count.
struct PlacementSequence {
    GridSpec spec;
    std::vector<std::optional<int>> ranks; // row-major, ranks start at 1

    bool complete() const;
};

// Flattens a complete sequence into a row-major rank list.
// Throws IncompleteSequence when any cell is unplaced.
std::vector<int> rank_vector(const PlacementSequence& seq);

enum class TransitionKind {
    NoChange,
    Placement,
    Removal,
    Modification,
    InvalidInvolved,
};

// Total over all 64 label pairs.
TransitionKind face_transition_kind(BlockFace before, BlockFace after);

} // namespace bdt
