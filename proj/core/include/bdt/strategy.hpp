#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "bdt/types.hpp"

namespace bdt {

enum class StrategyKind : int {
    RowByRow = 0,
    ColByCol,
    SubSection,
    PerimeterComplete,
    VerticesFirst,
};

inline constexpr std::array<StrategyKind, 5> kAllStrategies = {
    StrategyKind::RowByRow, StrategyKind::ColByCol, StrategyKind::SubSection,
    StrategyKind::PerimeterComplete, StrategyKind::VerticesFirst,
};

// Short names in the fixed report order: r-r, c-c, s-s, p-c, v-f.
std::string_view to_string(StrategyKind kind);
StrategyKind strategy_from_string(std::string_view text);

struct SampleSet {
    StrategyKind kind;
    GridSpec spec;
    std::vector<std::vector<int>> sequences; // row-major rank vectors, no duplicates
};

// Deterministic enumeration; 576 sequences per kind for 4x4 grids.
// SubSection requires even n. Supports n in {3, 4}.
SampleSet generate_sample_set(StrategyKind kind, const GridSpec& spec);

// euc = 1 / (1 + ||x - y||).
double euclid_similarity(std::span<const int> x, std::span<const int> y);

// Kendall's tau-b: (P - Q) / sqrt((P + Q + T) (P + Q + U)) where T and U
// count pairs tied only in x resp. only in y. Throws AllTied on a zero
// denominator.
double kendall_tau(std::span<const int> x, std::span<const int> y);

enum class Measure { Euclid, Tau };

struct StrategyReport {
    std::array<double, 5> scores{};        // indexed by StrategyKind
    std::array<std::size_t, 5> cardinalities{};
    StrategyKind best_kind = StrategyKind::RowByRow;
    bool tie_flag = false;
    Measure measure = Measure::Tau;
};

inline constexpr double kTieTolerance = 1e-9;

// Per kind, the maximum similarity of seq against that kind's sample set;
// best_kind is the argmax, ties broken by the fixed kind order with
// tie_flag set.
StrategyReport classify(const PlacementSequence& seq,
                        std::span<const SampleSet> sets, Measure measure);

// First-placement ranks from a smoothed timeline. Simultaneous placements
// share a rank (competition ranking); later modifications are ignored.
PlacementSequence derive_sequence(const Timeline& timeline);

} // namespace bdt
