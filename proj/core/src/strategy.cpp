#include "bdt/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace bdt {

std::string_view to_string(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::RowByRow: return "r-r";
        case StrategyKind::ColByCol: return "c-c";
        case StrategyKind::SubSection: return "s-s";
        case StrategyKind::PerimeterComplete: return "p-c";
        case StrategyKind::VerticesFirst: return "v-f";
    }
    return "r-r";
}

StrategyKind strategy_from_string(std::string_view text) {
    for (StrategyKind k : kAllStrategies)
        if (to_string(k) == text) return k;
    throw ParseError("unknown strategy kind: " + std::string(text));
}

namespace {

std::vector<std::vector<int>> permutations(int m) {
    std::vector<int> base(m);
    std::iota(base.begin(), base.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(base);
    } while (std::next_permutation(base.begin(), base.end()));
    return out;
}

using RankVec = std::vector<int>;

void assign(RankVec& ranks, int n, int row, int col, int rank) {
    ranks[row * n + col] = rank;
}

std::vector<CellPos> perimeter_cells(int n) {
    std::vector<CellPos> cells;
    for (int c = 0; c < n; ++c) cells.push_back({0, c});
    for (int r = 1; r < n; ++r) cells.push_back({r, n - 1});
    for (int c = n - 2; c >= 0; --c) cells.push_back({n - 1, c});
    for (int r = n - 2; r >= 1; --r) cells.push_back({r, 0});
    return cells;
}

std::vector<RankVec> gen_row_by_row(int n, bool transpose) {
    std::vector<RankVec> out;
    for (const auto& row_order : permutations(n)) {
        for (const auto& col_order : permutations(n)) {
            RankVec ranks(n * n);
            int rank = 1;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const int r = transpose ? col_order[j] : row_order[i];
                    const int c = transpose ? row_order[i] : col_order[j];
                    assign(ranks, n, r, c, rank++);
                }
            out.push_back(std::move(ranks));
        }
    }
    return out;
}

std::vector<RankVec> gen_sub_section(int n) {
    if (n != 4) throw UnsupportedSpec("sub-section sample sets need a 4x4 grid");
    // Four 2x2 sections in TL, TR, BL, BR order; the same within-section
    // cell order applies to every section.
    const CellPos section_origin[4] = {{0, 0}, {0, 2}, {2, 0}, {2, 2}};
    const CellPos cell_offset[4] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    std::vector<RankVec> out;
    for (const auto& section_order : permutations(4)) {
        for (const auto& cell_order : permutations(4)) {
            RankVec ranks(n * n);
            int rank = 1;
            for (int i = 0; i < 4; ++i) {
                const CellPos o = section_origin[section_order[i]];
                for (int j = 0; j < 4; ++j) {
                    const CellPos d = cell_offset[cell_order[j]];
                    assign(ranks, n, o.row + d.row, o.col + d.col, rank++);
                }
            }
            out.push_back(std::move(ranks));
        }
    }
    return out;
}

std::vector<RankVec> gen_perimeter_complete(int n) {
    const std::vector<CellPos> perimeter = perimeter_cells(n);
    const int p = static_cast<int>(perimeter.size());
    std::vector<CellPos> inner;
    for (int r = 1; r < n - 1; ++r)
        for (int c = 1; c < n - 1; ++c) inner.push_back({r, c});
    const auto inner_orders = permutations(static_cast<int>(inner.size()));
    std::vector<RankVec> out;
    for (int start = 0; start < p; ++start) {
        for (int dir : {1, -1}) {
            for (const auto& inner_order : inner_orders) {
                RankVec ranks(n * n);
                for (int i = 0; i < p; ++i) {
                    const CellPos cell = perimeter[((start + dir * i) % p + p) % p];
                    assign(ranks, n, cell.row, cell.col, i + 1);
                }
                for (std::size_t j = 0; j < inner.size(); ++j) {
                    const CellPos cell = inner[inner_order[j]];
                    assign(ranks, n, cell.row, cell.col, p + static_cast<int>(j) + 1);
                }
                out.push_back(std::move(ranks));
            }
        }
    }
    return out;
}

std::vector<RankVec> gen_vertices_first(int n) {
    const CellPos corners[4] = {{0, 0}, {0, n - 1}, {n - 1, 0}, {n - 1, n - 1}};
    auto is_corner = [&](int r, int c) {
        return (r == 0 || r == n - 1) && (c == 0 || c == n - 1);
    };
    std::vector<RankVec> out;
    for (const auto& corner_order : permutations(4)) {
        for (const auto& row_order : permutations(n)) {
            RankVec ranks(n * n);
            int rank = 1;
            for (int i = 0; i < 4; ++i) {
                const CellPos cell = corners[corner_order[i]];
                assign(ranks, n, cell.row, cell.col, rank++);
            }
            // Remaining cells row-by-row, left to right, corners skipped.
            for (int i = 0; i < n; ++i) {
                const int r = row_order[i];
                for (int c = 0; c < n; ++c) {
                    if (is_corner(r, c)) continue;
                    assign(ranks, n, r, c, rank++);
                }
            }
            out.push_back(std::move(ranks));
        }
    }
    return out;
}

} // namespace

SampleSet generate_sample_set(StrategyKind kind, const GridSpec& spec) {
    const int n = spec.n;
    if (n != 3 && n != 4)
        throw UnsupportedSpec("sample sets are defined for 3x3 and 4x4 grids");
    std::vector<RankVec> sequences;
    switch (kind) {
        case StrategyKind::RowByRow: sequences = gen_row_by_row(n, false); break;
        case StrategyKind::ColByCol: sequences = gen_row_by_row(n, true); break;
        case StrategyKind::SubSection: sequences = gen_sub_section(n); break;
        case StrategyKind::PerimeterComplete: sequences = gen_perimeter_complete(n); break;
        case StrategyKind::VerticesFirst: sequences = gen_vertices_first(n); break;
    }
    std::sort(sequences.begin(), sequences.end());
    sequences.erase(std::unique(sequences.begin(), sequences.end()), sequences.end());
    return SampleSet{kind, spec, std::move(sequences)};
}

double euclid_similarity(std::span<const int> x, std::span<const int> y) {
    if (x.size() != y.size()) throw LengthMismatch("rank lists differ in length");
    double sum = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = static_cast<double>(x[i]) - static_cast<double>(y[i]);
        sum += d * d;
    }
    return 1.0 / (1.0 + std::sqrt(sum));
}

double kendall_tau(std::span<const int> x, std::span<const int> y) {
    if (x.size() != y.size()) throw LengthMismatch("rank lists differ in length");
    const std::size_t m = x.size();
    long long concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const int dx = x[i] - x[j];
            const int dy = y[i] - y[j];
            if (dx == 0 && dy == 0) continue; // tied in both: excluded
            if (dx == 0) ++ties_x;
            else if (dy == 0) ++ties_y;
            else if ((dx > 0) == (dy > 0)) ++concordant;
            else ++discordant;
        }
    }
    const double denom =
        std::sqrt(static_cast<double>(concordant + discordant + ties_x) *
                  static_cast<double>(concordant + discordant + ties_y));
    if (denom == 0) throw AllTied("tau undefined: all pairs tied");
    return static_cast<double>(concordant - discordant) / denom;
}

StrategyReport classify(const PlacementSequence& seq,
                        std::span<const SampleSet> sets, Measure measure) {
    const std::vector<int> ranks = rank_vector(seq); // throws IncompleteSequence
    StrategyReport report;
    report.measure = measure;
    report.scores.fill(-2.0); // below any similarity; marks kinds with no set
    for (const SampleSet& set : sets) {
        double best = -2.0;
        for (const RankVec& sample : set.sequences) {
            const double score = measure == Measure::Tau ? kendall_tau(ranks, sample)
                                                         : euclid_similarity(ranks, sample);
            best = std::max(best, score);
        }
        const std::size_t idx = static_cast<std::size_t>(set.kind);
        report.scores[idx] = best;
        report.cardinalities[idx] = set.sequences.size();
    }
    std::size_t best_idx = report.scores.size();
    for (std::size_t i = 0; i < report.scores.size(); ++i) {
        if (report.cardinalities[i] == 0) continue;
        if (best_idx == report.scores.size() || report.scores[i] > report.scores[best_idx])
            best_idx = i;
    }
    if (best_idx == report.scores.size()) throw UnsupportedSpec("no sample sets to classify against");
    report.best_kind = static_cast<StrategyKind>(best_idx);
    for (std::size_t i = 0; i < report.scores.size(); ++i)
        if (i != best_idx && report.cardinalities[i] > 0 &&
            std::fabs(report.scores[i] - report.scores[best_idx]) < kTieTolerance)
            report.tie_flag = true;
    return report;
}

PlacementSequence derive_sequence(const Timeline& timeline) {
    const int cells = timeline.spec.cell_count();
    std::vector<int> first_frame(cells, -1);
    for (const GridState& state : timeline.states) {
        for (int c = 0; c < cells; ++c) {
            if (first_frame[c] >= 0) continue;
            if (is_placed_face(state.faces[c])) first_frame[c] = state.frame_index;
        }
    }
    std::vector<int> placed;
    for (int c = 0; c < cells; ++c)
        if (first_frame[c] >= 0) placed.push_back(c);
    std::sort(placed.begin(), placed.end(),
              [&](int a, int b) { return first_frame[a] < first_frame[b]; });

    PlacementSequence seq;
    seq.spec = timeline.spec;
    seq.ranks.assign(cells, std::nullopt);
    for (std::size_t i = 0; i < placed.size(); ++i) {
        // Competition ranking: a tie shares the rank of its first member.
        if (i > 0 && first_frame[placed[i]] == first_frame[placed[i - 1]])
            seq.ranks[placed[i]] = *seq.ranks[placed[i - 1]];
        else
            seq.ranks[placed[i]] = static_cast<int>(i) + 1;
    }
    return seq;
}

} // namespace bdt
