#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "bdt/rng.hpp"
#include "bdt/strategy.hpp"
#include "helpers.hpp"

using namespace bdt;
using bdt::testing::timeline_from_tracks;

namespace {

PlacementSequence seq_from_ranks(int n, std::vector<int> ranks) {
    PlacementSequence seq;
    seq.spec.n = n;
    for (int r : ranks) seq.ranks.push_back(r);
    return seq;
}

// Tau-b oracle through the tie-group formulation:
// tau = (C - D) / sqrt((n0 - n1)(n0 - n2)) with n0 = m(m-1)/2 and n1, n2
// the tied-pair counts within x and y. Algebraically equivalent to the
// pair-class formula but computed along a different route.
double tau_oracle(const std::vector<int>& x, const std::vector<int>& y) {
    const std::size_t m = x.size();
    long long concordant = 0, discordant = 0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const long long s =
                static_cast<long long>(x[i] - x[j]) * static_cast<long long>(y[i] - y[j]);
            if (s > 0) ++concordant;
            else if (s < 0) ++discordant;
        }
    }
    const auto tied_pairs = [m](const std::vector<int>& v) {
        long long total = 0;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j)
                if (v[i] == v[j]) ++total;
        return total;
    };
    const long long n0 = static_cast<long long>(m) * (m - 1) / 2;
    const long long n1 = tied_pairs(x), n2 = tied_pairs(y);
    const double denom = std::sqrt(static_cast<double>(n0 - n1)) *
                         std::sqrt(static_cast<double>(n0 - n2));
    return (concordant - discordant) / denom;
}

} // namespace

TEST_CASE("derive_sequence") {
    using F = BlockFace;
    const GridSpec spec{2, 30, 64, 64};

    SUBCASE("ranks follow first-placement order") {
        // Cells placed at frames 1, 2, 3; one never placed.
        const Timeline t = timeline_from_tracks(
            spec, {{F::Empty, F::Red, F::Red, F::Red},
                   {F::Empty, F::Empty, F::White, F::White},
                   {F::Empty, F::Empty, F::Empty, F::NE},
                   {F::Empty, F::Empty, F::Empty, F::Empty}});
        const PlacementSequence seq = derive_sequence(t);
        CHECK(*seq.ranks[0] == 1);
        CHECK(*seq.ranks[1] == 2);
        CHECK(*seq.ranks[2] == 3);
        CHECK(!seq.ranks[3].has_value());
    }
    SUBCASE("simultaneous placements share a rank and the next rank skips") {
        const Timeline t = timeline_from_tracks(
            spec, {{F::Empty, F::Red, F::Red},
                   {F::Empty, F::White, F::White},
                   {F::Empty, F::Empty, F::NE},
                   {F::NW, F::NW, F::NW}});
        const PlacementSequence seq = derive_sequence(t);
        CHECK(*seq.ranks[3] == 1);           // placed at frame 0
        CHECK(*seq.ranks[0] == 2);
        CHECK(*seq.ranks[1] == 2);           // tie at frame 1
        CHECK(*seq.ranks[2] == 4);           // competition ranking skips 3
    }
    SUBCASE("re-placement after removal keeps the first rank") {
        const Timeline t = timeline_from_tracks(
            spec, {{F::Red, F::Empty, F::Empty, F::Red},
                   {F::Empty, F::White, F::White, F::White},
                   {F::Empty, F::Empty, F::NE, F::NE},
                   {F::Empty, F::Empty, F::Empty, F::SE}});
        const PlacementSequence seq = derive_sequence(t);
        CHECK(*seq.ranks[0] == 1); // first placed at frame 0, despite removal
    }
    SUBCASE("Invalid frames do not count as placement") {
        const Timeline t = timeline_from_tracks(
            spec, {{F::Invalid, F::Red},
                   {F::Empty, F::Empty},
                   {F::Empty, F::Empty},
                   {F::Empty, F::Empty}});
        const PlacementSequence seq = derive_sequence(t);
        CHECK(*seq.ranks[0] == 1);
        CHECK(derive_sequence(t).ranks[1] == std::nullopt);
    }
}

TEST_CASE("sample sets") {
    const GridSpec spec4{4, 30, 640, 480};

    SUBCASE("4x4 cardinalities are exactly 576 unique valid permutations") {
        for (StrategyKind kind : kAllStrategies) {
            const SampleSet set = generate_sample_set(kind, spec4);
            CHECK(set.sequences.size() == 576);
            std::set<std::vector<int>> unique(set.sequences.begin(), set.sequences.end());
            CHECK(unique.size() == 576);
            for (const auto& s : set.sequences) {
                std::vector<int> sorted = s;
                std::sort(sorted.begin(), sorted.end());
                std::vector<int> expected(16);
                std::iota(expected.begin(), expected.end(), 1);
                CHECK(sorted == expected);
            }
        }
    }
    SUBCASE("row-by-row contains the row-major identity") {
        const SampleSet set = generate_sample_set(StrategyKind::RowByRow, spec4);
        std::vector<int> identity(16);
        std::iota(identity.begin(), identity.end(), 1);
        CHECK(std::find(set.sequences.begin(), set.sequences.end(), identity) !=
              set.sequences.end());
    }
    SUBCASE("perimeter-complete ranks the perimeter 1-12 and the inner cells 13-16") {
        const SampleSet set = generate_sample_set(StrategyKind::PerimeterComplete, spec4);
        for (const auto& s : set.sequences) {
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c) {
                    const bool inner = r >= 1 && r <= 2 && c >= 1 && c <= 2;
                    if (inner) CHECK(s[r * 4 + c] >= 13);
                    else CHECK(s[r * 4 + c] <= 12);
                }
        }
    }
    SUBCASE("vertices-first ranks the corners 1-4") {
        const SampleSet set = generate_sample_set(StrategyKind::VerticesFirst, spec4);
        for (const auto& s : set.sequences) {
            CHECK(s[0] <= 4);
            CHECK(s[3] <= 4);
            CHECK(s[12] <= 4);
            CHECK(s[15] <= 4);
        }
    }
    SUBCASE("3x3 grids") {
        const GridSpec spec3{3, 30, 640, 480};
        CHECK(generate_sample_set(StrategyKind::RowByRow, spec3).sequences.size() == 36);
        CHECK(generate_sample_set(StrategyKind::ColByCol, spec3).sequences.size() == 36);
        CHECK(generate_sample_set(StrategyKind::PerimeterComplete, spec3).sequences.size() == 16);
        CHECK(generate_sample_set(StrategyKind::VerticesFirst, spec3).sequences.size() == 144);
        CHECK_THROWS_AS(generate_sample_set(StrategyKind::SubSection, spec3), UnsupportedSpec);
    }
}

TEST_CASE("euclid_similarity") {
    const std::vector<int> a{1, 2, 3, 4};
    CHECK(euclid_similarity(a, a) == 1.0);
    CHECK(euclid_similarity(std::vector<int>{0, 0}, std::vector<int>{3, 4}) ==
          doctest::Approx(1.0 / 6.0));
    const std::vector<int> b{1, 2, 3};
    CHECK_THROWS_AS(euclid_similarity(a, b), LengthMismatch);
}

TEST_CASE("kendall_tau endpoints and the spec example") {
    const std::vector<int> up{1, 2, 3, 4};
    const std::vector<int> down{4, 3, 2, 1};
    CHECK(kendall_tau(up, up) == 1.0);
    CHECK(kendall_tau(up, down) == -1.0);
    CHECK(kendall_tau(up, std::vector<int>{1, 2, 4, 3}) == doctest::Approx(4.0 / 6.0));
    CHECK_THROWS_AS(kendall_tau(up, std::vector<int>{1, 2, 3}), LengthMismatch);
    CHECK_THROWS_AS(kendall_tau(std::vector<int>{2, 2}, std::vector<int>{1, 1}), AllTied);
}

TEST_CASE("kendall_tau matches the tie-group oracle") {
    SUBCASE("all permutations up to length 5") {
        for (int m = 2; m <= 5; ++m) {
            std::vector<int> x(m), y(m);
            std::iota(x.begin(), x.end(), 1);
            y = x;
            do {
                CHECK(kendall_tau(x, y) == doctest::Approx(tau_oracle(x, y)).epsilon(1e-12));
            } while (std::next_permutation(y.begin(), y.end()));
        }
    }
    SUBCASE("random tied lists") {
        Xorshift64Star rng(2024);
        int checked = 0;
        for (int trial = 0; trial < 1000; ++trial) {
            const int m = 3 + static_cast<int>(rng.next() % 8);
            std::vector<int> x(m), y(m);
            for (int i = 0; i < m; ++i) {
                x[i] = 1 + static_cast<int>(rng.next() % 4);
                y[i] = 1 + static_cast<int>(rng.next() % 4);
            }
            try {
                const double got = kendall_tau(x, y);
                CHECK(got == doctest::Approx(tau_oracle(x, y)).epsilon(1e-12));
                CHECK(got == doctest::Approx(kendall_tau(y, x)).epsilon(1e-12)); // symmetry
                CHECK(got >= -1.0);
                CHECK(got <= 1.0);
                ++checked;
            } catch (const AllTied&) {
                // one list fully tied; oracle denominator is zero too
                CHECK(tau_oracle(x, y) != tau_oracle(x, y)); // NaN
            }
        }
        CHECK(checked > 900);
    }
}

TEST_CASE("tau is invariant under monotone rank relabeling, euclid is not") {
    const std::vector<int> x{1, 2, 3, 4};
    const std::vector<int> y{2, 1, 4, 3};
    std::vector<int> y_scaled;
    for (int v : y) y_scaled.push_back(v * 10);
    CHECK(kendall_tau(x, y) == doctest::Approx(kendall_tau(x, y_scaled)));
    CHECK(euclid_similarity(x, y) != euclid_similarity(x, y_scaled));
}

TEST_CASE("classify") {
    const GridSpec spec{4, 30, 640, 480};
    std::vector<SampleSet> sets;
    for (StrategyKind kind : kAllStrategies) sets.push_back(generate_sample_set(kind, spec));

    SUBCASE("pure row-major sequence classifies as row-by-row with score 1") {
        std::vector<int> identity(16);
        std::iota(identity.begin(), identity.end(), 1);
        const StrategyReport report = classify(seq_from_ranks(4, identity), sets, Measure::Tau);
        CHECK(report.best_kind == StrategyKind::RowByRow);
        CHECK(report.scores[0] == doctest::Approx(1.0));
        CHECK(report.scores[static_cast<int>(StrategyKind::VerticesFirst)] < 1.0);
        CHECK(report.cardinalities[0] == 576);
    }
    SUBCASE("a generated perimeter sample scores exactly 1 on its own kind") {
        const auto& sample = sets[static_cast<int>(StrategyKind::PerimeterComplete)].sequences[77];
        const StrategyReport report = classify(seq_from_ranks(4, sample), sets, Measure::Tau);
        CHECK(report.scores[static_cast<int>(StrategyKind::PerimeterComplete)] == 1.0);
        CHECK(report.best_kind == StrategyKind::PerimeterComplete);
    }
    SUBCASE("score 1.0 for a kind means membership in that sample set") {
        const auto& sub = sets[static_cast<int>(StrategyKind::SubSection)];
        const StrategyReport report =
            classify(seq_from_ranks(4, sub.sequences[0]), sets, Measure::Tau);
        for (StrategyKind kind : kAllStrategies) {
            const auto& set = sets[static_cast<int>(kind)];
            const bool member = std::find(set.sequences.begin(), set.sequences.end(),
                                          sub.sequences[0]) != set.sequences.end();
            if (report.scores[static_cast<int>(kind)] == doctest::Approx(1.0))
                CHECK(member);
            else
                CHECK(!member);
        }
    }
    SUBCASE("incomplete sequences are rejected") {
        PlacementSequence partial = seq_from_ranks(4, std::vector<int>(16, 1));
        partial.ranks[5] = std::nullopt;
        CHECK_THROWS_AS(classify(partial, sets, Measure::Tau), IncompleteSequence);
    }
    SUBCASE("euclid measure stays in (0, 1]") {
        std::vector<int> identity(16);
        std::iota(identity.begin(), identity.end(), 1);
        const StrategyReport report =
            classify(seq_from_ranks(4, identity), sets, Measure::Euclid);
        for (double s : report.scores) {
            CHECK(s > 0.0);
            CHECK(s <= 1.0);
        }
        CHECK(report.best_kind == StrategyKind::RowByRow);
    }
}
