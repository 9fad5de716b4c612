#include <doctest.h>

#include <array>
#include <cmath>

#include "bdt/abis.hpp"
#include "bdt/rng.hpp"
#include "helpers.hpp"

using namespace bdt;
using bdt::testing::timeline_from_tracks;

namespace {

RawImage half_and_half(Rgb left, Rgb right) {
    RawImage img = RawImage::filled(8, 8, right);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 4; ++x) img.at(x, y) = left;
    return img;
}

} // namespace

TEST_CASE("classify_quadrant with RGB averaging") {
    const RgbAveraging method{140};
    CHECK(classify_quadrant(RawImage::filled(4, 4, {255, 0, 0}), method) == QuadrantColor::RedQ);
    CHECK(classify_quadrant(RawImage::filled(4, 4, {230, 230, 230}), method) ==
          QuadrantColor::WhiteQ);
    CHECK(classify_quadrant(RawImage::filled(4, 4, {40, 200, 60}), method) ==
          QuadrantColor::GreenQ);
    CHECK(classify_quadrant(RawImage::filled(4, 4, {30, 60, 180}), method) ==
          QuadrantColor::OtherQ);
    // Half red / half white averages to (255, 127.5, 127.5) -> RedQ.
    CHECK(classify_quadrant(half_and_half({255, 0, 0}, {255, 255, 255}), method) ==
          QuadrantColor::RedQ);
    CHECK_THROWS_AS(classify_quadrant(RawImage{}, method), EmptyQuadrant);
}

TEST_CASE("kmeans k=1 decision equals rgb averaging") {
    Xorshift64Star rng(321);
    for (int trial = 0; trial < 500; ++trial) {
        RawImage quad{6, 6, {}};
        quad.pixels.resize(36);
        for (Rgb& p : quad.pixels)
            p = {static_cast<std::uint8_t>(rng.next() & 0xff),
                 static_cast<std::uint8_t>(rng.next() & 0xff),
                 static_cast<std::uint8_t>(rng.next() & 0xff)};
        CHECK(classify_quadrant(quad, KMeansMethod{1, 140}) ==
              classify_quadrant(quad, RgbAveraging{140}));
    }
}

TEST_CASE("kmeans k=4 finds the dominant color of a mixed quadrant") {
    // 3/4 red, 1/4 white: dominant cluster centroid must classify red.
    RawImage quad = RawImage::filled(8, 8, {200, 30, 30});
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) quad.at(x, y) = {230, 230, 230};
    CHECK(classify_quadrant(quad, KMeansMethod{4, 140}) == QuadrantColor::RedQ);
}

TEST_CASE("knn classifies the palette colors and never yields OtherQ") {
    const KnnMethod method{3, 8, default_knn_training(8)};
    CHECK(classify_quadrant(RawImage::filled(4, 4, {200, 30, 30}), method) ==
          QuadrantColor::RedQ);
    CHECK(classify_quadrant(RawImage::filled(4, 4, {230, 230, 230}), method) ==
          QuadrantColor::WhiteQ);
    CHECK(classify_quadrant(RawImage::filled(4, 4, {40, 140, 60}), method) ==
          QuadrantColor::GreenQ);
    // An off-palette color still maps to one of the three trained colors.
    const QuadrantColor c = classify_quadrant(RawImage::filled(4, 4, {10, 10, 90}), method);
    CHECK(c != QuadrantColor::OtherQ);
}

namespace {

// Independent truth table, written as a direct enumeration of the rules.
BlockFace oracle_face(QuadrantColor q1, QuadrantColor q2, QuadrantColor q3, QuadrantColor q4) {
    using QC = QuadrantColor;
    const std::array<QC, 4> q{q1, q2, q3, q4};
    if (q == std::array<QC, 4>{QC::GreenQ, QC::GreenQ, QC::GreenQ, QC::GreenQ})
        return BlockFace::Empty;
    if (q == std::array<QC, 4>{QC::RedQ, QC::RedQ, QC::RedQ, QC::RedQ}) return BlockFace::Red;
    if (q == std::array<QC, 4>{QC::WhiteQ, QC::WhiteQ, QC::WhiteQ, QC::WhiteQ})
        return BlockFace::White;
    std::vector<BlockFace> fired;
    if (q2 == QC::RedQ && q3 == QC::WhiteQ) fired.push_back(BlockFace::NE);
    if (q3 == QC::RedQ && q2 == QC::WhiteQ) fired.push_back(BlockFace::SW);
    if (q1 == QC::RedQ && q4 == QC::WhiteQ) fired.push_back(BlockFace::NW);
    if (q4 == QC::RedQ && q1 == QC::WhiteQ) fired.push_back(BlockFace::SE);
    return fired.size() == 1 ? fired.front() : BlockFace::Invalid;
}

} // namespace

TEST_CASE("face_from_quadrants matches the oracle over all 256 combinations") {
    const QuadrantColor all[] = {QuadrantColor::RedQ, QuadrantColor::WhiteQ,
                                 QuadrantColor::GreenQ, QuadrantColor::OtherQ};
    int non_trivial = 0;
    for (QuadrantColor q1 : all)
        for (QuadrantColor q2 : all)
            for (QuadrantColor q3 : all)
                for (QuadrantColor q4 : all) {
                    const BlockFace got = face_from_quadrants(q1, q2, q3, q4);
                    CHECK(got == oracle_face(q1, q2, q3, q4));
                    if (got != BlockFace::Invalid && got != BlockFace::Empty) ++non_trivial;
                }
    // 2 uniform block faces plus the single-pattern diagonal cases.
    CHECK(non_trivial > 2);
}

TEST_CASE("face_from_quadrants examples") {
    using QC = QuadrantColor;
    CHECK(face_from_quadrants(QC::GreenQ, QC::GreenQ, QC::GreenQ, QC::GreenQ) ==
          BlockFace::Empty);
    CHECK(face_from_quadrants(QC::RedQ, QC::RedQ, QC::WhiteQ, QC::RedQ) == BlockFace::NE);
    CHECK(face_from_quadrants(QC::RedQ, QC::RedQ, QC::WhiteQ, QC::WhiteQ) == BlockFace::Invalid);
    CHECK(face_from_quadrants(QC::WhiteQ, QC::RedQ, QC::WhiteQ, QC::RedQ) == BlockFace::Invalid);
}

namespace {

// Rasterization oracle for IoB.
double iob_oracle(const HandBoxes& boxes, const PixelBox& grid) {
    long long covered = 0;
    for (int y = grid.y0; y < grid.y1; ++y) {
        for (int x = grid.x0; x < grid.x1; ++x) {
            for (const auto& b : boxes.boxes) {
                if (x >= b[0] && x < b[2] && y >= b[1] && y < b[3]) {
                    ++covered;
                    break;
                }
            }
        }
    }
    return static_cast<double>(covered) / static_cast<double>(grid.area());
}

} // namespace

TEST_CASE("iob") {
    const PixelBox grid{10, 10, 50, 50};

    SUBCASE("no boxes") {
        CHECK(iob(HandBoxes{0, {}}, grid) == 0.0);
    }
    SUBCASE("full cover") {
        CHECK(iob(HandBoxes{0, {{0, 0, 100, 100}}}, grid) == doctest::Approx(1.0));
    }
    SUBCASE("two identical half-covering boxes count once") {
        const HandBoxes boxes{0, {{10, 10, 50, 30}, {10, 10, 50, 30}}};
        CHECK(iob(boxes, grid) == doctest::Approx(0.5));
        CHECK(iob(boxes, grid) == doctest::Approx(iob_oracle(boxes, grid)));
    }
    SUBCASE("matches the rasterization oracle on random boxes and is monotone") {
        Xorshift64Star rng(5);
        for (int trial = 0; trial < 200; ++trial) {
            HandBoxes boxes{0, {}};
            double prev = 0;
            for (int b = 0; b < 4; ++b) {
                const int x0 = static_cast<int>(rng.next() % 60);
                const int y0 = static_cast<int>(rng.next() % 60);
                const int x1 = x0 + 1 + static_cast<int>(rng.next() % 40);
                const int y1 = y0 + 1 + static_cast<int>(rng.next() % 40);
                boxes.boxes.push_back({x0, y0, x1, y1});
                const double value = iob(boxes, grid);
                CHECK(value == doctest::Approx(iob_oracle(boxes, grid)).epsilon(1e-12));
                CHECK(value >= prev); // adding a box never decreases coverage
                CHECK(value >= 0.0);
                CHECK(value <= 1.0);
                prev = value;
            }
        }
    }
}

TEST_CASE("filter_occlusions") {
    const GridSpec spec{1, 30, 64, 64};
    // Single-cell timeline: Empty, then Red from frame 3.
    std::vector<BlockFace> track(10, BlockFace::Empty);
    for (int t = 3; t < 10; ++t) track[t] = BlockFace::Red;
    const Timeline timeline = timeline_from_tracks(spec, {track});
    const PixelBox grid{0, 0, 10, 10};

    SUBCASE("no hands: identity") {
        const Timeline out = filter_occlusions(timeline, {}, grid, 0.3);
        for (std::size_t i = 0; i < out.states.size(); ++i)
            CHECK(out.states[i].faces == timeline.states[i].faces);
    }
    SUBCASE("occluded frames carry the last clear state forward") {
        std::vector<HandBoxes> hands;
        for (int t = 5; t <= 9; ++t) hands.push_back({t, {{0, 0, 10, 10}}});
        // Also corrupt the occluded frames to prove they get replaced.
        Timeline corrupted = timeline;
        for (int t = 5; t <= 9; ++t) corrupted.states[t].faces[0] = BlockFace::Invalid;
        const Timeline out = filter_occlusions(corrupted, hands, grid, 0.3);
        for (int t = 5; t <= 9; ++t) CHECK(out.states[t].faces[0] == BlockFace::Red);
        CHECK(out.states[4].faces[0] == BlockFace::Red);
    }
    SUBCASE("frame 0 passes through even when occluded") {
        const std::vector<HandBoxes> hands = {{0, {{0, 0, 10, 10}}}};
        Timeline corrupted = timeline;
        corrupted.states[0].faces[0] = BlockFace::Invalid;
        const Timeline out = filter_occlusions(corrupted, hands, grid, 0.3);
        CHECK(out.states[0].faces[0] == BlockFace::Invalid);
    }
    SUBCASE("iob below threshold leaves the frame alone") {
        const std::vector<HandBoxes> hands = {{4, {{0, 0, 1, 1}}}}; // iob = 0.01
        const Timeline out = filter_occlusions(timeline, hands, grid, 0.3);
        CHECK(out.states[4].faces == timeline.states[4].faces);
    }
}

TEST_CASE("filter_motion_intervals") {
    const GridSpec spec{1, 30, 64, 64};
    const Timeline timeline =
        timeline_from_tracks(spec, {std::vector<BlockFace>(100, BlockFace::Red)});

    SUBCASE("no intervals keeps every frame") {
        const Timeline out = filter_motion_intervals(timeline, {});
        CHECK(out.states.size() == 100);
        CHECK(out.sparse);
    }
    SUBCASE("interval covering everything empties the timeline") {
        const std::vector<std::pair<int, int>> all = {{0, 99}};
        CHECK(filter_motion_intervals(timeline, all).states.empty());
    }
    SUBCASE("removing 80 of 100 frames leaves 20") {
        const std::vector<std::pair<int, int>> intervals = {{0, 39}, {50, 89}};
        const Timeline out = filter_motion_intervals(timeline, intervals);
        CHECK(out.states.size() == 20);
    }
}

TEST_CASE("smooth") {
    const GridSpec spec{1, 30, 64, 64};
    using F = BlockFace;

    SUBCASE("invalid run between identical labels is rewritten") {
        const Timeline t = timeline_from_tracks(spec, {{F::Red, F::Invalid, F::Invalid, F::Red}});
        const Timeline out = smooth(t);
        for (const GridState& s : out.states) CHECK(s.faces[0] == F::Red);
    }
    SUBCASE("differing bounds left untouched") {
        const Timeline t = timeline_from_tracks(spec, {{F::Red, F::Invalid, F::White}});
        const Timeline out = smooth(t);
        CHECK(out.states[1].faces[0] == F::Invalid);
    }
    SUBCASE("edge run left untouched") {
        const Timeline t = timeline_from_tracks(spec, {{F::Invalid, F::Red, F::Red}});
        CHECK(smooth(t).states[0].faces[0] == F::Invalid);
    }
    SUBCASE("idempotent and label-conservative on random timelines") {
        Xorshift64Star rng(11);
        const GridSpec spec2{2, 30, 64, 64};
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<std::vector<F>> tracks(4);
            for (auto& track : tracks)
                for (int t = 0; t < 12; ++t)
                    track.push_back(static_cast<F>(rng.next() % kFaceCount));
            const Timeline t = timeline_from_tracks(spec2, tracks);
            const Timeline once = smooth(t);
            const Timeline twice = smooth(once);
            for (std::size_t i = 0; i < once.states.size(); ++i) {
                CHECK(once.states[i].faces == twice.states[i].faces);
                for (int c = 0; c < 4; ++c)
                    if (t.states[i].faces[c] != F::Invalid)
                        CHECK(once.states[i].faces[c] == t.states[i].faces[c]);
            }
        }
    }
}

TEST_CASE("evaluate_accuracy") {
    const GridSpec spec{3, 30, 64, 64};
    std::vector<std::vector<BlockFace>> tracks(9, std::vector<BlockFace>(10, BlockFace::Red));
    const Timeline truth = timeline_from_tracks(spec, tracks);

    SUBCASE("identical timelines score 1") {
        CHECK(evaluate_accuracy(truth, truth) == 1.0);
    }
    SUBCASE("one wrong cell in one of ten frames") {
        Timeline detected = truth;
        detected.states[7].faces[4] = BlockFace::White;
        CHECK(evaluate_accuracy(detected, truth) == doctest::Approx(1.0 - 1.0 / 90.0));
    }
    SUBCASE("disjoint frames are a spec mismatch") {
        Timeline detected = truth;
        detected.states[0].frame_index = 1000;
        CHECK_THROWS_AS(evaluate_accuracy(detected, truth), SpecMismatch);
    }
    SUBCASE("different grid size is a spec mismatch") {
        Timeline detected = truth;
        detected.spec.n = 4;
        CHECK_THROWS_AS(evaluate_accuracy(detected, truth), SpecMismatch);
    }
}
