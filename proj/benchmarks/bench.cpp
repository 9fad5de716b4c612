#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "bdt/abis.hpp"
#include "bdt/simulate.hpp"
#include "bdt/strategy.hpp"

using namespace bdt;

namespace {

TrialScript demo_script(int frames) {
    TrialScript script;
    script.spec = GridSpec{4, 30, 640, 480};
    script.geometry = desk_preset(script.spec);
    script.frame_count = frames;
    const BlockFace cycle[] = {BlockFace::Red, BlockFace::White, BlockFace::NE, BlockFace::SW};
    for (int i = 0; i < 16; i += 2) // leave every other cell green
        script.events.push_back({0, {i / 4, i % 4}, cycle[i % 4]});
    return script;
}

void bm_render_frame(benchmark::State& state) {
    TrialScript script = demo_script(1);
    script.noise_sigma = state.range(0);
    for (auto _ : state) benchmark::DoNotOptimize(render_frame(script, 0));
}
BENCHMARK(bm_render_frame)->Arg(0)->Arg(6);

void bm_locate_construction_area(benchmark::State& state) {
    const RawImage frame = render_frame(demo_script(1), 0);
    for (auto _ : state) benchmark::DoNotOptimize(locate_construction_area(frame));
}
BENCHMARK(bm_locate_construction_area);

void bm_detect_frame(benchmark::State& state) {
    const TrialScript script = demo_script(1);
    const RawImage frame = render_frame(script, 0);
    const ConstructionArea area = locate_construction_area(frame);
    const ColorMethod method =
        state.range(0) == 0 ? ColorMethod{RgbAveraging{140}} : ColorMethod{KMeansMethod{4, 140}};
    for (auto _ : state)
        benchmark::DoNotOptimize(detect_frame(frame, area, script.spec, method));
}
BENCHMARK(bm_detect_frame)->Arg(0)->Arg(1); // 0: rgb averaging, 1: k-means

void bm_generate_sample_set(benchmark::State& state) {
    const GridSpec spec{4, 30, 640, 480};
    const auto kind = static_cast<StrategyKind>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(generate_sample_set(kind, spec));
}
BENCHMARK(bm_generate_sample_set)->DenseRange(0, 4);

void bm_classify(benchmark::State& state) {
    const GridSpec spec{4, 30, 640, 480};
    std::vector<SampleSet> sets;
    for (StrategyKind kind : kAllStrategies) sets.push_back(generate_sample_set(kind, spec));
    PlacementSequence seq;
    seq.spec = spec;
    for (int i = 0; i < 16; ++i) seq.ranks.push_back(i + 1);
    const Measure measure = state.range(0) == 0 ? Measure::Tau : Measure::Euclid;
    for (auto _ : state) benchmark::DoNotOptimize(classify(seq, sets, measure));
}
BENCHMARK(bm_classify)->Arg(0)->Arg(1); // 0: tau, 1: euclid

void bm_kendall_tau(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::vector<int> x(n), y(n);
    std::iota(x.begin(), x.end(), 1);
    for (int i = 0; i < n; ++i) y[i] = (i * 7 + 3) % n + 1;
    for (auto _ : state) benchmark::DoNotOptimize(kendall_tau(x, y));
}
BENCHMARK(bm_kendall_tau)->Arg(16)->Arg(64)->Arg(256);

} // namespace

BENCHMARK_MAIN();
