#include <benchmark/benchmark.h>

#include "screencode/synth.hpp"
#include "screencode/vision.hpp"

namespace {

using namespace screencode;

FrameSequence sample_sequence() {
    const synth::CorpusSpec spec = synth::make_random_spec(11, 1, 40.0);
    return synth::render_video(synth::plan_video(spec, 0));
}

void BM_FrameDiffScore(benchmark::State& state) {
    const FrameSequence seq = sample_sequence();
    for (auto _ : state) {
        benchmark::DoNotOptimize(vision::frame_diff_score(seq.frames[0], seq.frames[1]));
    }
}
BENCHMARK(BM_FrameDiffScore);

void BM_DetectVerticalShift(benchmark::State& state) {
    const FrameSequence seq = sample_sequence();
    for (auto _ : state) {
        benchmark::DoNotOptimize(vision::detect_vertical_shift(seq.frames[0], seq.frames[1]));
    }
}
BENCHMARK(BM_DetectVerticalShift);

void BM_DetectCursorPerPair(benchmark::State& state) {
    const FrameSequence seq = sample_sequence();
    for (auto _ : state) {
        benchmark::DoNotOptimize(vision::detect_cursor(seq));
    }
    state.SetItemsProcessed(state.iterations() * (seq.size() - 1));
}
BENCHMARK(BM_DetectCursorPerPair);

void BM_DetectKeyframes(benchmark::State& state) {
    const FrameSequence seq = sample_sequence();
    for (auto _ : state) {
        benchmark::DoNotOptimize(vision::detect_keyframes(seq));
    }
}
BENCHMARK(BM_DetectKeyframes);

}  // namespace

BENCHMARK_MAIN();
