#include <benchmark/benchmark.h>

#include "screencode/metrics.hpp"
#include "screencode/synth.hpp"

namespace {

using namespace screencode;

std::vector<LabelRecord> sample_gold(int n_videos) {
    const synth::CorpusSpec spec = synth::make_random_spec(3, n_videos, 60.0);
    std::vector<LabelRecord> gold;
    for (size_t v = 0; v < spec.videos.size(); ++v) {
        const auto plan = synth::plan_video(spec, v);
        const auto records = synth::gold_for_video(spec, plan);
        gold.insert(gold.end(), records.begin(), records.end());
    }
    return gold;
}

void BM_Evaluate(benchmark::State& state) {
    const auto gold = sample_gold(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(metrics::evaluate(gold, gold));
    }
    state.SetItemsProcessed(state.iterations() * gold.size());
}
BENCHMARK(BM_Evaluate)->Arg(10)->Arg(100);

void BM_HierarchicalHamming(benchmark::State& state) {
    const auto gold = sample_gold(50);
    const auto corpus = metrics::align_by_unit(gold, gold);
    for (auto _ : state) {
        benchmark::DoNotOptimize(metrics::hierarchical_hamming_loss(corpus));
    }
}
BENCHMARK(BM_HierarchicalHamming);

}  // namespace
