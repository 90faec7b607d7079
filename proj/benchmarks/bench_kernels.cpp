#include <benchmark/benchmark.h>

#include "xyz/pair_search.hpp"
#include "xyz/projection.hpp"
#include "xyz/rng.hpp"
#include "xyz/search.hpp"
#include "xyz/synthetic.hpp"
#include "xyz/transforms.hpp"

using namespace xyz;

namespace {

void BM_BuildZ(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const std::size_t p = 4096;
    std::mt19937_64 rng = make_stream(1, 0);
    const PackedMatrix x = rademacher_matrix(n, p, rng);
    std::vector<std::int8_t> y(n);
    for (auto& v : y) v = (rng() & 1u) ? 1 : -1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_z(x, y));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * p));
}
BENCHMARK(BM_BuildZ)->Arg(256)->Arg(1024)->Arg(4096);

void BM_InteractionStrength(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng = make_stream(2, 0);
    const PackedMatrix x = rademacher_matrix(n, 64, rng);
    std::vector<std::int8_t> y(n);
    for (auto& v : y) v = (rng() & 1u) ? 1 : -1;
    const PackedMatrix z = build_z(x, y);
    std::size_t j = 0, k = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(interaction_strength(x, z, j, k));
        j = (j + 1) & 63;
        k = (k + 5) & 63;
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_InteractionStrength)->Arg(1024)->Arg(16384)->Arg(131072);

void BM_ProjectKeys(benchmark::State& state) {
    const auto p = static_cast<std::size_t>(state.range(0));
    const std::size_t n = 1024, m = 16;
    std::mt19937_64 rng = make_stream(3, 0);
    const PackedMatrix x = rademacher_matrix(n, p, rng);
    for (auto _ : state) {
        state.PauseTiming();
        const SubsampleDraw draw = draw_subsample(n, m, nullptr, rng);
        state.ResumeTiming();
        benchmark::DoNotOptimize(project_keys(x, draw));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m * p));
}
BENCHMARK(BM_ProjectKeys)->Arg(1024)->Arg(16384)->Arg(65536);

void BM_EqualPairs(benchmark::State& state) {
    const auto p = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng = make_stream(4, 0);
    // 8-bit keys so collisions actually occur
    std::vector<ProjectionKey> xk(p), zk(p);
    for (std::uint32_t i = 0; i < p; ++i) {
        xk[i] = {i, rng() & 0xff};
        zk[i] = {i, rng() & 0xff};
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(equal_pairs(xk, zk));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p));
}
BENCHMARK(BM_EqualPairs)->Arg(1024)->Arg(16384)->Arg(65536);

void BM_SearchRepetition(benchmark::State& state) {
    const auto p = static_cast<std::size_t>(state.range(0));
    const std::size_t n = 1000;
    const PlantedBinaryInstance inst = planted_binary_instance(n, p, 0.9, 5);
    SearchConfig cfg;
    cfg.mode = SearchMode::binary;
    cfg.m = static_cast<std::size_t>(std::log(double(p)) / std::log(1.0 / 0.55));
    cfg.l = 1;
    cfg.gamma = 0.9;
    cfg.search_negatives = false;
    cfg.estimate_complexity = false;
    cfg.threads = 1;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        cfg.seed = ++seed;
        benchmark::DoNotOptimize(
            xyz_search(inst.x, std::span<const std::int8_t>(inst.y), cfg));
    }
}
BENCHMARK(BM_SearchRepetition)->Arg(1000)->Arg(4000)->Arg(16000);

} // namespace

BENCHMARK_MAIN();
