#include <benchmark/benchmark.h>

#include "eqlab/metrics.hpp"

using namespace eqlab;

namespace {

void BM_moran_permutation(benchmark::State& state) {
    std::size_t side = static_cast<std::size_t>(state.range(0));
    auto weights = rook_weights(side, side);
    Rng rng(4);
    std::vector<double> values(side * side);
    for (auto& v : values) v = rng.normal();
    for (auto _ : state) {
        Rng perm_rng(7);
        benchmark::DoNotOptimize(
            moran_permutation_test(values, weights, static_cast<int>(state.range(1)), perm_rng));
    }
}

void BM_spearman(benchmark::State& state) {
    Rng rng(12);
    std::size_t n = static_cast<std::size_t>(state.range(0));
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = rng.normal();
        b[i] = a[i] + rng.normal();
    }
    for (auto _ : state) benchmark::DoNotOptimize(spearman_from_values(a, b));
}

}  // namespace

BENCHMARK(BM_moran_permutation)->Args({21, 99})->Args({41, 999});
BENCHMARK(BM_spearman)->Arg(1681);

BENCHMARK_MAIN();
