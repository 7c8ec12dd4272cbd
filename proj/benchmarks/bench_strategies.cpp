#include <benchmark/benchmark.h>

#include "eqlab/problems.hpp"
#include "eqlab/strategies.hpp"

using namespace eqlab;

namespace {

struct Fixture {
    LabeledSet labeled;
    Pool pool;
    ClassifierSpec base;
    LossSpec loss;

    explicit Fixture(std::size_t n_labeled = 20, std::size_t n_pool = 50) {
        Rng rng(9);
        ProblemSpec spec = make_problem(ProblemKind::ripley4);
        labeled = generate(spec, n_labeled, rng);
        std::vector<Example> ex = generate(spec, n_pool, rng).examples();
        pool = Pool(std::move(ex));
        base.kind = ClassifierKind::knn;
    }
};

void BM_score_pool(benchmark::State& state, StrategyKind kind) {
    Fixture fx;
    StrategySpec strategy;
    strategy.kind = kind;
    if (kind == StrategyKind::qbc_vote || kind == StrategyKind::qbc_kl) {
        ClassifierSpec knn5;
        knn5.kind = ClassifierKind::knn;
        ClassifierSpec knn21 = knn5;
        knn21.k_neighbors = 21;
        ClassifierSpec logit;
        logit.kind = ClassifierKind::logistic_regression;
        ClassifierSpec forest;
        forest.kind = ClassifierKind::random_forest;
        strategy.committee = {logit, knn5, knn21, forest};
    }
    for (auto _ : state) {
        Rng rng(42);
        benchmark::DoNotOptimize(
            score_pool(strategy, fx.base, fx.labeled, fx.pool, fx.loss, rng));
    }
}

}  // namespace

BENCHMARK_CAPTURE(BM_score_pool, se, StrategyKind::se);
BENCHMARK_CAPTURE(BM_score_pool, qbc_vote, StrategyKind::qbc_vote);
BENCHMARK_CAPTURE(BM_score_pool, efelc, StrategyKind::efelc);
BENCHMARK_CAPTURE(BM_score_pool, simple_eq, StrategyKind::simple_eq);
BENCHMARK_CAPTURE(BM_score_pool, partition_eq, StrategyKind::partition_eq);
