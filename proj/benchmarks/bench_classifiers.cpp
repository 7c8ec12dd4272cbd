#include <benchmark/benchmark.h>

#include "eqlab/classifiers.hpp"
#include "eqlab/problems.hpp"

using namespace eqlab;

namespace {

LabeledSet ripley_sample(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    return generate(make_problem(ProblemKind::ripley4), n, rng);
}

void BM_train(benchmark::State& state, ClassifierKind kind) {
    LabeledSet data = ripley_sample(static_cast<std::size_t>(state.range(0)), 5);
    ClassifierSpec spec;
    spec.kind = kind;
    for (auto _ : state) benchmark::DoNotOptimize(train(spec, data));
}

void BM_predict(benchmark::State& state, ClassifierKind kind) {
    LabeledSet data = ripley_sample(static_cast<std::size_t>(state.range(0)), 5);
    ClassifierSpec spec;
    spec.kind = kind;
    ModelPtr model = train(spec, data);
    std::vector<double> x = {0.1, 0.4};
    for (auto _ : state) benchmark::DoNotOptimize(model->predict_proba(x));
}

}  // namespace

BENCHMARK_CAPTURE(BM_train, lda, ClassifierKind::lda)->Arg(50)->Arg(200);
BENCHMARK_CAPTURE(BM_train, qda, ClassifierKind::qda)->Arg(50)->Arg(200);
BENCHMARK_CAPTURE(BM_train, knn, ClassifierKind::knn)->Arg(50)->Arg(200);
BENCHMARK_CAPTURE(BM_train, gaussian_nb, ClassifierKind::gaussian_nb)->Arg(50)->Arg(200);
BENCHMARK_CAPTURE(BM_train, logistic, ClassifierKind::logistic_regression)->Arg(50)->Arg(200);
BENCHMARK_CAPTURE(BM_train, forest, ClassifierKind::random_forest)->Arg(50)->Arg(200);

BENCHMARK_CAPTURE(BM_predict, knn, ClassifierKind::knn)->Arg(200);
BENCHMARK_CAPTURE(BM_predict, qda, ClassifierKind::qda)->Arg(200);
BENCHMARK_CAPTURE(BM_predict, forest, ClassifierKind::random_forest)->Arg(200);
