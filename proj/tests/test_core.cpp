#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "eqlab/loss.hpp"
#include "eqlab/rng.hpp"

using namespace eqlab;

namespace {

class ConstantModel : public TrainedModel {
public:
    ConstantModel(std::vector<double> probs, std::size_t d)
        : probs_(std::move(probs)), dim_(d) {}
    ClassDistribution predict_proba(std::span<const double>) const override {
        return ClassDistribution{probs_};
    }
    std::size_t dim() const override { return dim_; }
    int k() const override { return static_cast<int>(probs_.size()); }

private:
    std::vector<double> probs_;
    std::size_t dim_;
};

LabeledSet set1d(std::vector<std::pair<double, int>> rows, int k = 2) {
    std::vector<Example> ex;
    for (auto [x, y] : rows) ex.push_back(Example{{x}, y});
    return LabeledSet(std::move(ex), k);
}

}  // namespace

TEST_CASE("allocate picks the argmax with low-index ties") {
    CHECK(allocate(ClassDistribution{{0.2, 0.8}}) == 2);
    CHECK(allocate(ClassDistribution{{0.5, 0.5}}) == 1);
    CHECK(allocate(ClassDistribution{{0.1, 0.3, 0.6}}) == 3);
}

TEST_CASE("allocate is invariant to positive rescaling before normalisation") {
    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        int k = 2 + static_cast<int>(rng.below(4));
        std::vector<double> raw(static_cast<std::size_t>(k));
        for (auto& v : raw) v = rng.uniform_pos();
        double scale = 0.1 + 10.0 * rng.uniform();

        auto normalise = [](std::vector<double> v) {
            double s = 0.0;
            for (double x : v) s += x;
            for (double& x : v) x /= s;
            return ClassDistribution{v};
        };
        std::vector<double> scaled = raw;
        for (double& v : scaled) v *= scale;
        CHECK(allocate(normalise(raw)) == allocate(normalise(scaled)));
    }
}

TEST_CASE("empirical_loss error rate and log loss") {
    LossSpec err;
    CHECK(empirical_loss(err, 2, ClassDistribution{{0.2, 0.8}}) == 0.0);
    CHECK(empirical_loss(err, 1, ClassDistribution{{0.2, 0.8}}) == 1.0);

    LossSpec log_loss{LossKind::log_loss, 1e-12};
    CHECK(empirical_loss(log_loss, 1, ClassDistribution{{0.5, 0.5}}) ==
          doctest::Approx(0.693147).epsilon(1e-5));

    // bounds
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> p(3);
        double s = 0.0;
        for (auto& v : p) {
            v = rng.uniform_pos();
            s += v;
        }
        for (auto& v : p) v /= s;
        int y = 1 + static_cast<int>(rng.below(3));
        double e = empirical_loss(err, y, ClassDistribution{p});
        CHECK((e == 0.0 || e == 1.0));
        double l = empirical_loss(log_loss, y, ClassDistribution{p});
        CHECK(l >= 0.0);
        CHECK(l <= -std::log(log_loss.eps_p));
    }
}

TEST_CASE("estimate_expected_loss averages the holdout") {
    ConstantModel always_c1({1.0, 0.0}, 1);
    CHECK(estimate_expected_loss(LossSpec{}, always_c1, set1d({{0.0, 1}, {1.0, 1}})) == 0.0);
    CHECK(estimate_expected_loss(LossSpec{}, always_c1, set1d({{0.0, 1}, {1.0, 2}})) == 0.5);

    ConstantModel mostly_c1({0.9, 0.1}, 1);
    LossSpec log_loss{LossKind::log_loss, 1e-12};
    CHECK(estimate_expected_loss(log_loss, mostly_c1, set1d({{0.0, 1}, {1.0, 1}})) ==
          doctest::Approx(0.105361).epsilon(1e-5));

    CHECK_THROWS_AS(estimate_expected_loss(LossSpec{}, always_c1, LabeledSet{}), EmptySetError);
}

TEST_CASE("estimate_expected_loss is permutation invariant") {
    ConstantModel model({0.6, 0.4}, 1);
    LabeledSet a = set1d({{0.0, 1}, {1.0, 2}, {2.0, 1}, {3.0, 2}, {4.0, 2}});
    LabeledSet b = set1d({{4.0, 2}, {2.0, 1}, {0.0, 1}, {3.0, 2}, {1.0, 2}});
    LossSpec log_loss{LossKind::log_loss, 1e-12};
    CHECK(estimate_expected_loss(log_loss, model, a) ==
          doctest::Approx(estimate_expected_loss(log_loss, model, b)).epsilon(1e-15));
}

TEST_CASE("error-rate estimates stay in [0,1] for random models and data") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> p(2);
        p[0] = rng.uniform();
        p[1] = 1.0 - p[0];
        ConstantModel model(p, 1);
        std::vector<std::pair<double, int>> rows;
        std::size_t n = 1 + rng.below(20);
        for (std::size_t i = 0; i < n; ++i)
            rows.emplace_back(rng.normal(), 1 + static_cast<int>(rng.below(2)));
        double e = estimate_expected_loss(LossSpec{}, model, set1d(rows));
        CHECK(e >= 0.0);
        CHECK(e <= 1.0);
    }
}

TEST_CASE("class_prior counts frequencies; absent classes get zero") {
    auto p1 = class_prior(set1d({{0, 1}, {1, 1}, {2, 2}, {3, 2}}));
    CHECK(p1.probs == std::vector<double>{0.5, 0.5});
    auto p2 = class_prior(set1d({{0, 1}}));
    CHECK(p2.probs == std::vector<double>{1.0, 0.0});
    auto p3 = class_prior(set1d({{0, 1}, {1, 2}, {2, 2}, {3, 2}}));
    CHECK(p3.probs == std::vector<double>{0.25, 0.75});
    CHECK_THROWS_AS(class_prior(LabeledSet{}), EmptySetError);
}

TEST_CASE("LossSpec validates the log-loss floor") {
    LossSpec bad{LossKind::log_loss, 0.0};
    CHECK_THROWS_AS(bad.validate(), InvalidArgumentError);
    LossSpec big{LossKind::log_loss, 0.1};
    CHECK_THROWS_AS(big.validate(), InvalidArgumentError);
    LossSpec fine{LossKind::log_loss, 1e-6};
    CHECK_NOTHROW(fine.validate());
}

TEST_CASE("type invariants are enforced") {
    CHECK_THROWS_AS(set1d({{0.0, 3}}), InvalidArgumentError);  // label out of range
    std::vector<Example> mixed = {Example{{0.0}, 1}, Example{{0.0, 1.0}, 2}};
    CHECK_THROWS_AS(LabeledSet(std::move(mixed), 2), DimensionMismatchError);
    ClassDistribution bad{{0.5, 0.4}};
    CHECK_FALSE(bad.valid());
    ClassDistribution ok{{0.5, 0.5}};
    CHECK(ok.valid());
}
