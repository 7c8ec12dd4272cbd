#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "eqlab/metrics.hpp"

using namespace eqlab;

namespace {

LearningCurve curve_of(std::vector<double> losses) {
    return LearningCurve{std::move(losses), LossKind::error_rate};
}

}  // namespace

TEST_CASE("aua is mean accuracy") {
    CHECK(aua(curve_of({0.0, 0.0})) == 1.0);
    CHECK(aua(curve_of({0.5, 0.5, 0.5})) == 0.5);
    CHECK(aua(curve_of({0.4, 0.2, 0.0})) == doctest::Approx(0.8).epsilon(1e-12));
    LearningCurve log_curve{{0.4, 0.2}, LossKind::log_loss};
    CHECK_THROWS_AS(aua(log_curve), WrongLossKindError);
}

TEST_CASE("weighted_improvement") {
    WeightScheme lin{WeightScheme::Kind::linear, 0.02};
    WeightScheme expo{WeightScheme::Kind::exponential, 0.02};

    auto c = curve_of({0.5, 0.4, 0.3});
    CHECK(weighted_improvement(c, c, lin) == 0.0);
    CHECK(weighted_improvement(c, c, expo) == 0.0);

    auto below = curve_of({0.4, 0.3, 0.2});
    CHECK(weighted_improvement(below, c, lin) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(weighted_improvement(below, c, expo) == doctest::Approx(0.1).epsilon(1e-12));

    // weights (2, 1, 0) against diffs (0, 0.1, 0.2)
    auto curve = curve_of({0.5, 0.3, 0.1});
    auto baseline = curve_of({0.5, 0.4, 0.3});
    CHECK(weighted_improvement(curve, baseline, lin) ==
          doctest::Approx(0.1 / 3.0).epsilon(1e-12));

    // antisymmetry
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> a(5), b(5);
        for (int i = 0; i < 5; ++i) {
            a[static_cast<std::size_t>(i)] = rng.uniform();
            b[static_cast<std::size_t>(i)] = rng.uniform();
        }
        for (auto scheme : {lin, expo}) {
            double ab = weighted_improvement(curve_of(a), curve_of(b), scheme);
            double ba = weighted_improvement(curve_of(b), curve_of(a), scheme);
            CHECK(ab == doctest::Approx(-ba).epsilon(1e-12));
        }
    }

    CHECK_THROWS_AS(weighted_improvement(curve_of({0.1, 0.2}), curve_of({0.1, 0.2, 0.3}), lin),
                    LengthMismatchError);
}

TEST_CASE("label_complexity") {
    CHECK(label_complexity(curve_of({0.3, 0.3, 0.3}), 5.0) == 0);
    CHECK(label_complexity(curve_of({1.0, 0.5, 0.2, 0.2}), 5.0) == 2);
    CHECK(label_complexity(curve_of({0.4, 0.0, 0.0}), 5.0) == 1);

    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> losses(6);
        for (auto& v : losses) v = rng.uniform();
        int lc = label_complexity(curve_of(losses), 5.0);
        CHECK(lc >= 0);
        CHECK(lc <= 5);
    }
}

TEST_CASE("rank_methods") {
    CHECK(rank_methods({3.0, 1.0, 2.0}, true).ranks == std::vector<double>{1.0, 3.0, 2.0});
    CHECK(rank_methods({2.0, 2.0}, true).ranks == std::vector<double>{1.5, 1.5});
    CHECK(rank_methods({7.0}, false).ranks == std::vector<double>{1.0});

    Rng rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 1 + rng.below(12);
        std::vector<double> values(n);
        for (auto& v : values) v = std::floor(6.0 * rng.uniform());
        auto rv = rank_methods(values, trial % 2 == 0);
        double sum = 0.0;
        for (double r : rv.ranks) sum += r;
        CHECK(sum == doctest::Approx(static_cast<double>(n * (n + 1)) / 2.0).epsilon(1e-12));
    }
}

TEST_CASE("overall_rank is the ranking of the mean ranks") {
    RankVector a{{1.0, 2.0}};
    RankVector b{{2.0, 1.0}};
    CHECK(overall_rank({a, a}).ranks == a.ranks);
    CHECK(overall_rank({a, b}).ranks == std::vector<double>{1.5, 1.5});

    RankVector m1{{1.0, 2.0, 3.0}};
    RankVector m3{{3.0, 1.0, 2.0}};
    CHECK(overall_rank({m1, m1, m3}).ranks == std::vector<double>{1.5, 1.5, 3.0});

    CHECK_THROWS_AS(overall_rank({a, RankVector{{1.0, 2.0, 3.0}}}), ShapeMismatchError);
}

TEST_CASE("spearman") {
    RankVector a{{1, 2, 3, 4}};
    RankVector rev{{4, 3, 2, 1}};
    RankVector near{{1, 3, 2, 4}};
    CHECK(spearman(a, a) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(spearman(a, rev) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(spearman(a, near) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK_THROWS_AS(spearman(a, RankVector{{1, 2}}), LengthMismatchError);
    CHECK_THROWS_AS(spearman(RankVector{{1, 1}}, RankVector{{1, 2}}), ZeroVarianceError);

    // invariance under a common strictly monotone transform of the raw scores
    Rng rng(13);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<double> x(8), y(8);
        for (int i = 0; i < 8; ++i) {
            x[static_cast<std::size_t>(i)] = rng.normal();
            y[static_cast<std::size_t>(i)] = rng.normal();
        }
        double base = spearman_from_values(x, y);
        std::vector<double> fx = x, fy = y;
        for (double& v : fx) v = std::exp(v) + 2.0 * v;
        for (double& v : fy) v = std::exp(v) + 2.0 * v;
        CHECK(spearman_from_values(fx, fy) == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("moran_i on the 2x2 rook fixture") {
    auto w = rook_weights(2, 2);
    std::vector<double> values = {1.0, 2.0, 3.0, 4.0};
    // rook neighbour products cancel exactly for this field
    CHECK(moran_i(values, w) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(geary_c(values, w) == doctest::Approx(0.75).epsilon(1e-12));

    CHECK_THROWS_AS(moran_i({1.0, 1.0, 1.0, 1.0}, w), ZeroVarianceError);
    CHECK_THROWS_AS(geary_c({1.0, 1.0, 1.0, 1.0}, w), ZeroVarianceError);

    auto zero = detail::zeros(4);
    CHECK_THROWS_AS(moran_i(values, zero), DegenerateWeightsError);
    auto self = detail::zeros(4);
    self[0][0] = 1.0;
    CHECK_THROWS_AS(moran_i(values, self), DegenerateWeightsError);
}

TEST_CASE("moran_i signs and invariances") {
    // alternating checkerboard: strong negative autocorrelation
    auto w = rook_weights(4, 4);
    std::vector<double> checker(16);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            checker[static_cast<std::size_t>(r * 4 + c)] = (r + c) % 2 == 0 ? 1.0 : -1.0;
    CHECK(moran_i(checker, w) < 0.0);

    Rng rng(15);
    std::vector<double> field(16);
    for (auto& v : field) v = rng.normal();
    double base = moran_i(field, w);
    std::vector<double> shifted = field, scaled = field;
    for (double& v : shifted) v += 11.5;
    for (double& v : scaled) v *= 4.25;
    CHECK(moran_i(shifted, w) == doctest::Approx(base).epsilon(1e-9));
    CHECK(moran_i(scaled, w) == doctest::Approx(base).epsilon(1e-9));
    double gc = geary_c(field, w);
    CHECK(geary_c(shifted, w) == doctest::Approx(gc).epsilon(1e-9));
}

TEST_CASE("geary_c null expectation and gradient sign") {
    // i.i.d. fields: C concentrates at 1
    Rng rng(17);
    auto w = rook_weights(5, 5);
    double sum = 0.0, sum_sq = 0.0;
    const int reps = 2000;
    for (int i = 0; i < reps; ++i) {
        std::vector<double> field(25);
        for (auto& v : field) v = rng.normal();
        double c = geary_c(field, w);
        sum += c;
        sum_sq += c * c;
    }
    double mean = sum / reps;
    double sd = std::sqrt((sum_sq - reps * mean * mean) / (reps - 1));
    CHECK(std::abs(mean - 1.0) < 3.0 * sd / std::sqrt(static_cast<double>(reps)));

    // smooth gradient along a path graph: C < 1
    std::size_t n = 12;
    auto path = detail::zeros(n);
    for (std::size_t i = 0; i + 1 < n; ++i) path[i][i + 1] = path[i + 1][i] = 1.0;
    std::vector<double> ramp(n);
    for (std::size_t i = 0; i < n; ++i) ramp[i] = static_cast<double>(i);
    CHECK(geary_c(ramp, path) < 1.0);
    CHECK(moran_i(ramp, path) > 0.0);
}

TEST_CASE("permutation tests produce valid, seeded p-values") {
    auto w = rook_weights(5, 5);
    Rng field_rng(19);
    std::vector<double> smooth(25);
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 5; ++c)
            smooth[static_cast<std::size_t>(r * 5 + c)] =
                static_cast<double>(r + c) + 0.01 * field_rng.normal();

    Rng ra(23), rb(23);
    auto ta = moran_permutation_test(smooth, w, 999, ra);
    auto tb = moran_permutation_test(smooth, w, 999, rb);
    CHECK(ta.p_value == tb.p_value);
    CHECK(ta.p_value >= 1.0 / 1000.0);
    CHECK(ta.p_value <= 1.0);
    CHECK(ta.p_value == doctest::Approx(0.001));  // strongly autocorrelated field

    Rng rc(29);
    auto tg = geary_permutation_test(smooth, w, 999, rc);
    CHECK(tg.p_value == doctest::Approx(0.001));
    CHECK(tg.statistic < 1.0);
}

TEST_CASE("adjust_pvalues") {
    CHECK(adjust_pvalues({0.03}, AdjustMethod::holm) == std::vector<double>{0.03});
    CHECK(adjust_pvalues({0.03}, AdjustMethod::bonferroni) == std::vector<double>{0.03});

    auto bonf = adjust_pvalues({0.01, 0.04}, AdjustMethod::bonferroni);
    CHECK(bonf[0] == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(bonf[1] == doctest::Approx(0.08).epsilon(1e-12));

    auto holm = adjust_pvalues({0.01, 0.04}, AdjustMethod::holm);
    CHECK(holm[0] == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(holm[1] == doctest::Approx(0.04).epsilon(1e-12));

    // monotone in the sorted order and clamped at 1
    auto many = adjust_pvalues({0.9, 0.001, 0.5, 0.04}, AdjustMethod::holm);
    for (double p : many) {
        CHECK(p <= 1.0);
        CHECK(p >= 0.0);
    }
    CHECK(many[1] <= many[3]);
    CHECK(many[3] <= many[2]);
    CHECK(many[2] <= many[0]);

    CHECK_THROWS_AS(adjust_pvalues({1.5}, AdjustMethod::holm), InvalidArgumentError);
}
