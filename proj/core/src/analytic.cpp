#include "eqlab/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace eqlab::analytic {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

namespace {

// class-conditional cdfs of the fixed means (-1, +1), variance 1
double cdf1(double t) { return normal_cdf(t - GaussianPairProblem::mean1); }
double cdf2(double t) { return normal_cdf(t - GaussianPairProblem::mean2); }

}  // namespace

GaussianPairProblem::GaussianPairProblem(double p1, double p2) : prior1(p1), prior2(p2) {
    if (!(p1 > 0.0) || !(p2 > 0.0) || std::abs(p1 + p2 - 1.0) > 1e-12)
        throw InvalidArgumentError("GaussianPairProblem: prior must be positive and sum to 1");
}

double GaussianPairProblem::posterior1(double x) const {
    double a = prior1 * normal_pdf(x - mean1);
    double b = prior2 * normal_pdf(x - mean2);
    return a / (a + b);
}

double GaussianPairProblem::density(double x) const {
    return prior1 * normal_pdf(x - mean1) + prior2 * normal_pdf(x - mean2);
}

AnalyticClassifier::AnalyticClassifier(double m1, double m2, int n_labeled)
    : mean1_hat(m1), mean2_hat(m2), n(n_labeled) {
    if (n < 2 || n % 2 != 0)
        throw InvalidArgumentError("AnalyticClassifier: n must be even and >= 2");
}

double NormalSummary::cdf_at_zero() const { return normal_cdf(-mean / std::sqrt(variance)); }

double error_loss(const AnalyticClassifier& clf, const GaussianPairProblem& prob) {
    if (clf.mean1_hat == clf.mean2_hat) return 0.5;
    double t = clf.boundary();
    if (clf.mean1_hat < clf.mean2_hat)
        return prob.prior1 * (1.0 - cdf1(t)) + prob.prior2 * cdf2(t);
    return prob.prior1 * cdf1(t) + prob.prior2 * (1.0 - cdf2(t));
}

AnalyticClassifier update_after(const AnalyticClassifier& clf, double x, int label) {
    if (label != 1 && label != 2)
        throw InvalidArgumentError("update_after: label must be 1 or 2");
    double z = clf.update_constant();
    AnalyticClassifier out = clf;
    if (label == 1)
        out.mean1_hat = (1.0 - z) * clf.mean1_hat + z * x;
    else
        out.mean2_hat = (1.0 - z) * clf.mean2_hat + z * x;
    return out;
}

double qc(const AnalyticClassifier& clf, const GaussianPairProblem& prob, double x) {
    double p1 = prob.posterior1(x);
    double base = error_loss(clf, prob);
    double l1 = error_loss(update_after(clf, x, 1), prob);
    double l2 = error_loss(update_after(clf, x, 2), prob);
    return base - (p1 * l1 + (1.0 - p1) * l2);
}

double qm(const GaussianPairProblem& prob, int n, double x) {
    if (!prob.balanced())
        throw UnsupportedPriorError("qm: closed form available for the balanced prior only");
    return qm(n, x);
}

double qm(int n, double x) {
    if (n < 2 || n % 2 != 0) throw InvalidArgumentError("qm: n must be even and >= 2");
    const double nd = static_cast<double>(n);
    const double z = 2.0 / (nd + 2.0);
    GaussianPairProblem prob;  // balanced
    const double p1 = prob.posterior1(x);
    const double p2 = 1.0 - p1;

    // Sampling summaries of the loss ingredients. The boundary after a class-j
    // update is t' = ((1-z) mu_j^ + mu_other^)/2 + zx/2, so its variance is
    // ((1-z)^2 + 1) * (2/n) / 4 = (2 - 2z + z^2)/(2n); mu_j^ and t^ share the
    // class-j sample and are not independent.
    const double var_t_prime = 1.0 + (2.0 - 2.0 * z + z * z) / (2.0 * nd);
    const double var_mu_diff = 2.0 / nd * (z * z - 2.0 * z + 2.0);

    const NormalSummary z10{-1.0, (nd + 1.0) / nd};
    const NormalSummary z11{+1.0, (nd + 1.0) / nd};
    const NormalSummary z12{-2.0, 4.0 / nd};
    const NormalSummary z3{-1.0 - 0.5 * z * (x + 1.0), var_t_prime};
    const NormalSummary z6{+1.0 - 0.5 * z * (x + 1.0), var_t_prime};
    const NormalSummary z13{z + z * x - 2.0, var_mu_diff};
    const NormalSummary z8{-1.0 - 0.5 * z * (x - 1.0), var_t_prime};
    const NormalSummary z9{+1.0 - 0.5 * z * (x - 1.0), var_t_prime};
    const NormalSummary z16{z - z * x - 2.0, var_mu_diff};

    const double f10 = z10.cdf_at_zero(), f11 = z11.cdf_at_zero(), f12 = z12.cdf_at_zero();
    const double f3 = z3.cdf_at_zero(), f6 = z6.cdf_at_zero(), f13 = z13.cdf_at_zero();
    const double f8 = z8.cdf_at_zero(), f9 = z9.cdf_at_zero(), f16 = z16.cdf_at_zero();

    const double term_f = 0.5 * (1.0 - f10 + f11 + (1.0 - f12) * (2.0 * f10 - 2.0 * f11));
    const double term_j =
        0.5 * p1 * (1.0 - f3 + f6 + (1.0 - f13) * (2.0 * f3 - 2.0 * f6)) +
        0.5 * p2 * (1.0 - f8 + f9 + (1.0 - f16) * (2.0 * f8 - 2.0 * f9));
    return term_f - term_j;
}

double se_selection(const AnalyticClassifier& clf) { return clf.boundary(); }

double rs_density(const GaussianPairProblem& prob, double x) { return prob.density(x); }

GridOptimum optimal_on_grid(const AnalyticClassifier& clf, const GaussianPairProblem& prob,
                            const std::vector<double>& grid) {
    if (grid.empty()) throw EmptyGridError("optimal_on_grid: empty grid");
    GridOptimum best{grid.front(), qc(clf, prob, grid.front())};
    for (std::size_t i = 1; i < grid.size(); ++i) {
        double v = qc(clf, prob, grid[i]);
        if (v > best.value) best = {grid[i], v};
    }
    return best;
}

double regret(const AnalyticClassifier& clf, const GaussianPairProblem& prob, double x_r,
              const std::vector<double>& grid) {
    return optimal_on_grid(clf, prob, grid).value - qc(clf, prob, x_r);
}

namespace {

void check_strictly_increasing(const std::vector<double>& grid, const char* what) {
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw InvalidArgumentError(std::string(what) + ": grid must strictly increase");
}

}  // namespace

EqCurve qc_curve(const AnalyticClassifier& clf, const GaussianPairProblem& prob,
                 const std::vector<double>& grid) {
    if (grid.empty()) throw EmptyGridError("qc_curve: empty grid");
    check_strictly_increasing(grid, "qc_curve");
    EqCurve out;
    out.grid = grid;
    out.values.reserve(grid.size());
    for (double x : grid) out.values.push_back(qc(clf, prob, x));
    auto it = std::max_element(out.values.begin(), out.values.end());
    out.best = *it;
    out.x_best = grid[static_cast<std::size_t>(it - out.values.begin())];
    return out;
}

EqCurve qm_curve(const GaussianPairProblem& prob, int n, const std::vector<double>& grid) {
    if (grid.empty()) throw EmptyGridError("qm_curve: empty grid");
    check_strictly_increasing(grid, "qm_curve");
    EqCurve out;
    out.grid = grid;
    out.values.reserve(grid.size());
    for (double x : grid) out.values.push_back(qm(prob, n, x));
    auto it = std::max_element(out.values.begin(), out.values.end());
    out.best = *it;
    out.x_best = grid[static_cast<std::size_t>(it - out.values.begin())];
    return out;
}

// ---------------------------------------------------------------------------
// Monte-Carlo oracles

namespace {

struct Draw {
    double x;
    int y;  // 1 or 2
};

Draw draw_example(const GaussianPairProblem& prob, Rng& rng) {
    int y = rng.uniform() < prob.prior1 ? 1 : 2;
    double mu = y == 1 ? GaussianPairProblem::mean1 : GaussianPairProblem::mean2;
    return {mu + rng.normal(), y};
}

int classify(const AnalyticClassifier& clf, double x) {
    if (clf.mean1_hat == clf.mean2_hat) return 1;
    double t = clf.boundary();
    if (clf.mean1_hat < clf.mean2_hat) return x < t ? 1 : 2;
    return x > t ? 1 : 2;
}

McEstimate mean_and_se(double sum, double sum_sq, std::size_t n) {
    double nd = static_cast<double>(n);
    double mean = sum / nd;
    double var = (sum_sq - nd * mean * mean) / (nd - 1.0);
    return {mean, std::sqrt(std::max(var, 0.0) / nd)};
}

}  // namespace

McEstimate mc_error_loss(const AnalyticClassifier& clf, const GaussianPairProblem& prob,
                         std::size_t n_draws, Rng& rng) {
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < n_draws; ++i) {
        Draw d = draw_example(prob, rng);
        double e = classify(clf, d.x) == d.y ? 0.0 : 1.0;
        sum += e;
        sum_sq += e * e;
    }
    return mean_and_se(sum, sum_sq, n_draws);
}

McEstimate mc_qc(const AnalyticClassifier& clf, const GaussianPairProblem& prob, double x,
                 std::size_t n_draws, Rng& rng) {
    double p1 = prob.posterior1(x);
    AnalyticClassifier upd1 = update_after(clf, x, 1);
    AnalyticClassifier upd2 = update_after(clf, x, 2);
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < n_draws; ++i) {
        Draw d = draw_example(prob, rng);
        double e0 = classify(clf, d.x) == d.y ? 0.0 : 1.0;
        double e1 = classify(upd1, d.x) == d.y ? 0.0 : 1.0;
        double e2 = classify(upd2, d.x) == d.y ? 0.0 : 1.0;
        double diff = e0 - (p1 * e1 + (1.0 - p1) * e2);
        sum += diff;
        sum_sq += diff * diff;
    }
    return mean_and_se(sum, sum_sq, n_draws);
}

McEstimate mc_qm(const GaussianPairProblem& prob, int n, double x, std::size_t n_datasets,
                 Rng& rng) {
    if (n < 2 || n % 2 != 0) throw InvalidArgumentError("mc_qm: n must be even and >= 2");
    const int per_class = n / 2;
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < n_datasets; ++i) {
        double m1 = 0.0, m2 = 0.0;
        for (int j = 0; j < per_class; ++j) m1 += GaussianPairProblem::mean1 + rng.normal();
        for (int j = 0; j < per_class; ++j) m2 += GaussianPairProblem::mean2 + rng.normal();
        AnalyticClassifier clf(m1 / per_class, m2 / per_class, n);
        double v = qc(clf, prob, x);
        sum += v;
        sum_sq += v * v;
    }
    return mean_and_se(sum, sum_sq, n_datasets);
}

// ---------------------------------------------------------------------------
// generic-model adapter

namespace {

class MeanPairModel : public TrainedModel {
public:
    MeanPairModel(double m1, double m2, bool has1, bool has2, GaussianPairProblem prob)
        : mean1_(m1), mean2_(m2), has1_(has1), has2_(has2), prob_(prob) {}

    ClassDistribution predict_proba(std::span<const double> x) const override {
        check_dim(x);
        ClassDistribution out;
        out.probs.assign(2, 0.0);
        if (!has1_ || !has2_) {
            int only = has1_ ? 0 : 1;
            out.probs[static_cast<std::size_t>(only)] = 1.0 - 1e-9;
            out.probs[static_cast<std::size_t>(1 - only)] = 1e-9;
            return out;
        }
        double a = prob_.prior1 * normal_pdf(x[0] - mean1_);
        double b = prob_.prior2 * normal_pdf(x[0] - mean2_);
        out.probs[0] = a / (a + b);
        out.probs[1] = b / (a + b);
        return out;
    }
    std::size_t dim() const override { return 1; }
    int k() const override { return 2; }

private:
    double mean1_, mean2_;
    bool has1_, has2_;
    GaussianPairProblem prob_;
};

}  // namespace

TrainFn mean_pair_trainer(const GaussianPairProblem& prob) {
    return [prob](const LabeledSet& data) -> ModelPtr {
        if (data.empty()) throw EmptySetError("mean_pair_trainer: empty training set");
        if (data.dim() != 1)
            throw DimensionMismatchError("mean_pair_trainer: univariate data required");
        double s1 = 0.0, s2 = 0.0;
        int n1 = 0, n2 = 0;
        for (const auto& e : data.examples()) {
            if (*e.y == 1) {
                s1 += e.x[0];
                ++n1;
            } else {
                s2 += e.x[0];
                ++n2;
            }
        }
        return std::make_shared<MeanPairModel>(n1 ? s1 / n1 : 0.0, n2 ? s2 / n2 : 0.0, n1 > 0,
                                               n2 > 0, prob);
    };
}

}  // namespace eqlab::analytic
