#pragma once

#include <vector>

#include "eqlab/model.hpp"
#include "eqlab/rng.hpp"
#include "eqlab/types.hpp"

namespace eqlab::analytic {

double normal_cdf(double x);
double normal_pdf(double x);

// The univariate two-Gaussian problem: true class means fixed at -1 and +1,
// common variance 1; only the prior varies.
struct GaussianPairProblem {
    double prior1 = 0.5;
    double prior2 = 0.5;

    static constexpr double mean1 = -1.0;
    static constexpr double mean2 = 1.0;

    GaussianPairProblem() = default;
    GaussianPairProblem(double p1, double p2);

    bool balanced() const { return prior1 == prior2; }
    double true_boundary() const { return 0.5 * (mean1 + mean2); }

    // true posterior P(Y = c1 | x)
    double posterior1(double x) const;
    // marginal covariate density, i.e. the RS selection density
    double density(double x) const;
};

// Classifier that estimates only the two class means; variance and prior are
// taken from the problem. n is the labelled size (even, classes split n/2).
struct AnalyticClassifier {
    double mean1_hat;
    double mean2_hat;
    int n;

    AnalyticClassifier(double m1, double m2, int n_labeled);

    double boundary() const { return 0.5 * (mean1_hat + mean2_hat); }
    double update_constant() const { return 2.0 / (static_cast<double>(n) + 2.0); }
};

// Scalar Gaussian sampling summary for the qm building blocks.
struct NormalSummary {
    double mean;
    double variance;

    // P(Z < 0)
    double cdf_at_zero() const;
};

// Expected error rate of the mean-pair classifier. Balanced prior reduces to
// (1/2){1 - F1(t) + F2(t)} with the swapped-means indicator correction;
// degenerate equal means return 0.5.
double error_loss(const AnalyticClassifier& clf, const GaussianPairProblem& prob);

// One retraining step on (x, c_j): the class-j mean moves to (1-z) mu_j + z x.
AnalyticClassifier update_after(const AnalyticClassifier& clf, double x, int label);

// Expected one-step loss reduction at x, given the classifier.
double qc(const AnalyticClassifier& clf, const GaussianPairProblem& prob, double x);

// Expected one-step loss reduction at x marginally over labelled datasets of
// size n (balanced prior only; throws UnsupportedPriorError otherwise).
double qm(const GaussianPairProblem& prob, int n, double x);
double qm(int n, double x);

// Shannon entropy's deterministic selection: the estimated boundary.
double se_selection(const AnalyticClassifier& clf);

// Alias for the problem's marginal density at x.
double rs_density(const GaussianPairProblem& prob, double x);

struct GridOptimum {
    double x_star;
    double value;
};

// Argmax of qc over the grid; ties resolve to the smallest x.
GridOptimum optimal_on_grid(const AnalyticClassifier& clf, const GaussianPairProblem& prob,
                            const std::vector<double>& grid);

// Conditional regret of selecting x_r instead of the grid optimum.
double regret(const AnalyticClassifier& clf, const GaussianPairProblem& prob, double x_r,
              const std::vector<double>& grid);

struct EqCurve {
    std::vector<double> grid;
    std::vector<double> values;
    double x_best = 0.0;
    double best = 0.0;
};

EqCurve qc_curve(const AnalyticClassifier& clf, const GaussianPairProblem& prob,
                 const std::vector<double>& grid);
EqCurve qm_curve(const GaussianPairProblem& prob, int n, const std::vector<double>& grid);

// ---------------------------------------------------------------------------
// Monte-Carlo oracles validating the closed forms.

struct McEstimate {
    double value;
    double std_error;
};

// Error rate of clf estimated by classifying n_draws fresh samples.
McEstimate mc_error_loss(const AnalyticClassifier& clf, const GaussianPairProblem& prob,
                         std::size_t n_draws, Rng& rng);

// qc estimated on one shared sample: per-draw difference between the base
// model's error indicator and the posterior-weighted retrained indicators.
McEstimate mc_qc(const AnalyticClassifier& clf, const GaussianPairProblem& prob, double x,
                 std::size_t n_draws, Rng& rng);

// qm estimated by drawing datasets (n/2 per class, prior held fixed) and
// averaging the closed-form qc.
McEstimate mc_qm(const GaussianPairProblem& prob, int n, double x, std::size_t n_datasets,
                 Rng& rng);

// Adapter exposing the mean-pair family through the generic model contract,
// for use with the retrain-based strategies. Trains per-class sample means;
// unit variance and the problem prior are fixed.
TrainFn mean_pair_trainer(const GaussianPairProblem& prob);

}  // namespace eqlab::analytic
