#pragma once

#include <vector>

#include "eqlab/detail/linalg.hpp"
#include "eqlab/rng.hpp"
#include "eqlab/types.hpp"

namespace eqlab {

// Loss per iteration i = 0..m of an iterated-AL run.
struct LearningCurve {
    std::vector<double> losses;
    LossKind kind = LossKind::error_rate;
};

// Average-rank statistic over n items: rank 1 is best, ties share the mean of
// the ranks they cover, so the total is always n(n+1)/2.
struct RankVector {
    std::vector<double> ranks;
};

struct WeightScheme {
    enum class Kind { linear, exponential };
    Kind kind = Kind::linear;
    double alpha = 0.02;  // exponential decay rate
};

// Mean accuracy over the learning curve (error-rate curves only).
double aua(const LearningCurve& curve);

// Weight-normalised improvement of `curve` over `baseline`:
// sum w_i (baseline_i - curve_i) / sum w_i, with w_i = m - i (linear) or
// exp(-alpha i) (exponential).
double weighted_improvement(const LearningCurve& curve, const LearningCurve& baseline,
                            const WeightScheme& scheme);

// Smallest i whose loss is within (1 + eps/100) of the final loss.
int label_complexity(const LearningCurve& curve, double eps_percent);

RankVector rank_methods(const std::vector<double>& values, bool higher_better);

// Ranking of the per-method mean rank across metrics (lower mean is better).
RankVector overall_rank(const std::vector<RankVector>& per_metric);

// Pearson correlation of the rank values (tie-safe).
double spearman(const RankVector& a, const RankVector& b);

// Convenience: rank both raw-value vectors, then correlate.
double spearman_from_values(const std::vector<double>& a, const std::vector<double>& b);

// Global spatial autocorrelation statistics. `weights` must be square with a
// zero diagonal, nonnegative, and not identically zero; `values` must vary.
double moran_i(const std::vector<double>& values, const detail::Matrix& weights);
double geary_c(const std::vector<double>& values, const detail::Matrix& weights);

// Unit-weight 4-neighbour adjacency for a rows x cols lattice, row-major.
detail::Matrix rook_weights(std::size_t rows, std::size_t cols);

struct PermutationTest {
    double statistic = 0.0;
    double p_value = 1.0;
};

// Monte-Carlo permutation tests; p = (1 + #{as extreme}) / (B + 1). Moran's I
// uses the upper tail, Geary's C the lower tail (both read "positive spatial
// autocorrelation").
PermutationTest moran_permutation_test(const std::vector<double>& values,
                                       const detail::Matrix& weights, int permutations, Rng& rng);
PermutationTest geary_permutation_test(const std::vector<double>& values,
                                       const detail::Matrix& weights, int permutations, Rng& rng);

enum class AdjustMethod { holm, bonferroni };

std::vector<double> adjust_pvalues(const std::vector<double>& p, AdjustMethod method);

}  // namespace eqlab
