#include "eqlab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace eqlab {

namespace {

void check_curve(const LearningCurve& c) {
    if (c.losses.size() < 2) throw InvalidArgumentError("LearningCurve: length >= 2");
    for (double v : c.losses)
        if (!std::isfinite(v)) throw InvalidArgumentError("LearningCurve: non-finite loss");
}

// edge list of the nonzero weights, for the permutation loops
struct Edge {
    std::size_t i, j;
    double w;
};

std::vector<Edge> validate_weights(const std::vector<double>& values,
                                   const detail::Matrix& weights) {
    const std::size_t n = values.size();
    if (n < 2) throw InvalidArgumentError("spatial statistic: need >= 2 cells");
    if (weights.size() != n) throw ShapeMismatchError("spatial statistic: weights shape");
    std::vector<Edge> edges;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (weights[i].size() != n) throw ShapeMismatchError("spatial statistic: weights shape");
        for (std::size_t j = 0; j < n; ++j) {
            double w = weights[i][j];
            if (w < 0.0) throw DegenerateWeightsError("spatial statistic: negative weight");
            if (i == j && w != 0.0)
                throw DegenerateWeightsError("spatial statistic: nonzero diagonal");
            if (w > 0.0) {
                edges.push_back({i, j, w});
                total += w;
            }
        }
    }
    if (total == 0.0) throw DegenerateWeightsError("spatial statistic: all-zero weights");
    double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
    bool varies = std::any_of(values.begin(), values.end(),
                              [&](double v) { return v != mean; });
    if (!varies) throw ZeroVarianceError("spatial statistic: constant values");
    return edges;
}

double moran_from_edges(const std::vector<double>& values, const std::vector<Edge>& edges,
                        double w_total) {
    const double n = static_cast<double>(values.size());
    double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double num = 0.0, denom = 0.0;
    for (double v : values) denom += (v - mean) * (v - mean);
    for (const auto& e : edges) num += e.w * (values[e.i] - mean) * (values[e.j] - mean);
    return (n / w_total) * (num / denom);
}

double geary_from_edges(const std::vector<double>& values, const std::vector<Edge>& edges,
                        double w_total) {
    const double n = static_cast<double>(values.size());
    double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double num = 0.0, denom = 0.0;
    for (double v : values) denom += (v - mean) * (v - mean);
    for (const auto& e : edges) {
        double d = values[e.i] - values[e.j];
        num += e.w * d * d;
    }
    return ((n - 1.0) / (2.0 * w_total)) * (num / denom);
}

double edges_total(const std::vector<Edge>& edges) {
    double t = 0.0;
    for (const auto& e : edges) t += e.w;
    return t;
}

}  // namespace

double aua(const LearningCurve& curve) {
    check_curve(curve);
    if (curve.kind != LossKind::error_rate)
        throw WrongLossKindError("aua: error-rate curves only");
    double s = 0.0;
    for (double v : curve.losses) s += 1.0 - v;
    return s / static_cast<double>(curve.losses.size());
}

double weighted_improvement(const LearningCurve& curve, const LearningCurve& baseline,
                            const WeightScheme& scheme) {
    check_curve(curve);
    check_curve(baseline);
    if (curve.losses.size() != baseline.losses.size())
        throw LengthMismatchError("weighted_improvement: curve lengths differ");
    const std::size_t m = curve.losses.size() - 1;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < curve.losses.size(); ++i) {
        double w = scheme.kind == WeightScheme::Kind::linear
                       ? static_cast<double>(m - i)
                       : std::exp(-scheme.alpha * static_cast<double>(i));
        num += w * (baseline.losses[i] - curve.losses[i]);
        den += w;
    }
    return num / den;
}

int label_complexity(const LearningCurve& curve, double eps_percent) {
    check_curve(curve);
    double threshold = (1.0 + eps_percent / 100.0) * curve.losses.back();
    for (std::size_t i = 0; i < curve.losses.size(); ++i)
        if (curve.losses[i] <= threshold) return static_cast<int>(i);
    return static_cast<int>(curve.losses.size() - 1);
}

RankVector rank_methods(const std::vector<double>& values, bool higher_better) {
    if (values.empty()) throw InvalidArgumentError("rank_methods: no methods");
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return higher_better ? values[a] > values[b] : values[a] < values[b];
    });
    RankVector out;
    out.ranks.assign(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t t = i; t <= j; ++t) out.ranks[order[t]] = avg;
        i = j + 1;
    }
    return out;
}

RankVector overall_rank(const std::vector<RankVector>& per_metric) {
    if (per_metric.empty()) throw InvalidArgumentError("overall_rank: no metrics");
    const std::size_t n = per_metric.front().ranks.size();
    std::vector<double> means(n, 0.0);
    for (const auto& rv : per_metric) {
        if (rv.ranks.size() != n) throw ShapeMismatchError("overall_rank: ragged rank vectors");
        for (std::size_t i = 0; i < n; ++i) means[i] += rv.ranks[i];
    }
    for (double& m : means) m /= static_cast<double>(per_metric.size());
    return rank_methods(means, /*higher_better=*/false);
}

double spearman(const RankVector& a, const RankVector& b) {
    if (a.ranks.size() != b.ranks.size())
        throw LengthMismatchError("spearman: lengths differ");
    const std::size_t n = a.ranks.size();
    if (n < 2) throw LengthMismatchError("spearman: need >= 2 items");
    double ma = std::accumulate(a.ranks.begin(), a.ranks.end(), 0.0) / static_cast<double>(n);
    double mb = std::accumulate(b.ranks.begin(), b.ranks.end(), 0.0) / static_cast<double>(n);
    double sa = 0.0, sb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double da = a.ranks[i] - ma, db = b.ranks[i] - mb;
        sa += da * da;
        sb += db * db;
        sab += da * db;
    }
    if (sa == 0.0 || sb == 0.0) throw ZeroVarianceError("spearman: constant ranks");
    return sab / std::sqrt(sa * sb);
}

double spearman_from_values(const std::vector<double>& a, const std::vector<double>& b) {
    return spearman(rank_methods(a, true), rank_methods(b, true));
}

double moran_i(const std::vector<double>& values, const detail::Matrix& weights) {
    auto edges = validate_weights(values, weights);
    return moran_from_edges(values, edges, edges_total(edges));
}

double geary_c(const std::vector<double>& values, const detail::Matrix& weights) {
    auto edges = validate_weights(values, weights);
    return geary_from_edges(values, edges, edges_total(edges));
}

detail::Matrix rook_weights(std::size_t rows, std::size_t cols) {
    const std::size_t n = rows * cols;
    detail::Matrix w = detail::zeros(n);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            std::size_t i = r * cols + c;
            if (c + 1 < cols) w[i][i + 1] = w[i + 1][i] = 1.0;
            if (r + 1 < rows) w[i][i + cols] = w[i + cols][i] = 1.0;
        }
    }
    return w;
}

namespace {

PermutationTest permutation_test(const std::vector<double>& values, const detail::Matrix& weights,
                                 int permutations, Rng& rng, bool upper_tail, bool geary) {
    if (permutations < 1) throw InvalidArgumentError("permutation test: permutations >= 1");
    auto edges = validate_weights(values, weights);
    double w_total = edges_total(edges);
    auto stat = [&](const std::vector<double>& v) {
        return geary ? geary_from_edges(v, edges, w_total)
                     : moran_from_edges(v, edges, w_total);
    };
    PermutationTest out;
    out.statistic = stat(values);
    std::vector<double> perm = values;
    int extreme = 0;
    for (int b = 0; b < permutations; ++b) {
        rng.shuffle(perm);
        double s = stat(perm);
        if (upper_tail ? s >= out.statistic : s <= out.statistic) ++extreme;
    }
    out.p_value = (1.0 + static_cast<double>(extreme)) / (static_cast<double>(permutations) + 1.0);
    return out;
}

}  // namespace

PermutationTest moran_permutation_test(const std::vector<double>& values,
                                       const detail::Matrix& weights, int permutations,
                                       Rng& rng) {
    return permutation_test(values, weights, permutations, rng, /*upper_tail=*/true,
                            /*geary=*/false);
}

PermutationTest geary_permutation_test(const std::vector<double>& values,
                                       const detail::Matrix& weights, int permutations,
                                       Rng& rng) {
    return permutation_test(values, weights, permutations, rng, /*upper_tail=*/false,
                            /*geary=*/true);
}

std::vector<double> adjust_pvalues(const std::vector<double>& p, AdjustMethod method) {
    const std::size_t m = p.size();
    for (double v : p)
        if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgumentError("adjust_pvalues: p outside [0,1]");
    std::vector<double> out(m);
    if (method == AdjustMethod::bonferroni) {
        for (std::size_t i = 0; i < m; ++i)
            out[i] = std::min(1.0, static_cast<double>(m) * p[i]);
        return out;
    }
    // Holm step-down with monotonicity enforcement
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
    double running = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
        double adj = std::min(1.0, static_cast<double>(m - r) * p[order[r]]);
        running = std::max(running, adj);
        out[order[r]] = running;
    }
    return out;
}

}  // namespace eqlab
