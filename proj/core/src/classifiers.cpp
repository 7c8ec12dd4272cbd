#include "eqlab/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "eqlab/loss.hpp"
#include "eqlab/rng.hpp"

namespace eqlab {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112353;

ClassifierKind require_kind(const std::string& name) {
    if (name == "lda") return ClassifierKind::lda;
    if (name == "qda") return ClassifierKind::qda;
    if (name == "knn") return ClassifierKind::knn;
    if (name == "gaussian_nb") return ClassifierKind::gaussian_nb;
    if (name == "logistic_regression") return ClassifierKind::logistic_regression;
    if (name == "random_forest") return ClassifierKind::random_forest;
    throw InvalidArgumentError("unknown classifier kind: " + name);
}

// Lexicographic order on (x, y): training becomes order-insensitive, bit for bit.
std::vector<Example> canonical_examples(const LabeledSet& data) {
    std::vector<Example> ex = data.examples();
    std::sort(ex.begin(), ex.end(), [](const Example& a, const Example& b) {
        if (a.x != b.x) return a.x < b.x;
        return *a.y < *b.y;
    });
    return ex;
}

std::vector<int> class_counts(const std::vector<Example>& ex, int k) {
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (const auto& e : ex) counts[static_cast<std::size_t>(*e.y - 1)]++;
    return counts;
}

int single_present_class(const std::vector<int>& counts) {
    int found = -1;
    for (std::size_t j = 0; j < counts.size(); ++j) {
        if (counts[j] > 0) {
            if (found >= 0) return -1;
            found = static_cast<int>(j) + 1;
        }
    }
    return found;
}

// Constant model used whenever the training data contains a single class.
class SingleClassModel : public ClassifierModel {
public:
    SingleClassModel(ClassifierSpec spec, std::size_t dim, int k, int label)
        : ClassifierModel(std::move(spec)), dim_(dim), k_(k), label_(label) {}

    ClassDistribution predict_proba(std::span<const double> x) const override {
        check_dim(x);
        ClassDistribution out;
        out.probs.assign(static_cast<std::size_t>(k_), 1e-9);
        out.probs[static_cast<std::size_t>(label_ - 1)] =
            1.0 - static_cast<double>(k_ - 1) * 1e-9;
        return out;
    }
    std::size_t dim() const override { return dim_; }
    int k() const override { return k_; }

private:
    std::size_t dim_;
    int k_;
    int label_;
};

// ---------------------------------------------------------------------------
// small dense linear algebra for the Gaussian classifiers

using Matrix = std::vector<std::vector<double>>;

Matrix zeros(std::size_t d) { return Matrix(d, std::vector<double>(d, 0.0)); }

// Cholesky factorisation A = L L^T; A must be symmetric positive definite
// (callers floor the diagonal first).
Matrix cholesky(const Matrix& a) {
    const std::size_t d = a.size();
    Matrix l = zeros(d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a[i][j];
            for (std::size_t m = 0; m < j; ++m) s -= l[i][m] * l[j][m];
            if (i == j) {
                if (s <= 0.0) throw TrainingError("cholesky: matrix not positive definite");
                l[i][i] = std::sqrt(s);
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    return l;
}

// Solves L w = v by forward substitution; returns |w|^2 = v^T (L L^T)^{-1} v.
double quad_form(const Matrix& l, std::span<const double> v) {
    const std::size_t d = l.size();
    std::vector<double> w(d);
    double q = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        double s = v[i];
        for (std::size_t m = 0; m < i; ++m) s -= l[i][m] * w[m];
        w[i] = s / l[i][i];
        q += w[i] * w[i];
    }
    return q;
}

double log_det_from_cholesky(const Matrix& l) {
    double s = 0.0;
    for (std::size_t i = 0; i < l.size(); ++i) s += std::log(l[i][i]);
    return 2.0 * s;
}

std::vector<double> class_mean(const std::vector<Example>& ex, int label, std::size_t d) {
    std::vector<double> m(d, 0.0);
    int n = 0;
    for (const auto& e : ex) {
        if (*e.y != label) continue;
        for (std::size_t i = 0; i < d; ++i) m[i] += e.x[i];
        ++n;
    }
    for (double& v : m) v /= static_cast<double>(n);
    return m;
}

// Unbiased scalar variance around a given mean; 0 when fewer than two values.
double scalar_variance(const std::vector<double>& values, double mean) {
    if (values.size() < 2) return 0.0;
    double s = 0.0;
    for (double v : values) s += (v - mean) * (v - mean);
    return s / static_cast<double>(values.size() - 1);
}

// Shared Gaussian posterior: softmax of per-class log densities + log priors.
ClassDistribution gaussian_posterior(const std::vector<double>& log_lik,
                                     const std::vector<double>& prior, int k) {
    ClassDistribution out;
    out.probs.assign(static_cast<std::size_t>(k), 0.0);
    double best = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < k; ++j) {
        if (prior[static_cast<std::size_t>(j)] > 0.0)
            best = std::max(best, log_lik[static_cast<std::size_t>(j)]);
    }
    double sum = 0.0;
    for (int j = 0; j < k; ++j) {
        if (prior[static_cast<std::size_t>(j)] <= 0.0) continue;
        double v = std::exp(log_lik[static_cast<std::size_t>(j)] - best);
        out.probs[static_cast<std::size_t>(j)] = v;
        sum += v;
    }
    for (double& p : out.probs) p /= sum;
    return out;
}

// ---------------------------------------------------------------------------
// LDA / QDA

class DiscriminantModel : public ClassifierModel {
public:
    DiscriminantModel(ClassifierSpec spec, const LabeledSet& data, bool pooled)
        : ClassifierModel(spec), k_(data.k()) {
        auto ex = canonical_examples(data);
        dim_ = data.dim();
        const std::size_t d = dim_;
        auto counts = class_counts(ex, k_);

        means_.assign(static_cast<std::size_t>(k_), {});
        prior_.assign(static_cast<std::size_t>(k_), 0.0);
        for (int j = 1; j <= k_; ++j) {
            if (counts[static_cast<std::size_t>(j - 1)] == 0) continue;
            prior_[static_cast<std::size_t>(j - 1)] =
                static_cast<double>(counts[static_cast<std::size_t>(j - 1)]) /
                static_cast<double>(ex.size());
            means_[static_cast<std::size_t>(j - 1)] = class_mean(ex, j, d);
        }

        if (d == 1) {
            // scalar path; keeps 1-d qda arithmetic identical to gaussian_nb
            vars_.assign(static_cast<std::size_t>(k_), 0.0);
            if (pooled) {
                double ss = 0.0;
                int dof = 0;
                for (int j = 1; j <= k_; ++j) {
                    int nj = counts[static_cast<std::size_t>(j - 1)];
                    if (nj == 0) continue;
                    double mu = means_[static_cast<std::size_t>(j - 1)][0];
                    for (const auto& e : ex)
                        if (*e.y == j) ss += (e.x[0] - mu) * (e.x[0] - mu);
                    dof += nj - 1;
                }
                double v = dof > 0 ? ss / static_cast<double>(dof) : 0.0;
                v += spec.variance_floor;
                for (int j = 0; j < k_; ++j) vars_[static_cast<std::size_t>(j)] = v;
            } else {
                for (int j = 1; j <= k_; ++j) {
                    if (counts[static_cast<std::size_t>(j - 1)] == 0) continue;
                    std::vector<double> vals;
                    for (const auto& e : ex)
                        if (*e.y == j) vals.push_back(e.x[0]);
                    vars_[static_cast<std::size_t>(j - 1)] =
                        scalar_variance(vals, means_[static_cast<std::size_t>(j - 1)][0]) +
                        spec.variance_floor;
                }
            }
            return;
        }

        chol_.assign(static_cast<std::size_t>(k_), {});
        log_det_.assign(static_cast<std::size_t>(k_), 0.0);
        if (pooled) {
            Matrix cov = zeros(d);
            int dof = 0;
            for (int j = 1; j <= k_; ++j) {
                int nj = counts[static_cast<std::size_t>(j - 1)];
                if (nj == 0) continue;
                accumulate_scatter(ex, j, means_[static_cast<std::size_t>(j - 1)], cov);
                dof += nj - 1;
            }
            finish_cov(cov, dof, spec.variance_floor);
            Matrix l = cholesky(cov);
            double ld = log_det_from_cholesky(l);
            for (int j = 0; j < k_; ++j) {
                chol_[static_cast<std::size_t>(j)] = l;
                log_det_[static_cast<std::size_t>(j)] = ld;
            }
        } else {
            for (int j = 1; j <= k_; ++j) {
                int nj = counts[static_cast<std::size_t>(j - 1)];
                if (nj == 0) continue;
                Matrix cov = zeros(d);
                accumulate_scatter(ex, j, means_[static_cast<std::size_t>(j - 1)], cov);
                finish_cov(cov, nj - 1, spec.variance_floor);
                chol_[static_cast<std::size_t>(j - 1)] = cholesky(cov);
                log_det_[static_cast<std::size_t>(j - 1)] =
                    log_det_from_cholesky(chol_[static_cast<std::size_t>(j - 1)]);
            }
        }
    }

    ClassDistribution predict_proba(std::span<const double> x) const override {
        check_dim(x);
        std::vector<double> log_lik(static_cast<std::size_t>(k_),
                                    -std::numeric_limits<double>::infinity());
        std::vector<double> diff(dim_);
        for (int j = 0; j < k_; ++j) {
            if (prior_[static_cast<std::size_t>(j)] <= 0.0) continue;
            const auto& mu = means_[static_cast<std::size_t>(j)];
            double ld, q;
            if (dim_ == 1) {
                double v = vars_[static_cast<std::size_t>(j)];
                double dx = x[0] - mu[0];
                ld = std::log(v);
                q = dx * dx / v;
            } else {
                for (std::size_t i = 0; i < dim_; ++i) diff[i] = x[i] - mu[i];
                ld = log_det_[static_cast<std::size_t>(j)];
                q = quad_form(chol_[static_cast<std::size_t>(j)], diff);
            }
            log_lik[static_cast<std::size_t>(j)] =
                std::log(prior_[static_cast<std::size_t>(j)]) -
                0.5 * (kLog2Pi * static_cast<double>(dim_) + ld + q);
        }
        return gaussian_posterior(log_lik, prior_, k_);
    }

    std::size_t dim() const override { return dim_; }
    int k() const override { return k_; }

private:
    static void accumulate_scatter(const std::vector<Example>& ex, int label,
                                   const std::vector<double>& mu, Matrix& cov) {
        const std::size_t d = mu.size();
        for (const auto& e : ex) {
            if (*e.y != label) continue;
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = 0; b <= a; ++b)
                    cov[a][b] += (e.x[a] - mu[a]) * (e.x[b] - mu[b]);
        }
    }

    static void finish_cov(Matrix& cov, int dof, double floor) {
        const std::size_t d = cov.size();
        for (std::size_t a = 0; a < d; ++a) {
            for (std::size_t b = 0; b <= a; ++b) {
                cov[a][b] = dof > 0 ? cov[a][b] / static_cast<double>(dof) : 0.0;
                cov[b][a] = cov[a][b];
            }
            cov[a][a] += floor;
        }
    }

    std::size_t dim_ = 0;
    int k_;
    std::vector<std::vector<double>> means_;
    std::vector<double> prior_;
    std::vector<double> vars_;  // d == 1 path
    std::vector<Matrix> chol_;
    std::vector<double> log_det_;
};

// ---------------------------------------------------------------------------
// Gaussian naive Bayes

class GaussianNbModel : public ClassifierModel {
public:
    GaussianNbModel(ClassifierSpec spec, const LabeledSet& data)
        : ClassifierModel(spec), k_(data.k()), dim_(data.dim()) {
        auto ex = canonical_examples(data);
        auto counts = class_counts(ex, k_);
        means_.assign(static_cast<std::size_t>(k_), {});
        vars_.assign(static_cast<std::size_t>(k_), {});
        prior_.assign(static_cast<std::size_t>(k_), 0.0);
        for (int j = 1; j <= k_; ++j) {
            int nj = counts[static_cast<std::size_t>(j - 1)];
            if (nj == 0) continue;
            prior_[static_cast<std::size_t>(j - 1)] =
                static_cast<double>(nj) / static_cast<double>(ex.size());
            means_[static_cast<std::size_t>(j - 1)] = class_mean(ex, j, dim_);
            auto& var = vars_[static_cast<std::size_t>(j - 1)];
            var.assign(dim_, 0.0);
            for (std::size_t i = 0; i < dim_; ++i) {
                std::vector<double> vals;
                for (const auto& e : ex)
                    if (*e.y == j) vals.push_back(e.x[i]);
                var[i] = scalar_variance(vals, means_[static_cast<std::size_t>(j - 1)][i]) +
                         spec.variance_floor;
            }
        }
    }

    ClassDistribution predict_proba(std::span<const double> x) const override {
        check_dim(x);
        std::vector<double> log_lik(static_cast<std::size_t>(k_),
                                    -std::numeric_limits<double>::infinity());
        for (int j = 0; j < k_; ++j) {
            if (prior_[static_cast<std::size_t>(j)] <= 0.0) continue;
            double ld = 0.0, q = 0.0;
            for (std::size_t i = 0; i < dim_; ++i) {
                double v = vars_[static_cast<std::size_t>(j)][i];
                double dx = x[i] - means_[static_cast<std::size_t>(j)][i];
                ld += std::log(v);
                q += dx * dx / v;
            }
            log_lik[static_cast<std::size_t>(j)] =
                std::log(prior_[static_cast<std::size_t>(j)]) -
                0.5 * (kLog2Pi * static_cast<double>(dim_) + ld + q);
        }
        return gaussian_posterior(log_lik, prior_, k_);
    }

    std::size_t dim() const override { return dim_; }
    int k() const override { return k_; }

private:
    int k_;
    std::size_t dim_;
    std::vector<std::vector<double>> means_;
    std::vector<std::vector<double>> vars_;
    std::vector<double> prior_;
};

// ---------------------------------------------------------------------------
// k-nearest neighbours

class KnnModel : public ClassifierModel {
public:
    KnnModel(ClassifierSpec spec, const LabeledSet& data)
        : ClassifierModel(spec), k_(data.k()), dim_(data.dim()) {
        auto ex = canonical_examples(data);
        // per-covariate scaling to unit training standard deviation; the same
        // factors are applied to queries at predict time
        scale_.assign(dim_, 1.0);
        for (std::size_t i = 0; i < dim_; ++i) {
            std::vector<double> vals;
            vals.reserve(ex.size());
            for (const auto& e : ex) vals.push_back(e.x[i]);
            double mean = std::accumulate(vals.begin(), vals.end(), 0.0) /
                          static_cast<double>(vals.size());
            double sd = std::sqrt(scalar_variance(vals, mean));
            if (sd > 0.0) scale_[i] = 1.0 / sd;
        }
        points_.reserve(ex.size());
        labels_.reserve(ex.size());
        for (const auto& e : ex) {
            std::vector<double> p(dim_);
            for (std::size_t i = 0; i < dim_; ++i) p[i] = e.x[i] * scale_[i];
            points_.push_back(std::move(p));
            labels_.push_back(*e.y);
        }
        neighbors_ = std::min<std::size_t>(static_cast<std::size_t>(spec.k_neighbors),
                                           points_.size());
        smoothing_ = spec.knn_smoothing;
    }

    ClassDistribution predict_proba(std::span<const double> x) const override {
        check_dim(x);
        std::vector<std::pair<double, std::size_t>> dist(points_.size());
        for (std::size_t i = 0; i < points_.size(); ++i) {
            double s = 0.0;
            for (std::size_t a = 0; a < dim_; ++a) {
                double d = x[a] * scale_[a] - points_[i][a];
                s += d * d;
            }
            dist[i] = {s, i};
        }
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(neighbors_),
                          dist.end());
        std::vector<double> counts(static_cast<std::size_t>(k_), 0.0);
        for (std::size_t i = 0; i < neighbors_; ++i)
            counts[static_cast<std::size_t>(labels_[dist[i].second] - 1)] += 1.0;

        ClassDistribution out;
        out.probs.assign(static_cast<std::size_t>(k_), 0.0);
        double denom = smoothing_ ? static_cast<double>(neighbors_) + 1.0
                                  : static_cast<double>(neighbors_);
        double pseudo = smoothing_ ? 1.0 / static_cast<double>(k_) : 0.0;
        for (int j = 0; j < k_; ++j)
            out.probs[static_cast<std::size_t>(j)] =
                (counts[static_cast<std::size_t>(j)] + pseudo) / denom;
        return out;
    }

    std::size_t dim() const override { return dim_; }
    int k() const override { return k_; }

private:
    int k_;
    std::size_t dim_;
    std::vector<double> scale_;
    std::vector<std::vector<double>> points_;
    std::vector<int> labels_;
    std::size_t neighbors_ = 1;
    bool smoothing_ = true;
};

// ---------------------------------------------------------------------------
// multinomial logistic regression, full-batch gradient descent

class LogisticModel : public ClassifierModel {
public:
    LogisticModel(ClassifierSpec spec, const LabeledSet& data)
        : ClassifierModel(spec), k_(data.k()), dim_(data.dim()) {
        auto ex = canonical_examples(data);
        const std::size_t n = ex.size();
        const std::size_t p = dim_ + 1;  // bias last, unpenalised
        w_.assign(static_cast<std::size_t>(k_) * p, 0.0);
        std::vector<double> grad(w_.size());
        std::vector<double> probs(static_cast<std::size_t>(k_));
        for (int it = 0; it < spec.max_iterations; ++it) {
            std::fill(grad.begin(), grad.end(), 0.0);
            for (const auto& e : ex) {
                softmax(e.x, probs);
                for (int j = 0; j < k_; ++j) {
                    double r = probs[static_cast<std::size_t>(j)] - (*e.y == j + 1 ? 1.0 : 0.0);
                    std::size_t base = static_cast<std::size_t>(j) * p;
                    for (std::size_t a = 0; a < dim_; ++a) grad[base + a] += r * e.x[a];
                    grad[base + dim_] += r;
                }
            }
            double gmax = 0.0;
            for (std::size_t i = 0; i < grad.size(); ++i) {
                grad[i] /= static_cast<double>(n);
                if ((i + 1) % p != 0) grad[i] += spec.l2_penalty * w_[i];
                gmax = std::max(gmax, std::abs(grad[i]));
            }
            if (gmax < 1e-10) break;
            for (std::size_t i = 0; i < w_.size(); ++i) w_[i] -= spec.step_size * grad[i];
        }
    }

    ClassDistribution predict_proba(std::span<const double> x) const override {
        check_dim(x);
        ClassDistribution out;
        out.probs.assign(static_cast<std::size_t>(k_), 0.0);
        softmax(x, out.probs);
        return out;
    }

    std::size_t dim() const override { return dim_; }
    int k() const override { return k_; }

private:
    void softmax(std::span<const double> x, std::vector<double>& out) const {
        const std::size_t p = dim_ + 1;
        double best = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < k_; ++j) {
            std::size_t base = static_cast<std::size_t>(j) * p;
            double s = w_[base + dim_];
            for (std::size_t a = 0; a < dim_; ++a) s += w_[base + a] * x[a];
            out[static_cast<std::size_t>(j)] = s;
            best = std::max(best, s);
        }
        double sum = 0.0;
        for (double& v : out) {
            v = std::exp(v - best);
            sum += v;
        }
        for (double& v : out) v /= sum;
    }

    int k_;
    std::size_t dim_;
    std::vector<double> w_;
};

// ---------------------------------------------------------------------------
// random forest: CART trees, Gini impurity, bootstrap + sqrt(d) feature draws

struct TreeNode {
    int feature = -1;           // -1 marks a leaf
    double threshold = 0.0;
    int left = -1, right = -1;  // child indices
    std::vector<double> leaf;   // class frequencies at a leaf
};

class ForestModel : public ClassifierModel {
public:
    ForestModel(ClassifierSpec spec, const LabeledSet& data)
        : ClassifierModel(spec), k_(data.k()), dim_(data.dim()) {
        auto ex = canonical_examples(data);
        trees_.resize(static_cast<std::size_t>(spec.tree_count));
        for (int t = 0; t < spec.tree_count; ++t) {
            Rng rng(mix_seed({spec.seed, 0xf07e57ULL, static_cast<std::uint64_t>(t)}));
            std::vector<std::size_t> sample(ex.size());
            for (auto& s : sample) s = static_cast<std::size_t>(rng.below(ex.size()));
            std::sort(sample.begin(), sample.end());
            build(trees_[static_cast<std::size_t>(t)], ex, sample, 0, spec.max_depth, rng);
        }
    }

    ClassDistribution predict_proba(std::span<const double> x) const override {
        check_dim(x);
        ClassDistribution out;
        out.probs.assign(static_cast<std::size_t>(k_), 0.0);
        for (const auto& tree : trees_) {
            int node = 0;
            while (tree[static_cast<std::size_t>(node)].feature >= 0) {
                const auto& nd = tree[static_cast<std::size_t>(node)];
                node = x[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left
                                                                               : nd.right;
            }
            const auto& leaf = tree[static_cast<std::size_t>(node)].leaf;
            for (int j = 0; j < k_; ++j) out.probs[static_cast<std::size_t>(j)] += leaf[static_cast<std::size_t>(j)];
        }
        for (double& p : out.probs) p /= static_cast<double>(trees_.size());
        return out;
    }

    std::size_t dim() const override { return dim_; }
    int k() const override { return k_; }

private:
    using Tree = std::vector<TreeNode>;

    int build(Tree& tree, const std::vector<Example>& ex, const std::vector<std::size_t>& idx,
              int depth, int max_depth, Rng& rng) {
        int node_id = static_cast<int>(tree.size());
        tree.emplace_back();

        std::vector<double> counts(static_cast<std::size_t>(k_), 0.0);
        for (std::size_t i : idx) counts[static_cast<std::size_t>(*ex[i].y - 1)] += 1.0;
        bool pure = std::count_if(counts.begin(), counts.end(),
                                  [](double c) { return c > 0.0; }) <= 1;

        if (pure || depth >= max_depth || idx.size() < 2) {
            make_leaf(tree[static_cast<std::size_t>(node_id)], counts, idx.size());
            return node_id;
        }

        int n_feat = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(dim_))));
        std::vector<int> features(dim_);
        std::iota(features.begin(), features.end(), 0);
        rng.shuffle(features);
        features.resize(static_cast<std::size_t>(n_feat));
        std::sort(features.begin(), features.end());

        int best_feat = -1;
        double best_thr = 0.0, best_gini = std::numeric_limits<double>::infinity();
        std::vector<std::pair<double, int>> vals;
        for (int f : features) {
            vals.clear();
            for (std::size_t i : idx)
                vals.emplace_back(ex[i].x[static_cast<std::size_t>(f)], *ex[i].y);
            std::sort(vals.begin(), vals.end());
            std::vector<double> left(static_cast<std::size_t>(k_), 0.0);
            std::vector<double> right = counts;
            for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
                left[static_cast<std::size_t>(vals[i].second - 1)] += 1.0;
                right[static_cast<std::size_t>(vals[i].second - 1)] -= 1.0;
                if (vals[i].first == vals[i + 1].first) continue;
                double nl = static_cast<double>(i + 1);
                double nr = static_cast<double>(vals.size() - i - 1);
                double g = nl * gini(left, nl) + nr * gini(right, nr);
                if (g < best_gini) {
                    best_gini = g;
                    best_feat = f;
                    best_thr = 0.5 * (vals[i].first + vals[i + 1].first);
                }
            }
        }

        if (best_feat < 0) {
            make_leaf(tree[static_cast<std::size_t>(node_id)], counts, idx.size());
            return node_id;
        }

        std::vector<std::size_t> li, ri;
        for (std::size_t i : idx) {
            if (ex[i].x[static_cast<std::size_t>(best_feat)] <= best_thr)
                li.push_back(i);
            else
                ri.push_back(i);
        }
        int l = build(tree, ex, li, depth + 1, max_depth, rng);
        int r = build(tree, ex, ri, depth + 1, max_depth, rng);
        auto& nd = tree[static_cast<std::size_t>(node_id)];
        nd.feature = best_feat;
        nd.threshold = best_thr;
        nd.left = l;
        nd.right = r;
        return node_id;
    }

    void make_leaf(TreeNode& node, const std::vector<double>& counts, std::size_t n) {
        node.feature = -1;
        node.leaf.assign(static_cast<std::size_t>(k_), 0.0);
        for (int j = 0; j < k_; ++j)
            node.leaf[static_cast<std::size_t>(j)] =
                counts[static_cast<std::size_t>(j)] / static_cast<double>(n);
    }

    static double gini(const std::vector<double>& counts, double n) {
        double g = 1.0;
        for (double c : counts) g -= (c / n) * (c / n);
        return g;
    }

    int k_;
    std::size_t dim_;
    std::vector<Tree> trees_;
};

}  // namespace

ClassifierKind classifier_kind_from_string(const std::string& name) { return require_kind(name); }

std::string to_string(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::lda: return "lda";
        case ClassifierKind::qda: return "qda";
        case ClassifierKind::knn: return "knn";
        case ClassifierKind::gaussian_nb: return "gaussian_nb";
        case ClassifierKind::logistic_regression: return "logistic_regression";
        case ClassifierKind::random_forest: return "random_forest";
    }
    return "?";
}

ModelPtr train(const ClassifierSpec& spec, const LabeledSet& data) {
    spec.validate();
    if (data.empty()) throw EmptySetError("train: empty training set");

    auto counts = class_counts(data.examples(), data.k());
    if (int only = single_present_class(counts); only > 0)
        return std::make_shared<SingleClassModel>(spec, data.dim(), data.k(), only);

    switch (spec.kind) {
        case ClassifierKind::lda:
            return std::make_shared<DiscriminantModel>(spec, data, /*pooled=*/true);
        case ClassifierKind::qda:
            return std::make_shared<DiscriminantModel>(spec, data, /*pooled=*/false);
        case ClassifierKind::knn:
            return std::make_shared<KnnModel>(spec, data);
        case ClassifierKind::gaussian_nb:
            return std::make_shared<GaussianNbModel>(spec, data);
        case ClassifierKind::logistic_regression:
            return std::make_shared<LogisticModel>(spec, data);
        case ClassifierKind::random_forest:
            return std::make_shared<ForestModel>(spec, data);
    }
    throw InvalidArgumentError("train: unknown classifier kind");
}

ClassDistribution predict_proba(const TrainedModel& model, std::span<const double> x) {
    return model.predict_proba(x);
}

TrainFn trainer(const ClassifierSpec& spec) {
    return [spec](const LabeledSet& data) { return train(spec, data); };
}

}  // namespace eqlab
