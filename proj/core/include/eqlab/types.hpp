#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "eqlab/errors.hpp"

namespace eqlab {

// Class labels are 1-based: y in {1, ..., k}.
struct Example {
    std::vector<double> x;
    std::optional<int> y;

    std::size_t dim() const { return x.size(); }
};

// A fully labelled dataset. All examples carry a label in 1..k and share one
// covariate dimension.
class LabeledSet {
public:
    LabeledSet() = default;
    LabeledSet(std::vector<Example> examples, int k) : examples_(std::move(examples)), k_(k) {
        validate();
    }

    const std::vector<Example>& examples() const { return examples_; }
    int k() const { return k_; }
    std::size_t size() const { return examples_.size(); }
    bool empty() const { return examples_.empty(); }
    std::size_t dim() const { return examples_.empty() ? 0 : examples_.front().dim(); }
    const Example& operator[](std::size_t i) const { return examples_[i]; }

    LabeledSet with(const Example& extra) const {
        std::vector<Example> out = examples_;
        out.push_back(extra);
        return LabeledSet(std::move(out), k_);
    }

    LabeledSet subset(const std::vector<std::size_t>& idx) const {
        std::vector<Example> out;
        out.reserve(idx.size());
        for (std::size_t i : idx) out.push_back(examples_[i]);
        return LabeledSet(std::move(out), k_);
    }

private:
    void validate() const {
        if (k_ < 2) throw InvalidArgumentError("LabeledSet: k must be >= 2");
        for (const auto& e : examples_) {
            if (!e.y) throw InvalidArgumentError("LabeledSet: every example needs a label");
            if (*e.y < 1 || *e.y > k_)
                throw InvalidArgumentError("LabeledSet: label out of range 1..k");
            if (e.dim() != examples_.front().dim())
                throw DimensionMismatchError("LabeledSet: mixed covariate dimensions");
            if (e.dim() == 0) throw InvalidArgumentError("LabeledSet: zero-dimensional covariates");
        }
    }

    std::vector<Example> examples_;
    int k_ = 0;
};

// Unlabelled pool with stable integer ids. Labels are retained for the oracle
// but scoring code must only look at the covariates; the harness reveals a
// label when an example is selected.
class Pool {
public:
    Pool() = default;
    Pool(std::vector<Example> examples, std::vector<int> ids)
        : examples_(std::move(examples)), ids_(std::move(ids)) {
        if (examples_.size() != ids_.size())
            throw InvalidArgumentError("Pool: ids/examples size mismatch");
        std::vector<int> sorted = ids_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw InvalidArgumentError("Pool: duplicate ids");
    }
    explicit Pool(std::vector<Example> examples) : examples_(std::move(examples)) {
        ids_.resize(examples_.size());
        for (std::size_t i = 0; i < ids_.size(); ++i) ids_[i] = static_cast<int>(i);
    }

    std::size_t size() const { return examples_.size(); }
    bool empty() const { return examples_.empty(); }
    const std::vector<int>& ids() const { return ids_; }
    const Example& example(std::size_t pos) const { return examples_[pos]; }
    int id(std::size_t pos) const { return ids_[pos]; }

    int oracle_label(std::size_t pos) const {
        if (!examples_[pos].y) throw InvalidArgumentError("Pool: example has no oracle label");
        return *examples_[pos].y;
    }

    Pool without(std::size_t pos) const {
        std::vector<Example> ex = examples_;
        std::vector<int> ids = ids_;
        ex.erase(ex.begin() + static_cast<std::ptrdiff_t>(pos));
        ids.erase(ids.begin() + static_cast<std::ptrdiff_t>(pos));
        return Pool(std::move(ex), std::move(ids));
    }

private:
    std::vector<Example> examples_;
    std::vector<int> ids_;
};

// Probability vector over the k classes.
struct ClassDistribution {
    std::vector<double> probs;

    int k() const { return static_cast<int>(probs.size()); }

    bool valid(double tol = 1e-9) const {
        double sum = 0.0;
        for (double p : probs) {
            if (!(p >= 0.0 && p <= 1.0) || !std::isfinite(p)) return false;
            sum += p;
        }
        return std::abs(sum - 1.0) <= tol;
    }
};

enum class LossKind { error_rate, log_loss };

struct LossSpec {
    LossKind kind = LossKind::error_rate;
    double eps_p = 1e-12;  // log-loss probability floor, in (0, 1e-3]

    void validate() const {
        if (!(eps_p > 0.0 && eps_p <= 1e-3))
            throw InvalidArgumentError("LossSpec: eps_p must be in (0, 1e-3]");
    }
};

}  // namespace eqlab
