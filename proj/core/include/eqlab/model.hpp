#pragma once

#include <functional>
#include <memory>
#include <span>

#include "eqlab/types.hpp"

namespace eqlab {

// Capability contract for a trained classifier: predict a class distribution
// for a covariate vector. Implementations are immutable once constructed, so
// models can be shared freely across threads.
class TrainedModel {
public:
    virtual ~TrainedModel() = default;

    virtual ClassDistribution predict_proba(std::span<const double> x) const = 0;
    virtual std::size_t dim() const = 0;
    virtual int k() const = 0;

protected:
    void check_dim(std::span<const double> x) const {
        if (x.size() != dim()) throw DimensionMismatchError("predict_proba: dimension mismatch");
    }
};

using ModelPtr = std::shared_ptr<const TrainedModel>;

// Anything that can fit a model from labelled data. Retrain-based strategies
// are written against this signature so that non-standard classifier families
// (for instance the univariate known-variance family) plug in alongside the
// ClassifierSpec-backed ones.
using TrainFn = std::function<ModelPtr(const LabeledSet&)>;

}  // namespace eqlab
