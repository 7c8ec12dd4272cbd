#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "eqlab/model.hpp"
#include "eqlab/types.hpp"

namespace eqlab {

enum class ClassifierKind { lda, qda, knn, gaussian_nb, logistic_regression, random_forest };

struct ClassifierSpec {
    ClassifierKind kind = ClassifierKind::knn;

    // knn
    int k_neighbors = 5;
    bool knn_smoothing = true;  // add 1/k pseudo-count per class so QBC KL stays finite

    // random_forest
    int tree_count = 25;
    int max_depth = 8;
    std::uint64_t seed = 0;

    // logistic_regression
    int max_iterations = 500;
    double step_size = 0.1;
    double l2_penalty = 1e-4;

    // lda / qda / gaussian_nb
    double variance_floor = 1e-6;

    void validate() const {
        if (k_neighbors < 1) throw InvalidArgumentError("ClassifierSpec: k_neighbors >= 1");
        if (tree_count < 1) throw InvalidArgumentError("ClassifierSpec: tree_count >= 1");
        if (!(variance_floor > 0.0))
            throw InvalidArgumentError("ClassifierSpec: variance_floor > 0");
    }
};

ClassifierKind classifier_kind_from_string(const std::string& name);
std::string to_string(ClassifierKind kind);

// Base for all ClassifierSpec-trained models; keeps the spec it was fitted
// from so retrain-based strategies can rebuild the same family.
class ClassifierModel : public TrainedModel {
public:
    explicit ClassifierModel(ClassifierSpec spec) : spec_(std::move(spec)) {}
    const ClassifierSpec& spec() const { return spec_; }

private:
    ClassifierSpec spec_;
};

// Fits a model. Deterministic in (spec, data content); the training examples
// are canonicalised internally so example order never matters.
ModelPtr train(const ClassifierSpec& spec, const LabeledSet& data);

ClassDistribution predict_proba(const TrainedModel& model, std::span<const double> x);

// train() curried on the spec, for the TrainFn-based strategy interfaces.
TrainFn trainer(const ClassifierSpec& spec);

}  // namespace eqlab
