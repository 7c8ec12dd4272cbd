#pragma once

#include "eqlab/model.hpp"
#include "eqlab/types.hpp"

namespace eqlab {

// Most-probable-class allocation; ties go to the lowest class index.
// Returns a 1-based label.
int allocate(const ClassDistribution& p);

// Loss of a single prediction against the observed label y (1-based).
// error_rate: 0/1 on misallocation. log_loss: -ln(max(p_y, eps_p)).
double empirical_loss(const LossSpec& spec, int y, const ClassDistribution& p);

// Mean empirical loss of `model` over a holdout set.
double estimate_expected_loss(const LossSpec& spec, const TrainedModel& model,
                              const LabeledSet& test);

// Empirical class frequencies; absent classes get probability 0.
ClassDistribution class_prior(const LabeledSet& data);

}  // namespace eqlab
