#include "eqlab/loss.hpp"

#include <algorithm>
#include <cmath>

namespace eqlab {

int allocate(const ClassDistribution& p) {
    int best = 0;
    for (int j = 1; j < p.k(); ++j) {
        if (p.probs[static_cast<std::size_t>(j)] > p.probs[static_cast<std::size_t>(best)])
            best = j;
    }
    return best + 1;
}

double empirical_loss(const LossSpec& spec, int y, const ClassDistribution& p) {
    if (y < 1 || y > p.k()) throw InvalidArgumentError("empirical_loss: label out of range");
    switch (spec.kind) {
        case LossKind::error_rate:
            return allocate(p) == y ? 0.0 : 1.0;
        case LossKind::log_loss: {
            double py = p.probs[static_cast<std::size_t>(y - 1)];
            return -std::log(std::max(py, spec.eps_p));
        }
    }
    throw InvalidArgumentError("empirical_loss: unknown loss kind");
}

double estimate_expected_loss(const LossSpec& spec, const TrainedModel& model,
                              const LabeledSet& test) {
    if (test.empty()) throw EmptySetError("estimate_expected_loss: empty test set");
    double sum = 0.0;
    for (const auto& e : test.examples()) {
        sum += empirical_loss(spec, *e.y, model.predict_proba(e.x));
    }
    return sum / static_cast<double>(test.size());
}

ClassDistribution class_prior(const LabeledSet& data) {
    if (data.empty()) throw EmptySetError("class_prior: empty dataset");
    ClassDistribution out;
    out.probs.assign(static_cast<std::size_t>(data.k()), 0.0);
    for (const auto& e : data.examples()) out.probs[static_cast<std::size_t>(*e.y - 1)] += 1.0;
    for (double& p : out.probs) p /= static_cast<double>(data.size());
    return out;
}

}  // namespace eqlab
