#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eqlab/classifiers.hpp"
#include "eqlab/model.hpp"
#include "eqlab/rng.hpp"
#include "eqlab/types.hpp"

namespace eqlab {

enum class StrategyKind { rs, lc, se, qbc_vote, qbc_kl, efelc, simple_eq, partition_eq };

StrategyKind strategy_kind_from_string(const std::string& name);
std::string to_string(StrategyKind kind);

struct StrategySpec {
    StrategyKind kind = StrategyKind::rs;
    std::vector<ClassifierSpec> committee;            // qbc kinds, size >= 2
    int partition_repeats = 10;                       // partition_eq
    std::optional<ClassifierSpec> prob_spec;          // partition_eq; defaults to the base spec
    std::uint64_t seed = 0;

    void validate() const {
        if ((kind == StrategyKind::qbc_vote || kind == StrategyKind::qbc_kl) &&
            committee.size() < 2)
            throw EmptyCommitteeError("StrategySpec: qbc needs a committee of >= 2");
        if (partition_repeats < 1)
            throw InvalidArgumentError("StrategySpec: partition_repeats >= 1");
    }
};

// Scores over the evaluated subset of a pool; higher is more preferred.
struct ScoreVector {
    std::vector<int> ids;
    std::vector<double> scores;
};

// One three-way split of a labelled set: indices for probability estimation
// (C), retraining (T) and loss evaluation (E).
struct PartitionPlan {
    std::vector<std::size_t> prob_part;
    std::vector<std::size_t> train_part;
    std::vector<std::size_t> eval_part;
};

// --------------------------------------------------------------------------
// per-distribution scores

// 1 - p(allocated class)
double least_confidence(const ClassDistribution& p);

// -sum p_j ln p_j with 0 ln 0 = 0
double shannon_entropy(const ClassDistribution& p);

// entropy of the committee's empirical vote distribution (labels are 1-based)
double qbc_vote_entropy(const std::vector<int>& votes, int k);

// mean KL(member || committee mean), probabilities floored at eps
double qbc_avg_kl(const std::vector<ClassDistribution>& members, double eps = 1e-12);

// --------------------------------------------------------------------------
// retrain-based candidate scores

// Expected-future-error heuristic: loss of each retrained model approximated
// by total least confidence over the pool. Higher is better.
double efelc_score(const Example& x, const TrainFn& base, const LabeledSet& data,
                   const Pool& pool, const LossSpec& loss);
double efelc_score(const Example& x, const ClassifierSpec& base_spec, const LabeledSet& data,
                   const Pool& pool, const LossSpec& loss);

// Naive-reuse estimate: retrain on data + (x, c_j), evaluate in-sample on data.
double simple_eq_score(const Example& x, const TrainFn& base, const LabeledSet& data,
                       const LossSpec& loss);
double simple_eq_score(const Example& x, const ClassifierSpec& base_spec, const LabeledSet& data,
                       const LossSpec& loss);

// Random three-way partitions, as-equal-as-possible thirds, stratified by
// class when every class has >= 3 members. One set of plans is drawn per
// selection step and shared across every candidate.
std::vector<PartitionPlan> make_partition_plans(const LabeledSet& data, int repeats, Rng& rng);

double partition_eq_score(const Example& x, const TrainFn& base, const TrainFn& prob,
                          const LabeledSet& data, const LossSpec& loss,
                          const std::vector<PartitionPlan>& plans);
double partition_eq_score(const Example& x, const ClassifierSpec& base_spec,
                          const ClassifierSpec& prob_spec, const LabeledSet& data,
                          const LossSpec& loss, int repeats, Rng& rng);

// --------------------------------------------------------------------------
// pool plumbing

// Uniform sample without replacement of min(n_u, |pool|) entries.
Pool subsample_pool(const Pool& pool, std::size_t n_u, Rng& rng);

// Argmax over evaluated ids; ties break uniformly at random. Random selection
// is realised by an all-equal score vector.
int select(const ScoreVector& scores, Rng& rng);

// Scores the whole pool under the given strategy. The pool passed in is both
// the candidate set and, for efelc, the evaluation set (the caller applies
// any sub-sampling first).
ScoreVector score_pool(const StrategySpec& strategy, const ClassifierSpec& base_spec,
                       const LabeledSet& data, const Pool& pool, const LossSpec& loss, Rng& rng);

}  // namespace eqlab
