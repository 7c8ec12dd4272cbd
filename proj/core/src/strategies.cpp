#include "eqlab/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eqlab/loss.hpp"

namespace eqlab {

StrategyKind strategy_kind_from_string(const std::string& name) {
    if (name == "rs") return StrategyKind::rs;
    if (name == "lc") return StrategyKind::lc;
    if (name == "se") return StrategyKind::se;
    if (name == "qbc_vote") return StrategyKind::qbc_vote;
    if (name == "qbc_kl") return StrategyKind::qbc_kl;
    if (name == "efelc") return StrategyKind::efelc;
    if (name == "simple_eq") return StrategyKind::simple_eq;
    if (name == "partition_eq") return StrategyKind::partition_eq;
    throw InvalidArgumentError("unknown strategy kind: " + name);
}

std::string to_string(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::rs: return "rs";
        case StrategyKind::lc: return "lc";
        case StrategyKind::se: return "se";
        case StrategyKind::qbc_vote: return "qbc_vote";
        case StrategyKind::qbc_kl: return "qbc_kl";
        case StrategyKind::efelc: return "efelc";
        case StrategyKind::simple_eq: return "simple_eq";
        case StrategyKind::partition_eq: return "partition_eq";
    }
    return "?";
}

double least_confidence(const ClassDistribution& p) {
    return 1.0 - p.probs[static_cast<std::size_t>(allocate(p) - 1)];
}

double shannon_entropy(const ClassDistribution& p) {
    double h = 0.0;
    for (double v : p.probs)
        if (v > 0.0) h -= v * std::log(v);
    return h;
}

double qbc_vote_entropy(const std::vector<int>& votes, int k) {
    if (votes.size() < 2) throw EmptyCommitteeError("qbc_vote_entropy: need >= 2 votes");
    std::vector<double> freq(static_cast<std::size_t>(k), 0.0);
    for (int v : votes) {
        if (v < 1 || v > k) throw InvalidArgumentError("qbc_vote_entropy: vote out of range");
        freq[static_cast<std::size_t>(v - 1)] += 1.0;
    }
    double h = 0.0;
    for (double f : freq) {
        if (f == 0.0) continue;
        double q = f / static_cast<double>(votes.size());
        h -= q * std::log(q);
    }
    return h;
}

double qbc_avg_kl(const std::vector<ClassDistribution>& members, double eps) {
    if (members.size() < 2) throw EmptyCommitteeError("qbc_avg_kl: need >= 2 members");
    const std::size_t k = members.front().probs.size();
    std::vector<double> mean(k, 0.0);
    for (const auto& m : members) {
        if (m.probs.size() != k) throw LengthMismatchError("qbc_avg_kl: ragged members");
        for (std::size_t j = 0; j < k; ++j) mean[j] += m.probs[j];
    }
    for (double& v : mean) v /= static_cast<double>(members.size());

    double total = 0.0;
    for (const auto& m : members) {
        double kl = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            double p = std::max(m.probs[j], eps);
            double q = std::max(mean[j], eps);
            kl += p * (std::log(p) - std::log(q));
        }
        total += kl;
    }
    return total / static_cast<double>(members.size());
}

// ---------------------------------------------------------------------------

namespace {

double pool_least_confidence_sum(const TrainedModel& model, const Pool& pool) {
    double s = 0.0;
    for (std::size_t i = 0; i < pool.size(); ++i)
        s += least_confidence(model.predict_proba(pool.example(i).x));
    return s;
}

}  // namespace

double efelc_score(const Example& x, const TrainFn& base, const LabeledSet& data,
                   const Pool& pool, const LossSpec& loss) {
    (void)loss;  // the pool least-confidence surrogate stands in for the loss
    if (data.empty()) throw EmptySetError("efelc_score: empty labelled set");
    ModelPtr current = base(data);
    ClassDistribution p = current->predict_proba(x.x);
    double score = 0.0;
    for (int j = 1; j <= data.k(); ++j) {
        double pj = p.probs[static_cast<std::size_t>(j - 1)];
        if (pj == 0.0) continue;
        ModelPtr retrained = base(data.with(Example{x.x, j}));
        score -= pj * pool_least_confidence_sum(*retrained, pool);
    }
    return score;
}

double efelc_score(const Example& x, const ClassifierSpec& base_spec, const LabeledSet& data,
                   const Pool& pool, const LossSpec& loss) {
    return efelc_score(x, trainer(base_spec), data, pool, loss);
}

double simple_eq_score(const Example& x, const TrainFn& base, const LabeledSet& data,
                       const LossSpec& loss) {
    if (data.empty()) throw EmptySetError("simple_eq_score: empty labelled set");
    ModelPtr current = base(data);
    ClassDistribution p = current->predict_proba(x.x);
    double score = 0.0;
    for (int j = 1; j <= data.k(); ++j) {
        double pj = p.probs[static_cast<std::size_t>(j - 1)];
        if (pj == 0.0) continue;
        ModelPtr retrained = base(data.with(Example{x.x, j}));
        score -= pj * estimate_expected_loss(loss, *retrained, data);
    }
    return score;
}

double simple_eq_score(const Example& x, const ClassifierSpec& base_spec, const LabeledSet& data,
                       const LossSpec& loss) {
    return simple_eq_score(x, trainer(base_spec), data, loss);
}

std::vector<PartitionPlan> make_partition_plans(const LabeledSet& data, int repeats, Rng& rng) {
    if (data.size() < 3)
        throw TooFewExamplesError("make_partition_plans: need >= 3 examples");
    if (repeats < 1) throw InvalidArgumentError("make_partition_plans: repeats >= 1");

    std::vector<int> counts(static_cast<std::size_t>(data.k()), 0);
    for (const auto& e : data.examples()) counts[static_cast<std::size_t>(*e.y - 1)]++;
    bool stratified = std::all_of(counts.begin(), counts.end(),
                                  [](int c) { return c == 0 || c >= 3; });

    std::vector<PartitionPlan> plans;
    plans.reserve(static_cast<std::size_t>(repeats));
    for (int r = 0; r < repeats; ++r) {
        std::vector<std::size_t> sequence;
        sequence.reserve(data.size());
        if (stratified) {
            for (int j = 1; j <= data.k(); ++j) {
                std::vector<std::size_t> members;
                for (std::size_t i = 0; i < data.size(); ++i)
                    if (*data[i].y == j) members.push_back(i);
                rng.shuffle(members);
                sequence.insert(sequence.end(), members.begin(), members.end());
            }
        } else {
            sequence.resize(data.size());
            for (std::size_t i = 0; i < data.size(); ++i) sequence[i] = i;
            rng.shuffle(sequence);
        }
        PartitionPlan plan;
        for (std::size_t i = 0; i < sequence.size(); ++i) {
            switch (i % 3) {
                case 0: plan.prob_part.push_back(sequence[i]); break;
                case 1: plan.train_part.push_back(sequence[i]); break;
                default: plan.eval_part.push_back(sequence[i]); break;
            }
        }
        plans.push_back(std::move(plan));
    }
    return plans;
}

double partition_eq_score(const Example& x, const TrainFn& base, const TrainFn& prob,
                          const LabeledSet& data, const LossSpec& loss,
                          const std::vector<PartitionPlan>& plans) {
    if (plans.empty()) throw InvalidArgumentError("partition_eq_score: no partition plans");
    double total = 0.0;
    for (const auto& plan : plans) {
        LabeledSet prob_set = data.subset(plan.prob_part);
        LabeledSet train_set = data.subset(plan.train_part);
        LabeledSet eval_set = data.subset(plan.eval_part);
        ClassDistribution p = prob(prob_set)->predict_proba(x.x);
        double term = 0.0;
        for (int j = 1; j <= data.k(); ++j) {
            double pj = p.probs[static_cast<std::size_t>(j - 1)];
            if (pj == 0.0) continue;
            ModelPtr retrained = base(train_set.with(Example{x.x, j}));
            term += pj * estimate_expected_loss(loss, *retrained, eval_set);
        }
        total -= term;
    }
    return total / static_cast<double>(plans.size());
}

double partition_eq_score(const Example& x, const ClassifierSpec& base_spec,
                          const ClassifierSpec& prob_spec, const LabeledSet& data,
                          const LossSpec& loss, int repeats, Rng& rng) {
    auto plans = make_partition_plans(data, repeats, rng);
    return partition_eq_score(x, trainer(base_spec), trainer(prob_spec), data, loss, plans);
}

Pool subsample_pool(const Pool& pool, std::size_t n_u, Rng& rng) {
    if (n_u < 1) throw InvalidArgumentError("subsample_pool: n_u >= 1");
    if (n_u >= pool.size()) return pool;
    std::vector<std::size_t> positions(pool.size());
    for (std::size_t i = 0; i < positions.size(); ++i) positions[i] = i;
    std::vector<Example> ex;
    std::vector<int> ids;
    ex.reserve(n_u);
    ids.reserve(n_u);
    for (std::size_t i = 0; i < n_u; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.below(positions.size() - i));
        std::swap(positions[i], positions[j]);
        ex.push_back(pool.example(positions[i]));
        ids.push_back(pool.id(positions[i]));
    }
    return Pool(std::move(ex), std::move(ids));
}

int select(const ScoreVector& scores, Rng& rng) {
    if (scores.ids.empty()) throw EmptyScoreVectorError("select: no evaluated ids");
    if (scores.ids.size() != scores.scores.size())
        throw LengthMismatchError("select: ids/scores size mismatch");
    double best = -std::numeric_limits<double>::infinity();
    for (double s : scores.scores) {
        if (!std::isfinite(s)) throw InvalidArgumentError("select: non-finite score");
        best = std::max(best, s);
    }
    std::vector<std::size_t> arg;
    for (std::size_t i = 0; i < scores.scores.size(); ++i)
        if (scores.scores[i] == best) arg.push_back(i);
    std::size_t pick = arg.size() == 1 ? arg.front()
                                       : arg[static_cast<std::size_t>(rng.below(arg.size()))];
    return scores.ids[pick];
}

ScoreVector score_pool(const StrategySpec& strategy, const ClassifierSpec& base_spec,
                       const LabeledSet& data, const Pool& pool, const LossSpec& loss, Rng& rng) {
    strategy.validate();
    if (pool.empty()) throw EmptySetError("score_pool: empty pool");

    ScoreVector out;
    out.ids = pool.ids();
    out.scores.assign(pool.size(), 0.0);

    switch (strategy.kind) {
        case StrategyKind::rs:
            return out;  // all-equal scores; select() draws uniformly
        case StrategyKind::lc:
        case StrategyKind::se: {
            ModelPtr model = train(base_spec, data);
            for (std::size_t i = 0; i < pool.size(); ++i) {
                ClassDistribution p = model->predict_proba(pool.example(i).x);
                out.scores[i] =
                    strategy.kind == StrategyKind::lc ? least_confidence(p) : shannon_entropy(p);
            }
            return out;
        }
        case StrategyKind::qbc_vote:
        case StrategyKind::qbc_kl: {
            std::vector<ModelPtr> members;
            members.reserve(strategy.committee.size());
            for (const auto& spec : strategy.committee) members.push_back(train(spec, data));
            for (std::size_t i = 0; i < pool.size(); ++i) {
                if (strategy.kind == StrategyKind::qbc_vote) {
                    std::vector<int> votes;
                    votes.reserve(members.size());
                    for (const auto& m : members)
                        votes.push_back(allocate(m->predict_proba(pool.example(i).x)));
                    out.scores[i] = qbc_vote_entropy(votes, data.k());
                } else {
                    std::vector<ClassDistribution> preds;
                    preds.reserve(members.size());
                    for (const auto& m : members)
                        preds.push_back(m->predict_proba(pool.example(i).x));
                    out.scores[i] = qbc_avg_kl(preds, loss.eps_p);
                }
            }
            return out;
        }
        case StrategyKind::efelc: {
            TrainFn base = trainer(base_spec);
            for (std::size_t i = 0; i < pool.size(); ++i)
                out.scores[i] = efelc_score(pool.example(i), base, data, pool, loss);
            return out;
        }
        case StrategyKind::simple_eq: {
            TrainFn base = trainer(base_spec);
            for (std::size_t i = 0; i < pool.size(); ++i)
                out.scores[i] = simple_eq_score(pool.example(i), base, data, loss);
            return out;
        }
        case StrategyKind::partition_eq: {
            auto plans = make_partition_plans(data, strategy.partition_repeats, rng);
            TrainFn base = trainer(base_spec);
            TrainFn prob = trainer(strategy.prob_spec ? *strategy.prob_spec : base_spec);
            for (std::size_t i = 0; i < pool.size(); ++i)
                out.scores[i] = partition_eq_score(pool.example(i), base, prob, data, loss, plans);
            return out;
        }
    }
    throw InvalidArgumentError("score_pool: unknown strategy kind");
}

}  // namespace eqlab
