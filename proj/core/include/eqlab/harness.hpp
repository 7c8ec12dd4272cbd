#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eqlab/classifiers.hpp"
#include "eqlab/metrics.hpp"
#include "eqlab/problems.hpp"
#include "eqlab/strategies.hpp"

namespace eqlab {

struct ProblemConfig {
    std::string name;
    std::string group = "theoretical";  // small | large | theoretical
    ProblemSpec spec;
};

struct ClassifierConfig {
    std::string name;
    ClassifierSpec spec;
};

struct StrategyConfig {
    std::string name;
    StrategySpec spec;
};

struct SplitSizes {
    std::size_t n_labeled = 10;
    std::size_t n_pool = 150;
    std::size_t n_test = 500;
};

struct ExperimentConfig {
    std::vector<ProblemConfig> problems;
    std::vector<ClassifierConfig> classifiers;
    std::vector<StrategyConfig> strategies;
    LossSpec loss;
    SplitSizes split;
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::size_t pool_subsample = 100;      // n_u, retrain-based strategies only
    std::optional<std::size_t> budget;     // default: run until the pool is exhausted
    std::uint64_t master_seed = 1;
    std::string out_dir = "out";

    void validate() const;
};

struct RunRecord {
    std::string problem;
    std::string classifier;
    std::string strategy;
    std::uint64_t seed = 0;
    LearningCurve curve;
    double wall_time_s = 0.0;   // informational; never serialised
    std::uint64_t rng_seed = 0;
    bool failed = false;
    std::string error;
};

// Rank table for one (classifier, problem group) pairing: one row per metric
// plus the overall rank, one column per strategy.
struct AggregateTable {
    std::string classifier;
    std::string group;
    std::vector<std::string> methods;
    std::vector<std::string> metric_names;
    std::vector<RankVector> rows;
    RankVector overall;
};

// One iterated-AL run: train, record loss, score the (sub-sampled) pool,
// select, reveal the oracle label, move it to the labelled set, repeat.
RunRecord run_iterated_al(const DatasetBundle& bundle, const ClassifierConfig& clf,
                          const StrategyConfig& strategy, const LossSpec& loss,
                          std::size_t budget, std::size_t pool_subsample, Rng rng);

// Full factorial study; every strategy inside one (problem, classifier, seed)
// cell receives the identical bundle. `jobs` only controls scheduling; the
// records are a pure function of the config.
std::vector<RunRecord> run_study(const ExperimentConfig& config, int jobs = 1);

std::vector<AggregateTable> aggregate(const std::vector<RunRecord>& records,
                                      const ExperimentConfig& config);

// --------------------------------------------------------------------------
// configuration and result files

ExperimentConfig load_config(const std::string& path);

// Writes per-run learning curves, aggregate tables and a manifest under
// config.out_dir. Output bytes depend only on the config.
void write_study_outputs(const std::vector<RunRecord>& records,
                         const std::vector<AggregateTable>& tables,
                         const ExperimentConfig& config, const std::string& config_text);

// FNV-1a over the raw config text; recorded in the manifest.
std::uint64_t config_hash(const std::string& text);

// Deterministic float formatting used for every CSV cell.
std::string format_double(double v);

}  // namespace eqlab
