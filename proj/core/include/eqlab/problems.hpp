#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "eqlab/detail/linalg.hpp"
#include "eqlab/rng.hpp"
#include "eqlab/types.hpp"

namespace eqlab {

enum class ProblemKind {
    gaussian_pair,
    ripley4,
    quadratic_boundary,
    gaussian_triangles,
    oscillating_boundary,
    curved_boundary,
    csv
};

ProblemKind problem_kind_from_string(const std::string& name);
std::string to_string(ProblemKind kind);

struct GaussianComponent {
    double weight = 1.0;
    std::vector<double> mean;
    detail::Matrix cov;
};

struct ClassMixture {
    double prior = 0.0;
    std::vector<GaussianComponent> components;
};

// A classification problem: either a known Gaussian-mixture generator or a
// CSV-backed real dataset.
struct ProblemSpec {
    ProblemKind kind = ProblemKind::gaussian_pair;
    std::vector<ClassMixture> classes;  // synthetic kinds
    std::string csv_path;               // csv kind
    std::string label_column;

    bool synthetic() const { return kind != ProblemKind::csv; }
    int k() const { return static_cast<int>(classes.size()); }
    std::size_t dim() const {
        return classes.empty() || classes.front().components.empty()
                   ? 0
                   : classes.front().components.front().mean.size();
    }
    void validate() const;
};

// Shipped parameter sets for the named synthetic problems.
ProblemSpec make_problem(ProblemKind kind);

// i.i.d. draws: class from the prior, covariates from that class's mixture.
LabeledSet generate(const ProblemSpec& spec, std::size_t n, Rng& rng);

// True class posterior p(y | x) from the mixture densities (synthetic only).
std::vector<double> true_posterior(const ProblemSpec& spec, std::span<const double> x);

// Marginal covariate density (synthetic only).
double marginal_density(const ProblemSpec& spec, std::span<const double> x);

// Bayes error estimated by classifying n fresh draws with the true posterior.
double mc_bayes_error(const ProblemSpec& spec, std::size_t n, Rng& rng);

// CSV ingestion: header row required, comma-separated, numeric covariates;
// labels are mapped to 1..k by first appearance. The mapping is recorded.
struct CsvDataset {
    LabeledSet data;
    std::vector<std::string> label_names;  // label_names[j] is class j+1
};

CsvDataset load_csv(const std::string& path, const std::string& label_column);

struct DatasetBundle {
    LabeledSet labeled;
    Pool pool;
    LabeledSet test;
    std::uint64_t seed = 0;
};

// Seeded reshuffle, then contiguous assignment into labelled/pool/test. The
// labelled part is redrawn (bounded retries) until every class appears.
DatasetBundle split(const LabeledSet& data, std::uint64_t seed, std::size_t n_labeled,
                    std::size_t n_pool, std::size_t n_test);

}  // namespace eqlab
