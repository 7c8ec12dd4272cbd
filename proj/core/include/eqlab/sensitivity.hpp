#pragma once

#include <cstdint>
#include <vector>

#include "eqlab/classifiers.hpp"
#include "eqlab/metrics.hpp"
#include "eqlab/problems.hpp"
#include "eqlab/rng.hpp"

namespace eqlab {

// Uniform 2-d lattice used as a fixed pool; ids are row-major (y outer, x inner).
struct GridPool {
    double x_min = -2.5, x_max = 2.5;
    double y_min = -2.5, y_max = 2.5;
    double step = 0.125;

    std::size_t nx() const;
    std::size_t ny() const;
    std::size_t size() const { return nx() * ny(); }
    std::vector<double> point(std::size_t id) const;  // {x, y}
    void validate() const;
};

struct RankMap {
    RankVector ranks;  // aligned to grid ids; rank 1 = largest value
    std::uint64_t source_seed = 0;
};

// One-step expected loss reduction at arbitrary covariate points for the given
// labelled set: L(base) - sum_j p_j(x) L(retrained on (x, c_j)), losses
// estimated on a single mc_budget-sized test sample shared by all points and
// labelings.
std::vector<double> exact_qc_at_points(const ProblemSpec& problem, const TrainFn& base,
                                       const LabeledSet& labeled,
                                       const std::vector<std::vector<double>>& points,
                                       const LossSpec& loss, std::size_t mc_budget, Rng& rng,
                                       int jobs = 1);

// Same, over a grid pool with a ClassifierSpec-backed family.
std::vector<double> exact_qc_on_grid(const ProblemSpec& problem, const ClassifierSpec& clf_spec,
                                     const LabeledSet& labeled, const GridPool& grid,
                                     const LossSpec& loss, std::size_t mc_budget, Rng& rng,
                                     int jobs = 1);

struct RankStudyResult {
    std::vector<RankMap> maps;
    RankVector averaged_ranks;  // rank of the mean ranks across draws
    std::vector<double> pairwise_spearman;
    double mean_spearman = 0.0;
    std::vector<double> moran;
    std::vector<double> moran_p;
    std::vector<double> moran_p_holm;
    std::vector<double> geary;
    std::vector<double> geary_p;
    std::vector<double> geary_p_holm;
};

// Draws n_draws labelled sets of size n_s, ranks the grid by expected loss
// reduction for each, and measures how similar the rankings are (pairwise
// Spearman; per-map Moran's I and Geary's C with permutation p-values,
// Holm-adjusted within each statistic family).
RankStudyResult rank_similarity_study(const ProblemSpec& problem, const ClassifierSpec& clf_spec,
                                      const GridPool& grid, int n_draws, std::size_t n_s,
                                      const LossSpec& loss, std::size_t mc_budget,
                                      int permutations, std::uint64_t seed, int jobs = 1);

}  // namespace eqlab
