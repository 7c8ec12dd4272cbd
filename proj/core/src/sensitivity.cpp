#include "eqlab/sensitivity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <thread>

#include "eqlab/loss.hpp"

namespace eqlab {

std::size_t GridPool::nx() const {
    return static_cast<std::size_t>(std::floor((x_max - x_min) / step + 1e-9)) + 1;
}

std::size_t GridPool::ny() const {
    return static_cast<std::size_t>(std::floor((y_max - y_min) / step + 1e-9)) + 1;
}

std::vector<double> GridPool::point(std::size_t id) const {
    std::size_t row = id / nx();
    std::size_t col = id % nx();
    return {x_min + static_cast<double>(col) * step, y_min + static_cast<double>(row) * step};
}

void GridPool::validate() const {
    if (!(step > 0.0) || x_max <= x_min || y_max <= y_min)
        throw InvalidArgumentError("GridPool: degenerate extent");
    if (size() < 4) throw InvalidArgumentError("GridPool: need >= 4 points");
}

namespace {

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body) {
    if (jobs <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace

std::vector<double> exact_qc_at_points(const ProblemSpec& problem, const TrainFn& base,
                                       const LabeledSet& labeled,
                                       const std::vector<std::vector<double>>& points,
                                       const LossSpec& loss, std::size_t mc_budget, Rng& rng,
                                       int jobs) {
    if (!problem.synthetic())
        throw UnsupportedProblemError("exact_qc_at_points: needs true posteriors");
    if (mc_budget < 1000) throw InvalidArgumentError("exact_qc_at_points: mc_budget >= 1000");

    LabeledSet test = generate(problem, mc_budget, rng);
    ModelPtr current = base(labeled);
    const double base_loss = estimate_expected_loss(loss, *current, test);

    std::vector<double> q(points.size(), 0.0);
    parallel_for(points.size(), jobs, [&](std::size_t id) {
        const std::vector<double>& x = points[id];
        std::vector<double> post = true_posterior(problem, x);
        double expected = 0.0;
        for (int j = 1; j <= labeled.k(); ++j) {
            double pj = post[static_cast<std::size_t>(j - 1)];
            if (pj == 0.0) continue;
            ModelPtr retrained = base(labeled.with(Example{x, j}));
            expected += pj * estimate_expected_loss(loss, *retrained, test);
        }
        q[id] = base_loss - expected;
    });
    return q;
}

std::vector<double> exact_qc_on_grid(const ProblemSpec& problem, const ClassifierSpec& clf_spec,
                                     const LabeledSet& labeled, const GridPool& grid,
                                     const LossSpec& loss, std::size_t mc_budget, Rng& rng,
                                     int jobs) {
    grid.validate();
    std::vector<std::vector<double>> points;
    points.reserve(grid.size());
    for (std::size_t id = 0; id < grid.size(); ++id) points.push_back(grid.point(id));
    return exact_qc_at_points(problem, trainer(clf_spec), labeled, points, loss, mc_budget, rng,
                              jobs);
}

RankStudyResult rank_similarity_study(const ProblemSpec& problem, const ClassifierSpec& clf_spec,
                                      const GridPool& grid, int n_draws, std::size_t n_s,
                                      const LossSpec& loss, std::size_t mc_budget,
                                      int permutations, std::uint64_t seed, int jobs) {
    if (n_draws < 2) throw InvalidArgumentError("rank_similarity_study: n_draws >= 2");
    grid.validate();

    RankStudyResult out;
    Rng test_rng(mix_seed({seed, 0x7e57ULL}));

    for (int d = 0; d < n_draws; ++d) {
        std::uint64_t draw_seed = mix_seed({seed, 0xd5a0ULL, static_cast<std::uint64_t>(d)});
        Rng draw_rng(draw_seed);
        // retry until every class is present; a handful of attempts at most
        LabeledSet labeled;
        for (int attempt = 0; attempt < 1000; ++attempt) {
            labeled = generate(problem, n_s, draw_rng);
            std::vector<bool> seen(static_cast<std::size_t>(labeled.k()), false);
            for (const auto& e : labeled.examples())
                seen[static_cast<std::size_t>(*e.y - 1)] = true;
            if (std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) break;
            if (attempt == 999)
                throw ClassCoverageError("rank_similarity_study: draw never covered all classes");
        }
        Rng sample_rng = test_rng.split();
        std::vector<double> q =
            exact_qc_on_grid(problem, clf_spec, labeled, grid, loss, mc_budget, sample_rng, jobs);
        out.maps.push_back(RankMap{rank_methods(q, /*higher_better=*/true), draw_seed});
    }

    for (std::size_t a = 0; a < out.maps.size(); ++a)
        for (std::size_t b = a + 1; b < out.maps.size(); ++b)
            out.pairwise_spearman.push_back(spearman(out.maps[a].ranks, out.maps[b].ranks));
    out.mean_spearman = 0.0;
    for (double s : out.pairwise_spearman) out.mean_spearman += s;
    out.mean_spearman /= static_cast<double>(out.pairwise_spearman.size());

    // averaged-rank map: rank of the mean ranks across draws
    std::vector<double> mean_ranks(grid.size(), 0.0);
    for (const auto& map : out.maps)
        for (std::size_t i = 0; i < grid.size(); ++i) mean_ranks[i] += map.ranks.ranks[i];
    for (double& v : mean_ranks) v /= static_cast<double>(out.maps.size());
    out.averaged_ranks = rank_methods(mean_ranks, /*higher_better=*/false);

    detail::Matrix weights = rook_weights(grid.ny(), grid.nx());
    Rng perm_rng(mix_seed({seed, 0x9e34ULL}));
    for (const auto& map : out.maps) {
        Rng moran_rng = perm_rng.split();
        Rng geary_rng = perm_rng.split();
        auto mt = moran_permutation_test(map.ranks.ranks, weights, permutations, moran_rng);
        auto gt = geary_permutation_test(map.ranks.ranks, weights, permutations, geary_rng);
        out.moran.push_back(mt.statistic);
        out.moran_p.push_back(mt.p_value);
        out.geary.push_back(gt.statistic);
        out.geary_p.push_back(gt.p_value);
    }
    out.moran_p_holm = adjust_pvalues(out.moran_p, AdjustMethod::holm);
    out.geary_p_holm = adjust_pvalues(out.geary_p, AdjustMethod::holm);
    return out;
}

}  // namespace eqlab
