// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion is self-contained and pinned to fixed seeds.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>
#include <vector>

#include "eqlab/analytic.hpp"
#include "eqlab/harness.hpp"
#include "eqlab/loss.hpp"
#include "eqlab/sensitivity.hpp"
#include "eqlab/strategies.hpp"

using namespace eqlab;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what, double seconds) {
    std::printf("criterion %2d: %s  %-58s (%.1fs)\n", criterion, pass ? "PASS" : "FAIL",
                what.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

void run_criterion(int criterion, const std::string& what, const std::function<bool()>& body) {
    auto start = std::chrono::steady_clock::now();
    bool pass = false;
    std::string note;
    try {
        pass = body();
    } catch (const std::exception& e) {
        note = std::string(" [exception: ") + e.what() + "]";
    }
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(criterion, pass, what + note, seconds);
}

std::vector<double> dense_grid() {
    std::vector<double> grid;
    for (double x = -4.0; x <= 4.0 + 1e-12; x += 0.01) grid.push_back(x);
    return grid;
}

const analytic::GaussianPairProblem kBalanced;

int hardware_jobs() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

// ---------------------------------------------------------------------------
// independent exhaustive re-implementation for criterion 9 (1-d, 1-nn)

using Row = std::pair<double, int>;

std::vector<double> bf_nn1_proba(std::vector<Row> train, double x) {
    std::sort(train.begin(), train.end());
    bool single = true;
    for (const auto& r : train) single &= r.second == train.front().second;
    if (single) {
        std::vector<double> p = {1e-9, 1e-9};
        p[static_cast<std::size_t>(train.front().second - 1)] = 1.0 - 1e-9;
        return p;
    }
    int best = train.front().second;
    double best_dist = std::abs(train.front().first - x);
    for (const auto& [tx, ty] : train) {
        if (std::abs(tx - x) < best_dist) {
            best_dist = std::abs(tx - x);
            best = ty;
        }
    }
    std::vector<double> p = {0.0, 0.0};
    p[static_cast<std::size_t>(best - 1)] = 1.0;
    return p;
}

double bf_error(const std::vector<Row>& train, const std::vector<Row>& test) {
    double e = 0.0;
    for (const auto& [x, y] : test) {
        auto p = bf_nn1_proba(train, x);
        int alloc = p[0] >= p[1] ? 1 : 2;
        e += alloc == y ? 0.0 : 1.0;
    }
    return e / static_cast<double>(test.size());
}

double bf_efelc(double x, const std::vector<Row>& data, const std::vector<double>& pool) {
    auto p = bf_nn1_proba(data, x);
    double score = 0.0;
    for (int j = 1; j <= 2; ++j) {
        if (p[static_cast<std::size_t>(j - 1)] == 0.0) continue;
        auto retrained = data;
        retrained.emplace_back(x, j);
        double lc = 0.0;
        for (double px : pool) {
            auto pp = bf_nn1_proba(retrained, px);
            lc += 1.0 - std::max(pp[0], pp[1]);
        }
        score -= p[static_cast<std::size_t>(j - 1)] * lc;
    }
    return score;
}

double bf_simple_eq(double x, const std::vector<Row>& data) {
    auto p = bf_nn1_proba(data, x);
    double score = 0.0;
    for (int j = 1; j <= 2; ++j) {
        if (p[static_cast<std::size_t>(j - 1)] == 0.0) continue;
        auto retrained = data;
        retrained.emplace_back(x, j);
        score -= p[static_cast<std::size_t>(j - 1)] * bf_error(retrained, data);
    }
    return score;
}

double bf_partition_eq(double x, const std::vector<Row>& data, const PartitionPlan& plan) {
    auto take = [&](const std::vector<std::size_t>& idx) {
        std::vector<Row> out;
        for (std::size_t i : idx) out.push_back(data[i]);
        return out;
    };
    auto p = bf_nn1_proba(take(plan.prob_part), x);
    double score = 0.0;
    for (int j = 1; j <= 2; ++j) {
        if (p[static_cast<std::size_t>(j - 1)] == 0.0) continue;
        auto retrained = take(plan.train_part);
        retrained.emplace_back(x, j);
        score -= p[static_cast<std::size_t>(j - 1)] * bf_error(retrained, take(plan.eval_part));
    }
    return score;
}

LabeledSet rows_to_set(const std::vector<Row>& rows) {
    std::vector<Example> ex;
    for (auto [x, y] : rows) ex.push_back(Example{{x}, y});
    return LabeledSet(std::move(ex), 2);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig learning_curve_config(std::vector<StrategyConfig> strategies,
                                       std::vector<std::uint64_t> seeds) {
    ExperimentConfig config;
    ProblemConfig problem;
    problem.name = "ripley4";
    problem.group = "theoretical";
    problem.spec = make_problem(ProblemKind::ripley4);
    config.problems = {problem};
    ClassifierConfig knn;
    knn.name = "5nn";
    knn.spec.kind = ClassifierKind::knn;
    knn.spec.k_neighbors = 5;
    config.classifiers = {knn};
    config.strategies = std::move(strategies);
    config.split = {10, 150, 500};
    config.seeds = std::move(seeds);
    return config;
}

}  // namespace

int main() {
    const int jobs = hardware_jobs();

    run_criterion(1, "analytic loss value and swapped-means complement", [] {
        bool ok = std::abs(analytic::error_loss(analytic::AnalyticClassifier(-1.0, 1.0, 18),
                                                kBalanced) -
                           0.1586553) < 1e-6;
        Rng rng(2024);
        for (int trial = 0; trial < 500; ++trial) {
            double m1 = 6.0 * rng.uniform() - 3.0;
            double m2 = 6.0 * rng.uniform() - 3.0;
            if (m1 == m2) continue;
            double a = analytic::error_loss(analytic::AnalyticClassifier(m1, m2, 18), kBalanced);
            double b = analytic::error_loss(analytic::AnalyticClassifier(m2, m1, 18), kBalanced);
            ok &= std::abs(a + b - 1.0) <= 1e-12;
        }
        return ok;
    });

    run_criterion(2, "well-fit classifier cannot improve: qc < 0 on the grid", [] {
        analytic::AnalyticClassifier clf(-1.1, 1.1, 18);
        for (double x : dense_grid())
            if (!(analytic::qc(clf, kBalanced, x) < 0.0)) return false;
        return true;
    });

    run_criterion(3, "shifted classifiers: positive max qc at negative x", [] {
        auto grid = dense_grid();
        for (auto [m1, m2] : {std::pair{-0.5, 1.5}, std::pair{-0.9, 1.1}}) {
            auto opt = analytic::optimal_on_grid(analytic::AnalyticClassifier(m1, m2, 18),
                                                 kBalanced, grid);
            if (!(opt.value > 0.0 && opt.x_star < 0.0)) return false;
        }
        return true;
    });

    run_criterion(4, "closed forms match Monte-Carlo oracles within 3 SE", [] {
        analytic::AnalyticClassifier clf(-0.9, 1.1, 18);
        bool ok = true;
        for (double x : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
            Rng rng(mix_seed({4, static_cast<std::uint64_t>(x * 1000 + 5000)}));
            auto qc_est = analytic::mc_qc(clf, kBalanced, x, 1'000'000, rng);
            ok &= std::abs(qc_est.value - analytic::qc(clf, kBalanced, x)) <
                  3.0 * qc_est.std_error;
            auto qm_est = analytic::mc_qm(kBalanced, 18, x, 100'000, rng);
            ok &= std::abs(qm_est.value - analytic::qm(18, x)) < 3.0 * qm_est.std_error;
        }
        return ok;
    });

    run_criterion(5, "qm is positive at the centre and symmetric", [] {
        if (!(analytic::qm(18, 0.0) > 0.0)) return false;
        for (double x : dense_grid())
            if (!(std::abs(analytic::qm(18, x) - analytic::qm(18, -x)) < 1e-9)) return false;
        return true;
    });

    run_criterion(6, "SE selects the boundary and is worst for swapped means", [] {
        Rng rng(6);
        for (int trial = 0; trial < 100; ++trial) {
            double m1 = 6.0 * rng.uniform() - 3.0;
            double m2 = 6.0 * rng.uniform() - 3.0;
            analytic::AnalyticClassifier clf(m1, m2, 18);
            if (analytic::se_selection(clf) != clf.boundary()) return false;
        }
        analytic::AnalyticClassifier swapped(1.0, -1.0, 18);
        auto grid = dense_grid();
        double se_regret =
            analytic::regret(swapped, kBalanced, analytic::se_selection(swapped), grid);
        return se_regret > analytic::regret(swapped, kBalanced, 4.0, grid) &&
               se_regret > analytic::regret(swapped, kBalanced, -4.0, grid);
    });

    run_criterion(7, "learning curves: improvement, common endpoint, AUA bound", [jobs] {
        StrategyConfig rs;
        rs.name = "rs";
        rs.spec.kind = StrategyKind::rs;
        StrategyConfig se;
        se.name = "se";
        se.spec.kind = StrategyKind::se;
        auto config = learning_curve_config({rs, se}, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
        auto records = run_study(config, jobs);

        double rs_initial = 0, rs_final = 0, se_initial = 0, se_final = 0;
        double rs_aua = 0, se_aua = 0;
        std::map<std::uint64_t, std::pair<double, double>> finals;
        for (const auto& rec : records) {
            if (rec.failed) return false;
            if (rec.strategy == "rs") {
                rs_initial += rec.curve.losses.front();
                rs_final += rec.curve.losses.back();
                rs_aua += aua(rec.curve);
                finals[rec.seed].first = rec.curve.losses.back();
            } else {
                se_initial += rec.curve.losses.front();
                se_final += rec.curve.losses.back();
                se_aua += aua(rec.curve);
                finals[rec.seed].second = rec.curve.losses.back();
            }
        }
        const double n = 10.0;
        bool ok = rs_final / n < rs_initial / n && se_final / n < se_initial / n;
        for (const auto& [seed, pair] : finals) ok &= pair.first == pair.second;
        ok &= se_aua / n >= rs_aua / n - 0.02;
        return ok;
    });

    run_criterion(8, "qc rank maps are similar and spatially structured", [jobs] {
        ProblemSpec spec = make_problem(ProblemKind::ripley4);
        ClassifierSpec qda;
        qda.kind = ClassifierKind::qda;
        GridPool grid;  // defaults: 41 x 41 over [-2.5, 2.5]^2
        LossSpec loss;
        auto result = rank_similarity_study(spec, qda, grid, 4, 20, loss, 20'000, 999, 8, jobs);
        if (!(result.mean_spearman > 0.3)) return false;
        for (double p : result.moran_p_holm)
            if (!(p < 0.05)) return false;
        return true;
    });

    run_criterion(9, "estimator scores equal the exhaustive oracle to 1e-12", [] {
        LossSpec loss;
        ClassifierSpec nn1;
        nn1.kind = ClassifierKind::knn;
        nn1.k_neighbors = 1;
        nn1.knn_smoothing = false;

        std::vector<Row> data2 = {{-1.0, 1}, {1.0, 2}};
        LabeledSet set2 = rows_to_set(data2);
        std::vector<std::vector<double>> pools = {{0.0},
                                                  {-2.0, 0.4},
                                                  {-1.5, 0.0, 1.5},
                                                  {-2.0, -0.3, 0.7, 1.2},
                                                  {-3.0, -1.2, 0.0, 0.5, 2.5}};
        for (const auto& xs : pools) {
            std::vector<Example> pex;
            for (double x : xs) pex.push_back(Example{{x}, std::nullopt});
            Pool pool(std::move(pex));
            for (double x : xs) {
                Example cand{{x}, std::nullopt};
                if (std::abs(efelc_score(cand, nn1, set2, pool, loss) - bf_efelc(x, data2, xs)) >
                    1e-12)
                    return false;
                if (std::abs(simple_eq_score(cand, nn1, set2, loss) - bf_simple_eq(x, data2)) >
                    1e-12)
                    return false;
            }
        }

        std::vector<Row> data6 = {{-2.0, 1}, {-1.0, 1}, {-0.5, 1},
                                  {0.5, 2},  {1.2, 2},  {2.2, 2}};
        LabeledSet set6 = rows_to_set(data6);
        PartitionPlan plan{{0, 3}, {1, 4}, {2, 5}};
        for (double x : {-2.5, -1.1, -0.2, 0.1, 0.8, 1.4, 3.0}) {
            Example cand{{x}, std::nullopt};
            double got =
                partition_eq_score(cand, trainer(nn1), trainer(nn1), set6, loss, {plan});
            if (std::abs(got - bf_partition_eq(x, data6, plan)) > 1e-12) return false;
        }
        return true;
    });

    run_criterion(10, "metrics fixtures match their pre-build oracle values", [] {
        bool ok = true;
        auto curve = [](std::vector<double> v) {
            return LearningCurve{std::move(v), LossKind::error_rate};
        };
        ok &= aua(curve({0.0, 0.0})) == 1.0;
        ok &= aua(curve({0.5, 0.5, 0.5})) == 0.5;
        ok &= std::abs(aua(curve({0.4, 0.2, 0.0})) - 0.8) < 1e-12;

        WeightScheme lin{WeightScheme::Kind::linear, 0.02};
        WeightScheme expo{WeightScheme::Kind::exponential, 0.02};
        ok &= weighted_improvement(curve({0.3, 0.2}), curve({0.3, 0.2}), lin) == 0.0;
        ok &= std::abs(weighted_improvement(curve({0.4, 0.3, 0.2}), curve({0.5, 0.4, 0.3}),
                                            expo) -
                       0.1) < 1e-12;
        ok &= std::abs(weighted_improvement(curve({0.5, 0.3, 0.1}), curve({0.5, 0.4, 0.3}),
                                            lin) -
                       0.1 / 3.0) < 1e-12;

        ok &= label_complexity(curve({0.3, 0.3, 0.3}), 5.0) == 0;
        ok &= label_complexity(curve({1.0, 0.5, 0.2, 0.2}), 5.0) == 2;

        ok &= rank_methods({3.0, 1.0, 2.0}, true).ranks == std::vector<double>{1.0, 3.0, 2.0};
        ok &= rank_methods({2.0, 2.0}, true).ranks == std::vector<double>{1.5, 1.5};
        ok &= overall_rank({RankVector{{1, 2, 3}}, RankVector{{1, 2, 3}},
                            RankVector{{3, 1, 2}}})
                  .ranks == std::vector<double>{1.5, 1.5, 3.0};

        ok &= std::abs(spearman(RankVector{{1, 2, 3, 4}}, RankVector{{1, 3, 2, 4}}) - 0.8) <
              1e-12;

        // 2x2 rook fixture: value frozen by the independent pre-build script
        auto w = rook_weights(2, 2);
        ok &= moran_i({1.0, 2.0, 3.0, 4.0}, w) == 0.0;
        ok &= std::abs(geary_c({1.0, 2.0, 3.0, 4.0}, w) - 0.75) < 1e-12;

        auto holm = adjust_pvalues({0.01, 0.04}, AdjustMethod::holm);
        ok &= std::abs(holm[0] - 0.02) < 1e-12 && std::abs(holm[1] - 0.04) < 1e-12;
        auto bonf = adjust_pvalues({0.01, 0.04}, AdjustMethod::bonferroni);
        ok &= std::abs(bonf[0] - 0.02) < 1e-12 && std::abs(bonf[1] - 0.08) < 1e-12;
        return ok;
    });

    run_criterion(11, "partition_eq scores correlate positively with exact qc", [] {
        // ledger note: the 20-replicate mean of this statistic is ~N(0, 0.1^2)
        // under the pinned protocol, so this criterion's colour carries little
        // evidence either way; seeds were fixed before the first run.
        LossSpec loss;
        auto trainer_fn = analytic::mean_pair_trainer(kBalanced);
        double sum = 0.0;
        for (int rep = 0; rep < 20; ++rep) {
            Rng rng(mix_seed({1, 0xace1ULL, static_cast<std::uint64_t>(rep)}));
            std::vector<Example> ex;
            double s1 = 0.0, s2 = 0.0;
            for (int i = 0; i < 9; ++i) {
                double v = -1.0 + rng.normal();
                s1 += v;
                ex.push_back(Example{{v}, 1});
            }
            for (int i = 0; i < 9; ++i) {
                double v = 1.0 + rng.normal();
                s2 += v;
                ex.push_back(Example{{v}, 2});
            }
            LabeledSet labeled(std::move(ex), 2);
            analytic::AnalyticClassifier clf(s1 / 9.0, s2 / 9.0, 18);

            std::vector<double> pool_xs(50);
            for (auto& x : pool_xs)
                x = (rng.uniform() < 0.5 ? -1.0 : 1.0) + rng.normal();

            auto plans = make_partition_plans(labeled, 10, rng);
            std::vector<double> est(50), exact(50);
            for (std::size_t i = 0; i < 50; ++i) {
                Example cand{{pool_xs[i]}, std::nullopt};
                est[i] = partition_eq_score(cand, trainer_fn, trainer_fn, labeled, loss, plans);
                exact[i] = analytic::qc(clf, kBalanced, pool_xs[i]);
            }
            sum += spearman_from_values(exact, est);
        }
        double mean = sum / 20.0;
        std::printf("              (criterion 11 mean spearman over 20 replicates: %+.4f)\n",
                    mean);
        return mean > 0.0;
    });

    run_criterion(12, "study outputs are byte-identical across runs and workers", [jobs] {
        StrategyConfig rs;
        rs.name = "rs";
        rs.spec.kind = StrategyKind::rs;
        StrategyConfig se;
        se.name = "se";
        se.spec.kind = StrategyKind::se;
        StrategyConfig seq;
        seq.name = "seq";
        seq.spec.kind = StrategyKind::simple_eq;
        auto config = learning_curve_config({rs, se, seq}, {1, 2});
        config.split = {8, 20, 60};
        config.pool_subsample = 10;

        auto run_to = [&](const std::string& dir, int run_jobs) {
            ExperimentConfig c = config;
            c.out_dir = (fs::temp_directory_path() / dir).string();
            fs::remove_all(c.out_dir);
            auto records = run_study(c, run_jobs);
            write_study_outputs(records, aggregate(records, c), c, "acceptance-config");
            return c.out_dir;
        };
        std::string a = run_to("eqlab_acc_a", 1);
        std::string b = run_to("eqlab_acc_b", jobs > 1 ? jobs : 2);
        std::string c = run_to("eqlab_acc_c", 1);

        std::size_t checked = 0;
        for (const auto& entry : fs::recursive_directory_iterator(a)) {
            if (!entry.is_regular_file()) continue;
            fs::path rel = fs::relative(entry.path(), a);
            std::string bytes = slurp(entry.path());
            if (bytes != slurp(fs::path(b) / rel)) return false;
            if (bytes != slurp(fs::path(c) / rel)) return false;
            ++checked;
        }
        return checked == 6 + 1 + 1;  // six curves, one table, one manifest
    });

    std::printf("%s: %d/12 criteria passed\n", g_failures == 0 ? "SUCCESS" : "FAILURE",
                12 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
