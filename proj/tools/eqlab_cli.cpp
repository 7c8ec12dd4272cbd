// Command-line front end: `study` runs a full config, `run` a single cell,
// `analytic` dumps the closed-form curves for the univariate Gaussian-pair
// problem, `ranks` runs the grid rank-similarity study.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "eqlab/analytic.hpp"
#include "eqlab/harness.hpp"
#include "eqlab/sensitivity.hpp"

namespace fs = std::filesystem;
using namespace eqlab;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<double> make_grid(double lo, double hi, double step) {
    std::vector<double> grid;
    for (double x = lo; x <= hi + 1e-12; x += step) grid.push_back(x);
    return grid;
}

int cmd_study(const std::string& config_path, const std::string& out_dir, int jobs, int n_seeds,
              int budget) {
    std::string text = read_file(config_path);
    ExperimentConfig config = load_config(config_path);
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (n_seeds > 0) {
        config.seeds.clear();
        for (std::uint64_t s = 1; s <= static_cast<std::uint64_t>(n_seeds); ++s)
            config.seeds.push_back(s);
    }
    if (budget >= 0) config.budget = static_cast<std::size_t>(budget);
    config.validate();

    auto records = run_study(config, jobs);
    std::vector<AggregateTable> tables;
    if (config.loss.kind == LossKind::error_rate) {
        tables = aggregate(records, config);
    } else {
        std::cerr << "note: rank tables are defined for error-rate studies; writing curves only\n";
    }
    write_study_outputs(records, tables, config, text);

    std::size_t failed = 0;
    for (const auto& r : records)
        if (r.failed) ++failed;
    std::cout << records.size() << " runs (" << failed << " failed), outputs in "
              << config.out_dir << "\n";
    return failed == 0 ? 0 : 1;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            const std::string& problem, const std::string& classifier,
            const std::string& strategy, std::uint64_t seed, int budget) {
    std::string text = read_file(config_path);
    ExperimentConfig config = load_config(config_path);
    if (!out_dir.empty()) config.out_dir = out_dir;
    config.seeds = {seed};
    if (budget >= 0) config.budget = static_cast<std::size_t>(budget);

    auto keep_named = [](auto& list, const std::string& name, const char* what) {
        for (auto it = list.begin(); it != list.end();) {
            if (it->name != name)
                it = list.erase(it);
            else
                ++it;
        }
        if (list.empty()) throw ConfigError(std::string("run: unknown ") + what + ": " + name);
    };
    keep_named(config.problems, problem, "problem");
    keep_named(config.classifiers, classifier, "classifier");
    keep_named(config.strategies, strategy, "strategy");
    config.validate();

    auto records = run_study(config, 1);
    const RunRecord& rec = records.front();
    if (rec.failed) {
        std::cerr << "run failed: " << rec.error << "\n";
        return 1;
    }
    fs::create_directories(fs::path(config.out_dir) / "curves");
    write_study_outputs(records, {}, config, text);
    std::cout << "initial loss " << format_double(rec.curve.losses.front()) << ", final loss "
              << format_double(rec.curve.losses.back()) << " after "
              << rec.curve.losses.size() - 1 << " acquisitions\n";
    return 0;
}

int cmd_analytic(double mu1, double mu2, int n, double prior1, double lo, double hi, double step,
                 std::size_t qm_draws, std::uint64_t seed, const std::string& out_dir) {
    fs::create_directories(out_dir);
    analytic::GaussianPairProblem prob = prior1 == 0.5
                                             ? analytic::GaussianPairProblem()
                                             : analytic::GaussianPairProblem(prior1, 1.0 - prior1);
    analytic::AnalyticClassifier clf(mu1, mu2, n);
    auto grid = make_grid(lo, hi, step);

    {
        std::ofstream out(fs::path(out_dir) / "qc.csv", std::ios::binary);
        out << "x,qc\n";
        for (double x : grid)
            out << format_double(x) << "," << format_double(analytic::qc(clf, prob, x)) << "\n";
    }
    {
        std::ofstream out(fs::path(out_dir) / "qm.csv", std::ios::binary);
        out << "x,qm,std_error\n";
        Rng rng(seed);
        for (double x : grid) {
            if (prob.balanced()) {
                out << format_double(x) << "," << format_double(analytic::qm(prob, n, x))
                    << ",0\n";
            } else {
                auto est = analytic::mc_qm(prob, n, x, qm_draws, rng);
                out << format_double(x) << "," << format_double(est.value) << ","
                    << format_double(est.std_error) << "\n";
            }
        }
    }
    {
        std::ofstream out(fs::path(out_dir) / "se_rs.csv", std::ios::binary);
        out << "x,se_entropy,rs_density\n";
        for (double x : grid) {
            // the classifier's own posterior drives the SE score
            double a = prob.prior1 * analytic::normal_pdf(x - clf.mean1_hat);
            double b = prob.prior2 * analytic::normal_pdf(x - clf.mean2_hat);
            double p1 = a / (a + b);
            double h = 0.0;
            if (p1 > 0.0) h -= p1 * std::log(p1);
            if (p1 < 1.0) h -= (1.0 - p1) * std::log(1.0 - p1);
            out << format_double(x) << "," << format_double(h) << ","
                << format_double(analytic::rs_density(prob, x)) << "\n";
        }
    }
    std::cout << "wrote qc.csv, qm.csv, se_rs.csv to " << out_dir << " (se selection x_r = "
              << format_double(analytic::se_selection(clf)) << ")\n";
    return 0;
}

int cmd_ranks(const std::string& problem, const std::string& classifier, int draws,
              std::size_t n_s, int grid_n, double extent, std::size_t mc_budget,
              int permutations, std::uint64_t seed, int jobs, const std::string& out_dir) {
    fs::create_directories(out_dir);
    ProblemSpec spec = make_problem(problem_kind_from_string(problem));
    ClassifierSpec clf;
    clf.kind = classifier_kind_from_string(classifier);

    GridPool grid;
    grid.x_min = grid.y_min = -extent;
    grid.x_max = grid.y_max = extent;
    grid.step = 2.0 * extent / static_cast<double>(grid_n - 1);

    LossSpec loss;
    auto result = rank_similarity_study(spec, clf, grid, draws, n_s, loss, mc_budget,
                                        permutations, seed, jobs);

    for (std::size_t d = 0; d < result.maps.size(); ++d) {
        std::ofstream out(fs::path(out_dir) / ("rank_map_" + std::to_string(d) + ".csv"),
                          std::ios::binary);
        out << "id,x1,x2,rank\n";
        for (std::size_t i = 0; i < grid.size(); ++i) {
            auto pt = grid.point(i);
            out << i << "," << format_double(pt[0]) << "," << format_double(pt[1]) << ","
                << format_double(result.maps[d].ranks.ranks[i]) << "\n";
        }
    }
    {
        std::ofstream out(fs::path(out_dir) / "rank_map_averaged.csv", std::ios::binary);
        out << "id,x1,x2,rank\n";
        for (std::size_t i = 0; i < grid.size(); ++i) {
            auto pt = grid.point(i);
            out << i << "," << format_double(pt[0]) << "," << format_double(pt[1]) << ","
                << format_double(result.averaged_ranks.ranks[i]) << "\n";
        }
    }
    {
        std::ofstream out(fs::path(out_dir) / "stats.csv", std::ios::binary);
        out << "draw,moran_i,moran_p,moran_p_holm,geary_c,geary_p,geary_p_holm\n";
        for (std::size_t d = 0; d < result.maps.size(); ++d) {
            out << d << "," << format_double(result.moran[d]) << ","
                << format_double(result.moran_p[d]) << ","
                << format_double(result.moran_p_holm[d]) << ","
                << format_double(result.geary[d]) << "," << format_double(result.geary_p[d])
                << "," << format_double(result.geary_p_holm[d]) << "\n";
        }
        out << "mean_pairwise_spearman," << format_double(result.mean_spearman) << ",,,,,\n";
    }
    std::cout << "mean pairwise spearman " << format_double(result.mean_spearman)
              << ", outputs in " << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"active-learning laboratory: expected-loss-reduction targets, estimators and "
                 "benchmark harness"};
    app.require_subcommand(1);

    // study
    auto* study = app.add_subcommand("study", "run a full study config");
    std::string config_path, out_dir;
    int jobs = 1, n_seeds = -1, budget = -1;
    study->add_option("--config", config_path, "config file (JSON)")->required();
    study->add_option("--out", out_dir, "output directory (overrides config)");
    study->add_option("--jobs", jobs, "worker threads");
    study->add_option("--seeds", n_seeds, "use seeds 1..N (overrides config)");
    study->add_option("--budget", budget, "acquisitions per run (overrides config)");

    // run
    auto* run = app.add_subcommand("run", "run a single (problem, classifier, strategy, seed)");
    std::string run_problem, run_classifier, run_strategy;
    std::uint64_t run_seed = 1;
    run->add_option("--config", config_path, "config file (JSON)")->required();
    run->add_option("--out", out_dir, "output directory (overrides config)");
    run->add_option("--problem", run_problem, "problem name from the config")->required();
    run->add_option("--classifier", run_classifier, "classifier name from the config")->required();
    run->add_option("--strategy", run_strategy, "strategy name from the config")->required();
    run->add_option("--seed", run_seed, "seed");
    run->add_option("--budget", budget, "acquisitions (overrides config)");

    // analytic
    auto* analytic_cmd = app.add_subcommand("analytic", "closed-form qc/qm/se/rs tables");
    double mu1 = -0.9, mu2 = 1.1, prior1 = 0.5, lo = -4.0, hi = 4.0, step = 0.01;
    int n = 18;
    std::size_t qm_draws = 10000;
    std::uint64_t seed = 1;
    analytic_cmd->add_option("--mu1", mu1, "estimated mean of class 1");
    analytic_cmd->add_option("--mu2", mu2, "estimated mean of class 2");
    analytic_cmd->add_option("--n", n, "labelled size (even)");
    analytic_cmd->add_option("--prior1", prior1, "class-1 prior (qm uses MC unless 0.5)");
    analytic_cmd->add_option("--lo", lo, "grid start");
    analytic_cmd->add_option("--hi", hi, "grid end");
    analytic_cmd->add_option("--step", step, "grid step");
    analytic_cmd->add_option("--qm-draws", qm_draws, "MC datasets for non-balanced qm");
    analytic_cmd->add_option("--seed", seed, "MC seed");
    analytic_cmd->add_option("--out", out_dir, "output directory")->required();

    // ranks
    auto* ranks = app.add_subcommand("ranks", "grid rank-similarity study");
    std::string rk_problem = "ripley4", rk_classifier = "qda";
    int draws = 4, grid_n = 41, permutations = 999;
    std::size_t n_s = 20, mc_budget = 20000;
    double extent = 2.5;
    ranks->add_option("--problem", rk_problem, "synthetic 2-d problem kind");
    ranks->add_option("--classifier", rk_classifier, "classifier kind");
    ranks->add_option("--draws", draws, "labelled-set draws");
    ranks->add_option("--ns", n_s, "labelled-set size");
    ranks->add_option("--grid-n", grid_n, "grid points per axis");
    ranks->add_option("--extent", extent, "grid half-width");
    ranks->add_option("--mc-budget", mc_budget, "shared test-sample size");
    ranks->add_option("--permutations", permutations, "permutation-test draws");
    ranks->add_option("--seed", seed, "seed");
    ranks->add_option("--jobs", jobs, "worker threads");
    ranks->add_option("--out", out_dir, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*study) return cmd_study(config_path, out_dir, jobs, n_seeds, budget);
        if (*run)
            return cmd_run(config_path, out_dir, run_problem, run_classifier, run_strategy,
                           run_seed, budget);
        if (*analytic_cmd)
            return cmd_analytic(mu1, mu2, n, prior1, lo, hi, step, qm_draws, seed, out_dir);
        if (*ranks)
            return cmd_ranks(rk_problem, rk_classifier, draws, n_s, grid_n, extent, mc_budget,
                             permutations, seed, jobs, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
