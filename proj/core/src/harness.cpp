#include "eqlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "eqlab/loss.hpp"

namespace eqlab {

namespace fs = std::filesystem;
using nlohmann::json;

void ExperimentConfig::validate() const {
    if (problems.empty() || classifiers.empty() || strategies.empty())
        throw ConfigError("config: need at least one problem, classifier and strategy");
    if (seeds.empty()) throw ConfigError("config: need at least one seed");
    std::set<std::uint64_t> distinct(seeds.begin(), seeds.end());
    if (distinct.size() != seeds.size()) throw ConfigError("config: seeds must be distinct");
    if (budget && *budget > split.n_pool)
        throw ConfigError("config: budget exceeds the pool size");
    loss.validate();
    for (const auto& p : problems) p.spec.validate();
    for (const auto& c : classifiers) c.spec.validate();
    for (const auto& s : strategies) s.spec.validate();
    std::set<std::string> names;
    for (const auto& p : problems)
        if (!names.insert("p:" + p.name).second) throw ConfigError("config: duplicate problem name");
    for (const auto& c : classifiers)
        if (!names.insert("c:" + c.name).second)
            throw ConfigError("config: duplicate classifier name");
    for (const auto& s : strategies)
        if (!names.insert("s:" + s.name).second)
            throw ConfigError("config: duplicate strategy name");
}

namespace {

bool retrain_based(StrategyKind kind) {
    return kind == StrategyKind::efelc || kind == StrategyKind::simple_eq ||
           kind == StrategyKind::partition_eq;
}

}  // namespace

RunRecord run_iterated_al(const DatasetBundle& bundle, const ClassifierConfig& clf,
                          const StrategyConfig& strategy, const LossSpec& loss,
                          std::size_t budget, std::size_t pool_subsample, Rng rng) {
    if (budget > bundle.pool.size())
        throw InvalidArgumentError("run_iterated_al: budget exceeds the pool");

    auto start = std::chrono::steady_clock::now();
    RunRecord rec;
    rec.classifier = clf.name;
    rec.strategy = strategy.name;
    rec.seed = bundle.seed;
    rec.curve.kind = loss.kind;

    LabeledSet labeled = bundle.labeled;
    Pool pool = bundle.pool;

    ModelPtr model = train(clf.spec, labeled);
    rec.curve.losses.push_back(estimate_expected_loss(loss, *model, bundle.test));

    for (std::size_t it = 0; it < budget; ++it) {
        Pool candidates = retrain_based(strategy.spec.kind) && pool_subsample < pool.size()
                              ? subsample_pool(pool, pool_subsample, rng)
                              : pool;
        ScoreVector scores = score_pool(strategy.spec, clf.spec, labeled, candidates, loss, rng);
        int chosen = select(scores, rng);

        std::size_t pos = pool.size();
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (pool.id(i) == chosen) {
                pos = i;
                break;
            }
        }
        if (pos == pool.size()) throw Error("run_iterated_al: selected id not in pool");

        Example acquired = pool.example(pos);
        acquired.y = pool.oracle_label(pos);
        labeled = labeled.with(acquired);
        pool = pool.without(pos);

        model = train(clf.spec, labeled);
        rec.curve.losses.push_back(estimate_expected_loss(loss, *model, bundle.test));
    }

    rec.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

namespace {

DatasetBundle make_bundle(const ExperimentConfig& config, std::size_t p_idx, std::uint64_t seed,
                          std::map<std::string, LabeledSet>& csv_cache, std::mutex& cache_mutex) {
    const ProblemConfig& problem = config.problems[p_idx];
    const std::size_t total = config.split.n_labeled + config.split.n_pool + config.split.n_test;
    if (problem.spec.synthetic()) {
        Rng rng(mix_seed({config.master_seed, 0xda7aULL, p_idx, seed}));
        LabeledSet population = generate(problem.spec, total, rng);
        return split(population, seed, config.split.n_labeled, config.split.n_pool,
                     config.split.n_test);
    }
    LabeledSet data;
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = csv_cache.find(problem.spec.csv_path);
        if (it == csv_cache.end()) {
            it = csv_cache
                     .emplace(problem.spec.csv_path,
                              load_csv(problem.spec.csv_path, problem.spec.label_column).data)
                     .first;
        }
        data = it->second;
    }
    return split(data, seed, config.split.n_labeled, config.split.n_pool, config.split.n_test);
}

}  // namespace

std::vector<RunRecord> run_study(const ExperimentConfig& config, int jobs) {
    config.validate();
    const std::size_t budget = config.budget ? *config.budget : config.split.n_pool;

    struct Job {
        std::size_t p, c, s, seed_idx;
    };
    std::vector<Job> todo;
    for (std::size_t p = 0; p < config.problems.size(); ++p)
        for (std::size_t c = 0; c < config.classifiers.size(); ++c)
            for (std::size_t si = 0; si < config.seeds.size(); ++si)
                for (std::size_t s = 0; s < config.strategies.size(); ++s)
                    todo.push_back({p, c, s, si});

    // bundles are shared within a (problem, seed) pairing so that every
    // strategy and classifier sees the same split
    std::map<std::pair<std::size_t, std::size_t>, DatasetBundle> bundles;
    std::map<std::string, LabeledSet> csv_cache;
    std::mutex cache_mutex;
    for (std::size_t p = 0; p < config.problems.size(); ++p)
        for (std::size_t si = 0; si < config.seeds.size(); ++si)
            bundles.emplace(std::make_pair(p, si),
                            make_bundle(config, p, config.seeds[si], csv_cache, cache_mutex));

    std::vector<RunRecord> records(todo.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= todo.size()) return;
            const Job& job = todo[i];
            const auto& bundle = bundles.at({job.p, job.seed_idx});
            std::uint64_t rng_seed =
                mix_seed({config.master_seed, 0xc311ULL, job.p, job.c, job.s,
                          config.seeds[job.seed_idx], config.strategies[job.s].spec.seed});
            RunRecord rec;
            try {
                rec = run_iterated_al(bundle, config.classifiers[job.c], config.strategies[job.s],
                                      config.loss, budget, config.pool_subsample, Rng(rng_seed));
            } catch (const std::exception& e) {
                rec.classifier = config.classifiers[job.c].name;
                rec.strategy = config.strategies[job.s].name;
                rec.seed = config.seeds[job.seed_idx];
                rec.failed = true;
                rec.error = e.what();
            }
            rec.problem = config.problems[job.p].name;
            rec.rng_seed = rng_seed;
            records[i] = std::move(rec);
        }
    };

    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(jobs), todo.size());
        for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    for (const auto& rec : records)
        if (rec.failed)
            std::cerr << "warning: run failed (" << rec.problem << ", " << rec.classifier << ", "
                      << rec.strategy << ", seed " << rec.seed << "): " << rec.error << "\n";
    return records;
}

namespace {

struct CellMetrics {
    // metric values averaged over seeds; NaN when no successful run survived
    double label_complexity = std::numeric_limits<double>::quiet_NaN();
    double aua = std::numeric_limits<double>::quiet_NaN();
    double wi_linear = std::numeric_limits<double>::quiet_NaN();
    double wi_exponential = std::numeric_limits<double>::quiet_NaN();
    bool present = false;
};

}  // namespace

std::vector<AggregateTable> aggregate(const std::vector<RunRecord>& records,
                                      const ExperimentConfig& config) {
    if (config.loss.kind != LossKind::error_rate)
        throw WrongLossKindError("aggregate: the rank tables are defined for error-rate studies");
    const std::string* rs_name = nullptr;
    for (const auto& s : config.strategies)
        if (s.spec.kind == StrategyKind::rs) rs_name = &s.name;
    if (!rs_name)
        throw ConfigError("aggregate: missing rs baseline for the weighted-improvement metrics");

    // index successful records
    std::map<std::tuple<std::string, std::string, std::string, std::uint64_t>, const RunRecord*>
        by_key;
    for (const auto& r : records)
        if (!r.failed) by_key[{r.problem, r.classifier, r.strategy, r.seed}] = &r;

    const std::vector<std::string> metric_names = {"label_complexity", "aua", "wi_linear",
                                                   "wi_exponential"};
    const WeightScheme wi_lin{WeightScheme::Kind::linear, 0.02};
    const WeightScheme wi_exp{WeightScheme::Kind::exponential, 0.02};

    // metric values per (problem, classifier, strategy)
    auto cell_metrics = [&](const std::string& p, const std::string& c,
                            const std::string& s) -> CellMetrics {
        CellMetrics out;
        double lc = 0, au = 0, wl = 0, we = 0;
        int n = 0;
        for (std::uint64_t seed : config.seeds) {
            auto it = by_key.find({p, c, s, seed});
            auto rs_it = by_key.find({p, c, *rs_name, seed});
            if (it == by_key.end() || rs_it == by_key.end()) continue;
            const LearningCurve& curve = it->second->curve;
            const LearningCurve& baseline = rs_it->second->curve;
            lc += label_complexity(curve, 5.0);
            au += aua(curve);
            wl += weighted_improvement(curve, baseline, wi_lin);
            we += weighted_improvement(curve, baseline, wi_exp);
            ++n;
        }
        if (n == 0) return out;
        out.present = true;
        out.label_complexity = lc / n;
        out.aua = au / n;
        out.wi_linear = wl / n;
        out.wi_exponential = we / n;
        return out;
    };

    std::vector<std::string> groups;
    for (const auto& p : config.problems)
        if (std::find(groups.begin(), groups.end(), p.group) == groups.end())
            groups.push_back(p.group);

    std::vector<AggregateTable> tables;
    for (const auto& clf : config.classifiers) {
        for (const auto& group : groups) {
            AggregateTable table;
            table.classifier = clf.name;
            table.group = group;
            table.metric_names = metric_names;
            for (const auto& s : config.strategies) table.methods.push_back(s.name);

            // mean rank of each method per metric, averaged over the group's problems
            const std::size_t n_methods = config.strategies.size();
            std::vector<std::vector<double>> rank_sums(metric_names.size(),
                                                       std::vector<double>(n_methods, 0.0));
            std::vector<std::vector<int>> rank_counts(metric_names.size(),
                                                      std::vector<int>(n_methods, 0));
            for (const auto& problem : config.problems) {
                if (problem.group != group) continue;
                std::vector<CellMetrics> cells;
                for (const auto& s : config.strategies)
                    cells.push_back(cell_metrics(problem.name, clf.name, s.name));
                // rank the strategies that produced results for this problem
                std::vector<std::size_t> live;
                for (std::size_t m = 0; m < n_methods; ++m)
                    if (cells[m].present) live.push_back(m);
                if (live.size() < 1) continue;
                for (std::size_t metric = 0; metric < metric_names.size(); ++metric) {
                    std::vector<double> values;
                    for (std::size_t m : live) {
                        const CellMetrics& cm = cells[m];
                        values.push_back(metric == 0   ? cm.label_complexity
                                         : metric == 1 ? cm.aua
                                         : metric == 2 ? cm.wi_linear
                                                       : cm.wi_exponential);
                    }
                    bool higher_better = metric != 0;  // label complexity: fewer labels win
                    RankVector rv = rank_methods(values, higher_better);
                    for (std::size_t t = 0; t < live.size(); ++t) {
                        rank_sums[metric][live[t]] += rv.ranks[t];
                        rank_counts[metric][live[t]] += 1;
                    }
                }
            }

            bool any = false;
            std::vector<RankVector> re_ranked;
            std::vector<double> mean_over_metrics(n_methods, 0.0);
            for (std::size_t metric = 0; metric < metric_names.size(); ++metric) {
                std::vector<double> mean_rank(n_methods,
                                              std::numeric_limits<double>::infinity());
                for (std::size_t m = 0; m < n_methods; ++m) {
                    if (rank_counts[metric][m] > 0) {
                        mean_rank[m] = rank_sums[metric][m] / rank_counts[metric][m];
                        any = true;
                    }
                }
                re_ranked.push_back(rank_methods(mean_rank, /*higher_better=*/false));
                for (std::size_t m = 0; m < n_methods; ++m)
                    mean_over_metrics[m] += mean_rank[m];
            }
            if (!any) continue;  // no runs for this (classifier, group)
            table.rows = re_ranked;
            table.overall = rank_methods(mean_over_metrics, /*higher_better=*/false);
            tables.push_back(std::move(table));
        }
    }
    return tables;
}

// ---------------------------------------------------------------------------
// configuration

namespace {

ClassifierSpec parse_classifier(const json& j) {
    ClassifierSpec spec;
    spec.kind = classifier_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("k_neighbors")) spec.k_neighbors = j["k_neighbors"].get<int>();
    if (j.contains("knn_smoothing")) spec.knn_smoothing = j["knn_smoothing"].get<bool>();
    if (j.contains("tree_count")) spec.tree_count = j["tree_count"].get<int>();
    if (j.contains("max_depth")) spec.max_depth = j["max_depth"].get<int>();
    if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("max_iterations")) spec.max_iterations = j["max_iterations"].get<int>();
    if (j.contains("step_size")) spec.step_size = j["step_size"].get<double>();
    if (j.contains("l2_penalty")) spec.l2_penalty = j["l2_penalty"].get<double>();
    if (j.contains("variance_floor")) spec.variance_floor = j["variance_floor"].get<double>();
    return spec;
}

detail::Matrix parse_cov(const json& j, std::size_t d) {
    if (j.is_number()) {
        detail::Matrix m = detail::zeros(d);
        for (std::size_t i = 0; i < d; ++i) m[i][i] = j.get<double>();
        return m;
    }
    detail::Matrix m;
    for (const auto& row : j) m.push_back(row.get<std::vector<double>>());
    return m;
}

ProblemSpec parse_problem(const json& j) {
    ProblemSpec spec;
    spec.kind = problem_kind_from_string(j.at("kind").get<std::string>());
    if (spec.kind == ProblemKind::csv) {
        spec.csv_path = j.at("path").get<std::string>();
        spec.label_column = j.at("label_column").get<std::string>();
        return spec;
    }
    if (!j.contains("classes")) return make_problem(spec.kind);
    for (const auto& cj : j["classes"]) {
        ClassMixture cls;
        cls.prior = cj.at("prior").get<double>();
        for (const auto& gj : cj.at("components")) {
            GaussianComponent g;
            g.weight = gj.value("weight", 1.0);
            g.mean = gj.at("mean").get<std::vector<double>>();
            g.cov = parse_cov(gj.at("cov"), g.mean.size());
            cls.components.push_back(std::move(g));
        }
        spec.classes.push_back(std::move(cls));
    }
    spec.validate();
    return spec;
}

StrategySpec parse_strategy(const json& j) {
    StrategySpec spec;
    spec.kind = strategy_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("committee"))
        for (const auto& cj : j["committee"]) spec.committee.push_back(parse_classifier(cj));
    if (j.contains("repeats")) spec.partition_repeats = j["repeats"].get<int>();
    if (j.contains("prob_spec")) spec.prob_spec = parse_classifier(j["prob_spec"]);
    if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
    return spec;
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }

    ExperimentConfig config;
    try {
        if (j.contains("master_seed")) config.master_seed = j["master_seed"].get<std::uint64_t>();
        if (j.contains("seeds")) {
            config.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
        } else if (j.contains("n_seeds")) {
            config.seeds.clear();
            for (std::uint64_t s = 1; s <= j["n_seeds"].get<std::uint64_t>(); ++s)
                config.seeds.push_back(s);
        }
        if (j.contains("loss")) {
            const auto& lj = j["loss"];
            std::string kind = lj.value("kind", std::string("error_rate"));
            if (kind == "error_rate")
                config.loss.kind = LossKind::error_rate;
            else if (kind == "log_loss")
                config.loss.kind = LossKind::log_loss;
            else
                throw ConfigError("config: unknown loss kind " + kind);
            if (lj.contains("eps_p")) config.loss.eps_p = lj["eps_p"].get<double>();
        }
        if (j.contains("split")) {
            const auto& sj = j["split"];
            config.split.n_labeled = sj.value("n_labeled", config.split.n_labeled);
            config.split.n_pool = sj.value("n_pool", config.split.n_pool);
            config.split.n_test = sj.value("n_test", config.split.n_test);
        }
        if (j.contains("pool_subsample"))
            config.pool_subsample = j["pool_subsample"].get<std::size_t>();
        if (j.contains("budget")) config.budget = j["budget"].get<std::size_t>();
        if (j.contains("out_dir")) config.out_dir = j["out_dir"].get<std::string>();

        for (const auto& pj : j.at("problems")) {
            ProblemConfig pc;
            pc.name = pj.at("name").get<std::string>();
            pc.group = pj.value("group", std::string("theoretical"));
            pc.spec = parse_problem(pj);
            config.problems.push_back(std::move(pc));
        }
        for (const auto& cj : j.at("classifiers")) {
            ClassifierConfig cc;
            cc.name = cj.at("name").get<std::string>();
            cc.spec = parse_classifier(cj);
            config.classifiers.push_back(std::move(cc));
        }
        for (const auto& sj : j.at("strategies")) {
            StrategyConfig sc;
            sc.name = sj.at("name").get<std::string>();
            sc.spec = parse_strategy(sj);
            config.strategies.push_back(std::move(sc));
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config schema error: ") + e.what());
    }
    config.validate();
    return config;
}

// ---------------------------------------------------------------------------
// outputs

std::uint64_t config_hash(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    double parsed = std::strtod(buf, nullptr);
    if (parsed != v) std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string sanitize(const std::string& name) {
    std::string out;
    for (char c : name)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
    return out;
}

}  // namespace

void write_study_outputs(const std::vector<RunRecord>& records,
                         const std::vector<AggregateTable>& tables,
                         const ExperimentConfig& config, const std::string& config_text) {
    fs::path root(config.out_dir);
    fs::create_directories(root / "curves");
    fs::create_directories(root / "tables");

    std::vector<std::string> files;
    for (const auto& rec : records) {
        if (rec.failed) continue;
        std::string name = sanitize(rec.problem) + "__" + sanitize(rec.classifier) + "__" +
                           sanitize(rec.strategy) + "__seed" + std::to_string(rec.seed) + ".csv";
        fs::path path = root / "curves" / name;
        std::ofstream out(path, std::ios::binary);
        out << "iteration,labels,loss\n";
        for (std::size_t i = 0; i < rec.curve.losses.size(); ++i)
            out << i << "," << config.split.n_labeled + i << ","
                << format_double(rec.curve.losses[i]) << "\n";
        files.push_back("curves/" + name);
    }

    for (const auto& table : tables) {
        std::string name = sanitize(table.classifier) + "__" + sanitize(table.group) + ".csv";
        fs::path path = root / "tables" / name;
        std::ofstream out(path, std::ios::binary);
        out << "metric";
        for (const auto& m : table.methods) out << "," << m;
        out << "\n";
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            out << table.metric_names[r];
            for (double v : table.rows[r].ranks) out << "," << format_double(v);
            out << "\n";
        }
        out << "overall_rank";
        for (double v : table.overall.ranks) out << "," << format_double(v);
        out << "\n";
        files.push_back("tables/" + name);
    }

    std::sort(files.begin(), files.end());
    json manifest;
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(config_hash(config_text)));
    manifest["config_hash"] = hash;
    manifest["version"] = "0.1.0";
    manifest["seeds"] = config.seeds;
    manifest["runs"] = records.size();
    manifest["failed_runs"] =
        std::count_if(records.begin(), records.end(), [](const auto& r) { return r.failed; });
    manifest["files"] = files;
    std::ofstream mout(root / "manifest.json", std::ios::binary);
    mout << manifest.dump(2) << "\n";
}

}  // namespace eqlab
