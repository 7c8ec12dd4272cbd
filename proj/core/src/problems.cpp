#include "eqlab/problems.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "eqlab/loss.hpp"

namespace eqlab {

namespace {

detail::Matrix iso_cov(std::size_t d, double v) {
    detail::Matrix m = detail::zeros(d);
    for (std::size_t i = 0; i < d; ++i) m[i][i] = v;
    return m;
}

detail::Matrix diag_cov(std::vector<double> v) {
    detail::Matrix m = detail::zeros(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) m[i][i] = v[i];
    return m;
}

GaussianComponent comp(double w, std::vector<double> mean, detail::Matrix cov) {
    return GaussianComponent{w, std::move(mean), std::move(cov)};
}

double component_log_density(const GaussianComponent& c, std::span<const double> x,
                             const detail::Matrix& chol, double log_det) {
    const std::size_t d = c.mean.size();
    std::vector<double> diff(d);
    for (std::size_t i = 0; i < d; ++i) diff[i] = x[i] - c.mean[i];
    double q = detail::quad_form(chol, diff);
    return -0.5 * (static_cast<double>(d) * std::log(2.0 * std::numbers::pi) + log_det + q);
}

}  // namespace

ProblemKind problem_kind_from_string(const std::string& name) {
    if (name == "gaussian_pair") return ProblemKind::gaussian_pair;
    if (name == "ripley4") return ProblemKind::ripley4;
    if (name == "quadratic_boundary") return ProblemKind::quadratic_boundary;
    if (name == "gaussian_triangles") return ProblemKind::gaussian_triangles;
    if (name == "oscillating_boundary") return ProblemKind::oscillating_boundary;
    if (name == "curved_boundary") return ProblemKind::curved_boundary;
    if (name == "csv") return ProblemKind::csv;
    throw InvalidArgumentError("unknown problem kind: " + name);
}

std::string to_string(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::gaussian_pair: return "gaussian_pair";
        case ProblemKind::ripley4: return "ripley4";
        case ProblemKind::quadratic_boundary: return "quadratic_boundary";
        case ProblemKind::gaussian_triangles: return "gaussian_triangles";
        case ProblemKind::oscillating_boundary: return "oscillating_boundary";
        case ProblemKind::curved_boundary: return "curved_boundary";
        case ProblemKind::csv: return "csv";
    }
    return "?";
}

void ProblemSpec::validate() const {
    if (kind == ProblemKind::csv) {
        if (csv_path.empty() || label_column.empty())
            throw InvalidArgumentError("ProblemSpec: csv kind needs path and label column");
        return;
    }
    if (classes.size() < 2) throw InvalidArgumentError("ProblemSpec: need >= 2 classes");
    double prior_sum = 0.0;
    for (const auto& cls : classes) {
        prior_sum += cls.prior;
        if (cls.components.empty())
            throw InvalidArgumentError("ProblemSpec: class without components");
        double w = 0.0;
        for (const auto& c : cls.components) {
            w += c.weight;
            if (c.mean.size() != dim())
                throw DimensionMismatchError("ProblemSpec: mixed component dimensions");
            detail::cholesky(c.cov);  // throws unless positive definite
        }
        if (std::abs(w - 1.0) > 1e-9)
            throw InvalidArgumentError("ProblemSpec: component weights must sum to 1");
    }
    if (std::abs(prior_sum - 1.0) > 1e-9)
        throw InvalidArgumentError("ProblemSpec: class priors must sum to 1");
}

ProblemSpec make_problem(ProblemKind kind) {
    ProblemSpec spec;
    spec.kind = kind;
    switch (kind) {
        case ProblemKind::gaussian_pair:
            spec.classes = {
                {0.5, {comp(1.0, {-1.0}, iso_cov(1, 1.0))}},
                {0.5, {comp(1.0, {+1.0}, iso_cov(1, 1.0))}},
            };
            break;
        case ProblemKind::ripley4:
            spec.classes = {
                {0.5,
                 {comp(0.5, {-0.3, 0.7}, iso_cov(2, 0.03)),
                  comp(0.5, {0.4, 0.7}, iso_cov(2, 0.03))}},
                {0.5,
                 {comp(0.5, {-0.7, 0.3}, iso_cov(2, 0.03)),
                  comp(0.5, {0.3, 0.3}, iso_cov(2, 0.03))}},
            };
            break;
        case ProblemKind::quadratic_boundary:
            spec.classes = {
                {0.5, {comp(1.0, {0.0, -0.4}, diag_cov({1.4, 0.25}))}},
                {0.5, {comp(1.0, {0.0, 0.85}, iso_cov(2, 0.35))}},
            };
            break;
        case ProblemKind::gaussian_triangles: {
            auto vertex = [](double angle) {
                return std::vector<double>{std::cos(angle), std::sin(angle)};
            };
            const double pi = std::numbers::pi;
            const double third = 1.0 / 3.0;
            spec.classes = {
                {0.5,
                 {comp(third, vertex(pi / 2), iso_cov(2, 0.095)),
                  comp(third, vertex(pi / 2 + 2 * pi / 3), iso_cov(2, 0.095)),
                  comp(third, vertex(pi / 2 + 4 * pi / 3), iso_cov(2, 0.095))}},
                {0.5,
                 {comp(third, vertex(-pi / 2), iso_cov(2, 0.095)),
                  comp(third, vertex(-pi / 2 + 2 * pi / 3), iso_cov(2, 0.095)),
                  comp(third, vertex(-pi / 2 + 4 * pi / 3), iso_cov(2, 0.095))}},
            };
            break;
        }
        case ProblemKind::oscillating_boundary:
            spec.classes = {
                {0.5,
                 {comp(0.25, {-1.5, 0.5}, iso_cov(2, 0.1)),
                  comp(0.25, {-0.5, 0.95}, iso_cov(2, 0.1)),
                  comp(0.25, {0.5, 0.5}, iso_cov(2, 0.1)),
                  comp(0.25, {1.5, 0.95}, iso_cov(2, 0.1))}},
                {0.5,
                 {comp(0.25, {-1.5, -0.4}, iso_cov(2, 0.1)),
                  comp(0.25, {-0.5, 0.15}, iso_cov(2, 0.1)),
                  comp(0.25, {0.5, -0.4}, iso_cov(2, 0.1)),
                  comp(0.25, {1.5, 0.15}, iso_cov(2, 0.1))}},
            };
            break;
        case ProblemKind::curved_boundary: {
            const double pi = std::numbers::pi;
            std::vector<GaussianComponent> ring;
            for (int i = 0; i < 5; ++i) {
                double a = -0.75 * pi + 0.5 * pi * static_cast<double>(i) / 4.0;
                ring.push_back(comp(0.2, {1.4 * std::cos(a), 1.4 * std::sin(a) + 0.6},
                                    iso_cov(2, 0.06)));
            }
            spec.classes = {
                {0.5, {comp(1.0, {0.0, 0.1}, iso_cov(2, 0.2))}},
                {0.5, std::move(ring)},
            };
            break;
        }
        case ProblemKind::csv:
            throw InvalidArgumentError("make_problem: csv problems need a path, not defaults");
    }
    spec.validate();
    return spec;
}

LabeledSet generate(const ProblemSpec& spec, std::size_t n, Rng& rng) {
    if (!spec.synthetic()) throw InvalidArgumentError("generate: synthetic kinds only");
    if (n < 1) throw InvalidArgumentError("generate: n >= 1");
    spec.validate();

    const std::size_t d = spec.dim();
    // factor every component once
    std::vector<std::vector<detail::Matrix>> chol(spec.classes.size());
    for (std::size_t c = 0; c < spec.classes.size(); ++c)
        for (const auto& g : spec.classes[c].components)
            chol[c].push_back(detail::cholesky(g.cov));

    std::vector<Example> out;
    out.reserve(n);
    std::vector<double> z(d);
    for (std::size_t i = 0; i < n; ++i) {
        double u = rng.uniform();
        std::size_t cls = 0;
        double acc = 0.0;
        for (; cls + 1 < spec.classes.size(); ++cls) {
            acc += spec.classes[cls].prior;
            if (u < acc) break;
        }
        const auto& mixture = spec.classes[cls];
        double v = rng.uniform();
        std::size_t ci = 0;
        double wacc = 0.0;
        for (; ci + 1 < mixture.components.size(); ++ci) {
            wacc += mixture.components[ci].weight;
            if (v < wacc) break;
        }
        const auto& g = mixture.components[ci];
        const auto& l = chol[cls][ci];
        for (std::size_t a = 0; a < d; ++a) z[a] = rng.normal();
        Example e;
        e.x.assign(d, 0.0);
        for (std::size_t a = 0; a < d; ++a) {
            double s = g.mean[a];
            for (std::size_t b = 0; b <= a; ++b) s += l[a][b] * z[b];
            e.x[a] = s;
        }
        e.y = static_cast<int>(cls) + 1;
        out.push_back(std::move(e));
    }
    return LabeledSet(std::move(out), spec.k());
}

std::vector<double> true_posterior(const ProblemSpec& spec, std::span<const double> x) {
    if (!spec.synthetic())
        throw UnsupportedProblemError("true_posterior: synthetic kinds only");
    std::vector<double> joint(spec.classes.size(), 0.0);
    double total = 0.0;
    for (std::size_t c = 0; c < spec.classes.size(); ++c) {
        double dens = 0.0;
        for (const auto& g : spec.classes[c].components) {
            detail::Matrix l = detail::cholesky(g.cov);
            dens += g.weight *
                    std::exp(component_log_density(g, x, l, detail::log_det_from_cholesky(l)));
        }
        joint[c] = spec.classes[c].prior * dens;
        total += joint[c];
    }
    for (double& v : joint) v /= total;
    return joint;
}

double marginal_density(const ProblemSpec& spec, std::span<const double> x) {
    if (!spec.synthetic())
        throw UnsupportedProblemError("marginal_density: synthetic kinds only");
    double total = 0.0;
    for (const auto& cls : spec.classes) {
        double dens = 0.0;
        for (const auto& g : cls.components) {
            detail::Matrix l = detail::cholesky(g.cov);
            dens += g.weight *
                    std::exp(component_log_density(g, x, l, detail::log_det_from_cholesky(l)));
        }
        total += cls.prior * dens;
    }
    return total;
}

double mc_bayes_error(const ProblemSpec& spec, std::size_t n, Rng& rng) {
    LabeledSet sample = generate(spec, n, rng);
    std::size_t wrong = 0;
    for (const auto& e : sample.examples()) {
        auto post = true_posterior(spec, e.x);
        int best = static_cast<int>(std::max_element(post.begin(), post.end()) - post.begin()) + 1;
        if (best != *e.y) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // trim surrounding whitespace
        auto b = field.find_first_not_of(" \t\r");
        auto e = field.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

}  // namespace

CsvDataset load_csv(const std::string& path, const std::string& label_column) {
    std::ifstream in(path);
    if (!in) throw ParseError("load_csv: cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw ParseError("load_csv: empty file " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto header = split_line(line);
    std::size_t label_idx = header.size();
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == label_column) label_idx = i;
    if (label_idx == header.size())
        throw MissingLabelColumnError("load_csv: no column named '" + label_column + "' in " +
                                      path);

    std::vector<std::string> label_names;
    std::vector<Example> examples;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_line(line);
        if (fields.size() != header.size())
            throw ParseError("load_csv: row " + std::to_string(row) + " has " +
                             std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(header.size()));
        Example e;
        e.x.reserve(header.size() - 1);
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i == label_idx) continue;
            double v = 0.0;
            const std::string& f = fields[i];
            auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(v))
                throw NonNumericCovariateError("load_csv: row " + std::to_string(row) +
                                               ", column '" + header[i] +
                                               "': not a finite number: '" + f + "'");
            e.x.push_back(v);
        }
        const std::string& label = fields[label_idx];
        auto it = std::find(label_names.begin(), label_names.end(), label);
        if (it == label_names.end()) {
            label_names.push_back(label);
            e.y = static_cast<int>(label_names.size());
        } else {
            e.y = static_cast<int>(it - label_names.begin()) + 1;
        }
        examples.push_back(std::move(e));
    }
    if (examples.empty()) throw ParseError("load_csv: no data rows in " + path);
    if (label_names.size() < 2)
        throw ParseError("load_csv: need at least two distinct labels in " + path);
    return CsvDataset{LabeledSet(std::move(examples), static_cast<int>(label_names.size())),
                      std::move(label_names)};
}

DatasetBundle split(const LabeledSet& data, std::uint64_t seed, std::size_t n_labeled,
                    std::size_t n_pool, std::size_t n_test) {
    if (n_labeled + n_pool + n_test > data.size())
        throw NotEnoughDataError("split: requested sizes exceed the dataset");
    if (n_labeled < static_cast<std::size_t>(data.k()))
        throw ClassCoverageError("split: n_labeled below the class count");
    if (n_pool < 1 || n_test < 1) throw InvalidArgumentError("split: empty pool or test part");

    // classes that never occur cannot be covered at all
    std::vector<int> counts(static_cast<std::size_t>(data.k()), 0);
    for (const auto& e : data.examples()) counts[static_cast<std::size_t>(*e.y - 1)]++;
    if (std::any_of(counts.begin(), counts.end(), [](int c) { return c == 0; }))
        throw ClassCoverageError("split: a class is absent from the dataset");

    Rng rng(mix_seed({seed, 0x5197bULL, data.size()}));
    std::vector<std::size_t> order(data.size());
    const int max_retries = 1000;
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        rng.shuffle(order);
        std::vector<bool> seen(static_cast<std::size_t>(data.k()), false);
        for (std::size_t i = 0; i < n_labeled; ++i)
            seen[static_cast<std::size_t>(*data[order[i]].y - 1)] = true;
        if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) continue;

        std::vector<std::size_t> labeled_idx(order.begin(),
                                             order.begin() + static_cast<std::ptrdiff_t>(n_labeled));
        std::vector<Example> pool_ex;
        std::vector<int> pool_ids;
        for (std::size_t i = n_labeled; i < n_labeled + n_pool; ++i) {
            pool_ex.push_back(data[order[i]]);
            pool_ids.push_back(static_cast<int>(order[i]));
        }
        std::vector<std::size_t> test_idx(
            order.begin() + static_cast<std::ptrdiff_t>(n_labeled + n_pool),
            order.begin() + static_cast<std::ptrdiff_t>(n_labeled + n_pool + n_test));
        DatasetBundle bundle;
        bundle.labeled = data.subset(labeled_idx);
        bundle.pool = Pool(std::move(pool_ex), std::move(pool_ids));
        bundle.test = data.subset(test_idx);
        bundle.seed = seed;
        return bundle;
    }
    throw ClassCoverageError("split: could not cover every class in the labelled part");
}

}  // namespace eqlab
