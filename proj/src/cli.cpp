#include "zonosvm/cli.hpp"

#include "zonosvm/feature_map.hpp"
#include "zonosvm/nearest_point.hpp"
#include "zonosvm/reference_oracle.hpp"
#include "zonosvm/separability.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace zonosvm {
namespace {

using nlohmann::json;

json vec_json(const Vec& v) {
    json a = json::array();
    for (Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

json input_summary(const LabeledDataset& ds) {
    return json{{"n", ds.size()},
                {"d", ds.dim()},
                {"class_counts",
                 {{"positive", static_cast<long>(ds.positives().size())},
                  {"negative", static_cast<long>(ds.negatives().size())}}}};
}

const char* bias_name(BiasStrategy b) {
    return b == BiasStrategy::halfway ? "halfway" : "line-search";
}

// Opens the configured output (or uses the fallback stream) and hands it to
// `body`. Returns kExitOk, or kExitInput when the path cannot be written.
template <typename Body>
int with_output(const RunConfig& config, std::ostream& fallback_out, std::ostream& err,
                Body&& body) {
    if (config.output_path.empty()) {
        body(fallback_out);
        return kExitOk;
    }
    std::ofstream file(config.output_path);
    if (!file) {
        err << "error: cannot open output file '" << config.output_path << "'\n";
        return kExitInput;
    }
    body(file);
    file.flush();
    if (!file) {
        err << "error: failed writing output file '" << config.output_path << "'\n";
        return kExitInput;
    }
    return kExitOk;
}

int write_report(const json& report, const RunConfig& config, std::ostream& fallback_out,
                 std::ostream& err) {
    return with_output(config, fallback_out, err,
                       [&](std::ostream& out) { out << report.dump(2) << '\n'; });
}

json classifier_json(const TrainedClassifier& c) {
    json r;
    r["mu"] = c.mu;
    r["w"] = vec_json(c.w);
    r["b_plus"] = c.b_plus;
    r["b_minus"] = c.b_minus;
    r["b"] = c.b;
    r["margin"] = c.margin;
    r["alpha"] = vec_json(c.alpha);
    r["xi"] = vec_json(c.xi);
    r["support_indices"] = c.support_indices;
    r["bias_strategy"] = bias_name(c.bias_strategy);
    r["degenerate"] = c.degenerate;
    return r;
}

json diagnostics_json(const TrainDiagnostics& d) {
    return json{{"solver", d.solver_used},
                {"iterations", d.iterations},
                {"gap", d.duality_gap},
                {"squared_norm", d.squared_norm},
                {"witness_fallback", d.witness_fallback}};
}

TrainOptions train_options(const RunConfig& config) {
    TrainOptions opts;
    opts.bias = config.bias;
    opts.eps = config.eps;
    opts.solver = config.solver;
    return opts;
}

int run_train(const RunConfig& config, std::ostream& fallback_out, std::ostream& err) {
    LabeledDataset ds = load_dataset(config.input_path, config.format);
    TrainDiagnostics diag;
    TrainedClassifier c = train(ds, config.mu, train_options(config), &diag);
    if (!config.plot_path.empty()) emit_plot_data(c, ds, config.plot_path);

    json report;
    report["command"] = "train";
    report["version"] = std::string(kVersion);
    report["input_summary"] = input_summary(ds);
    report["result"] = classifier_json(c);
    report["diagnostics"] = diagnostics_json(diag);
    return write_report(report, config, fallback_out, err);
}

int run_separability(const RunConfig& config, std::ostream& fallback_out, std::ostream& err) {
    LabeledDataset ds = load_dataset(config.input_path, config.format);
    SeparabilityResult r = zero_margin_mu(ds, config.eps);

    json result;
    result["mu_zero"] = r.mu_zero;
    result["mu_star"] = r.mu_star ? json(*r.mu_star) : json(nullptr);
    result["separable"] = r.separable;
    result["height"] = r.height;
    result["alpha_plus"] = vec_json(r.alpha_plus);
    result["alpha_minus"] = vec_json(r.alpha_minus);
    result["common_point"] = vec_json(r.common_point);

    json report;
    report["command"] = "separability";
    report["version"] = std::string(kVersion);
    report["input_summary"] = input_summary(ds);
    report["result"] = result;
    report["diagnostics"] =
        json{{"solver", "ellipsoid"}, {"iterations", r.iterations}, {"gap", 0.0}};
    return write_report(report, config, fallback_out, err);
}

int run_lift(const RunConfig& config, std::ostream& fallback_out, std::ostream& err) {
    LabeledDataset ds = load_dataset(config.input_path, config.format);
    LabeledDataset lifted = lift_dataset_features(ds, config.degree);
    return with_output(config, fallback_out, err,
                       [&](std::ostream& out) { out << "# degree " << config.degree
                                                    << " polynomial feature map: d' = "
                                                    << lifted.dim() << '\n';
                                                write_dataset(out, lifted, config.format); });
}

int run_sweep(const RunConfig& config, std::ostream& fallback_out, std::ostream& err) {
    LabeledDataset ds = load_dataset(config.input_path, config.format);
    double mu_min = std::max(1.0 / static_cast<double>(ds.positives().size()),
                             1.0 / static_cast<double>(ds.negatives().size()));
    double mu_max = config.mu > 0.0 ? config.mu : 1.0;
    if (mu_max < mu_min) {
        throw ValidationError("sweep: --mu upper bound " + std::to_string(mu_max) +
                              " is below the smallest feasible value " + std::to_string(mu_min) +
                              ".");
    }

    std::vector<double> grid;
    int points = std::max(1, config.sweep_points);
    if (points == 1 || mu_max - mu_min <= 1e-12) {
        grid.push_back(mu_max);
    } else {
        for (int i = 0; i < points; ++i) {
            grid.push_back(mu_min + (mu_max - mu_min) * static_cast<double>(i) /
                                        static_cast<double>(points - 1));
        }
    }

    json rows = json::array();
    long total_iterations = 0;
    double worst_gap = 0.0;
    std::string solver_used;
    for (double mu : grid) {
        TrainDiagnostics diag;
        TrainedClassifier c = train(ds, mu, train_options(config), &diag);
        rows.push_back(json{{"mu", mu},
                            {"margin", c.margin},
                            {"support_count", static_cast<long>(c.support_indices.size())},
                            {"degenerate", c.degenerate}});
        total_iterations += diag.iterations;
        worst_gap = std::max(worst_gap, diag.duality_gap);
        solver_used = diag.solver_used;
    }

    json report;
    report["command"] = "sweep";
    report["version"] = std::string(kVersion);
    report["input_summary"] = input_summary(ds);
    report["result"] = json{{"mu_min", mu_min}, {"mu_max", mu_max}, {"rows", rows}};
    report["diagnostics"] =
        json{{"solver", solver_used}, {"iterations", total_iterations}, {"gap", worst_gap}};
    return write_report(report, config, fallback_out, err);
}

// ---- `check`: randomized cross-checks of the fast paths against the
// brute-force reference oracles. ----

struct CheckCategory {
    std::string name;
    int trials = 0;
    int failed = 0;
};

Vec random_direction(std::mt19937_64& rng, Index d) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec w(d);
    do {
        for (Index i = 0; i < d; ++i) w[i] = gauss(rng);
    } while (w.norm() <= 1e-6);
    return w;
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * (1.0 + std::abs(b)); }

CheckCategory check_zonotope_lmo(std::mt19937_64& rng) {
    CheckCategory cat{"zonotope-lmo"};
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_int_distribution<Index> m_dist(1, 8), d_dist(1, 4);
    std::uniform_real_distribution<double> cap_dist(0.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        Index m = m_dist(rng), d = d_dist(rng);
        Mat gens(m, d);
        for (Index i = 0; i < m; ++i)
            for (Index j = 0; j < d; ++j) gens(i, j) = gauss(rng);
        Vec caps(m);
        for (Index i = 0; i < m; ++i) caps[i] = cap_dist(rng);
        Zonotope z(gens, caps);
        Vec w = random_direction(rng, d);

        ++cat.trials;
        HullVertexWitness fast = zonotope_extreme(z, w);
        double slow = brute_lmo(z, w);
        bool recombines =
            (fast.point - gens.transpose() * fast.weights).lpNorm<Eigen::Infinity>() <= 1e-12;
        if (!close(fast.objective, slow, 1e-9) || !recombines) ++cat.failed;
    }
    return cat;
}

CheckCategory check_hull_lmo(std::mt19937_64& rng) {
    CheckCategory cat{"hull-lmo"};
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_int_distribution<Index> m_dist(1, 9), d_dist(1, 4);
    for (int trial = 0; trial < 200; ++trial) {
        Index m = m_dist(rng), d = d_dist(rng);
        std::uniform_int_distribution<Index> k_dist(1, m);
        double mu = 1.0 / static_cast<double>(k_dist(rng));
        Mat pts(m, d);
        for (Index i = 0; i < m; ++i)
            for (Index j = 0; j < d; ++j) pts(i, j) = gauss(rng);
        ReducedHull h(pts, mu);
        Vec w = random_direction(rng, d);

        ++cat.trials;
        HullVertexWitness fast = hull_extreme(h, w);
        double slow = brute_lmo(h, w);
        bool recombines =
            (fast.point - pts.transpose() * fast.weights).lpNorm<Eigen::Infinity>() <= 1e-12 &&
            std::abs(fast.weights.sum() - 1.0) <= 1e-9;
        if (!close(fast.objective, slow, 1e-9) || !recombines) ++cat.failed;
    }
    return cat;
}

CheckCategory check_nearest_point(std::mt19937_64& rng) {
    CheckCategory cat{"nearest-point"};
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_int_distribution<Index> n_dist(4, 8), d_dist(1, 3);
    std::uniform_int_distribution<int> label_dist(0, 1), lattice_dist(0, 3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        Index n = n_dist(rng), d = d_dist(rng);
        bool lattice = lattice_dist(rng) == 0;  // integer points provoke projection ties
        Mat pts(n, d);
        std::vector<int> labels(static_cast<std::size_t>(n));
        bool has_plus = false, has_minus = false;
        do {
            has_plus = has_minus = false;
            for (Index i = 0; i < n; ++i) {
                for (Index j = 0; j < d; ++j) {
                    double x = gauss(rng);
                    pts(i, j) = lattice ? std::round(2.0 * x) : x;
                }
                int y = label_dist(rng) == 0 ? -1 : 1;
                labels[static_cast<std::size_t>(i)] = y;
                (y > 0 ? has_plus : has_minus) = true;
            }
        } while (!has_plus || !has_minus);
        LabeledDataset ds(pts, labels);
        double mu_min = std::max(1.0 / static_cast<double>(ds.positives().size()),
                                 1.0 / static_cast<double>(ds.negatives().size()));
        double mu = trial % 4 == 0 ? 1.0 : mu_min + (1.0 - mu_min) * unit(rng);

        ++cat.trials;
        TrainOptions opts;
        opts.eps = 1e-9;
        opts.solver = SolverKind::nearest_point;
        TrainDiagnostics diag;
        TrainedClassifier c = train(ds, mu, opts, &diag);
        BruteNearestResult brute = brute_nearest(ds, mu);
        bool ok = close(diag.squared_norm, brute.squared_norm, 1e-7);
        if (ok && !c.degenerate) ok = kkt_check(ds, c, 1e-5).pass();
        if (!ok) ++cat.failed;
    }
    return cat;
}

CheckCategory check_kernel_identity(std::mt19937_64& rng) {
    CheckCategory cat{"kernel-identity"};
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_int_distribution<Index> d_dist(1, 5);
    std::uniform_int_distribution<int> p_dist(1, 3);
    for (int trial = 0; trial < 200; ++trial) {
        Index d = d_dist(rng);
        int p = p_dist(rng);
        Vec v(d), w(d);
        for (Index i = 0; i < d; ++i) {
            v[i] = gauss(rng);
            w[i] = gauss(rng);
        }
        ++cat.trials;
        double lifted = polynomial_feature_map(v, p).dot(polynomial_feature_map(w, p));
        double kernel = std::pow(v.dot(w), p);
        if (std::abs(lifted - kernel) > 1e-9 * std::max(1.0, std::abs(kernel))) ++cat.failed;
    }
    return cat;
}

int run_check(const RunConfig& config, std::ostream& fallback_out, std::ostream& err) {
    std::mt19937_64 rng(config.seed);
    std::vector<CheckCategory> categories;
    categories.push_back(check_zonotope_lmo(rng));
    categories.push_back(check_hull_lmo(rng));
    categories.push_back(check_nearest_point(rng));
    categories.push_back(check_kernel_identity(rng));

    json rows = json::array();
    long total_trials = 0, total_failed = 0;
    for (const CheckCategory& cat : categories) {
        rows.push_back(json{{"name", cat.name}, {"trials", cat.trials}, {"failed", cat.failed}});
        total_trials += cat.trials;
        total_failed += cat.failed;
    }

    json report;
    report["command"] = "check";
    report["version"] = std::string(kVersion);
    report["input_summary"] = nullptr;
    report["result"] = json{{"seed", config.seed},
                            {"categories", rows},
                            {"total_trials", total_trials},
                            {"total_failed", total_failed},
                            {"passed", total_failed == 0}};
    report["diagnostics"] =
        json{{"solver", "reference-oracle"}, {"iterations", total_trials}, {"gap", 0.0}};
    int write_status = write_report(report, config, fallback_out, err);
    if (write_status != kExitOk) return write_status;
    if (total_failed != 0) {
        err << "error: " << total_failed << " of " << total_trials
            << " oracle cross-checks failed\n";
        return kExitInternal;
    }
    return kExitOk;
}

}  // namespace

RunConfig parse_args(int argc, const char* const* argv) {
    RunConfig cfg;
    CLI::App app{"Soft-margin SVM training by optimization over zonotopes and reduced convex hulls"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    const std::map<std::string, DatasetFormat> format_names{
        {"csv", DatasetFormat::csv}, {"svmlight", DatasetFormat::svmlight}};
    const std::map<std::string, BiasStrategy> bias_names{
        {"halfway", BiasStrategy::halfway}, {"line-search", BiasStrategy::line_search}};
    const std::map<std::string, SolverKind> solver_names{
        {"auto", SolverKind::automatic},
        {"ellipsoid", SolverKind::ellipsoid},
        {"nearest-point", SolverKind::nearest_point}};

    auto add_input = [&](CLI::App* sub) {
        sub->add_option("input", cfg.input_path, "Dataset file")->required();
        sub->add_option("--format", cfg.format, "Input format")
            ->transform(CLI::CheckedTransformer(format_names, CLI::ignore_case))
            ->default_str("csv");
    };
    auto add_output = [&](CLI::App* sub) {
        sub->add_option("-o,--output", cfg.output_path, "Write the report here instead of stdout");
    };
    auto add_solver_knobs = [&](CLI::App* sub) {
        sub->add_option("--eps", cfg.eps, "Solver tolerance")
            ->check(CLI::PositiveNumber)
            ->default_str("1e-7");
        sub->add_option("--solver", cfg.solver, "Dual solver")
            ->transform(CLI::CheckedTransformer(solver_names, CLI::ignore_case))
            ->default_str("auto");
    };

    CLI::App* train = app.add_subcommand("train", "Train a classifier at a fixed weight cap mu");
    add_input(train);
    train->add_option("--mu", cfg.mu, "Per-point dual weight cap, in [1/min(class sizes), 1]")
        ->required();
    train->add_option("--bias", cfg.bias, "Decision bias placement")
        ->transform(CLI::CheckedTransformer(bias_names, CLI::ignore_case))
        ->default_str("halfway");
    add_solver_knobs(train);
    add_output(train);
    train->add_option("--plot", cfg.plot_path, "Write a 2-D SVG plot of the result here");
    train->callback([&] { cfg.command = "train"; });

    CLI::App* separability =
        app.add_subcommand("separability", "Compute the zero-margin separability measure");
    add_input(separability);
    separability->add_option("--eps", cfg.eps, "Solver tolerance")
        ->check(CLI::PositiveNumber)
        ->default_str("1e-7");
    add_output(separability);
    separability->callback([&] { cfg.command = "separability"; });

    CLI::App* lift =
        app.add_subcommand("lift", "Apply the polynomial feature map and write the lifted dataset");
    add_input(lift);
    lift->add_option("--degree", cfg.degree, "Polynomial degree (>= 1)")
        ->required()
        ->check(CLI::PositiveNumber);
    add_output(lift);
    lift->callback([&] { cfg.command = "lift"; });

    CLI::App* check =
        app.add_subcommand("check", "Cross-check the fast solvers against brute-force oracles");
    add_output(check);
    check->callback([&] { cfg.command = "check"; });

    CLI::App* sweep =
        app.add_subcommand("sweep", "Train across a grid of mu values and tabulate the results");
    add_input(sweep);
    sweep->add_option("--mu", cfg.mu, "Upper end of the mu grid (default 1)");
    sweep->add_option("--points", cfg.sweep_points, "Number of grid points")
        ->check(CLI::Range(1, 100000))
        ->default_str("10");
    add_solver_knobs(sweep);
    add_output(sweep);
    sweep->callback([&] { cfg.command = "sweep"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        throw;
    } catch (const CLI::CallForVersion&) {
        std::cout << app.version() << '\n';
        throw;
    }

    if (const char* env_seed = std::getenv("ZONOSVM_SEED")) {
        std::string text(env_seed);
        char* end = nullptr;
        unsigned long long parsed = std::strtoull(text.c_str(), &end, 0);
        if (text.empty() || end != text.c_str() + text.size()) {
            throw CLI::ValidationError("ZONOSVM_SEED must be an unsigned integer, got '" + text +
                                       "'");
        }
        cfg.seed = static_cast<std::uint64_t>(parsed);
    }
    return cfg;
}

int run(const RunConfig& config, std::ostream& fallback_out, std::ostream& err) {
    try {
        if (config.command == "train") return run_train(config, fallback_out, err);
        if (config.command == "separability") return run_separability(config, fallback_out, err);
        if (config.command == "lift") return run_lift(config, fallback_out, err);
        if (config.command == "check") return run_check(config, fallback_out, err);
        if (config.command == "sweep") return run_sweep(config, fallback_out, err);
        err << "error: unknown command '" << config.command << "'\n";
        return kExitInput;
    } catch (const ParseError& e) {
        err << "error: " << config.input_path << ": " << e.what() << '\n';
        return kExitInput;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::overflow_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const NonconvergenceError& e) {
        err << "error: solver did not converge: " << e.what() << '\n';
        return kExitNonconvergence;
    } catch (const ConditioningError& e) {
        err << "error: solver lost numerical conditioning: " << e.what() << '\n';
        return kExitNonconvergence;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    } catch (...) {
        err << "internal error: unknown exception\n";
        return kExitInternal;
    }
}

}  // namespace zonosvm
