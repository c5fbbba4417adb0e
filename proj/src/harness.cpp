#include "nondecomp/harness.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace nondecomp {
namespace {

constexpr std::uint64_t kTestFeatureStream = 6;
constexpr std::uint64_t kTestLabelSalt = 0x9e3779b97f4a7c15ULL;

ObservationSet all_entries(const Matrix &Y) {
    std::vector<ObservationSet::Entry> e;
    e.reserve(static_cast<std::size_t>(Y.size()));
    for (int i = 0; i < Y.rows(); ++i)
        for (int j = 0; j < Y.cols(); ++j)
            e.push_back({i, j, Y(i, j)});
    return ObservationSet(static_cast<int>(Y.rows()), static_cast<int>(Y.cols()), std::move(e));
}

ObservationSet complement(const Matrix &Y, const ObservationSet &train) {
    std::vector<char> seen(static_cast<std::size_t>(Y.size()), 0);
    for (const auto &e : train.entries())
        seen[static_cast<std::size_t>(e.row) * Y.cols() + e.col] = 1;
    std::vector<ObservationSet::Entry> out;
    for (int i = 0; i < Y.rows(); ++i)
        for (int j = 0; j < Y.cols(); ++j)
            if (!seen[static_cast<std::size_t>(i) * Y.cols() + j])
                out.push_back({i, j, Y(i, j)});
    return ObservationSet(static_cast<int>(Y.rows()), static_cast<int>(Y.cols()), std::move(out));
}

std::string short_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

void ensure_parent(const std::string &path) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (parent.empty())
        return;
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
    if (ec)
        throw InputError("cannot create directory '" + parent.string() + "'");
}

void write_table(const ResultTable &table, const std::string &path, bool append) {
    ensure_parent(path);
    bool header = true;
    if (append) {
        std::error_code ec;
        header = !(std::filesystem::exists(path, ec) && std::filesystem::file_size(path, ec) > 0);
    }
    std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
    if (!out)
        throw InputError("cannot write '" + path + "'");
    write_results_csv(table, out, header);
}

void write_plot(const std::vector<PlotSeries> &series, std::string_view x, std::string_view y,
                const std::string &path) {
    ensure_parent(path);
    std::ofstream out(path);
    if (!out)
        throw InputError("cannot write '" + path + "'");
    emit_plot(series, x, y, out);
}

std::string algorithm1_solver(const ExperimentConfig &cfg) {
    return cfg.solver == "plugin" ? "alt_min" : cfg.solver;
}

void check_model_fits(const Model &model, const Matrix &X, const ObservationSet &obs) {
    const auto [d, L] = model_shape(model);
    if (d != X.cols() || L != obs.cols())
        throw InputError("model is " + std::to_string(d) + " x " + std::to_string(L) +
                         " but the data has d = " + std::to_string(X.cols()) +
                         ", L = " + std::to_string(obs.cols()));
}

// Scores of every configured method and metric on one problem draw.
// values[method][metric]
using DrawScores = std::vector<std::vector<double>>;

DrawScores score_draw(const ExperimentConfig &cfg, const TrainingProblem &p,
                      const std::vector<std::string> &solvers) {
    DrawScores out(solvers.size(), std::vector<double>(cfg.metrics.size()));
    for (std::size_t s = 0; s < solvers.size(); ++s) {
        const FitOutcome fit = fit_model(cfg, solvers[s], p.X_train, p.train);
        for (std::size_t m = 0; m < cfg.metrics.size(); ++m) {
            const MetricSpec spec = metric_by_name(cfg.metrics[m]);
            Model model = fit.model;
            select_threshold(model, spec, p.X_train, p.train);
            out[s][m] = evaluate_model(model, spec, p.X_test, p.test).value;
        }
    }
    return out;
}

} // namespace

TrainingProblem build_problem(const ExperimentConfig &cfg, std::uint64_t seed, double ratio) {
    const auto dist = OmegaDistribution::uniform();
    if (cfg.pu_rho > 0 && ratio != 1.0)
        throw InputError("PU learning observes every entry; set ratio = 1 when pu_rho > 0");
    if (cfg.dataset) {
        const SparseDataset data = read_dataset_file(*cfg.dataset);
        const Matrix Y = data.label_matrix();
        const Matrix Y_seen = cfg.pu_rho > 0 ? pu_flip(Y, cfg.pu_rho, seed) : Y;
        ObservationSet train = mask_observations(Y_seen, ratio, dist, seed);
        if (cfg.test_dataset) {
            const SparseDataset test = read_dataset_file(*cfg.test_dataset);
            if (test.d != data.d || test.L != data.L)
                throw InputError("test dataset dimensions do not match the training dataset");
            return {data.dense_features(), std::move(train), test.dense_features(),
                    all_entries(test.label_matrix()), std::nullopt};
        }
        ObservationSet held_out = complement(Y, train);
        return {data.dense_features(), std::move(train), data.dense_features(),
                std::move(held_out), std::nullopt};
    }

    SyntheticSpec spec = cfg.synthetic;
    spec.seed = seed;
    Matrix X = gen_features(spec);
    Matrix W_star = gen_lowrank_W(spec);
    const Matrix Y = sample_labels(X, W_star, spec.noise, seed);
    const Matrix Y_seen = cfg.pu_rho > 0 ? pu_flip(Y, cfg.pu_rho, seed) : Y;
    ObservationSet train = mask_observations(Y_seen, ratio, dist, seed);
    Matrix X_test = gen_features(spec, cfg.n_test, kTestFeatureStream);
    const Matrix Y_test = sample_labels(X_test, W_star, spec.noise, seed ^ kTestLabelSalt);
    return {std::move(X), std::move(train), std::move(X_test), all_entries(Y_test),
            std::move(W_star)};
}

double score_norm_lambda(int n, int L, std::size_t m, double c) {
    if (n < 1 || L < 1 || m == 0)
        throw InputError("score_norm_lambda: dimensions must be positive");
    return 2.0 * c *
           std::sqrt(2.0 * std::log(static_cast<double>(n) + L) /
                     (static_cast<double>(std::min(n, L)) * static_cast<double>(m)));
}

FitOutcome fit_model(const ExperimentConfig &cfg, const std::string &solver, const Matrix &X,
                     const ObservationSet &obs) {
    if (solver == "plugin") {
        DenseModel m = fit_plugin_baseline(X, obs, cfg.ridge, ProperLoss::from_name(cfg.loss));
        m.gamma_clip = cfg.gamma_clip;
        FitReport r;
        r.converged = true;
        r.final_rank = numerical_rank(m.W);
        return {std::move(m), std::move(r)};
    }
    SolverConfig sc = cfg.solver_config(obs.size());
    if (!cfg.lambda && cfg.regularizer == RegularizerMode::score_norm)
        sc.lambda_reg =
            score_norm_lambda(static_cast<int>(X.rows()), obs.cols(), obs.size(), cfg.lambda_c);
    if (solver == "alt_min") {
        auto [m, r] = fit_alt_min(X, obs, sc, cfg.rank_for(static_cast<int>(X.cols()), obs.cols()));
        return {std::move(m), std::move(r)};
    }
    if (solver == "prox_grad") {
        auto [m, r] = fit_prox_grad(X, obs, sc);
        return {std::move(m), std::move(r)};
    }
    throw InputError("unknown solver '" + solver + "'");
}

ThresholdResult select_threshold(Model &model, const MetricSpec &metric, const Matrix &X,
                                 const ObservationSet &obs) {
    const auto cells = obs.cells();
    const auto z = predict_scores_at(X, model, cells);
    const auto y = obs.binary_labels();
    const ThresholdResult r = threshold_sweep(metric, z, y, cells, obs.rows(), obs.cols());
    set_model_theta(model, r.theta_hat);
    return r;
}

MetricValue evaluate_model(const Model &model, const MetricSpec &metric, const Matrix &X,
                           const ObservationSet &obs) {
    const auto theta = model_theta(model);
    if (!theta)
        throw InputError("model has no threshold; run the threshold task first");
    if (obs.empty())
        throw InputError("no held-out entries to evaluate on");
    const auto cells = obs.cells();
    const auto z = predict_scores_at(X, model, cells);
    const auto yhat = apply_threshold(z, *theta);
    const auto y = obs.binary_labels();
    return evaluate_labeling(metric, yhat, y, cells, obs.rows(), obs.cols());
}

std::string method_label(const std::string &solver) {
    return solver == "plugin" ? "plugin" : "algorithm1";
}

MeanSd mean_sd(const std::vector<double> &values) {
    if (values.empty())
        throw InputError("mean_sd: no values");
    MeanSd r;
    for (double v : values)
        r.mean += v;
    r.mean /= static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0;
        for (double v : values)
            ss += (v - r.mean) * (v - r.mean);
        r.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return r;
}

double loglog_slope(const std::vector<double> &x, const std::vector<double> &y) {
    if (x.size() != y.size() || x.size() < 2)
        throw InputError("loglog_slope needs matching inputs with at least two points");
    const std::size_t k = x.size();
    double mx = 0, my = 0;
    std::vector<double> lx(k), ly(k);
    for (std::size_t i = 0; i < k; ++i) {
        if (!(x[i] > 0) || !(y[i] > 0))
            throw NumericalError("loglog_slope: values must be positive");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
        mx += lx[i];
        my += ly[i];
    }
    mx /= k;
    my /= k;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < k; ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    if (!(sxx > 0))
        throw InputError("loglog_slope: x values are all equal");
    return sxy / sxx;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)> &body) {
    std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
    if (const char *env = std::getenv("NONDECOMP_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0)
            threads = static_cast<std::size_t>(v);
    }
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count)
                    return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(mu);
                    if (!first)
                        first = std::current_exception();
                    next = count;
                }
            }
        });
    for (auto &t : pool)
        t.join();
    if (first)
        std::rethrow_exception(first);
}

ConvergenceResult run_convergence(const ExperimentConfig &cfg) {
    if (cfg.dataset)
        throw InputError("the convergence task needs a synthetic spec, not a dataset");
    if (cfg.ratios.empty())
        throw InputError("the convergence task needs at least one ratio");
    const std::vector<std::string> solvers{algorithm1_solver(cfg), "plugin"};
    const std::size_t R = cfg.ratios.size(), reps = static_cast<std::size_t>(cfg.repeats);
    std::vector<DrawScores> draws(R * reps);
    parallel_for(draws.size(), [&](std::size_t job) {
        const std::size_t r = job / reps, rep = job % reps;
        const TrainingProblem p = build_problem(cfg, cfg.seed + rep, cfg.ratios[r]);
        draws[job] = score_draw(cfg, p, solvers);
    });

    ConvergenceResult out;
    for (std::size_t s = 0; s < solvers.size(); ++s)
        for (std::size_t m = 0; m < cfg.metrics.size(); ++m)
            for (std::size_t r = 0; r < R; ++r) {
                CurvePoint pt;
                pt.method = method_label(solvers[s]);
                pt.metric = cfg.metrics[m];
                pt.x = cfg.ratios[r];
                for (std::size_t rep = 0; rep < reps; ++rep)
                    pt.values.push_back(draws[r * reps + rep][s][m]);
                pt.summary = mean_sd(pt.values);
                out.table.push_back({pt.method, pt.metric, "ratio=" + short_double(pt.x),
                                     pt.summary.mean, pt.summary.sd, cfg.config_hash});
                out.points.push_back(std::move(pt));
            }
    return out;
}

ResultTable run_compare(const ExperimentConfig &cfg) {
    const std::vector<std::string> solvers{algorithm1_solver(cfg), "plugin"};
    const std::size_t reps = static_cast<std::size_t>(cfg.repeats);
    std::vector<DrawScores> draws(reps);
    parallel_for(reps, [&](std::size_t rep) {
        draws[rep] = score_draw(cfg, build_problem(cfg, cfg.seed + rep, cfg.ratio), solvers);
    });
    ResultTable table;
    for (std::size_t s = 0; s < solvers.size(); ++s)
        for (std::size_t m = 0; m < cfg.metrics.size(); ++m) {
            std::vector<double> v;
            for (const auto &d : draws)
                v.push_back(d[s][m]);
            const MeanSd ms = mean_sd(v);
            table.push_back({method_label(solvers[s]), cfg.metrics[m], "test", ms.mean, ms.sd,
                             cfg.config_hash});
        }
    return table;
}

std::vector<std::size_t> rate_grid(const ExperimentConfig &cfg) {
    if (!cfg.omega_sizes.empty())
        return cfg.omega_sizes;
    const double nL = static_cast<double>(cfg.synthetic.n) * cfg.synthetic.L;
    std::vector<std::size_t> grid;
    for (double f : {0.1, 0.2, 0.4, 0.8})
        grid.push_back(static_cast<std::size_t>(std::llround(f * nL)));
    return grid;
}

RateCheckResult run_rate_check(const ExperimentConfig &cfg) {
    if (cfg.dataset)
        throw InputError("the rate_check task needs a synthetic spec, not a dataset");
    if (cfg.synthetic.noise.kind != NoiseKind::bernoulli_logistic)
        throw InputError("the rate_check task needs noise = bernoulli_logistic");
    const auto grid = rate_grid(cfg);
    if (grid.size() < 3)
        throw InputError("the rate_check task needs at least 3 grid points");
    const int n = cfg.synthetic.n, L = cfg.synthetic.L;
    const std::size_t nL = static_cast<std::size_t>(n) * static_cast<std::size_t>(L);
    for (std::size_t m : grid)
        if (m == 0 || m > nL)
            throw InputError("omega size " + std::to_string(m) + " outside [1, n*L]");

    const std::size_t G = grid.size(), reps = static_cast<std::size_t>(cfg.repeats);
    std::vector<std::array<double, 2>> err(G * reps);
    parallel_for(err.size(), [&](std::size_t job) {
        const std::size_t g = job / reps, rep = job % reps;
        SyntheticSpec spec = cfg.synthetic;
        spec.seed = cfg.seed + rep;
        const Matrix X = gen_features(spec);
        const Matrix W_star = gen_lowrank_W(spec);
        const Matrix Y = sample_labels(X, W_star, spec.noise, spec.seed);
        std::vector<ObservationSet::Entry> entries;
        for (const Cell &c : sample_omega(n, L, grid[g], OmegaDistribution::uniform(), spec.seed))
            entries.push_back({c.row, c.col, Y(c.row, c.col)});
        const ObservationSet obs(n, L, std::move(entries));

        SolverConfig sc = cfg.solver_config(obs.size());
        sc.regularizer = RegularizerMode::param_norm;
        sc.lambda_reg = cfg.lambda ? *cfg.lambda : default_lambda(obs.size(), cfg.lambda_c);
        err[job][0] = recovery_error(fit_prox_grad(X, obs, sc).first.W, W_star);
        sc.regularizer = RegularizerMode::score_norm;
        sc.lambda_reg = score_norm_lambda(n, L, obs.size(), cfg.lambda_c);
        err[job][1] = recovery_error(fit_prox_grad(X, obs, sc).first.W, W_star);
    });

    RateCheckResult out;
    out.omega_sizes = grid;
    const char *names[2] = {"param_norm", "score_norm"};
    std::vector<double> xs;
    for (std::size_t m : grid)
        xs.push_back(static_cast<double>(m));
    for (int v = 0; v < 2; ++v) {
        auto &series = v == 0 ? out.param_norm_error : out.score_norm_error;
        for (std::size_t g = 0; g < G; ++g) {
            std::vector<double> vals;
            for (std::size_t rep = 0; rep < reps; ++rep)
                vals.push_back(err[g * reps + rep][v]);
            const MeanSd ms = mean_sd(vals);
            series.push_back(ms.mean);
            out.table.push_back({names[v], "recovery_error", "omega=" + std::to_string(grid[g]),
                                 ms.mean, ms.sd, cfg.config_hash});
        }
    }
    out.slope = loglog_slope(xs, out.param_norm_error);
    out.score_norm_slope = loglog_slope(xs, out.score_norm_error);
    out.table.push_back({"param_norm", "loglog_slope", "grid", out.slope, 0.0, cfg.config_hash});
    out.table.push_back(
        {"score_norm", "loglog_slope", "grid", out.score_norm_slope, 0.0, cfg.config_hash});
    return out;
}

void run_task(const ExperimentConfig &cfg, std::ostream &out) {
    const std::string &task = cfg.task;
    const std::string dir = cfg.out_dir;

    if (task == "synth") {
        if (cfg.dataset)
            throw InputError("the synth task generates data; remove the dataset key");
        if (cfg.synthetic.noise.kind == NoiseKind::gaussian)
            throw InputError("the dataset format holds binary labels; gaussian noise cannot be written");
        SyntheticSpec spec = cfg.synthetic;
        spec.seed = cfg.seed;
        const Matrix X = gen_features(spec);
        const Matrix W = gen_lowrank_W(spec);
        const Matrix Y = sample_labels(X, W, spec.noise, cfg.seed);
        const Matrix X_test = gen_features(spec, cfg.n_test, kTestFeatureStream);
        const Matrix Y_test = sample_labels(X_test, W, spec.noise, cfg.seed ^ kTestLabelSalt);
        ensure_parent(dir + "/x");
        write_dataset_file(dataset_from_dense(X, Y), dir + "/synth_train.txt");
        write_dataset_file(dataset_from_dense(X_test, Y_test), dir + "/synth_test.txt");
        save_model_file(DenseModel{W, std::nullopt, std::nullopt}, dir + "/wstar_model.txt");
        out << "wrote " << dir << "/synth_train.txt " << dir << "/synth_test.txt " << dir
            << "/wstar_model.txt\n";
        return;
    }

    if (task == "fit") {
        const TrainingProblem p = build_problem(cfg, cfg.seed, cfg.ratio);
        const FitOutcome fit = fit_model(cfg, cfg.solver, p.X_train, p.train);
        ensure_parent(cfg.model_path);
        save_model_file(fit.model, cfg.model_path);
        ensure_parent(cfg.trace_path);
        std::ofstream trace(cfg.trace_path);
        if (!trace)
            throw InputError("cannot write '" + cfg.trace_path + "'");
        trace << "iteration,objective,config_hash\n";
        for (std::size_t i = 0; i < fit.report.objective_trace.size(); ++i)
            trace << i << ',' << format_double(fit.report.objective_trace[i]) << ','
                  << cfg.config_hash << '\n';
        out << "solver=" << cfg.solver << " converged=" << (fit.report.converged ? "true" : "false")
            << " iterations=" << fit.report.iterations << " final_rank=" << fit.report.final_rank
            << " observations=" << p.train.size() << "\n";
        return;
    }

    if (task == "threshold") {
        Model model = load_model_file(cfg.model_path);
        const TrainingProblem p = build_problem(cfg, cfg.seed, cfg.ratio);
        check_model_fits(model, p.X_train, p.train);
        const ThresholdResult r = select_threshold(model, metric_by_name(cfg.metric), p.X_train, p.train);
        save_model_file(model, cfg.model_path);
        out << "metric=" << cfg.metric << " theta=" << format_double(r.theta_hat)
            << " train_value=" << format_double(r.value)
            << " degenerate=" << (r.degenerate ? "true" : "false") << "\n";
        return;
    }

    if (task == "eval") {
        const Model model = load_model_file(cfg.model_path);
        const TrainingProblem p = build_problem(cfg, cfg.seed, cfg.ratio);
        check_model_fits(model, p.X_test, p.test);
        ResultTable table;
        for (const auto &name : cfg.metrics) {
            const MetricValue v = evaluate_model(model, metric_by_name(name), p.X_test, p.test);
            table.push_back({method_label(cfg.solver), name, "test", v.value, 0.0, cfg.config_hash});
            out << name << '=' << format_double(v.value)
                << " degenerate=" << (v.degenerate ? "true" : "false") << "\n";
        }
        write_table(table, cfg.results_path, cfg.append);
        return;
    }

    if (task == "convergence") {
        const ConvergenceResult r = run_convergence(cfg);
        write_table(r.table, cfg.results_path, cfg.append);
        for (const auto &metric : cfg.metrics) {
            std::vector<PlotSeries> series;
            for (const auto &pt : r.points) {
                if (pt.metric != metric)
                    continue;
                if (series.empty() || series.back().name != pt.method)
                    series.push_back({pt.method, {}});
                series.back().points.emplace_back(pt.x, pt.summary.mean);
            }
            write_plot(series, "sampling ratio |Omega|/nL", metric,
                       dir + "/convergence_" + metric + ".svg");
        }
        for (const auto &row : r.table)
            out << row.method << ' ' << row.metric_name << ' ' << row.split << " mean="
                << format_double(row.value) << " sd=" << format_double(row.std_error) << "\n";
        return;
    }

    if (task == "compare") {
        const ResultTable table = run_compare(cfg);
        write_table(table, cfg.results_path, cfg.append);
        for (const auto &row : table)
            out << row.method << ' ' << row.metric_name << " mean=" << format_double(row.value)
                << " sd=" << format_double(row.std_error) << "\n";
        return;
    }

    if (task == "rate_check") {
        const RateCheckResult r = run_rate_check(cfg);
        write_table(r.table, cfg.results_path, cfg.append);
        std::vector<PlotSeries> series{{"param_norm", {}}, {"score_norm", {}}};
        for (std::size_t g = 0; g < r.omega_sizes.size(); ++g) {
            const double lx = std::log10(static_cast<double>(r.omega_sizes[g]));
            series[0].points.emplace_back(lx, std::log10(r.param_norm_error[g]));
            series[1].points.emplace_back(lx, std::log10(r.score_norm_error[g]));
        }
        write_plot(series, "log10 |Omega|", "log10 recovery error", dir + "/rate_check.svg");
        for (std::size_t g = 0; g < r.omega_sizes.size(); ++g)
            out << "omega=" << r.omega_sizes[g] << " param_norm=" << format_double(r.param_norm_error[g])
                << " score_norm=" << format_double(r.score_norm_error[g]) << "\n";
        out << "slope=" << format_double(r.slope) << "\n";
        return;
    }

    throw InputError("unknown task '" + task + "'");
}

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Low-rank multi-label learning for non-decomposable metrics"};
    app.allow_extras();
    std::string task, config_path;
    app.add_option("task", task, "synth | fit | threshold | eval | convergence | compare | rate_check")
        ->required();
    app.add_option("config", config_path, "key = value configuration file")->required();
    app.footer("Any config key can be overridden with --key=value.");
    try {
        app.parse(argc, argv);
    } catch (const CLI::Success &) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n" << app.help();
        return 2;
    }

    try {
        ConfigFile file = ConfigFile::from_file(config_path);
        for (const auto &extra : app.remaining())
            file.apply_override(extra);
        const ExperimentConfig cfg = ExperimentConfig::from(file, task);
        run_task(cfg, out);
        return 0;
    } catch (const InputError &e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError &e) {
        err << "numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace nondecomp
