#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nondecomp/config.hpp"
#include "nondecomp/dataset_io.hpp"
#include "nondecomp/estimator.hpp"
#include "nondecomp/metrics.hpp"

namespace nondecomp {

/// Training and test data for one (seed, ratio) draw.
struct TrainingProblem {
    Matrix X_train;
    ObservationSet train;
    Matrix X_test;
    ObservationSet test;
    /// Known only for synthetic data.
    std::optional<Matrix> W_star;
};

/// Synthetic data uses a fresh test split of n_test rows; datasets use the
/// test file when given and the unobserved training cells otherwise.
TrainingProblem build_problem(const ExperimentConfig &cfg, std::uint64_t seed, double ratio);

struct FitOutcome {
    Model model;
    FitReport report;
};

/// solver is one of alt_min, prox_grad, plugin.
FitOutcome fit_model(const ExperimentConfig &cfg, const std::string &solver, const Matrix &X,
                     const ObservationSet &obs);

/// Sweeps the threshold on the given observations and stores it in the model.
ThresholdResult select_threshold(Model &model, const MetricSpec &metric, const Matrix &X,
                                 const ObservationSet &obs);

/// Requires a model with a threshold.
MetricValue evaluate_model(const Model &model, const MetricSpec &metric, const Matrix &X,
                           const ObservationSet &obs);

/// "algorithm1" for the low-rank solvers, "plugin" otherwise.
std::string method_label(const std::string &solver);

struct MeanSd {
    double mean = 0;
    double sd = 0; // sample standard deviation, 0 for one value
};
MeanSd mean_sd(const std::vector<double> &values);

/// Least-squares slope of log(y) on log(x).
double loglog_slope(const std::vector<double> &x, const std::vector<double> &y);

/// Runs body(0..count-1) on up to NONDECOMP_THREADS threads. The first
/// exception is rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)> &body);

struct CurvePoint {
    std::string method;
    std::string metric;
    double x = 0;
    std::vector<double> values;
    MeanSd summary;
};

struct ConvergenceResult {
    std::vector<CurvePoint> points; // method, metric, ratio order
    ResultTable table;
};

ConvergenceResult run_convergence(const ExperimentConfig &cfg);

/// Rows: 2 methods x configured metrics at the configured ratio.
ResultTable run_compare(const ExperimentConfig &cfg);

struct RateCheckResult {
    std::vector<std::size_t> omega_sizes;
    std::vector<double> param_norm_error; // mean over repeats
    std::vector<double> score_norm_error;
    double slope = 0;
    double score_norm_slope = 0;
    ResultTable table;
};

/// Geometric grid nL * {0.1, 0.2, 0.4, 0.8} when omega_sizes is empty.
std::vector<std::size_t> rate_grid(const ExperimentConfig &cfg);
RateCheckResult run_rate_check(const ExperimentConfig &cfg);

/// lambda for the score-norm variant: 2c sqrt(2 log(n+L) / (min(n,L) |Omega|)).
double score_norm_lambda(int n, int L, std::size_t m, double c);

/// Executes a task, writing files and a short summary to out.
void run_task(const ExperimentConfig &cfg, std::ostream &out);

/// CLI entry: returns the process exit code (0 ok, 1 numerical, 2 input).
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace nondecomp
