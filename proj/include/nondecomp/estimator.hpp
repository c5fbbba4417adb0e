#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "nondecomp/losses.hpp"
#include "nondecomp/observations.hpp"

namespace nondecomp {

using Matrix = Eigen::MatrixXd;

enum class RegularizerMode {
    /// lambda * ||W||_*
    param_norm,
    /// lambda * ||X W||_*; kept for comparison, it is a weaker estimator.
    score_norm,
};

struct StepRule {
    double init_step = 1.0;
    double shrink = 0.5;
    double growth = 2.0;
};

struct SolverConfig {
    double lambda_reg = 0.0;
    TrainingLoss loss{ProperLoss(LossKind::logistic)};
    RegularizerMode regularizer = RegularizerMode::param_norm;
    /// Scores are clipped to [-gamma, gamma] at prediction time.
    std::optional<double> gamma_clip;
    int max_iters = 500;
    double rel_tol = 1e-6;
    StepRule step;
    std::uint64_t seed = 0;

    void validate() const;
};

/// lambda = 2c / sqrt(|Omega|).
double default_lambda(std::size_t num_observations, double c = 1.0);

struct DenseModel {
    Matrix W; // d x L
    std::optional<double> theta;
    std::optional<double> gamma_clip;
};

/// W = W1 * W2^T.
struct FactoredModel {
    Matrix W1; // d x k
    Matrix W2; // L x k
    std::optional<double> theta;
    std::optional<double> gamma_clip;

    int rank() const { return static_cast<int>(W1.cols()); }
    Matrix product() const { return W1 * W2.transpose(); }
};

using Model = std::variant<DenseModel, FactoredModel>;

std::optional<double> model_theta(const Model &m);
void set_model_theta(Model &m, std::optional<double> theta);
/// Feature dimension d and label count L.
std::pair<int, int> model_shape(const Model &m);

struct FitReport {
    std::vector<double> objective_trace;
    int iterations = 0;
    bool converged = false;
    int final_rank = 0;
};

/// Mean loss over the observed entries plus lambda times the nuclear norm
/// of W (param_norm) or of X W (score_norm).
double objective(const Matrix &X, const ObservationSet &obs, const Matrix &W,
                 const SolverConfig &config);

/// Gradient of the mean observed loss with respect to W (d x L).
Matrix grad_empirical(const Matrix &X, const ObservationSet &obs, const Matrix &W,
                      const TrainingLoss &loss);

/// argmin_B 0.5 ||B - A||_F^2 + tau ||B||_* (singular-value soft-thresholding).
Matrix prox_nuclear(const Matrix &A, double tau);

double nuclear_norm(const Matrix &A);

/// Number of singular values above rel_cutoff * sigma_max.
int numerical_rank(const Matrix &A, double rel_cutoff = 1e-8);

/// Proximal gradient with backtracking on the convex objective.
std::pair<DenseModel, FitReport> fit_prox_grad(const Matrix &X,
                                               const ObservationSet &obs,
                                               const SolverConfig &config);

/// Alternating minimization on W = W1 W2^T with penalty
/// (lambda / 2)(||W1||_F^2 + ||W2||_F^2). objective_trace holds the value
/// at the start and after every half-step.
std::pair<FactoredModel, FitReport> fit_alt_min(const Matrix &X,
                                                const ObservationSet &obs,
                                                const SolverConfig &config, int k);

/// Objective minimized by fit_alt_min.
double alt_min_objective(const Matrix &X, const ObservationSet &obs,
                         const Matrix &W1, const Matrix &W2,
                         const SolverConfig &config);

/// Independent per-label ridge-regularized fits:
/// (1/|Omega_j|) sum l(<x_i, w_j>, y_ij) + (ridge/2) ||w_j||^2.
/// Labels without observations get a zero column.
DenseModel fit_plugin_baseline(const Matrix &X, const ObservationSet &obs,
                               double ridge,
                               const ProperLoss &loss = ProperLoss(LossKind::logistic));

/// Z = X W, clipped to [-gamma, gamma] when the model carries a clip.
Matrix predict_scores(const Matrix &X, const Model &model);

/// Scores at the given cells only.
std::vector<double> predict_scores_at(const Matrix &X, const Model &model,
                                      std::span<const Cell> cells);

/// ||W_hat - W_star||_F^2 / (d L).
double recovery_error(const Matrix &W_hat, const Matrix &W_star);

} // namespace nondecomp
