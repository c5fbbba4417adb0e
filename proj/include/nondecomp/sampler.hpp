#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "nondecomp/types.hpp"

namespace nondecomp {

enum class NoiseKind { noise_free_sign, bernoulli_logistic, gaussian };

struct NoiseModel {
    NoiseKind kind = NoiseKind::noise_free_sign;
    /// Threshold of the noise-free model: y = [<x, w> >= theta_star].
    double theta_star = 0.0;
    /// Standard deviation of the Gaussian model.
    double sigma = 1.0;
};

struct SyntheticSpec {
    int n = 1000;
    int L = 100;
    int d = 10;
    int rank = 5;
    std::uint64_t seed = 0;
    NoiseModel noise;
    /// Row covariance of X; empty means identity.
    Eigen::MatrixXd feature_covariance;
    double wstar_scale = 1.0;

    void validate() const;
};

/// Sampling distribution over cells: uniform, or product of row and column
/// weights (normalized on construction).
class OmegaDistribution {
  public:
    static OmegaDistribution uniform();
    static OmegaDistribution product(std::vector<double> row_weights,
                                     std::vector<double> col_weights);

    bool is_uniform() const { return uniform_; }
    const std::vector<double> &row_weights() const { return rows_; }
    const std::vector<double> &col_weights() const { return cols_; }

  private:
    bool uniform_ = true;
    std::vector<double> rows_, cols_;
};

/// Independent generator for (seed, stream).
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream);

/// n x d matrix with i.i.d. N(0, covariance) rows.
Eigen::MatrixXd gen_features(const SyntheticSpec &spec);
/// Same distribution, explicit row count and stream (for held-out splits).
Eigen::MatrixXd gen_features(const SyntheticSpec &spec, int rows, std::uint64_t stream);

/// W* = wstar_scale * A B^T with A (d x r), B (L x r) standard Gaussian.
Eigen::MatrixXd gen_lowrank_W(const SyntheticSpec &spec);

/// Full n x L label matrix drawn from scores X W*.
Eigen::MatrixXd sample_labels(const Eigen::MatrixXd &X, const Eigen::MatrixXd &W_star,
                              const NoiseModel &noise, std::uint64_t seed);

/// m distinct cells drawn i.i.d. from dist with duplicates rejected, sorted
/// row-major.
std::vector<Cell> sample_omega(int n, int L, std::size_t m, const OmegaDistribution &dist,
                               std::uint64_t seed);

/// Each 1 is independently turned into 0 with probability rho.
Eigen::MatrixXd pu_flip(const Eigen::MatrixXd &Y, double rho, std::uint64_t seed);

struct OmegaDiagnostics {
    /// 1 / (n L min pi); infinite when some cell has zero probability.
    double mu = 1.0;
    /// min(n, L) * largest row or column marginal.
    double nu = 1.0;
    bool zero_probability = false;
};

OmegaDiagnostics omega_diagnostics(const OmegaDistribution &dist, int n, int L);

} // namespace nondecomp
