#pragma once

// Slow reference implementations used as test oracles.

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "nondecomp/estimator.hpp"
#include "nondecomp/metrics.hpp"
#include "nondecomp/observations.hpp"

namespace oracle {

using nondecomp::Cell;

struct Best {
    double theta = 0;
    double value = -1;
};

// Evaluates every distinct cut point plus the sentinel; ties go to the
// smallest threshold, except that a flat sweep falls back to the sentinel.
inline Best brute_force_sweep(const nondecomp::MetricSpec &spec, const std::vector<double> &z,
                              const std::vector<std::uint8_t> &y, const std::vector<Cell> &cells,
                              int n, int L) {
    std::set<double> distinct(z.begin(), z.end());
    std::vector<double> candidates(distinct.begin(), distinct.end());
    candidates.push_back(nondecomp::sentinel_above(*distinct.rbegin()));
    Best best;
    bool first = true, flat = true;
    for (double theta : candidates) {
        const auto yhat = nondecomp::apply_threshold(z, theta);
        const double v = nondecomp::evaluate_labeling(spec, yhat, y, cells, n, L).value;
        if (!first && v != best.value)
            flat = false;
        if (first || v > best.value) {
            best = {theta, v};
            first = false;
        }
    }
    if (flat)
        best.theta = candidates.back();
    return best;
}

// Entry-by-entry confusion fractions.
inline std::array<double, 4> fractions(const std::vector<std::uint8_t> &yhat,
                                       const std::vector<std::uint8_t> &y) {
    double tp = 0, fp = 0, fn = 0, tn = 0;
    for (std::size_t k = 0; k < y.size(); ++k) {
        if (yhat[k] && y[k]) tp += 1;
        else if (yhat[k] && !y[k]) fp += 1;
        else if (!yhat[k] && y[k]) fn += 1;
        else tn += 1;
    }
    const double m = static_cast<double>(y.size());
    return {tp / m, fp / m, fn / m, tn / m};
}

// Mean loss over observed entries computed one scalar at a time.
inline double empirical_risk(const Eigen::MatrixXd &X, const nondecomp::ObservationSet &obs,
                             const Eigen::MatrixXd &W, const nondecomp::TrainingLoss &loss) {
    double s = 0;
    for (const auto &e : obs.entries()) {
        double t = 0;
        for (int a = 0; a < X.cols(); ++a)
            t += X(e.row, a) * W(a, e.col);
        s += loss.value(t, e.y);
    }
    return s / static_cast<double>(obs.size());
}

inline Eigen::MatrixXd central_difference(const Eigen::MatrixXd &X,
                                          const nondecomp::ObservationSet &obs,
                                          const Eigen::MatrixXd &W,
                                          const nondecomp::TrainingLoss &loss, double h = 1e-6) {
    Eigen::MatrixXd G(W.rows(), W.cols());
    for (int a = 0; a < W.rows(); ++a)
        for (int j = 0; j < W.cols(); ++j) {
            Eigen::MatrixXd Wp = W, Wm = W;
            Wp(a, j) += h;
            Wm(a, j) -= h;
            G(a, j) = (empirical_risk(X, obs, Wp, loss) - empirical_risk(X, obs, Wm, loss)) / (2 * h);
        }
    return G;
}

// Soft-thresholded singular values through a full two-sided Jacobi SVD.
inline Eigen::MatrixXd reference_prox(const Eigen::MatrixXd &A, double tau) {
    Eigen::JacobiSVD<Eigen::MatrixXd, Eigen::FullPivHouseholderQRPreconditioner> svd(
        A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(A.rows(), A.cols());
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        S(i, i) = std::max(0.0, svd.singularValues()(i) - tau);
    return svd.matrixU() * S * svd.matrixV().transpose();
}

inline double prox_objective(const Eigen::MatrixXd &B, const Eigen::MatrixXd &A, double tau) {
    return 0.5 * (B - A).squaredNorm() + tau * nondecomp::nuclear_norm(B);
}

inline Eigen::MatrixXd gaussian_matrix(int r, int c, std::mt19937_64 &rng, double sd = 1.0) {
    std::normal_distribution<double> nd(0.0, sd);
    Eigen::MatrixXd M(r, c);
    for (int j = 0; j < c; ++j)
        for (int i = 0; i < r; ++i)
            M(i, j) = nd(rng);
    return M;
}

// Random observation set over an n x L grid with about `fraction` of cells.
inline nondecomp::ObservationSet random_observations(int n, int L, double fraction,
                                                     std::mt19937_64 &rng, bool binary = true) {
    std::bernoulli_distribution keep(fraction), coin(0.5);
    std::normal_distribution<double> nd;
    std::vector<nondecomp::ObservationSet::Entry> e;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < L; ++j)
            if (keep(rng))
                e.push_back({i, j, binary ? (coin(rng) ? 1.0 : 0.0) : nd(rng)});
    if (e.empty())
        e.push_back({0, 0, 1.0});
    return nondecomp::ObservationSet(n, L, std::move(e));
}

} // namespace oracle
