#include "nondecomp/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_set>

#include "nondecomp/losses.hpp"

namespace nondecomp {
namespace {

// Stream ids used by the generators so that X, W*, Y and Omega never share
// random draws even when called with the same seed.
constexpr std::uint64_t kFeatureStream = 1;
constexpr std::uint64_t kWeightStream = 2;
constexpr std::uint64_t kLabelStream = 3;
constexpr std::uint64_t kOmegaStream = 4;
constexpr std::uint64_t kFlipStream = 5;

std::vector<double> normalized(std::vector<double> w, const char *what) {
    if (w.empty())
        throw InputError(std::string(what) + " weights are empty");
    double sum = 0;
    for (double v : w) {
        if (!(v >= 0) || !std::isfinite(v))
            throw InputError(std::string(what) + " weights must be nonnegative");
        sum += v;
    }
    if (!(sum > 0))
        throw InputError(std::string(what) + " weights sum to zero");
    for (double &v : w)
        v /= sum;
    return w;
}

} // namespace

void SyntheticSpec::validate() const {
    if (n < 1 || L < 1 || d < 1)
        throw InputError("synthetic dimensions must be positive");
    if (rank < 1 || rank > std::min(d, L))
        throw InputError("rank must lie in [1, min(d, L)]");
    if (feature_covariance.size() != 0) {
        if (feature_covariance.rows() != d || feature_covariance.cols() != d)
            throw InputError("feature covariance must be d x d");
        if (!feature_covariance.isApprox(feature_covariance.transpose()))
            throw InputError("feature covariance is not symmetric");
    }
    if (!std::isfinite(wstar_scale))
        throw InputError("wstar_scale must be finite");
    if (noise.kind == NoiseKind::gaussian && !(noise.sigma >= 0))
        throw InputError("gaussian noise sigma must be nonnegative");
}

OmegaDistribution OmegaDistribution::uniform() { return {}; }

OmegaDistribution OmegaDistribution::product(std::vector<double> row_weights,
                                             std::vector<double> col_weights) {
    OmegaDistribution d;
    d.uniform_ = false;
    d.rows_ = normalized(std::move(row_weights), "row");
    d.cols_ = normalized(std::move(col_weights), "column");
    return d;
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

Eigen::MatrixXd gen_features(const SyntheticSpec &spec) {
    return gen_features(spec, spec.n, kFeatureStream);
}

Eigen::MatrixXd gen_features(const SyntheticSpec &spec, int rows, std::uint64_t stream) {
    spec.validate();
    if (rows < 1)
        throw InputError("feature row count must be positive");
    auto rng = make_stream(spec.seed, stream);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd Z(rows, spec.d);
    for (int i = 0; i < rows; ++i)
        for (int a = 0; a < spec.d; ++a)
            Z(i, a) = normal(rng);
    if (spec.feature_covariance.size() == 0)
        return Z;
    Eigen::LLT<Eigen::MatrixXd> llt(spec.feature_covariance);
    if (llt.info() != Eigen::Success)
        throw InputError("feature covariance is not positive definite");
    return Z * llt.matrixL().transpose();
}

Eigen::MatrixXd gen_lowrank_W(const SyntheticSpec &spec) {
    spec.validate();
    auto rng = make_stream(spec.seed, kWeightStream);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd A(spec.d, spec.rank), B(spec.L, spec.rank);
    for (Eigen::Index c = 0; c < spec.rank; ++c)
        for (Eigen::Index r = 0; r < spec.d; ++r)
            A(r, c) = normal(rng);
    for (Eigen::Index c = 0; c < spec.rank; ++c)
        for (Eigen::Index r = 0; r < spec.L; ++r)
            B(r, c) = normal(rng);
    return spec.wstar_scale * A * B.transpose();
}

Eigen::MatrixXd sample_labels(const Eigen::MatrixXd &X, const Eigen::MatrixXd &W_star,
                              const NoiseModel &noise, std::uint64_t seed) {
    if (X.cols() != W_star.rows())
        throw InputError("feature matrix and W* shapes do not match");
    const Eigen::MatrixXd Z = X * W_star;
    Eigen::MatrixXd Y(Z.rows(), Z.cols());
    auto rng = make_stream(seed, kLabelStream);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, noise.sigma);
    for (Eigen::Index j = 0; j < Z.cols(); ++j)
        for (Eigen::Index i = 0; i < Z.rows(); ++i) {
            const double z = Z(i, j);
            switch (noise.kind) {
            case NoiseKind::noise_free_sign: Y(i, j) = z >= noise.theta_star ? 1.0 : 0.0; break;
            case NoiseKind::bernoulli_logistic: Y(i, j) = unif(rng) < sigmoid(z) ? 1.0 : 0.0; break;
            case NoiseKind::gaussian: Y(i, j) = z + normal(rng); break;
            }
        }
    return Y;
}

std::vector<Cell> sample_omega(int n, int L, std::size_t m, const OmegaDistribution &dist,
                               std::uint64_t seed) {
    if (n < 1 || L < 1)
        throw InputError("sample_omega: dimensions must be positive");
    const std::size_t total = static_cast<std::size_t>(n) * static_cast<std::size_t>(L);
    if (m > total)
        throw InputError("sample_omega: m = " + std::to_string(m) + " exceeds n*L = " +
                         std::to_string(total));
    if (!dist.is_uniform() &&
        (dist.row_weights().size() != static_cast<std::size_t>(n) ||
         dist.col_weights().size() != static_cast<std::size_t>(L)))
        throw InputError("sample_omega: weight vectors do not match n and L");

    std::vector<Cell> out;
    out.reserve(m);
    if (m == total) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < L; ++j)
                out.push_back({i, j});
        return out;
    }

    auto rng = make_stream(seed, kOmegaStream);
    std::unordered_set<std::size_t> seen;
    seen.reserve(m * 2);
    if (dist.is_uniform()) {
        // Uniform i.i.d. draws with rejection are a uniform m-subset; Floyd's
        // algorithm produces one without the coupon-collector tail.
        for (std::size_t r = total - m; r < total; ++r) {
            std::uniform_int_distribution<std::size_t> pick(0, r);
            std::size_t t = pick(rng);
            if (!seen.insert(t).second) {
                seen.insert(r);
                t = r;
            }
            out.push_back({static_cast<int>(t / L), static_cast<int>(t % L)});
        }
    } else {
        std::size_t support = 0;
        const auto positive = [](double v) { return v > 0; };
        support = static_cast<std::size_t>(
                      std::count_if(dist.row_weights().begin(), dist.row_weights().end(), positive)) *
                  static_cast<std::size_t>(
                      std::count_if(dist.col_weights().begin(), dist.col_weights().end(), positive));
        if (m > support)
            throw InputError("sample_omega: m exceeds the number of cells with positive probability");
        std::discrete_distribution<int> row(dist.row_weights().begin(), dist.row_weights().end());
        std::discrete_distribution<int> col(dist.col_weights().begin(), dist.col_weights().end());
        while (out.size() < m) {
            const int i = row(rng), j = col(rng);
            const std::size_t key = static_cast<std::size_t>(i) * L + j;
            if (seen.insert(key).second)
                out.push_back({i, j});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Eigen::MatrixXd pu_flip(const Eigen::MatrixXd &Y, double rho, std::uint64_t seed) {
    if (!(rho >= 0.0 && rho < 1.0))
        throw InputError("PU flip fraction rho must lie in [0,1)");
    auto rng = make_stream(seed, kFlipStream);
    std::bernoulli_distribution flip(rho);
    Eigen::MatrixXd out = Y;
    for (Eigen::Index j = 0; j < Y.cols(); ++j)
        for (Eigen::Index i = 0; i < Y.rows(); ++i) {
            if (Y(i, j) != 0.0 && Y(i, j) != 1.0)
                throw InputError("pu_flip needs a binary label matrix");
            if (Y(i, j) == 1.0 && flip(rng))
                out(i, j) = 0.0;
        }
    return out;
}

OmegaDiagnostics omega_diagnostics(const OmegaDistribution &dist, int n, int L) {
    if (n < 1 || L < 1)
        throw InputError("omega_diagnostics: dimensions must be positive");
    const double nL = static_cast<double>(n) * static_cast<double>(L);
    const double short_side = std::min(n, L);
    OmegaDiagnostics out;
    if (dist.is_uniform()) {
        out.mu = 1.0;
        out.nu = short_side * std::max(1.0 / n, 1.0 / L);
        return out;
    }
    const auto &p = dist.row_weights();
    const auto &q = dist.col_weights();
    if (p.size() != static_cast<std::size_t>(n) || q.size() != static_cast<std::size_t>(L))
        throw InputError("omega_diagnostics: weight vectors do not match n and L");
    const double min_pi = *std::min_element(p.begin(), p.end()) *
                          *std::min_element(q.begin(), q.end());
    if (min_pi <= 0) {
        out.mu = std::numeric_limits<double>::infinity();
        out.zero_probability = true;
    } else {
        out.mu = 1.0 / (nL * min_pi);
    }
    const double max_marginal = std::max(*std::max_element(p.begin(), p.end()),
                                         *std::max_element(q.begin(), q.end()));
    out.nu = short_side * max_marginal;
    return out;
}

} // namespace nondecomp
