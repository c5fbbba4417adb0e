#include "nondecomp/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>

namespace nondecomp {
namespace {

constexpr int kInnerNewton = 3;
constexpr int kDenseHessianLimit = 1024;
constexpr double kArmijo = 1e-4;

std::string shape_str(const Matrix &A) {
    return std::to_string(A.rows()) + "x" + std::to_string(A.cols());
}

void check_problem_shapes(const Matrix &X, const ObservationSet &obs, const Matrix &W) {
    if (X.rows() != obs.rows())
        throw InputError("feature matrix has " + std::to_string(X.rows()) +
                         " rows but observations index " + std::to_string(obs.rows()));
    if (W.rows() != X.cols() || W.cols() != obs.cols())
        throw InputError("parameter matrix is " + shape_str(W) + ", expected " +
                         std::to_string(X.cols()) + "x" + std::to_string(obs.cols()));
}

struct Svd {
    Matrix U, V;
    Eigen::VectorXd sigma;
};

Svd thin_svd(const Matrix &A) {
    if (!A.allFinite())
        throw InputError("SVD input " + shape_str(A) + " has non-finite entries");
    Eigen::BDCSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "SVD failed on " << shape_str(A) << " matrix (frobenius norm "
            << A.norm() << ", max abs " << A.cwiseAbs().maxCoeff() << ")";
        throw NumericalError(msg.str());
    }
    return {svd.matrixU(), svd.matrixV(), svd.singularValues()};
}

struct ProxResult {
    Matrix B;
    double nuclear = 0;
};

ProxResult prox_with_norm(const Matrix &A, double tau) {
    if (tau < 0 || !std::isfinite(tau))
        throw InputError("prox threshold must be a nonnegative finite number");
    if (A.size() == 0)
        return {A, 0.0};
    auto svd = thin_svd(A);
    Eigen::Index keep = 0;
    while (keep < svd.sigma.size() && svd.sigma[keep] > tau)
        ++keep;
    ProxResult out;
    const Eigen::VectorXd shrunk =
        (svd.sigma.head(keep).array() - tau).matrix();
    out.nuclear = shrunk.sum();
    if (tau == 0) {
        out.B = A;
        return out;
    }
    out.B = svd.U.leftCols(keep) * shrunk.asDiagonal() *
            svd.V.leftCols(keep).transpose();
    return out;
}

/// Mean loss of scores <f_i, w_j> where Ft holds feature rows as columns.
double mean_loss(const Matrix &Ft, const ObservationSet &obs, const Matrix &W,
                 const TrainingLoss &loss) {
    double sum = 0;
    for (const auto &e : obs.entries())
        sum += loss.value(Ft.col(e.row).dot(W.col(e.col)), e.y);
    return sum / static_cast<double>(obs.size());
}

double mean_loss_and_grad(const Matrix &Ft, const ObservationSet &obs,
                          const Matrix &W, const TrainingLoss &loss, Matrix &grad) {
    grad.setZero(W.rows(), W.cols());
    const double inv_m = 1.0 / static_cast<double>(obs.size());
    double sum = 0;
    for (const auto &e : obs.entries()) {
        const double t = Ft.col(e.row).dot(W.col(e.col));
        sum += loss.value(t, e.y);
        grad.col(e.col).noalias() += (loss.grad(t, e.y) * inv_m) * Ft.col(e.row);
    }
    return sum * inv_m;
}

/// Proximal gradient on f(W) = mean loss of <F_i, w_j> plus lambda ||W||_*.
std::pair<Matrix, FitReport> run_prox_grad(const Matrix &F, const ObservationSet &obs,
                                           const SolverConfig &cfg) {
    const Matrix Ft = F.transpose();
    const double lambda = cfg.lambda_reg;
    FitReport report;
    Matrix W = Matrix::Zero(F.cols(), obs.cols());
    Matrix grad;
    double smooth = mean_loss_and_grad(Ft, obs, W, cfg.loss, grad);
    double total = smooth; // ||0||_* = 0
    report.objective_trace.push_back(total);
    double step = cfg.step.init_step;

    for (int it = 1; it <= cfg.max_iters; ++it) {
        if (it > 1)
            step *= cfg.step.growth;
        bool accepted = false;
        Matrix W_next;
        double smooth_next = 0, total_next = 0;
        while (step > 1e-20) {
            auto prox = prox_with_norm(W - step * grad, step * lambda);
            const Matrix diff = prox.B - W;
            smooth_next = mean_loss(Ft, obs, prox.B, cfg.loss);
            if (!std::isfinite(smooth_next))
                throw NumericalError("objective is not finite at iteration " +
                                     std::to_string(it));
            const double model = smooth + (grad.array() * diff.array()).sum() +
                                 diff.squaredNorm() / (2.0 * step);
            total_next = smooth_next + lambda * prox.nuclear;
            if (smooth_next <= model + 1e-12 * std::abs(smooth) &&
                total_next <= total) {
                W_next = std::move(prox.B);
                accepted = true;
                break;
            }
            step *= cfg.step.shrink;
        }
        report.iterations = it;
        if (!accepted) {
            report.converged = true;
            break;
        }
        const double previous = total;
        W = std::move(W_next);
        total = total_next;
        report.objective_trace.push_back(total);
        if (previous - total <= cfg.rel_tol * std::max(1.0, std::abs(previous))) {
            report.converged = true;
            break;
        }
        smooth = mean_loss_and_grad(Ft, obs, W, cfg.loss, grad);
    }
    return {std::move(W), std::move(report)};
}

struct ObservationIndex {
    std::vector<std::vector<std::size_t>> by_col;
    std::vector<std::vector<std::size_t>> by_row;

    explicit ObservationIndex(const ObservationSet &obs)
        : by_col(obs.cols()), by_row(obs.rows()) {
        for (std::size_t k = 0; k < obs.size(); ++k) {
            by_col[obs[k].col].push_back(k);
            by_row[obs[k].row].push_back(k);
        }
    }
};

/// Solves H p = -g, regularizing H until a descent direction comes out.
Eigen::VectorXd newton_direction(Matrix H, const Eigen::VectorXd &g) {
    const double scale = std::max(1e-300, H.diagonal().cwiseAbs().maxCoeff());
    double damping = 0;
    for (int attempt = 0; attempt < 8; ++attempt) {
        Eigen::LLT<Matrix> llt(H);
        if (llt.info() == Eigen::Success) {
            Eigen::VectorXd p = llt.solve(-g);
            if (p.allFinite() && p.dot(g) < 0)
                return p;
        }
        const double next = damping == 0 ? 1e-10 * scale : damping * 100;
        H.diagonal().array() += next - damping;
        damping = next;
    }
    return -g;
}

/// Backtracking along p from x; returns false if no decrease was found.
template <class Eval, class Vec>
bool armijo_step(const Eval &eval, Vec &x, double &fx, const Vec &p, double slope) {
    double t = 1.0;
    while (t > 1e-12) {
        Vec candidate = x + t * p;
        const double fc = eval(candidate);
        if (std::isfinite(fc) && fc <= fx + kArmijo * t * slope && fc < fx) {
            x = std::move(candidate);
            fx = fc;
            return true;
        }
        t *= 0.5;
    }
    return false;
}

/// W2 half-step: independent k-dimensional fits per label.
Matrix update_label_factors(const Matrix &X, const ObservationSet &obs,
                            const ObservationIndex &index, const Matrix &W1,
                            const Matrix &W2, const SolverConfig &cfg) {
    const Matrix Ut = (X * W1).transpose(); // k x n
    const Eigen::Index k = W1.cols();
    const double inv_m = 1.0 / static_cast<double>(obs.size());
    const double lambda = cfg.lambda_reg;
    Matrix out = W2;

    for (int j = 0; j < obs.cols(); ++j) {
        const auto &rows = index.by_col[j];
        auto value = [&](const Eigen::VectorXd &w) {
            double f = 0;
            for (std::size_t e : rows)
                f += cfg.loss.value(Ut.col(obs[e].row).dot(w), obs[e].y);
            return f * inv_m + 0.5 * lambda * w.squaredNorm();
        };
        Eigen::VectorXd w = W2.row(j).transpose();
        double fw = value(w);
        for (int it = 0; it < kInnerNewton; ++it) {
            Eigen::VectorXd g = lambda * w;
            Matrix H = lambda * Matrix::Identity(k, k);
            for (std::size_t e : rows) {
                const auto u = Ut.col(obs[e].row);
                const double t = u.dot(w);
                g.noalias() += (cfg.loss.grad(t, obs[e].y) * inv_m) * u;
                H.selfadjointView<Eigen::Lower>().rankUpdate(
                    u, std::max(0.0, cfg.loss.curvature(t, obs[e].y)) * inv_m);
            }
            H = H.selfadjointView<Eigen::Lower>();
            if (g.norm() <= 1e-14)
                break;
            const Eigen::VectorXd p = newton_direction(H, g);
            const double before = fw;
            if (!armijo_step(value, w, fw, p, g.dot(p)))
                break;
            if (before - fw <= 1e-15 * std::max(1.0, std::abs(before)))
                break;
        }
        out.row(j) = w.transpose();
    }
    return out;
}

/// W1 half-step: one coupled fit in d*k parameters.
Matrix update_feature_factors(const Matrix &X, const ObservationSet &obs,
                              const ObservationIndex &index, const Matrix &W1,
                              const Matrix &W2, const SolverConfig &cfg) {
    const Matrix Vt = W2.transpose(); // k x L
    const Eigen::Index d = W1.rows(), k = W1.cols(), n = X.rows();
    const double inv_m = 1.0 / static_cast<double>(obs.size());
    const double lambda = cfg.lambda_reg;

    auto value = [&](const Matrix &A) {
        const Matrix Ut = (X * A).transpose();
        double f = 0;
        for (const auto &e : obs.entries())
            f += cfg.loss.value(Ut.col(e.row).dot(Vt.col(e.col)), e.y);
        return f * inv_m + 0.5 * lambda * A.squaredNorm();
    };

    Matrix A = W1;
    double fa = value(A);
    std::vector<double> curv(obs.size());
    for (int it = 0; it < kInnerNewton; ++it) {
        const Matrix Ut = (X * A).transpose();
        Matrix Rt = Matrix::Zero(k, n);
        for (std::size_t e = 0; e < obs.size(); ++e) {
            const auto &en = obs[e];
            const double t = Ut.col(en.row).dot(Vt.col(en.col));
            Rt.col(en.row).noalias() += cfg.loss.grad(t, en.y) * Vt.col(en.col);
            curv[e] = std::max(0.0, cfg.loss.curvature(t, en.y));
        }
        Matrix G = inv_m * (X.transpose() * Rt.transpose()) + lambda * A;
        const double gnorm = G.norm();
        if (gnorm <= 1e-14)
            break;

        Matrix P;
        if (d * k <= kDenseHessianLimit) {
            // Hessian block (b, c) = X^T diag(sum_j h_ij v_jb v_jc) X.
            Matrix M = Matrix::Zero(k * k, n);
            for (int i = 0; i < n; ++i)
                for (std::size_t e : index.by_row[i]) {
                    const auto v = Vt.col(obs[e].col);
                    for (Eigen::Index b = 0; b < k; ++b)
                        for (Eigen::Index c = 0; c <= b; ++c)
                            M(b * k + c, i) += curv[e] * v[b] * v[c];
                }
            Matrix H = lambda * Matrix::Identity(d * k, d * k);
            for (Eigen::Index b = 0; b < k; ++b)
                for (Eigen::Index c = 0; c <= b; ++c) {
                    const Matrix block =
                        inv_m * (X.transpose() * (M.row(b * k + c).transpose().asDiagonal() * X));
                    H.block(b * d, c * d, d, d) += block;
                    if (c != b)
                        H.block(c * d, b * d, d, d) += block.transpose();
                }
            const Eigen::VectorXd g = G.reshaped();
            P = newton_direction(std::move(H), g).reshaped(d, k);
        } else {
            // Truncated conjugate gradient with Hessian-vector products.
            auto hess_vec = [&](const Matrix &D) {
                const Matrix Dt = (X * D).transpose();
                Matrix St = Matrix::Zero(k, n);
                for (std::size_t e = 0; e < obs.size(); ++e) {
                    const auto &en = obs[e];
                    const double s = Dt.col(en.row).dot(Vt.col(en.col));
                    St.col(en.row).noalias() += (curv[e] * s) * Vt.col(en.col);
                }
                return Matrix(inv_m * (X.transpose() * St.transpose()) + lambda * D);
            };
            P = Matrix::Zero(d, k);
            Matrix r = -G, q = r;
            double rr = r.squaredNorm();
            const int max_cg = static_cast<int>(std::min<Eigen::Index>(d * k, 250));
            for (int c = 0; c < max_cg && std::sqrt(rr) > 1e-10 * gnorm; ++c) {
                const Matrix Hq = hess_vec(q);
                const double qHq = (q.array() * Hq.array()).sum();
                if (qHq <= 0)
                    break;
                const double alpha = rr / qHq;
                P += alpha * q;
                r -= alpha * Hq;
                const double rr_next = r.squaredNorm();
                q = r + (rr_next / rr) * q;
                rr = rr_next;
            }
            if ((P.array() * G.array()).sum() >= 0)
                P = -G;
        }
        const double before = fa;
        if (!armijo_step(value, A, fa, P, (P.array() * G.array()).sum()))
            break;
        if (before - fa <= 1e-15 * std::max(1.0, std::abs(before)))
            break;
    }
    return A;
}

int factored_rank(const Matrix &W1, const Matrix &W2) {
    // rank(W1 W2^T) = rank(R1 R2^T) for thin QR factors.
    const Eigen::Index k = W1.cols();
    if (W1.rows() < k || W2.rows() < k)
        return numerical_rank(W1 * W2.transpose());
    Eigen::HouseholderQR<Matrix> q1(W1), q2(W2);
    const Matrix R1 = q1.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    const Matrix R2 = q2.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    return numerical_rank(R1 * R2.transpose());
}

template <class M>
Matrix clip_scores(Matrix Z, const M &model) {
    if (model.gamma_clip) {
        const double g = *model.gamma_clip;
        Z = Z.cwiseMax(-g).cwiseMin(g);
    }
    return Z;
}

} // namespace

void SolverConfig::validate() const {
    if (!(lambda_reg >= 0) || !std::isfinite(lambda_reg))
        throw InputError("lambda_reg must be a nonnegative finite number");
    if (max_iters < 1)
        throw InputError("max_iters must be at least 1");
    if (!(rel_tol > 0))
        throw InputError("rel_tol must be positive");
    if (!(step.init_step > 0) || !(step.shrink > 0 && step.shrink < 1) ||
        !(step.growth >= 1))
        throw InputError("invalid step rule");
    if (gamma_clip && !(*gamma_clip > 0))
        throw InputError("gamma_clip must be positive");
}

double default_lambda(std::size_t num_observations, double c) {
    if (num_observations == 0)
        throw InputError("empty observation set");
    return 2.0 * c / std::sqrt(static_cast<double>(num_observations));
}

std::optional<double> model_theta(const Model &m) {
    return std::visit([](const auto &x) { return x.theta; }, m);
}

void set_model_theta(Model &m, std::optional<double> theta) {
    std::visit([&](auto &x) { x.theta = theta; }, m);
}

std::pair<int, int> model_shape(const Model &m) {
    if (const auto *dense = std::get_if<DenseModel>(&m))
        return {static_cast<int>(dense->W.rows()), static_cast<int>(dense->W.cols())};
    const auto &f = std::get<FactoredModel>(m);
    return {static_cast<int>(f.W1.rows()), static_cast<int>(f.W2.rows())};
}

double objective(const Matrix &X, const ObservationSet &obs, const Matrix &W,
                 const SolverConfig &config) {
    check_problem_shapes(X, obs, W);
    if (obs.empty())
        throw InputError("empty observation set");
    const double loss = mean_loss(X.transpose(), obs, W, config.loss);
    const double reg = config.regularizer == RegularizerMode::param_norm
                           ? nuclear_norm(W)
                           : nuclear_norm(X * W);
    return loss + config.lambda_reg * reg;
}

Matrix grad_empirical(const Matrix &X, const ObservationSet &obs, const Matrix &W,
                      const TrainingLoss &loss) {
    check_problem_shapes(X, obs, W);
    if (obs.empty())
        throw InputError("empty observation set");
    Matrix grad;
    mean_loss_and_grad(X.transpose(), obs, W, loss, grad);
    return grad;
}

Matrix prox_nuclear(const Matrix &A, double tau) { return prox_with_norm(A, tau).B; }

double nuclear_norm(const Matrix &A) {
    if (A.size() == 0)
        return 0.0;
    return thin_svd(A).sigma.sum();
}

int numerical_rank(const Matrix &A, double rel_cutoff) {
    if (A.size() == 0)
        return 0;
    const Eigen::VectorXd s = thin_svd(A).sigma;
    if (s[0] == 0)
        return 0;
    return static_cast<int>((s.array() > rel_cutoff * s[0]).count());
}

std::pair<DenseModel, FitReport> fit_prox_grad(const Matrix &X,
                                               const ObservationSet &obs,
                                               const SolverConfig &config) {
    config.validate();
    check_problem_shapes(X, obs, Matrix::Zero(X.cols(), obs.cols()));
    if (obs.empty())
        throw InputError("empty observation set");

    DenseModel model;
    model.gamma_clip = config.gamma_clip;
    FitReport report;
    if (config.regularizer == RegularizerMode::param_norm) {
        std::tie(model.W, report) = run_prox_grad(X, obs, config);
    } else {
        // ||X W||_* = ||R W||_* for X = Q R, so solve in V = R W with features Q.
        if (X.rows() < X.cols())
            throw InputError("score_norm mode needs at least as many rows as features");
        Eigen::HouseholderQR<Matrix> qr(X);
        const Eigen::Index d = X.cols();
        const Matrix Q = qr.householderQ() * Matrix::Identity(X.rows(), d);
        const Matrix R = qr.matrixQR().topRows(d).triangularView<Eigen::Upper>();
        const double rmax = R.diagonal().cwiseAbs().maxCoeff();
        if (R.diagonal().cwiseAbs().minCoeff() <= 1e-12 * rmax)
            throw InputError("score_norm mode needs a full-column-rank feature matrix");
        Matrix V;
        std::tie(V, report) = run_prox_grad(Q, obs, config);
        model.W = R.triangularView<Eigen::Upper>().solve(V);
    }
    report.final_rank = numerical_rank(model.W);
    return {std::move(model), std::move(report)};
}

double alt_min_objective(const Matrix &X, const ObservationSet &obs, const Matrix &W1,
                         const Matrix &W2, const SolverConfig &config) {
    if (W1.rows() != X.cols() || W2.rows() != obs.cols() || W1.cols() != W2.cols() ||
        X.rows() != obs.rows())
        throw InputError("factor shapes " + shape_str(W1) + ", " + shape_str(W2) +
                         " do not match the problem");
    if (obs.empty())
        throw InputError("empty observation set");
    const Matrix Ut = (X * W1).transpose();
    const Matrix Vt = W2.transpose();
    double sum = 0;
    for (const auto &e : obs.entries())
        sum += config.loss.value(Ut.col(e.row).dot(Vt.col(e.col)), e.y);
    return sum / static_cast<double>(obs.size()) +
           0.5 * config.lambda_reg * (W1.squaredNorm() + W2.squaredNorm());
}

std::pair<FactoredModel, FitReport> fit_alt_min(const Matrix &X,
                                                const ObservationSet &obs,
                                                const SolverConfig &config, int k) {
    config.validate();
    const int d = static_cast<int>(X.cols());
    const int L = obs.cols();
    check_problem_shapes(X, obs, Matrix::Zero(d, L));
    if (obs.empty())
        throw InputError("empty observation set");
    if (k < 1 || k > std::min(d, L))
        throw InputError("rank k=" + std::to_string(k) + " outside [1, " +
                         std::to_string(std::min(d, L)) + "]");
    if (config.regularizer != RegularizerMode::param_norm)
        throw InputError("alternating minimization supports param_norm only");

    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(k)));
    FactoredModel model;
    model.gamma_clip = config.gamma_clip;
    model.W1.resize(d, k);
    model.W2.resize(L, k);
    for (Eigen::Index c = 0; c < k; ++c)
        for (Eigen::Index r = 0; r < d; ++r)
            model.W1(r, c) = normal(rng);
    for (Eigen::Index c = 0; c < k; ++c)
        for (Eigen::Index r = 0; r < L; ++r)
            model.W2(r, c) = normal(rng);

    const ObservationIndex index(obs);
    FitReport report;
    double F = alt_min_objective(X, obs, model.W1, model.W2, config);
    if (!std::isfinite(F))
        throw NumericalError("objective is not finite at initialization");
    report.objective_trace.push_back(F);

    for (int it = 1; it <= config.max_iters; ++it) {
        const double start = F;

        Matrix W2 = update_label_factors(X, obs, index, model.W1, model.W2, config);
        double F2 = alt_min_objective(X, obs, model.W1, W2, config);
        if (!std::isfinite(F2))
            throw NumericalError("objective is not finite at iteration " +
                                 std::to_string(it));
        if (F2 <= F) {
            model.W2 = std::move(W2);
            F = F2;
        }
        report.objective_trace.push_back(F);

        Matrix W1 = update_feature_factors(X, obs, index, model.W1, model.W2, config);
        double F1 = alt_min_objective(X, obs, W1, model.W2, config);
        if (!std::isfinite(F1))
            throw NumericalError("objective is not finite at iteration " +
                                 std::to_string(it));
        if (F1 <= F) {
            model.W1 = std::move(W1);
            F = F1;
        }
        report.objective_trace.push_back(F);

        report.iterations = it;
        if (start - F <= config.rel_tol * std::max(1.0, std::abs(start))) {
            report.converged = true;
            break;
        }
    }
    report.final_rank = factored_rank(model.W1, model.W2);
    return {std::move(model), std::move(report)};
}

DenseModel fit_plugin_baseline(const Matrix &X, const ObservationSet &obs, double ridge,
                               const ProperLoss &loss) {
    if (!(ridge >= 0) || !std::isfinite(ridge))
        throw InputError("ridge must be a nonnegative finite number");
    if (X.rows() != obs.rows())
        throw InputError("feature matrix rows do not match observations");
    const Eigen::Index d = X.cols();
    const Matrix Xt = X.transpose();
    const ObservationIndex index(obs);
    DenseModel model;
    model.W = Matrix::Zero(d, obs.cols());

    for (int j = 0; j < obs.cols(); ++j) {
        const auto &rows = index.by_col[j];
        if (rows.empty())
            continue;
        const double inv = 1.0 / static_cast<double>(rows.size());
        auto value = [&](const Eigen::VectorXd &w) {
            double f = 0;
            for (std::size_t e : rows)
                f += loss.value(Xt.col(obs[e].row).dot(w), obs[e].y);
            return f * inv + 0.5 * ridge * w.squaredNorm();
        };
        Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
        double fw = value(w);
        for (int it = 0; it < 50; ++it) {
            Eigen::VectorXd g = ridge * w;
            Matrix H = ridge * Matrix::Identity(d, d);
            for (std::size_t e : rows) {
                const auto x = Xt.col(obs[e].row);
                const double t = x.dot(w);
                g.noalias() += (loss.grad(t, obs[e].y) * inv) * x;
                H.selfadjointView<Eigen::Lower>().rankUpdate(
                    x, std::max(0.0, loss.curvature(t, obs[e].y)) * inv);
            }
            H = H.selfadjointView<Eigen::Lower>();
            if (g.norm() <= 1e-10)
                break;
            const Eigen::VectorXd p = newton_direction(H, g);
            const double before = fw;
            if (!armijo_step(value, w, fw, p, g.dot(p)))
                break;
            if (before - fw <= 1e-15 * std::max(1.0, std::abs(before)))
                break;
        }
        model.W.col(j) = w;
    }
    return model;
}

Matrix predict_scores(const Matrix &X, const Model &model) {
    const auto [d, L] = model_shape(model);
    (void)L;
    if (X.cols() != d)
        throw InputError("feature matrix has " + std::to_string(X.cols()) +
                         " columns, model expects " + std::to_string(d));
    if (const auto *dense = std::get_if<DenseModel>(&model))
        return clip_scores(X * dense->W, *dense);
    const auto &f = std::get<FactoredModel>(model);
    return clip_scores((X * f.W1) * f.W2.transpose(), f);
}

std::vector<double> predict_scores_at(const Matrix &X, const Model &model,
                                      std::span<const Cell> cells) {
    const auto [d, L] = model_shape(model);
    if (X.cols() != d)
        throw InputError("feature matrix has " + std::to_string(X.cols()) +
                         " columns, model expects " + std::to_string(d));
    Matrix Ft, Wt;
    std::optional<double> clip;
    if (const auto *dense = std::get_if<DenseModel>(&model)) {
        Ft = X.transpose();
        Wt = dense->W;
        clip = dense->gamma_clip;
    } else {
        const auto &f = std::get<FactoredModel>(model);
        Ft = (X * f.W1).transpose();
        Wt = f.W2.transpose();
        clip = f.gamma_clip;
    }
    std::vector<double> out;
    out.reserve(cells.size());
    for (const auto &c : cells) {
        if (c.row < 0 || c.row >= X.rows() || c.col < 0 || c.col >= L)
            throw InputError("cell outside the score matrix");
        double z = Ft.col(c.row).dot(Wt.col(c.col));
        if (clip)
            z = std::clamp(z, -*clip, *clip);
        out.push_back(z);
    }
    return out;
}

double recovery_error(const Matrix &W_hat, const Matrix &W_star) {
    if (W_hat.rows() != W_star.rows() || W_hat.cols() != W_star.cols())
        throw InputError("recovery_error: shapes " + shape_str(W_hat) + " and " +
                         shape_str(W_star) + " differ");
    if (W_hat.size() == 0)
        throw InputError("recovery_error: empty matrices");
    return (W_hat - W_star).squaredNorm() / static_cast<double>(W_hat.size());
}

} // namespace nondecomp
