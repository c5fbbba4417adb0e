#include "nondecomp/losses.hpp"

#include <algorithm>
#include <cmath>

#include "nondecomp/types.hpp"

namespace nondecomp {
namespace {

constexpr double kExpGradClamp = 1e6;

/// log(1 + exp(x)) without overflow.
double softplus(double x) {
    return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double sign_of(double y) { return 2.0 * y - 1.0; }

void check_probability(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw InputError("link: probability must lie in (0,1), got " +
                         std::to_string(alpha));
}

} // namespace

double sigmoid(double t) {
    if (t >= 0)
        return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

ProperLoss::ProperLoss(LossKind kind) : kind_(kind) {}

ProperLoss ProperLoss::from_name(std::string_view name) {
    if (name == "logistic")
        return ProperLoss(LossKind::logistic);
    if (name == "squared")
        return ProperLoss(LossKind::squared);
    if (name == "exponential")
        return ProperLoss(LossKind::exponential);
    if (name == "gaussian")
        return ProperLoss(LossKind::gaussian);
    throw InputError("unknown loss '" + std::string(name) + "'");
}

std::string ProperLoss::name() const {
    switch (kind_) {
    case LossKind::logistic: return "logistic";
    case LossKind::squared: return "squared";
    case LossKind::exponential: return "exponential";
    case LossKind::gaussian: return "gaussian";
    }
    return "unknown";
}

double ProperLoss::strong_properness_modulus() const {
    switch (kind_) {
    case LossKind::logistic: return 4.0;
    case LossKind::squared: return 2.0;
    case LossKind::exponential: return 4.0;
    case LossKind::gaussian: return 1.0;
    }
    return 0.0;
}

double ProperLoss::value(double t, double y) const {
    switch (kind_) {
    case LossKind::logistic: return softplus(-sign_of(y) * t);
    case LossKind::squared: {
        const double r = 1.0 - sign_of(y) * t;
        return r * r;
    }
    case LossKind::exponential: return std::exp(-sign_of(y) * t);
    case LossKind::gaussian: return 0.5 * (y - t) * (y - t);
    }
    return 0.0;
}

double ProperLoss::grad(double t, double y) const {
    switch (kind_) {
    case LossKind::logistic: return sigmoid(t) - y;
    case LossKind::squared: {
        const double s = sign_of(y);
        return -2.0 * s * (1.0 - s * t);
    }
    case LossKind::exponential: {
        const double s = sign_of(y);
        return std::clamp(-s * std::exp(-s * t), -kExpGradClamp, kExpGradClamp);
    }
    case LossKind::gaussian: return t - y;
    }
    return 0.0;
}

double ProperLoss::curvature(double t, double y) const {
    switch (kind_) {
    case LossKind::logistic: {
        const double p = sigmoid(t);
        return p * (1.0 - p);
    }
    case LossKind::squared: return 2.0;
    case LossKind::exponential:
        return std::min(std::exp(-sign_of(y) * t), kExpGradClamp);
    case LossKind::gaussian: return 1.0;
    }
    return 0.0;
}

double ProperLoss::link(double alpha) const {
    switch (kind_) {
    case LossKind::logistic:
        check_probability(alpha);
        return std::log(alpha / (1.0 - alpha));
    case LossKind::squared:
        check_probability(alpha);
        return 2.0 * alpha - 1.0;
    case LossKind::exponential:
        check_probability(alpha);
        return 0.5 * std::log(alpha / (1.0 - alpha));
    case LossKind::gaussian:
        if (!std::isfinite(alpha))
            throw InputError("link: mean must be finite");
        return alpha;
    }
    return 0.0;
}

double ProperLoss::inv_link(double t) const {
    switch (kind_) {
    case LossKind::logistic: return sigmoid(t);
    case LossKind::squared: return std::clamp(0.5 * (t + 1.0), 0.0, 1.0);
    case LossKind::exponential: return sigmoid(2.0 * t);
    case LossKind::gaussian: return t;
    }
    return 0.0;
}

bool ProperLoss::has_log_partition() const {
    return kind_ == LossKind::logistic || kind_ == LossKind::gaussian;
}

double ProperLoss::log_partition(double t) const {
    if (kind_ == LossKind::logistic)
        return softplus(t);
    if (kind_ == LossKind::gaussian)
        return 0.5 * t * t;
    throw InputError("loss '" + name() + "' has no exponential-family form");
}

double ProperLoss::log_partition_deriv(double t) const {
    if (kind_ == LossKind::logistic)
        return sigmoid(t);
    if (kind_ == LossKind::gaussian)
        return t;
    throw InputError("loss '" + name() + "' has no exponential-family form");
}

PULossWrapper::PULossWrapper(ProperLoss base, double rho) : base_(base), rho_(rho) {
    if (!(rho >= 0.0 && rho < 1.0))
        throw InputError("PU flip fraction rho must lie in [0,1), got " +
                         std::to_string(rho));
    if (base.kind() == LossKind::gaussian)
        throw InputError("PU correction needs a binary loss");
}

double PULossWrapper::value(double t, double y_observed) const {
    if (y_observed == 0.0)
        return base_.value(t, 0.0);
    return (base_.value(t, 1.0) - rho_ * base_.value(t, 0.0)) / (1.0 - rho_);
}

double PULossWrapper::grad(double t, double y_observed) const {
    if (y_observed == 0.0)
        return base_.grad(t, 0.0);
    return (base_.grad(t, 1.0) - rho_ * base_.grad(t, 0.0)) / (1.0 - rho_);
}

double PULossWrapper::curvature(double t, double y_observed) const {
    if (y_observed == 0.0)
        return base_.curvature(t, 0.0);
    return (base_.curvature(t, 1.0) - rho_ * base_.curvature(t, 0.0)) / (1.0 - rho_);
}

TrainingLoss::TrainingLoss(ProperLoss base, double pu_rho) : base_(base) {
    if (pu_rho != 0.0)
        pu_.emplace(base, pu_rho);
}

} // namespace nondecomp
