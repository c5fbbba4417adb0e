#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace nondecomp {

enum class LossKind { logistic, squared, exponential, gaussian };

/// Strongly proper composite loss l(t, y).
///
/// Binary losses (logistic, squared, exponential) take y in {0,1} and work
/// internally with s = 2y - 1:
///   logistic     log(1 + exp(-s t))     link log(a / (1 - a))
///   squared      (1 - s t)^2            link 2a - 1
///   exponential  exp(-s t)              link log(a / (1 - a)) / 2
/// `gaussian` is the Gaussian negative log-likelihood (y - t)^2 / 2 for
/// real-valued y, with identity link.
class ProperLoss {
  public:
    explicit ProperLoss(LossKind kind);

    static ProperLoss from_name(std::string_view name);

    LossKind kind() const { return kind_; }
    std::string name() const;
    /// Strong-properness modulus; informational only.
    double strong_properness_modulus() const;

    double value(double t, double y) const;
    double grad(double t, double y) const;
    /// Second derivative in t.
    double curvature(double t, double y) const;

    /// Score minimizing the conditional risk at class probability alpha.
    double link(double alpha) const;
    /// Class probability (mean for gaussian) implied by score t.
    double inv_link(double t) const;

    /// Exponential-family form: negative log-likelihood G(t) - y t (+ const).
    bool has_log_partition() const;
    double log_partition(double t) const;
    double log_partition_deriv(double t) const;

  private:
    LossKind kind_;
};

/// Logistic sigmoid, overflow-safe.
double sigmoid(double t);

/// Unbiased loss for one-sided label noise: each true 1 is observed as 0
/// with probability rho. E over the flip of l~(t, y_obs) equals l(t, y).
///   l~(t, 1) = (l(t, 1) - rho l(t, 0)) / (1 - rho)
///   l~(t, 0) = l(t, 0)
class PULossWrapper {
  public:
    PULossWrapper(ProperLoss base, double rho);

    const ProperLoss &base() const { return base_; }
    double rho() const { return rho_; }

    double value(double t, double y_observed) const;
    double grad(double t, double y_observed) const;
    double curvature(double t, double y_observed) const;

  private:
    ProperLoss base_;
    double rho_;
};

/// The loss a solver minimizes: a proper loss, optionally PU-corrected.
class TrainingLoss {
  public:
    explicit TrainingLoss(ProperLoss base, double pu_rho = 0.0);

    const ProperLoss &base() const { return base_; }
    double pu_rho() const { return pu_ ? pu_->rho() : 0.0; }

    double value(double t, double y) const {
        return pu_ ? pu_->value(t, y) : base_.value(t, y);
    }
    double grad(double t, double y) const {
        return pu_ ? pu_->grad(t, y) : base_.grad(t, y);
    }
    double curvature(double t, double y) const {
        return pu_ ? pu_->curvature(t, y) : base_.curvature(t, y);
    }

  private:
    ProperLoss base_;
    std::optional<PULossWrapper> pu_;
};

} // namespace nondecomp
