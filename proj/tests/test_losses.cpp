#include <doctest.h>

#include <cmath>
#include <random>

#include "nondecomp/losses.hpp"
#include "nondecomp/types.hpp"

using namespace nondecomp;

namespace {

const LossKind kBinary[] = {LossKind::logistic, LossKind::squared, LossKind::exponential};
const LossKind kAll[] = {LossKind::logistic, LossKind::squared, LossKind::exponential,
                         LossKind::gaussian};

double central(const ProperLoss &l, double t, double y, double h = 1e-5) {
    return (l.value(t + h, y) - l.value(t - h, y)) / (2 * h);
}

} // namespace

TEST_CASE("loss values at hand-computed points") {
    const ProperLoss logistic(LossKind::logistic), squared(LossKind::squared),
        expo(LossKind::exponential), gauss(LossKind::gaussian);
    CHECK(logistic.value(0, 1) == doctest::Approx(0.6931471805599453).epsilon(1e-15));
    CHECK(logistic.value(0, 0) == doctest::Approx(0.6931471805599453).epsilon(1e-15));
    CHECK(logistic.value(1, 1) == doctest::Approx(0.31326168751822286).epsilon(1e-14));
    CHECK(logistic.value(1, 0) == doctest::Approx(1.3132616875182228).epsilon(1e-14));
    CHECK(squared.value(1, 1) == 0.0);
    CHECK(squared.value(1, 0) == 4.0);
    CHECK(squared.value(-0.5, 1) == doctest::Approx(2.25));
    CHECK(expo.value(0, 1) == 1.0);
    CHECK(expo.value(2, 0) == doctest::Approx(std::exp(2.0)));
    CHECK(gauss.value(1.5, 0.5) == doctest::Approx(0.5));
}

TEST_CASE("loss gradients at hand-computed points") {
    const ProperLoss logistic(LossKind::logistic), squared(LossKind::squared),
        gauss(LossKind::gaussian);
    CHECK(logistic.grad(0, 1) == doctest::Approx(-0.5));
    CHECK(logistic.grad(0, 0) == doctest::Approx(0.5));
    CHECK(logistic.grad(2, 1) == doctest::Approx(sigmoid(2) - 1));
    CHECK(squared.grad(1, 1) == 0.0);
    CHECK(squared.grad(-1, 0) == 0.0);
    CHECK(gauss.grad(3, 1) == doctest::Approx(2));
}

TEST_CASE("links and inverse links") {
    const ProperLoss logistic(LossKind::logistic);
    CHECK(logistic.link(0.5) == 0.0);
    CHECK(logistic.inv_link(0.0) == 0.5);
    CHECK(logistic.link(0.75) == doctest::Approx(1.0986122886681098).epsilon(1e-14));
    CHECK(ProperLoss(LossKind::squared).link(0.75) == doctest::Approx(0.5));
    CHECK(ProperLoss(LossKind::exponential).link(0.75) ==
          doctest::Approx(0.5493061443340549).epsilon(1e-14));

    for (LossKind k : kBinary) {
        const ProperLoss l(k);
        CHECK_THROWS_AS(l.link(0.0), InputError);
        CHECK_THROWS_AS(l.link(1.0), InputError);
        CHECK_THROWS_AS(l.link(-0.2), InputError);
        double prev = -1;
        for (double a = 0.01; a <= 0.99 + 1e-12; a += 0.01) {
            CHECK(std::abs(l.inv_link(l.link(a)) - a) < 1e-10);
            const double p = l.inv_link(-5 + 10 * a);
            CHECK(p >= prev);
            prev = p;
        }
    }
}

TEST_CASE("gradient agrees with central differences") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ut(-5, 5);
    std::bernoulli_distribution coin(0.5);
    std::normal_distribution<double> nd;
    for (int rep = 0; rep < 1000; ++rep) {
        const LossKind k = kAll[rep % 4];
        const ProperLoss l(k);
        const double t = ut(rng);
        const double y = k == LossKind::gaussian ? nd(rng) : (coin(rng) ? 1.0 : 0.0);
        const double g = l.grad(t, y);
        CHECK(std::abs(g - central(l, t, y)) / (1 + std::abs(g)) < 1e-5);
        const double c = (l.grad(t + 1e-5, y) - l.grad(t - 1e-5, y)) / 2e-5;
        CHECK(std::abs(l.curvature(t, y) - c) / (1 + std::abs(c)) < 1e-5);
    }
}

TEST_CASE("logistic loss is overflow safe") {
    const ProperLoss l(LossKind::logistic);
    for (double t : {-700.0, -300.0, 300.0, 700.0, -1e4, 1e4})
        for (double y : {0.0, 1.0}) {
            CHECK(std::isfinite(l.value(t, y)));
            CHECK(std::isfinite(l.grad(t, y)));
        }
    CHECK(l.value(-700, 1) == doctest::Approx(700));
    CHECK(l.value(700, 1) >= 0.0);
    CHECK(l.value(700, 1) < 1e-300);
    CHECK(sigmoid(-800) == 0.0);
    CHECK(sigmoid(800) == 1.0);
}

TEST_CASE("minimizing the conditional risk recovers the link") {
    for (LossKind k : kBinary) {
        const ProperLoss l(k);
        for (double eta = 0.05; eta < 0.96; eta += 0.05) {
            // Conditional risk is convex; bisect on its derivative.
            const auto d = [&](double t) { return eta * l.grad(t, 1) + (1 - eta) * l.grad(t, 0); };
            double lo = -20, hi = 20;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                (d(mid) > 0 ? hi : lo) = mid;
            }
            CHECK(std::abs(0.5 * (lo + hi) - l.link(eta)) < 1e-6);
        }
    }
}

TEST_CASE("names, moduli and log-partition") {
    CHECK(ProperLoss::from_name("logistic").kind() == LossKind::logistic);
    CHECK(ProperLoss::from_name("squared").kind() == LossKind::squared);
    CHECK(ProperLoss::from_name("exponential").kind() == LossKind::exponential);
    CHECK(ProperLoss::from_name("gaussian").kind() == LossKind::gaussian);
    CHECK_THROWS_AS(ProperLoss::from_name("hinge"), InputError);
    CHECK(ProperLoss(LossKind::logistic).name() == "logistic");

    CHECK(ProperLoss(LossKind::logistic).strong_properness_modulus() == 4);
    CHECK(ProperLoss(LossKind::squared).strong_properness_modulus() == 2);
    CHECK(ProperLoss(LossKind::exponential).strong_properness_modulus() == 4);

    const ProperLoss l(LossKind::logistic);
    REQUIRE(l.has_log_partition());
    for (double t = -6; t <= 6; t += 0.5) {
        for (double y : {0.0, 1.0})
            CHECK(l.value(t, y) == doctest::Approx(l.log_partition(t) - y * t).epsilon(1e-12));
        CHECK(l.log_partition_deriv(t) == doctest::Approx(sigmoid(t)));
    }
    const ProperLoss g(LossKind::gaussian);
    REQUIRE(g.has_log_partition());
    CHECK(g.log_partition(3) == doctest::Approx(4.5));
    CHECK(g.log_partition_deriv(3) == doctest::Approx(3));
    CHECK_FALSE(ProperLoss(LossKind::squared).has_log_partition());
    CHECK_THROWS(ProperLoss(LossKind::squared).log_partition(0));
}

TEST_CASE("PU wrapper") {
    SUBCASE("rho = 0 is the base loss") {
        for (LossKind k : kBinary) {
            const PULossWrapper w(ProperLoss(k), 0.0);
            for (double t = -3; t <= 3; t += 0.25)
                for (double y : {0.0, 1.0}) {
                    CHECK(w.value(t, y) == ProperLoss(k).value(t, y));
                    CHECK(w.grad(t, y) == ProperLoss(k).grad(t, y));
                }
        }
    }
    SUBCASE("logistic at t = 0 with rho = 0.5") {
        const PULossWrapper w(ProperLoss(LossKind::logistic), 0.5);
        CHECK(w.value(0, 1) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
        CHECK(w.value(0, 0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    }
    SUBCASE("expectation over the flip equals the clean loss") {
        for (LossKind k : kBinary)
            for (int r = 0; r <= 9; ++r) {
                const double rho = r / 10.0;
                const ProperLoss base(k);
                const PULossWrapper w(base, rho);
                for (double t = -5; t <= 5 + 1e-12; t += 0.25) {
                    const double lhs = (1 - rho) * w.value(t, 1) + rho * w.value(t, 0);
                    CHECK(std::abs(lhs - base.value(t, 1)) < 1e-12 * std::max(1.0, base.value(t, 1)));
                    CHECK(w.value(t, 0) == base.value(t, 0));
                    const double glhs = (1 - rho) * w.grad(t, 1) + rho * w.grad(t, 0);
                    CHECK(glhs == doctest::Approx(base.grad(t, 1)).epsilon(1e-12));
                }
            }
    }
    SUBCASE("invalid rho or base") {
        CHECK_THROWS_AS(PULossWrapper(ProperLoss(LossKind::logistic), 1.0), InputError);
        CHECK_THROWS_AS(PULossWrapper(ProperLoss(LossKind::logistic), -0.1), InputError);
        CHECK_THROWS_AS(PULossWrapper(ProperLoss(LossKind::gaussian), 0.2), InputError);
    }
    SUBCASE("training loss delegates") {
        const TrainingLoss plain(ProperLoss(LossKind::squared));
        CHECK(plain.value(0.5, 1) == ProperLoss(LossKind::squared).value(0.5, 1));
        CHECK(plain.pu_rho() == 0);
        const TrainingLoss pu(ProperLoss(LossKind::logistic), 0.3);
        const PULossWrapper w(ProperLoss(LossKind::logistic), 0.3);
        CHECK(pu.pu_rho() == 0.3);
        CHECK(pu.value(0.7, 1) == w.value(0.7, 1));
        CHECK(pu.grad(0.7, 1) == w.grad(0.7, 1));
    }
}

TEST_CASE("exponential gradient is clamped") {
    const ProperLoss l(LossKind::exponential);
    CHECK(l.grad(-100, 1) == -1e6);
    CHECK(l.grad(100, 0) == 1e6);
    CHECK(std::abs(l.grad(1, 1) + std::exp(-1.0)) < 1e-15);
}
