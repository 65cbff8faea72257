// Closed-form and brute-force reference values computed without the library solvers,
// then compared against both the library and the published constants.

#include <cmath>
#include <functional>

#include <gtest/gtest.h>

#include "rsf/limit.hpp"
#include "rsf/slider.hpp"

using namespace rsf;

namespace {

// aging equilibrium for f0 = 1 - t/10, f1 = 10 t
double theta_eq(double p) { return 1.0 / (0.1 + 10.0 * p); }
double mu_eq(double p) { return 1.0 + std::log1p(p) + std::log1p(4.0 * theta_eq(p)); }

double bisect(const std::function<double(double)>& f, double lo, double hi) {
    for (int k = 0; k < 200; ++k) {
        const double m = 0.5 * (lo + hi);
        if ((f(m) > 0.0) == (f(lo) > 0.0)) lo = m; else hi = m;
    }
    return 0.5 * (lo + hi);
}

// composite trapezoid of mu_eq on [0, p] with n panels
double R_trap(double p, int n) {
    const double h = p / n;
    double s = 0.5 * (mu_eq(0.0) + mu_eq(p));
    for (int k = 1; k < n; ++k) s += mu_eq(k * h);
    return s * h;
}

double slope_eq(double p) {
    const double t = theta_eq(p);
    const double dt = -10.0 * t * t;
    return 1.0 / (1.0 + p) + 4.0 * dt / (1.0 + 4.0 * t);
}

}  // namespace

TEST(Oracle, MinimumOfEffectiveFriction) {
    const double pc = bisect(slope_eq, 1e-3, 10.0);
    EXPECT_NEAR(pc, 0.6193, 1e-4);
    EXPECT_NEAR(EffectiveFriction().find_pi_circ(), pc, 1e-8);
}

TEST(Oracle, TangencyRateByQuadrature) {
    const double pc = bisect(slope_eq, 1e-3, 10.0);
    const double ps = bisect([](double p) { return R_trap(p, 200000) - p * mu_eq(p); }, pc, 10.0);
    EXPECT_NEAR(ps, 1.4923, 1e-4);
    EXPECT_NEAR(EffectiveFriction().find_pi_star(), ps, 1e-6);
    // the aging equilibrium at the tangency rate
    EXPECT_NEAR(theta_f(ps), theta_eq(ps), 1e-12);
    EXPECT_NEAR(theta_eq(ps), 0.06657, 1e-4);
}

TEST(Oracle, PlateauWidthFromMassBalance) {
    // 2 h pi* = 2 v at v = 0.4
    const double ps = EffectiveFriction().find_pi_star();
    EXPECT_NEAR(0.4 / ps, 0.268, 1e-3);
    EXPECT_NEAR(EffectiveFriction().plateau_solution(0.4, 1.0).h, 0.4 / ps, 1e-12);
}

TEST(Oracle, SliderFixedPoint) {
    const double p = 0.175 / 0.3;
    const double t = theta_eq(p);
    const double s = mu_eq(p);
    EXPECT_NEAR(s, 1.973, 0.01);
    EXPECT_NEAR(t, 0.168, 0.01);
    const SliderState fp = slider_fixed_point(0.175, 0.3, ModelParams{});
    EXPECT_NEAR(fp.sigma, s, 1e-12);
    EXPECT_NEAR(fp.theta_bar, t, 1e-12);
}

TEST(Oracle, SliderStabilityThresholdFromTrace) {
    // at the fixed point det J > 0, so stability flips where the trace changes sign
    auto trace = [](double v) {
        const double h = 0.3, p = v / h, t = theta_eq(p);
        const double As = 1.0 / (1.0 + p), Bs = 4.0 / (1.0 + 4.0 * t);
        const double ps = 1.0 / As, pt = -Bs / As;
        return -h * ps + (-0.1 - 10.0 * p - 10.0 * t * pt);
    };
    const double v1 = bisect(trace, 0.1, 0.3);
    EXPECT_NEAR(v1, 0.17462, 5e-4);
    EXPECT_NEAR(find_v1(0.3, ModelParams{}), v1, 1e-8);
}

TEST(Oracle, LocalizationScalingReference) {
    // published half-widths scale like 0.55 sqrt(kappa)
    const double kappas[] = {0.01, 0.04, 0.16, 0.64};
    const double widths[] = {0.055, 0.11, 0.21, 0.41};
    for (int k = 0; k < 4; ++k) {
        const double r = widths[k] / std::sqrt(kappas[k]);
        EXPECT_GE(r, 0.45);
        EXPECT_LE(r, 0.65);
    }
}
