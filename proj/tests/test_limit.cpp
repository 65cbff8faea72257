#include <cmath>

#include <gtest/gtest.h>

#include "rsf/limit.hpp"

using namespace rsf;

TEST(EffectiveFriction, Values) {
    const EffectiveFriction ef;
    EXPECT_DOUBLE_EQ(ef.mu_tilde(0.0), 1.0 + std::log(41.0));
    // theta_f(1) solves 1 - t/10 = 10 t
    const double t1 = 10.0 / 101.0;
    EXPECT_NEAR(ef.mu_tilde(1.0), 1.0 + std::log(2.0) + std::log1p(4.0 * t1), 1e-12);
    EXPECT_DOUBLE_EQ(ef.mu_tilde(-1.0), ef.mu_tilde(1.0));
}

TEST(EffectiveFriction, SlopeMatchesFiniteDifference) {
    const EffectiveFriction ef;
    for (double p : {0.0, 0.1, 0.6, 1.5, 7.0}) {
        const double h = 1e-6;
        const double fd = (ef.mu_tilde(p + h) - ef.mu_tilde(std::max(0.0, p - h))) / (p > 0.0 ? 2 * h : h);
        EXPECT_NEAR(ef.mu_tilde_slope(p), fd, 1e-4 * std::max(1.0, std::fabs(fd))) << p;
    }
    // d theta_f / d pi at rest is f1(10) / f0'(10) = -1000
    EXPECT_NEAR(ef.R_second_at_zero(), 1.0 - 4000.0 / 41.0, 1e-10);
    EXPECT_LT(ef.R_second_at_zero(), 0.0);
}

TEST(EffectiveFriction, CriticalRates) {
    const EffectiveFriction ef;
    const double pc = ef.find_pi_circ(), ps = ef.find_pi_star();
    EXPECT_NEAR(pc, 0.6193, 5e-5);
    EXPECT_NEAR(ps, 1.4923, 5e-5);
    EXPECT_LT(std::fabs(ef.mu_tilde_slope(pc)), 1e-9);
    EXPECT_LT(std::fabs(ef.tangency_gap(ps)), 1e-9);
    EXPECT_GT(ps, pc);
}

TEST(EffectiveFriction, HullValues) {
    const EffectiveFriction ef;
    const double ps = ef.find_pi_star();
    const auto [r0, h0] = ef.R_and_hull(0.0);
    EXPECT_EQ(r0, 0.0);
    EXPECT_EQ(h0, 0.0);
    const auto [rs, hs] = ef.R_and_hull(ps);
    EXPECT_DOUBLE_EQ(rs, hs);
    // below the tangency point the hull is the chord through the origin with slope mu_tilde(pi*)
    const auto [rh, hh] = ef.R_and_hull(0.5 * ps);
    EXPECT_NEAR(hh, 0.5 * ps * ef.mu_tilde(ps), 1e-9);
    EXPECT_LT(hh, rh);
    const auto [r3, h3] = ef.R_and_hull(3.0);
    EXPECT_DOUBLE_EQ(r3, h3);
    const auto [rn, hn] = ef.R_and_hull(-0.5 * ps);
    EXPECT_DOUBLE_EQ(rn, rh);
    EXPECT_DOUBLE_EQ(hn, hh);
}

TEST(EffectiveFriction, HullBelowFunctionAndMatchesSampledEnvelope) {
    const EffectiveFriction ef;
    const auto [xs, hull] = sampled_hull(ef, 5.0, 2000);
    for (std::size_t k = 0; k < xs.size(); k += 10) {
        const auto [r, h] = ef.R_and_hull(xs[k]);
        EXPECT_LE(h, r + 1e-12);
        EXPECT_NEAR(h, hull[k], 1e-5);
    }
}

TEST(EffectiveFriction, ShapeViolationWithoutStateWeakening) {
    FrictionLaw f;
    f.b = 0.0;
    const EffectiveFriction ef(f);
    EXPECT_FALSE(ef.scan_shape().unimodal);
    EXPECT_THROW(ef.find_pi_circ(), ShapeViolation);
    EXPECT_THROW(ef.find_pi_star(), ShapeViolation);
}

TEST(Plateau, SlowShearLocalizes) {
    const EffectiveFriction ef;
    const double ps = ef.find_pi_star();
    for (double v : {0.05, 0.1, 0.3, 0.6}) {
        const PlateauProfile p = ef.plateau_solution(v, 1.0);
        EXPECT_NEAR(p.h, v / ps, 1e-12);
        EXPECT_DOUBLE_EQ(p.pi_in, ps);
        EXPECT_DOUBLE_EQ(p.theta_in, theta_f(ps));
        EXPECT_EQ(p.pi_out, 0.0);
        EXPECT_EQ(p.theta_out, 10.0);
        // exact integral of the piecewise-constant rate
        EXPECT_NEAR(2.0 * p.h * p.pi_in, 2.0 * v, 1e-12);
        EXPECT_EQ(p.pi_at(0.0), ps);
        EXPECT_EQ(p.pi_at(0.99), 0.0);
    }
    EXPECT_NEAR(ef.plateau_solution(0.6, 1.0).h, 0.402, 1e-3);
}

TEST(Plateau, FastShearIsUniformAndRestIsTrivial) {
    const EffectiveFriction ef;
    const PlateauProfile p = ef.plateau_solution(3.0, 1.0);
    EXPECT_TRUE(p.uniform);
    EXPECT_EQ(p.h, 1.0);
    EXPECT_DOUBLE_EQ(p.pi_in, 3.0);
    EXPECT_DOUBLE_EQ(p.pi_at(0.9), 3.0);
    const PlateauProfile r = ef.plateau_solution(0.0, 1.0);
    EXPECT_EQ(r.h, 0.0);
    EXPECT_EQ(r.pi_in, 0.0);
    EXPECT_EQ(r.theta_in, 10.0);
    EXPECT_THROW(ef.plateau_solution(-1.0, 1.0), std::invalid_argument);
}

TEST(ConvexEnvelope, KnownPolyline) {
    const std::vector<double> xs{0, 1, 2, 3, 4}, ys{0, 2, 1, 3, 8};
    const auto env = lower_convex_envelope(xs, ys);
    EXPECT_DOUBLE_EQ(env[0], 0.0);
    EXPECT_DOUBLE_EQ(env[1], 0.5);
    EXPECT_DOUBLE_EQ(env[2], 1.0);
    EXPECT_DOUBLE_EQ(env[3], 3.0);
    EXPECT_DOUBLE_EQ(env[4], 8.0);
}
