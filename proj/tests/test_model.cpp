#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "rsf/model.hpp"

using namespace rsf;

TEST(Friction, DefaultValues) {
    EXPECT_DOUBLE_EQ(mu(0.0, 0.0), 1.0);
    EXPECT_NEAR(mu(std::exp(1.0) - 1.0, 0.0), 2.0, 1e-14);
    EXPECT_NEAR(mu(1.0, 10.0), 1.0 + std::log(2.0) + std::log(41.0), 1e-14);
    EXPECT_NEAR(mu(1.0, 10.0), 5.4067, 1e-4);
}

TEST(Friction, EvenAndMonotone) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> p(-50.0, 50.0), th(0.0, 10.0);
    for (int k = 0; k < 500; ++k) {
        const double a = p(rng), t = th(rng);
        EXPECT_DOUBLE_EQ(mu(a, t), mu(-a, t));
        EXPECT_GE(mu(a, t), 1.0);
        EXPECT_LE(mu(0.5 * a, t), mu(a, t));
        EXPECT_LE(mu(a, 0.5 * t), mu(a, t));
    }
}

TEST(Friction, ValidateRejectsBadCoefficients) {
    FrictionLaw f;
    f.a = 0.0;
    EXPECT_THROW(f.validate(), ConfigError);
    f = {};
    f.mu0 = -1.0;
    EXPECT_THROW(f.validate(), ConfigError);
    f = {};
    f.b = -0.1;
    EXPECT_THROW(f.validate(), ConfigError);
    EXPECT_NO_THROW(FrictionLaw{}.validate());
}

TEST(Dissipation, Values) {
    EXPECT_DOUBLE_EQ(dissipation_R(0.0, 5.0), 0.0);
    EXPECT_NEAR(dissipation_R(1.0, 0.0), 2.0 * std::log(2.0), 1e-14);
    EXPECT_NEAR(dissipation_R(1.0, 0.0), 1.3863, 1e-4);
    EXPECT_DOUBLE_EQ(dissipation_R(-1.0, 0.0), dissipation_R(1.0, 0.0));
}

TEST(Dissipation, DerivativeIsFriction) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> p(0.05, 20.0), th(0.0, 10.0);
    for (int k = 0; k < 200; ++k) {
        const double x = (k % 2 ? 1.0 : -1.0) * p(rng), t = th(rng);
        const double h = 1e-5 * std::max(1.0, std::fabs(x));
        const double fd = (dissipation_R(x + h, t) - dissipation_R(x - h, t)) / (2.0 * h);
        const double exact = mu(x, t) * (x > 0 ? 1.0 : -1.0);
        EXPECT_LT(std::fabs(fd - exact) / std::fabs(exact), 1e-6);
    }
}

TEST(Dissipation, ConvexInRate) {
    std::mt19937 rng(12);
    std::uniform_real_distribution<double> p(-20.0, 20.0), th(0.0, 10.0), w(0.0, 1.0);
    for (int k = 0; k < 300; ++k) {
        const double a = p(rng), b = p(rng), t = th(rng), l = w(rng);
        EXPECT_LE(dissipation_R(l * a + (1 - l) * b, t), l * dissipation_R(a, t) + (1 - l) * dissipation_R(b, t) + 1e-12);
    }
}

TEST(PlasticRate, Values) {
    EXPECT_DOUBLE_EQ(plastic_rate_Pi(1.0, 0.0), 0.0);
    EXPECT_NEAR(plastic_rate_Pi(1.0 + std::log(2.0), 0.0), 1.0, 1e-14);
    EXPECT_NEAR(plastic_rate_Pi(1.0 + std::log(41.0) + std::log(3.0), 10.0), 2.0, 1e-13);
    EXPECT_NEAR(plastic_rate_Pi(-(1.0 + std::log(2.0)), 0.0), -1.0, 1e-14);
}

TEST(PlasticRate, LeftInverse) {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> ex(1e-6, 15.0), th(0.0, 10.0);
    for (int k = 0; k < 500; ++k) {
        const double t = th(rng);
        const double s = yield_threshold(t) + ex(rng);
        const double p = plastic_rate_Pi(s, t);
        EXPECT_NEAR(1.0 + FrictionLaw{}.A(p) + FrictionLaw{}.B(t), s, 1e-10);
    }
}

TEST(PlasticRate, MonotoneInStress) {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> s(-20.0, 20.0), th(0.0, 10.0);
    for (int k = 0; k < 1000; ++k) {
        double a = s(rng), b = s(rng);
        if (a > b) std::swap(a, b);
        const double t = th(rng);
        EXPECT_LE(plastic_rate_Pi(a, t), plastic_rate_Pi(b, t));
    }
}

TEST(PlasticRate, NonincreasingInAgeForPositiveStress) {
    std::mt19937 rng(6);
    std::uniform_real_distribution<double> s(0.0, 20.0), th(0.0, 10.0);
    for (int k = 0; k < 500; ++k) {
        double a = th(rng), b = th(rng);
        if (a > b) std::swap(a, b);
        const double sg = s(rng);
        EXPECT_GE(plastic_rate_Pi(sg, a), plastic_rate_Pi(sg, b));
    }
}

TEST(PlasticRate, DerivativesMatchFiniteDifferences) {
    const double s = 6.0, t = 2.0, h = 1e-6;
    const double ds = (plastic_rate_Pi(s + h, t) - plastic_rate_Pi(s - h, t)) / (2 * h);
    const double dt = (plastic_rate_Pi(s, t + h) - plastic_rate_Pi(s, t - h)) / (2 * h);
    EXPECT_NEAR(plastic_rate_dsigma(s, t), ds, 1e-6 * std::fabs(ds));
    EXPECT_NEAR(plastic_rate_dtheta(s, t), dt, 1e-6 * std::fabs(dt));
    EXPECT_EQ(plastic_rate_dsigma(0.5, t), 0.0);
}

TEST(PlasticRate, CustomRateTermUsesBracketedInversion) {
    FrictionLaw f;
    f.rate_term = [](double p) { return p + p * p; };
    f.rate_slope = [](double p) { return 1.0 + 2.0 * p; };
    const double y = 6.0;  // p + p^2 = 6 at p = 2
    EXPECT_NEAR(f.A_inverse(y), 2.0, 1e-12);
    EXPECT_NEAR(plastic_rate_Pi(f.mu0 + f.B(1.0) + y, 1.0, f), 2.0, 1e-12);
    EXPECT_NEAR(f.A_integral(2.0), 2.0 + 8.0 / 3.0, 1e-10);
}

TEST(Aging, RhsValues) {
    EXPECT_DOUBLE_EQ(aging_rhs(10.0, 0.0), 0.0);
    EXPECT_DOUBLE_EQ(aging_rhs(0.0, 5.0), 1.0);
    EXPECT_NEAR(aging_rhs(1.0, 0.09), 0.0, 1e-15);
}

TEST(Aging, EquilibriumAge) {
    EXPECT_DOUBLE_EQ(theta_f(0.0), 10.0);
    EXPECT_NEAR(theta_f(0.09), 1.0, 1e-14);
    EXPECT_NEAR(theta_f(1.4923), 10.0 / 150.23, 1e-14);
    EXPECT_NEAR(theta_f(1.4923), 0.06657, 1e-5);
}

TEST(Aging, EquilibriumConsistency) {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> p(-100.0, 100.0);
    AgingLaw custom;
    custom.f0_fn = [](double t) { return 1.0 - t * t / 100.0; };
    custom.f1_fn = [](double t) { return 10.0 * t; };
    for (int k = 0; k < 300; ++k) {
        const double x = p(rng);
        EXPECT_NEAR(aging_rhs(theta_f(x), x), 0.0, 1e-10);
        EXPECT_NEAR(aging_rhs(theta_f(x, custom), x, custom), 0.0, 1e-10);
    }
}

TEST(Aging, NegativeAgeIsClampedAndCounted) {
    const auto before = negative_age_clamps().load();
    EXPECT_DOUBLE_EQ(mu(0.0, -1e-9), 1.0);
    EXPECT_GT(negative_age_clamps().load(), before);
}

TEST(Stiffness, Values) {
    StiffnessLaw c;
    for (double a : {0.0, 0.3, 1.0}) {
        const auto [C, Cp] = stiffness(a, c);
        EXPECT_DOUBLE_EQ(C, 1.0);
        EXPECT_DOUBLE_EQ(Cp, 0.0);
    }
    StiffnessLaw d;
    d.mode = StiffnessMode::damage;
    const auto [C1, Cp1] = stiffness(1.0, d);
    EXPECT_DOUBLE_EQ(C1, 2.0);
    EXPECT_DOUBLE_EQ(Cp1, 2.0);
    const auto [C0, Cp0] = stiffness(0.0, d);
    EXPECT_DOUBLE_EQ(C0, 1.0);
    EXPECT_DOUBLE_EQ(Cp0, 0.0);
}

TEST(Params, Validation) {
    ModelParams m;
    EXPECT_NO_THROW(m.validate());
    m.rho = -1.0;
    EXPECT_THROW(m.validate(), ConfigError);
    m = {};
    m.H = 0.0;
    EXPECT_THROW(m.validate(), ConfigError);
    m = {};
    m.aging.theta_inf = 0.0;
    EXPECT_THROW(m.validate(), ConfigError);
}
