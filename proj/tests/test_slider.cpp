#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "rsf/slider.hpp"

using namespace rsf;

namespace {

const ModelParams kModel{};
constexpr double kH = 0.3;

double distance(const SliderState& a, const SliderState& b) {
    return std::max(std::fabs(a.sigma - b.sigma), std::fabs(a.theta_bar - b.theta_bar));
}

}  // namespace

TEST(Slider, FixedPointValues) {
    const SliderState fp = slider_fixed_point(0.175, kH, kModel);
    const double p = 0.175 / kH;
    const double th = 1.0 / (0.1 + 10.0 * p);
    EXPECT_NEAR(fp.theta_bar, th, 1e-12);
    EXPECT_NEAR(fp.sigma, 1.0 + std::log1p(p) + std::log1p(4.0 * th), 1e-12);
    const auto [ds, dt] = slider_rhs(fp, 0.175, kH, kModel);
    EXPECT_NEAR(ds, 0.0, 1e-12);
    EXPECT_NEAR(dt, 0.0, 1e-12);
    const SliderState neg = slider_fixed_point(-0.175, kH, kModel);
    EXPECT_DOUBLE_EQ(neg.sigma, -fp.sigma);
    const SliderState rest = slider_fixed_point(0.0, kH, kModel);
    EXPECT_EQ(rest.sigma, 0.0);
    EXPECT_EQ(rest.theta_bar, 10.0);
}

TEST(Slider, StickAndZeroAgeVectorField) {
    // inside the stick set the stress loads at C v / H and the age relaxes to theta_inf
    const auto [ds, dt] = slider_rhs({1.0, 5.0}, 0.2, kH, kModel);
    EXPECT_DOUBLE_EQ(ds, 0.2);
    EXPECT_DOUBLE_EQ(dt, 0.5);
    // zero age: f1(0) = 0, so the age grows at rate f0(0) = 1 even when slipping
    const auto [ds0, dt0] = slider_rhs({3.0, 0.0}, 0.2, kH, kModel);
    EXPECT_NEAR(ds0, 0.2 - kH * (std::exp(2.0) - 1.0), 1e-12);
    EXPECT_DOUBLE_EQ(dt0, 1.0);
}

TEST(Slider, RestStaysAtRest) {
    const auto tr = slider_integrate({0.0, 10.0}, 0.0, kH, 50.0, 0.1, kModel);
    EXPECT_EQ(tr.back().sigma, 0.0);
    EXPECT_EQ(tr.back().theta_bar, 10.0);
    EXPECT_EQ(tr.size(), 501u);
    EXPECT_THROW(slider_integrate({0.0, 10.0}, 0.0, kH, 1.0, 0.0, kModel), std::invalid_argument);
}

TEST(Slider, StableFixedPointHolds) {
    const SliderState fp = slider_fixed_point(0.18, kH, kModel);
    const auto tr = slider_integrate(fp, 0.18, kH, 100.0, 0.01, kModel);
    for (const SliderSample& s : tr) EXPECT_LT(distance({s.sigma, s.theta_bar}, fp), 1e-8);
    EXPECT_TRUE(slider_stability(0.18, kH, kModel).stable);
}

TEST(Slider, SlowShearSettlesOnCycle) {
    const SliderState fp = slider_fixed_point(0.12, kH, kModel);
    EXPECT_FALSE(slider_stability(0.12, kH, kModel).stable);
    const auto tr = slider_integrate({fp.sigma + 1e-3, fp.theta_bar}, 0.12, kH, 1000.0, 0.01, kModel);
    const CycleReport c = detect_cycle(tr);
    EXPECT_TRUE(c.cycle);
    EXPECT_GT(c.amplitude, 1.0);
    for (const SliderSample& s : tr) {
        EXPECT_GE(s.theta_bar, 0.0);
        EXPECT_LE(s.theta_bar, 10.0);
    }
}

TEST(Slider, TrajectoriesRotateClockwiseWhileSlipping) {
    // net signed area swept around the fixed point over each slip episode is negative
    for (double v : {0.12, 0.175}) {
        const SliderState fp = slider_fixed_point(v, kH, kModel);
        const auto tr = slider_integrate({3.0, 8.0}, v, kH, 500.0, 0.01, kModel);
        std::vector<double> episodes;
        bool in_slip = false;
        for (std::size_t k = 0; k + 1 < tr.size(); ++k) {
            if (tr[k].pi <= 0.0 || tr[k + 1].pi <= 0.0) {
                in_slip = false;
                continue;
            }
            if (!in_slip) episodes.push_back(0.0);
            in_slip = true;
            const double ax = tr[k].sigma - fp.sigma, ay = tr[k].theta_bar - fp.theta_bar;
            const double bx = tr[k + 1].sigma - fp.sigma, by = tr[k + 1].theta_bar - fp.theta_bar;
            episodes.back() += 0.5 * (ax * by - ay * bx);
        }
        EXPECT_GT(episodes.size(), 5u) << v;
        for (double area : episodes) EXPECT_LT(area, 0.0) << v;
    }
}

TEST(Slider, JacobianMatchesFiniteDifferences) {
    for (double v : {0.12, 0.175, 0.3}) {
        const SliderState fp = slider_fixed_point(v, kH, kModel);
        const auto J = slider_jacobian(fp, kH, kModel);
        const double h = 1e-6;
        const auto sp = slider_rhs({fp.sigma + h, fp.theta_bar}, v, kH, kModel);
        const auto sm = slider_rhs({fp.sigma - h, fp.theta_bar}, v, kH, kModel);
        const auto tp = slider_rhs({fp.sigma, fp.theta_bar + h}, v, kH, kModel);
        const auto tm = slider_rhs({fp.sigma, fp.theta_bar - h}, v, kH, kModel);
        EXPECT_NEAR(J[0][0], (sp.first - sm.first) / (2 * h), 1e-6);
        EXPECT_NEAR(J[1][0], (sp.second - sm.second) / (2 * h), 1e-6);
        EXPECT_NEAR(J[0][1], (tp.first - tm.first) / (2 * h), 1e-6);
        EXPECT_NEAR(J[1][1], (tp.second - tm.second) / (2 * h), 1e-6);
    }
}

TEST(Slider, StickFixedPointRefused) {
    EXPECT_THROW(slider_stability(0.0, kH, kModel), StickBranch);
}

TEST(Slider, BifurcationOrdering) {
    SliderSearch opt;
    opt.T = 3000.0;
    const double v1 = find_v1(kH, kModel, opt);
    EXPECT_NEAR(v1, 0.1742, 2e-4);
    EXPECT_FALSE(slider_stability(v1 - 1e-4, kH, kModel).stable);
    EXPECT_TRUE(slider_stability(v1 + 1e-4, kH, kModel).stable);
    EXPECT_NEAR(slider_stability(v1, kH, kModel).max_real, 0.0, 1e-6);
    // bistable window: a far start still cycles just above v1, not well above it
    EXPECT_TRUE(slider_has_cycle(v1 + 5e-4, kH, kModel));
    EXPECT_FALSE(slider_has_cycle(0.178, kH, kModel));
}
