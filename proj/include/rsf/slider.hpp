#pragma once

// Lumped one-degree-of-freedom slider:
//   sigma'     = (C/H) (v_inf - h Pi(sigma, theta_bar))
//   theta_bar' = f0(theta_bar) - |Pi(sigma, theta_bar)| f1(theta_bar)

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "rsf/errors.hpp"
#include "rsf/model.hpp"

namespace rsf {

struct SliderState {
    double sigma = 0.0;
    double theta_bar = 0.0;
};

struct SliderSample {
    double t, sigma, theta_bar, pi;
};

inline std::pair<double, double> slider_rhs(const SliderState& s, double v_inf, double h, const ModelParams& m) {
    const double p = plastic_rate_Pi(s.sigma, s.theta_bar, m.friction);
    return {m.C() / m.H * (v_inf - h * p), aging_rhs(s.theta_bar, p, m.aging)};
}

// At v_inf = 0 every point of the stick set is an equilibrium; sigma = 0 is returned.
inline SliderState slider_fixed_point(double v_inf, double h, const ModelParams& m) {
    if (v_inf == 0.0) return {0.0, m.aging.theta_inf};
    const double p = v_inf / h;
    const double th = theta_f(p, m.aging);
    const double s = mu(p, th, m.friction);
    return {v_inf > 0.0 ? s : -s, th};
}

using Matrix2 = std::array<std::array<double, 2>, 2>;

inline Matrix2 slider_jacobian(const SliderState& s, double h, const ModelParams& m) {
    const double p = plastic_rate_Pi(s.sigma, s.theta_bar, m.friction);
    const double ps = plastic_rate_dsigma(s.sigma, s.theta_bar, m.friction);
    const double pt = plastic_rate_dtheta(s.sigma, s.theta_bar, m.friction);
    const double k = m.C() / m.H;
    const double sg = p >= 0.0 ? 1.0 : -1.0;
    const double f1 = m.aging.f1(s.theta_bar);
    Matrix2 J;
    J[0][0] = -k * h * ps;
    J[0][1] = -k * h * pt;
    J[1][0] = -sg * f1 * ps;
    J[1][1] = m.aging.f0_slope(s.theta_bar) - std::fabs(p) * m.aging.f1_slope(s.theta_bar) - sg * f1 * pt;
    return J;
}

struct SliderStability {
    std::array<std::complex<double>, 2> eigenvalues;
    Matrix2 jacobian;
    double max_real = 0.0;
    bool stable = false;
};

inline std::array<std::complex<double>, 2> eigenvalues(const Matrix2& J) {
    const double tr = J[0][0] + J[1][1];
    const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    const std::complex<double> disc = std::sqrt(std::complex<double>(0.25 * tr * tr - det, 0.0));
    return {0.5 * tr + disc, 0.5 * tr - disc};
}

inline SliderStability slider_stability(double v_inf, double h, const ModelParams& m) {
    const SliderState fp = slider_fixed_point(v_inf, h, m);
    if (plastic_rate_Pi(fp.sigma, fp.theta_bar, m.friction) == 0.0)
        throw StickBranch("slider fixed point lies in the stick set; the vector field is not smooth there");
    SliderStability out;
    out.jacobian = slider_jacobian(fp, h, m);
    out.eigenvalues = eigenvalues(out.jacobian);
    out.max_real = std::max(out.eigenvalues[0].real(), out.eigenvalues[1].real());
    out.stable = out.max_real < 0.0;
    return out;
}

namespace detail {

inline SliderState rk4(const SliderState& s, double dt, double v, double h, const ModelParams& m) {
    auto f = [&](const SliderState& x) { return slider_rhs(x, v, h, m); };
    const auto k1 = f(s);
    const auto k2 = f({s.sigma + 0.5 * dt * k1.first, s.theta_bar + 0.5 * dt * k1.second});
    const auto k3 = f({s.sigma + 0.5 * dt * k2.first, s.theta_bar + 0.5 * dt * k2.second});
    const auto k4 = f({s.sigma + dt * k3.first, s.theta_bar + dt * k3.second});
    return {s.sigma + dt / 6.0 * (k1.first + 2.0 * k2.first + 2.0 * k3.first + k4.first),
            s.theta_bar + dt / 6.0 * (k1.second + 2.0 * k2.second + 2.0 * k3.second + k4.second)};
}

inline double slip_indicator(const SliderState& s, const ModelParams& m) {
    return std::fabs(s.sigma) - yield_threshold(s.theta_bar, m.friction);
}

// Largest absolute row sum of the Jacobian: a bound on the local rate of change.
inline double stiffness_bound(const SliderState& s, double h, const ModelParams& m) {
    const Matrix2 J = slider_jacobian(s, h, m);
    return std::max(std::fabs(J[0][0]) + std::fabs(J[0][1]), std::fabs(J[1][0]) + std::fabs(J[1][1]));
}

// Step of length dt, recursively halved while it straddles the stick/slip threshold,
// while dt exceeds half the local time scale, or while the age would turn negative.
inline SliderState advance(const SliderState& s, double dt, double v, double h, const ModelParams& m, int depth) {
    const bool stiff = dt * stiffness_bound(s, h, m) > 0.5;
    const SliderState e = rk4(s, dt, v, h, m);
    const double g0 = slip_indicator(s, m), g1 = slip_indicator(e, m);
    const bool crosses = (g0 > 0.0) != (g1 > 0.0) && std::fabs(g1) >= 1e-10;
    const bool invalid = !(e.theta_bar >= 0.0) || !std::isfinite(e.sigma);
    if (depth <= 0 || !(stiff || crosses || invalid)) return e;
    const SliderState mid = advance(s, 0.5 * dt, v, h, m, depth - 1);
    return advance(mid, 0.5 * dt, v, h, m, depth - 1);
}

}  // namespace detail

// Classical RK4; stiff steps and steps crossing the threshold are subdivided (up to 2^-30 of dt).
inline std::vector<SliderSample> slider_integrate(SliderState s, double v_inf, double h, double T, double dt,
                                                  const ModelParams& m, int record_every = 1) {
    if (!(dt > 0.0)) throw std::invalid_argument("slider_integrate: dt must be positive");
    std::vector<SliderSample> out;
    const long steps = static_cast<long>(std::ceil(T / dt - 1e-9));
    auto record = [&](double t) { out.push_back({t, s.sigma, s.theta_bar, plastic_rate_Pi(s.sigma, s.theta_bar, m.friction)}); };
    record(0.0);
    for (long k = 1; k <= steps; ++k) {
        const double step = std::min(dt, T - (k - 1) * dt);
        s = detail::advance(s, step, v_inf, h, m, 30);
        if (k % record_every == 0 || k == steps) record(std::min(T, k * dt));
    }
    return out;
}

struct CycleReport {
    bool cycle = false;
    double amplitude = 0.0;       // peak-to-peak sigma over the final window
    double amplitude_drift = 0.0;  // relative change between the two halves of the window
};

// Large-amplitude limit cycle test on the last fraction of a trajectory.
inline CycleReport detect_cycle(const std::vector<SliderSample>& tr, double window = 0.2) {
    CycleReport rep;
    const std::size_t n = tr.size();
    const std::size_t first = n - static_cast<std::size_t>(window * n);
    const std::size_t mid = first + (n - first) / 2;
    auto amp = [&](std::size_t a, std::size_t b) {
        double lo = INFINITY, hi = -INFINITY;
        for (std::size_t i = a; i < b; ++i) {
            lo = std::min(lo, tr[i].sigma);
            hi = std::max(hi, tr[i].sigma);
        }
        return hi - lo;
    };
    rep.amplitude = amp(first, n);
    const double a1 = amp(first, mid), a2 = amp(mid, n);
    rep.amplitude_drift = std::fabs(a1 - a2) / std::max(1e-300, std::max(a1, a2));
    rep.cycle = rep.amplitude > 1e-2 && rep.amplitude_drift < 0.02;
    return rep;
}

struct SliderSearch {
    double T = 5000.0;
    double dt = 0.01;
    SliderState far_start{3.0, 8.0};
    double tol_v1 = 1e-9;
    double tol_v2 = 1e-4;
};

inline bool slider_has_cycle(double v_inf, double h, const ModelParams& m, const SliderSearch& opt = {}) {
    const auto tr = slider_integrate(opt.far_start, v_inf, h, opt.T, opt.dt, m, 10);
    return detect_cycle(tr).cycle;
}

// Loss of linear stability: root of the largest real part of the eigenvalues in v_inf.
inline double find_v1(double h, const ModelParams& m, const SliderSearch& opt = {}) {
    double prev = 1e-4 * h;
    bool prev_stable = slider_stability(prev, h, m).stable;
    for (double v = prev * 1.25; v < 1e3; v *= 1.25) {
        const bool st = slider_stability(v, h, m).stable;
        if (!prev_stable && st) {
            double lo = prev, hi = v;
            while (hi - lo > opt.tol_v1) {
                const double mid = 0.5 * (lo + hi);
                if (slider_stability(mid, h, m).stable) hi = mid; else lo = mid;
            }
            return 0.5 * (lo + hi);
        }
        prev = v;
        prev_stable = st;
    }
    throw BracketFailure("find_v1: no unstable-to-stable transition on the scan");
}

// Largest v_inf at which a trajectory from the far start still settles on a large cycle.
inline double find_v2(double h, const ModelParams& m, const SliderSearch& opt = {}) {
    const double v1 = find_v1(h, m, opt);
    double lo = v1;
    if (!slider_has_cycle(lo, h, m, opt)) throw BracketFailure("find_v2: no limit cycle at the stability threshold");
    double hi = lo;
    double step = 1e-3;
    for (int k = 0;; ++k) {
        hi = lo + step;
        if (!slider_has_cycle(hi, h, m, opt)) break;
        lo = hi;
        step *= 2.0;
        if (k > 30) throw BracketFailure("find_v2: limit cycle persists on the whole scan");
    }
    while (hi - lo > opt.tol_v2) {
        const double mid = 0.5 * (lo + hi);
        if (slider_has_cycle(mid, h, m, opt)) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace rsf
