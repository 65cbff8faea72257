#pragma once

#include <cmath>
#include <vector>

#include "rsf/errors.hpp"
#include "rsf/grid.hpp"
#include "rsf/linalg.hpp"
#include "rsf/model.hpp"

namespace rsf {

// One implicit Euler step of theta_t = kappa theta_xx + f0(theta) - |pi| f1(theta),
// theta(+-H) = theta_inf. For the affine/linear default laws this is a single
// M-matrix solve, so 0 <= theta <= theta_inf is preserved for every tau.
inline Field implicit_aging_step(const Field& theta_old, const Field& pi, double tau, const ModelParams& m) {
    const Grid1D& g = theta_old.grid;
    const int n = g.size();
    const double tinf = m.aging.theta_inf;
    const double k = m.kappa / (g.dx() * g.dx());
    Field theta = theta_old;
    theta[0] = theta[n - 1] = tinf;
    std::vector<double> lower(n - 2), diag(n - 2), upper(n - 2), rhs(n - 2);
    auto residual = [&](const Field& t, int i) {
        return (t[i] - theta_old[i]) / tau - k * (t[i - 1] - 2.0 * t[i] + t[i + 1]) - aging_rhs(t[i], pi[i], m.aging);
    };
    double r = 0.0;
    for (int it = 0; it < 50; ++it) {
        r = 0.0;
        for (int i = 1; i + 1 < n; ++i) {
            const double F = residual(theta, i);
            r = std::max(r, std::fabs(F) * tau);
            diag[i - 1] = 1.0 / tau + 2.0 * k - m.aging.f0_slope(theta[i]) + std::fabs(pi[i]) * m.aging.f1_slope(theta[i]);
            lower[i - 1] = upper[i - 1] = -k;
            rhs[i - 1] = -F;
        }
        if (r < 1e-14 * tinf) return theta;
        const auto step = solve_tridiagonal(lower, diag, upper, rhs);
        for (int i = 1; i + 1 < n; ++i) theta[i] += step[i - 1];
        if (m.aging.affine()) {
            // linear problem: one step is exact up to rounding
            r = 0.0;
            for (int i = 1; i + 1 < n; ++i) r = std::max(r, std::fabs(residual(theta, i)) * tau);
            if (r < 1e-11 * tinf) return theta;
        }
    }
    if (r < 1e-10 * tinf) return theta;
    throw NonConvergence("implicit aging step", r, 50);
}

}  // namespace rsf
