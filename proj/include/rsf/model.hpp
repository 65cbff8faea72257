#pragma once

// Constitutive functions: friction, aging, dissipation, plastic-rate inversion,
// damage-modulated stiffness. Everything here is a pure evaluation.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>

#include "rsf/errors.hpp"

namespace rsf {

// Counts how often a negative age was clamped to zero on input.
inline std::atomic<std::uint64_t>& negative_age_clamps() {
    static std::atomic<std::uint64_t> count{0};
    return count;
}

inline double clamp_age(double theta) {
    if (theta < 0.0) {
        negative_age_clamps().fetch_add(1, std::memory_order_relaxed);
        return 0.0;
    }
    return theta;
}

// mu(pi, theta) = mu0 + A(pi) + B(theta) with
//   A(pi)    = a ln(h_ref |pi| + 1)
//   B(theta) = b ln(c_state theta + 1)
// A can be swapped for any strictly increasing rate term with A(0) = 0.
struct FrictionLaw {
    double mu0 = 1.0;
    double a = 1.0;
    double b = 1.0;
    double h_ref = 1.0;
    double c_state = 4.0;

    // Optional replacement rate term on [0, inf) and its slope.
    std::function<double(double)> rate_term;
    std::function<double(double)> rate_slope;

    bool log_rate() const { return !rate_term; }

    double A(double pi) const {
        const double p = std::fabs(pi);
        if (!log_rate()) return rate_term(p);
        return a * std::log1p(h_ref * p);
    }

    // d A / d|pi| at |pi| = p
    double A_slope(double p) const {
        p = std::fabs(p);
        if (!log_rate()) {
            if (rate_slope) return rate_slope(p);
            const double d = 1e-6 * std::max(1.0, p);
            return (rate_term(p + d) - rate_term(std::max(0.0, p - d))) / (p + d - std::max(0.0, p - d));
        }
        return a * h_ref / (h_ref * p + 1.0);
    }

    // Integral of A over [0, p], p >= 0.
    double A_integral(double p) const {
        p = std::fabs(p);
        if (!log_rate()) {
            // composite Simpson, the custom term is assumed smooth
            const int n = 400;
            const double h = p / n;
            double s = rate_term(0.0) + rate_term(p);
            for (int i = 1; i < n; ++i) s += rate_term(i * h) * (i % 2 ? 4.0 : 2.0);
            return s * h / 3.0;
        }
        const double q = h_ref * p;
        // a/h_ref * ((1+q) ln(1+q) - q), written to keep accuracy at small q
        return a / h_ref * ((1.0 + q) * std::log1p(q) - q);
    }

    // Solves A(p) = y for p >= 0, y >= 0.
    double A_inverse(double y) const {
        if (y <= 0.0) return 0.0;
        if (log_rate()) return std::expm1(y / a) / h_ref;
        double lo = 0.0;
        double hi = 1.0;
        int grow = 0;
        while (A(hi) < y) {
            lo = hi;
            hi *= 2.0;
            if (++grow > 200) throw NonConvergence("rate term inversion: no bracket", y, grow);
        }
        double p = 0.5 * (lo + hi);
        for (int it = 0; it < 200; ++it) {
            const double r = A(p) - y;
            if (r > 0.0) hi = p; else lo = p;
            if (std::fabs(r) <= 1e-14 * std::max(1.0, y) || hi - lo <= 1e-15 * std::max(1.0, hi)) return p;
            const double s = A_slope(p);
            double next = s > 0.0 ? p - r / s : 0.5 * (lo + hi);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            p = next;
        }
        return p;
    }

    double B(double theta) const { return b * std::log1p(c_state * clamp_age(theta)); }
    double B_slope(double theta) const { return b * c_state / (c_state * clamp_age(theta) + 1.0); }

    void validate() const {
        if (!(mu0 > 0.0)) throw ConfigError("friction: mu0 must be positive");
        if (!(a > 0.0)) throw ConfigError("friction: a must be positive so that A is strictly increasing");
        if (!(b >= 0.0)) throw ConfigError("friction: b must be nonnegative");
        if (!(h_ref > 0.0)) throw ConfigError("friction: h_ref must be positive");
        if (!(c_state > 0.0)) throw ConfigError("friction: c_state must be positive");
    }
};

// f0(theta) = 1 - theta/theta_inf, f1(theta) = c1 theta unless replaced.
struct AgingLaw {
    double theta_inf = 10.0;
    double c1 = 10.0;

    std::function<double(double)> f0_fn, f0_slope_fn;
    std::function<double(double)> f1_fn, f1_slope_fn;

    bool affine() const { return !f0_fn && !f1_fn; }

    double f0(double theta) const {
        theta = clamp_age(theta);
        return f0_fn ? f0_fn(theta) : 1.0 - theta / theta_inf;
    }
    double f0_slope(double theta) const {
        theta = clamp_age(theta);
        if (f0_slope_fn) return f0_slope_fn(theta);
        if (f0_fn) return (f0_fn(theta + 1e-7) - f0_fn(std::max(0.0, theta - 1e-7))) /
                          (theta + 1e-7 - std::max(0.0, theta - 1e-7));
        return -1.0 / theta_inf;
    }
    double f1(double theta) const {
        theta = clamp_age(theta);
        return f1_fn ? f1_fn(theta) : c1 * theta;
    }
    double f1_slope(double theta) const {
        theta = clamp_age(theta);
        if (f1_slope_fn) return f1_slope_fn(theta);
        if (f1_fn) return (f1_fn(theta + 1e-7) - f1_fn(std::max(0.0, theta - 1e-7))) /
                          (theta + 1e-7 - std::max(0.0, theta - 1e-7));
        return c1;
    }

    // Primitives phi0' = f0, phi1' = f1 with phi(0) = 0.
    double phi0(double theta) const {
        theta = clamp_age(theta);
        if (!f0_fn) return theta - 0.5 * theta * theta / theta_inf;
        return simpson([this](double s) { return f0(s); }, theta);
    }
    double phi1(double theta) const {
        theta = clamp_age(theta);
        if (!f1_fn) return 0.5 * c1 * theta * theta;
        return simpson([this](double s) { return f1(s); }, theta);
    }

    void validate() const {
        if (!(theta_inf > 0.0)) throw ConfigError("aging: theta_inf must be positive");
        if (!(c1 > 0.0)) throw ConfigError("aging: c1 must be positive");
    }

private:
    template <class F>
    static double simpson(F f, double b) {
        const int n = 400;
        const double h = b / n;
        double s = f(0.0) + f(b);
        for (int i = 1; i < n; ++i) s += f(i * h) * (i % 2 ? 4.0 : 2.0);
        return s * h / 3.0;
    }
};

enum class StiffnessMode { constant, damage };

// Constant: C(alpha) = C0. Damage: C(alpha) = (ell_ratio^2 + alpha^2) C0.
struct StiffnessLaw {
    StiffnessMode mode = StiffnessMode::constant;
    double C0 = 1.0;
    double ell_ratio = 1.0;  // ell / ell0

    double value(double alpha) const {
        if (mode == StiffnessMode::constant) return C0;
        return (ell_ratio * ell_ratio + alpha * alpha) * C0;
    }
    double slope(double alpha) const { return mode == StiffnessMode::constant ? 0.0 : 2.0 * alpha * C0; }
    double curvature(double) const { return mode == StiffnessMode::constant ? 0.0 : 2.0 * C0; }

    void validate() const {
        if (!(C0 > 0.0)) throw ConfigError("stiffness: C0 must be positive");
        if (mode == StiffnessMode::damage && !(ell_ratio > 0.0))
            throw ConfigError("stiffness: ell_ratio must be positive");
    }
};

struct ModelParams {
    double H = 1.0;
    double rho = 0.0;
    double eta = 0.0;
    double kappa = 0.04;
    double ell = 1.0;
    double Gc = 1.0;
    FrictionLaw friction;
    AgingLaw aging;
    StiffnessLaw stiffness;

    double C() const { return stiffness.C0; }

    void validate() const {
        if (!(H > 0.0)) throw ConfigError("model: H must be positive");
        if (!(rho >= 0.0)) throw ConfigError("model: rho must be nonnegative");
        if (!(eta >= 0.0)) throw ConfigError("model: eta must be nonnegative");
        if (!(kappa >= 0.0)) throw ConfigError("model: kappa must be nonnegative");
        if (!(ell > 0.0)) throw ConfigError("model: ell must be positive");
        if (!(Gc > 0.0)) throw ConfigError("model: Gc must be positive");
        friction.validate();
        aging.validate();
        stiffness.validate();
    }
};

inline double mu(double pi, double theta, const FrictionLaw& law = {}) {
    return law.mu0 + law.A(pi) + law.B(theta);
}

// Yield threshold mu(0, theta).
inline double yield_threshold(double theta, const FrictionLaw& law = {}) {
    return law.mu0 + law.B(theta);
}

// R(pi, theta) = mu0 |pi| + int_0^|pi| A + B(theta) |pi|
inline double dissipation_R(double pi, double theta, const FrictionLaw& law = {}) {
    const double p = std::fabs(pi);
    return (law.mu0 + law.B(theta)) * p + law.A_integral(p);
}

inline double plastic_rate_Pi(double sigma, double theta, const FrictionLaw& law = {}) {
    const double excess = std::fabs(sigma) - yield_threshold(theta, law);
    if (excess <= 0.0) return 0.0;
    const double p = law.A_inverse(excess);
    return sigma > 0.0 ? p : -p;
}

// Partial derivatives of Pi on the slip branch; both vanish in the stick set.
inline double plastic_rate_dsigma(double sigma, double theta, const FrictionLaw& law = {}) {
    const double p = plastic_rate_Pi(sigma, theta, law);
    if (p == 0.0) return 0.0;
    return 1.0 / law.A_slope(p);
}

inline double plastic_rate_dtheta(double sigma, double theta, const FrictionLaw& law = {}) {
    const double p = plastic_rate_Pi(sigma, theta, law);
    if (p == 0.0) return 0.0;
    const double d = -law.B_slope(theta) / law.A_slope(p);
    return sigma > 0.0 ? d : -d;
}

inline double aging_rhs(double theta, double pi, const AgingLaw& law = {}) {
    return law.f0(theta) - std::fabs(pi) * law.f1(theta);
}

// Unique root of f0(theta) = |pi| f1(theta) on [0, theta_inf].
inline double theta_f(double pi, const AgingLaw& law = {}) {
    const double p = std::fabs(pi);
    if (law.affine()) return law.theta_inf / (1.0 + law.c1 * law.theta_inf * p);
    double lo = 0.0, hi = law.theta_inf;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * law.theta_inf; ++it) {
        const double m = 0.5 * (lo + hi);
        if (aging_rhs(m, p, law) > 0.0) lo = m; else hi = m;
    }
    return 0.5 * (lo + hi);
}

inline std::pair<double, double> stiffness(double alpha, const StiffnessLaw& law = {}) {
    return {law.value(alpha), law.slope(alpha)};
}

}  // namespace rsf
