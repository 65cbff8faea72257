#pragma once

// Discrete flow rule on a grid:
//   c pi_i + mu(pi_i, theta_i) Sign(pi_i) - eta (L pi)_i  contains  s_i
// with pi = 0 on the boundary whenever eta > 0 (or when pinned explicitly).
// c >= 0 is an optional elastic shift (c = C tau in the time-stepping scheme).

#include <algorithm>
#include <cmath>
#include <vector>

#include "rsf/errors.hpp"
#include "rsf/linalg.hpp"
#include "rsf/model.hpp"

namespace rsf {

// Solves c p + mu(p, theta) sign(p) = s for p.
inline double shifted_plastic_rate(double s, double theta, double c, const FrictionLaw& law) {
    const double excess = std::fabs(s) - yield_threshold(theta, law);
    if (excess <= 0.0) return 0.0;
    if (c <= 0.0) return std::copysign(law.A_inverse(excess), s);
    double lo = 0.0;
    double hi = std::min(excess / c, law.A_inverse(excess));
    double p = 0.0;
    for (int it = 0; it < 100; ++it) {
        const double r = law.A(p) + c * p - excess;
        if (r > 0.0) hi = p; else lo = p;
        if (std::fabs(r) <= 1e-15 * std::max(1.0, excess)) break;
        double next = p - r / (law.A_slope(p) + c);
        if (!(next >= lo && next <= hi)) next = 0.5 * (lo + hi);
        if (next == p) break;
        p = next;
    }
    return std::copysign(p, s);
}

// d p / d s on the slip branch, zero in the stick set.
inline double shifted_plastic_rate_slope(double p, double c, const FrictionLaw& law) {
    if (p == 0.0) return 0.0;
    return 1.0 / (c + law.A_slope(p));
}

struct FlowRuleSolution {
    std::vector<double> pi;
    int iterations = 0;
    double residual = 0.0;  // sup-norm of pi - P(s + eta L pi)
    bool regularized = false;
};

struct FlowRuleProblem {
    const std::vector<double>* s = nullptr;
    const std::vector<double>* theta = nullptr;
    double c = 0.0;
    double eta = 0.0;
    double dx = 1.0;
    bool pin_boundary = true;
    const FrictionLaw* law = nullptr;
};

namespace detail {

inline void apply_laplacian(const std::vector<double>& p, double dx, std::vector<double>& out) {
    const std::size_t n = p.size();
    out.assign(n, 0.0);
    const double inv = 1.0 / (dx * dx);
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (p[i - 1] - 2.0 * p[i] + p[i + 1]) * inv;
}

inline double natural_residual(const FlowRuleProblem& pb, const std::vector<double>& p, std::vector<double>& G,
                               std::vector<double>* slope) {
    const std::size_t n = p.size();
    std::vector<double> lap;
    apply_laplacian(p, pb.dx, lap);
    G.assign(n, 0.0);
    if (slope) slope->assign(n, 0.0);
    double r = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double target = shifted_plastic_rate((*pb.s)[i] + pb.eta * lap[i], (*pb.theta)[i], pb.c, *pb.law);
        G[i] = p[i] - target;
        if (slope) (*slope)[i] = shifted_plastic_rate_slope(target, pb.c, *pb.law);
        r = std::max(r, std::fabs(G[i]));
    }
    return r;
}

// Smooth surrogate with Sign replaced by tanh(p/delta), solved by damped Newton.
inline bool solve_regularized(const FlowRuleProblem& pb, std::vector<double>& p, double delta) {
    const std::size_t n = p.size();
    const double k = pb.eta / (pb.dx * pb.dx);
    const FrictionLaw& law = *pb.law;
    auto residual = [&](const std::vector<double>& q, std::vector<double>& F) {
        F.assign(n, 0.0);
        double r = 0.0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double t = std::tanh(q[i] / delta);
            F[i] = pb.c * q[i] + mu(q[i], (*pb.theta)[i], law) * t - k * (q[i - 1] - 2.0 * q[i] + q[i + 1]) -
                   (*pb.s)[i];
            r += F[i] * F[i];
        }
        return std::sqrt(r);
    };
    std::vector<double> F, trial(n), lower(n - 2), diag(n - 2), upper(n - 2), rhs(n - 2);
    double r = residual(p, F);
    for (int it = 0; it < 200; ++it) {
        if (r < 1e-12) return true;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double t = std::tanh(p[i] / delta);
            const double sech2 = 1.0 - t * t;
            const double d = pb.c + law.A_slope(p[i]) * std::fabs(t) + mu(p[i], (*pb.theta)[i], law) * sech2 / delta;
            diag[i - 1] = d + 2.0 * k;
            lower[i - 1] = -k;
            upper[i - 1] = -k;
            rhs[i - 1] = -F[i];
        }
        const auto step = solve_tridiagonal(lower, diag, upper, rhs);
        double lambda = 1.0;
        bool accepted = false;
        for (int h = 0; h < 40; ++h) {
            for (std::size_t i = 1; i + 1 < n; ++i) trial[i] = p[i] + lambda * step[i - 1];
            trial[0] = trial[n - 1] = 0.0;
            std::vector<double> Ft;
            const double rt = residual(trial, Ft);
            if (rt <= (1.0 - 1e-4 * lambda) * r) {
                p = trial;
                F = Ft;
                r = rt;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) return r < 1e-9;
    }
    return r < 1e-9;
}

}  // namespace detail

// Semismooth Newton on G(pi) = pi - P(s + eta L pi); regularized continuation as fallback.
inline FlowRuleSolution solve_flow_rule(const FlowRuleProblem& pb, std::vector<double> guess = {}) {
    const auto& s = *pb.s;
    const auto& theta = *pb.theta;
    const std::size_t n = s.size();
    FlowRuleSolution out;

    if (pb.eta <= 0.0) {
        out.pi.assign(n, 0.0);
        const std::size_t first = pb.pin_boundary ? 1 : 0;
        const std::size_t last = pb.pin_boundary ? n - 1 : n;
        for (std::size_t i = first; i < last; ++i) out.pi[i] = shifted_plastic_rate(s[i], theta[i], pb.c, *pb.law);
        return out;
    }

    const bool warm = guess.size() == n;
    std::vector<double> p = warm ? std::move(guess) : std::vector<double>(n, 0.0);
    if (!warm) {
        for (std::size_t i = 1; i + 1 < n; ++i) p[i] = shifted_plastic_rate(s[i], theta[i], pb.c, *pb.law);
    }
    p[0] = p[n - 1] = 0.0;

    double scale = 1.0;
    for (double v : p) scale = std::max(scale, std::fabs(v));
    const double tol = 1e-11 * scale;
    const double k = pb.eta / (pb.dx * pb.dx);

    auto newton = [&](std::vector<double>& q, int max_it, int& used) {
        std::vector<double> G, slope, Gt, trial(n), lower(n - 2), diag(n - 2), upper(n - 2), rhs(n - 2);
        double r = detail::natural_residual(pb, q, G, &slope);
        for (int it = 0; it < max_it; ++it) {
            used = it;
            if (r <= tol) return r;
            for (std::size_t i = 1; i + 1 < n; ++i) {
                diag[i - 1] = 1.0 + 2.0 * slope[i] * k;
                lower[i - 1] = -slope[i] * k;
                upper[i - 1] = -slope[i] * k;
                rhs[i - 1] = -G[i];
            }
            const auto step = solve_tridiagonal(lower, diag, upper, rhs);
            double merit = 0.0;
            for (std::size_t i = 1; i + 1 < n; ++i) merit += G[i] * G[i];
            double lambda = 1.0;
            bool accepted = false;
            for (int h = 0; h < 40; ++h) {
                for (std::size_t i = 1; i + 1 < n; ++i) trial[i] = q[i] + lambda * step[i - 1];
                trial[0] = trial[n - 1] = 0.0;
                std::vector<double> st;
                const double rt = detail::natural_residual(pb, trial, Gt, &st);
                double mt = 0.0;
                for (std::size_t i = 1; i + 1 < n; ++i) mt += Gt[i] * Gt[i];
                if (mt <= (1.0 - 1e-4 * lambda) * merit || rt <= tol) {
                    q = trial;
                    G = Gt;
                    slope = st;
                    r = rt;
                    accepted = true;
                    break;
                }
                lambda *= 0.5;
            }
            if (!accepted) return r;
        }
        used = max_it;
        return r;
    };

    int used = 0;
    double r = newton(p, 100, used);
    out.iterations = used;
#ifdef RSF_TRACE
    if (r > tol) fprintf(stderr, "semismooth stalled r=%.3e tol=%.3e used=%d\n", r, tol, used);
#endif
    if (r > tol) {
        // Active set cycling or stalled line search: continuation in the smoothing width.
        std::vector<double> q = p;
        for (double delta = 1e-2; delta >= 1e-8 * 0.999; delta *= 0.1) detail::solve_regularized(pb, q, delta);
        int used2 = 0;
        const double r2 = newton(q, 100, used2);
        out.iterations += used2;
        out.regularized = true;
        if (r2 < r) {
            p = q;
            r = r2;
        }
    }
    out.residual = r;
    out.pi = std::move(p);
    if (r > 1e-8 * scale) throw NonConvergence("flow rule solve", r, out.iterations);
    return out;
}

// Residual of the inclusion itself: equality on slip nodes, yield bound on stick nodes.
inline double flow_rule_kkt_residual(const FlowRuleProblem& pb, const std::vector<double>& p) {
    std::vector<double> lap;
    detail::apply_laplacian(p, pb.dx, lap);
    const std::size_t n = p.size();
    double r = 0.0;
    const std::size_t first = (pb.eta > 0.0 || pb.pin_boundary) ? 1 : 0;
    const std::size_t last = (pb.eta > 0.0 || pb.pin_boundary) ? n - 1 : n;
    for (std::size_t i = first; i < last; ++i) {
        const double drive = (*pb.s)[i] + pb.eta * lap[i] - pb.c * p[i];
        if (std::fabs(p[i]) > 1e-12) {
            r = std::max(r, std::fabs(drive - std::copysign(mu(p[i], (*pb.theta)[i], *pb.law), p[i])));
        } else {
            r = std::max(r, std::max(0.0, std::fabs(drive) - yield_threshold((*pb.theta)[i], *pb.law)));
        }
    }
    return r;
}

}  // namespace rsf
