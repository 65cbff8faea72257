#pragma once

// Steady states: theta-solve, pi-solve with multiplier sigma, damped fixed point,
// then damage, strain and velocity recovery.

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "rsf/errors.hpp"
#include "rsf/flow_rule.hpp"
#include "rsf/grid.hpp"
#include "rsf/linalg.hpp"
#include "rsf/model.hpp"

namespace rsf {

struct SteadyOptions {
    int max_iter = 500;       // damped fixed-point iterations before the Newton fallback
    double tol = 1e-10;
    double damping = 0.5;
    bool newton_fallback = true;
    bool continuation = true;  // kappa continuation when both direct methods fail
};

struct SteadyResiduals {
    double theta = 0.0;       // scaled theta-equation residual
    double pi = 0.0;          // flow-rule KKT residual
    double constraint = 0.0;  // |int pi - 2 v_inf|
    double damage = 0.0;
    double fixed_point = 0.0;  // |theta - S_A(S_B(theta))|
};

struct SteadyState {
    Field theta, pi, alpha, eps, v;
    double sigma = 0.0;
    double v_inf = 0.0;
    SteadyResiduals residuals;
    int iterations = 0;
    std::string method;

    // Largest |x| with pi > 1e-6 max pi.
    double h_star() const {
        const double m = pi.max();
        if (!(m > 0.0)) return 0.0;
        double h = 0.0;
        for (int i = 0; i < pi.size(); ++i)
            if (pi[i] > 1e-6 * m) h = std::max(h, std::fabs(pi.grid.x(i)));
        return h;
    }
};

struct PiSolution {
    Field pi;
    double sigma = 0.0;
    double kkt = 0.0;
};

namespace detail {

inline double theta_row_scale(const ModelParams& m, double dx) {
    return 2.0 * m.kappa / (dx * dx) + 1.0 / m.aging.theta_inf;
}

inline double theta_residual(const ModelParams& m, const Field& pi, const Field& theta) {
    const double dx = theta.grid.dx();
    const double k = m.kappa / (dx * dx);
    const double scale = theta_row_scale(m, dx);
    double r = 0.0;
    for (int i = 1; i + 1 < theta.size(); ++i) {
        const double F = k * (theta[i - 1] - 2.0 * theta[i] + theta[i + 1]) + aging_rhs(theta[i], pi[i], m.aging);
        r = std::max(r, std::fabs(F) / scale);
    }
    return r;
}

}  // namespace detail

// Solves kappa theta'' + f0(theta) - |pi| f1(theta) = 0 with theta(+-H) = theta_inf.
inline Field solve_theta_given_pi(const ModelParams& m, const Field& pi) {
    const Grid1D& g = pi.grid;
    const double tinf = m.aging.theta_inf;
    Field theta(g, tinf);
    const int n = g.size();
    if (m.kappa <= 0.0) {
        for (int i = 1; i + 1 < n; ++i) theta[i] = theta_f(pi[i], m.aging);
        return theta;
    }
    const double dx = g.dx();
    const double k = m.kappa / (dx * dx);
    std::vector<double> lower(n - 2), diag(n - 2), upper(n - 2), rhs(n - 2);
    double r = detail::theta_residual(m, pi, theta);
    for (int it = 0; it < 100; ++it) {
        if (r < 1e-13 * tinf) return theta;
        for (int i = 1; i + 1 < n; ++i) {
            const double F = k * (theta[i - 1] - 2.0 * theta[i] + theta[i + 1]) + aging_rhs(theta[i], pi[i], m.aging);
            diag[i - 1] = -2.0 * k + m.aging.f0_slope(theta[i]) - std::fabs(pi[i]) * m.aging.f1_slope(theta[i]);
            lower[i - 1] = k;
            upper[i - 1] = k;
            rhs[i - 1] = -F;
        }
        const auto step = solve_tridiagonal(lower, diag, upper, rhs);
        double lambda = 1.0;
        bool accepted = false;
        for (int h = 0; h < 40; ++h) {
            Field trial = theta;
            for (int i = 1; i + 1 < n; ++i) trial[i] = theta[i] + lambda * step[i - 1];
            const double rt = detail::theta_residual(m, pi, trial);
            if (rt <= (1.0 - 1e-4 * lambda) * r || rt < 1e-13 * tinf) {
                theta = std::move(trial);
                r = rt;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) break;
    }
    if (r < 1e-10) return theta;
    throw NonConvergence("theta solve", r, 100);
}

// Finds pi and the multiplier sigma with pi solving the flow rule for stress sigma
// and int pi = 2 v_inf.
inline PiSolution solve_pi_given_theta(const ModelParams& m, const Field& theta, double v_inf,
                                       const Field* warm = nullptr) {
    const Grid1D& g = theta.grid;
    const int n = g.size();
    PiSolution out;
    out.pi = Field(g, 0.0);
    if (v_inf == 0.0) return out;

    const double sgn = v_inf > 0.0 ? 1.0 : -1.0;
    const double target = 2.0 * std::fabs(v_inf);
    const FrictionLaw& law = m.friction;

    double thr_min = yield_threshold(theta[0], law), thr_max = thr_min;
    for (int i = 0; i < n; ++i) {
        const double t = yield_threshold(theta[i], law);
        thr_min = std::min(thr_min, t);
        thr_max = std::max(thr_max, t);
    }

    // For sigma >= 0: returns int pi(sigma) and its derivative.
    std::vector<double> s(n), th(theta.values), last;
    if (warm && warm->size() == n) {
        last = warm->values;
        for (double& x : last) x = std::fabs(x);
    }
    FlowRuleProblem pb;
    pb.s = &s;
    pb.theta = &th;
    pb.c = 0.0;
    pb.eta = m.eta;
    pb.dx = g.dx();
    pb.pin_boundary = m.eta > 0.0;
    pb.law = &law;

    auto evaluate = [&](double sigma, double& deriv) {
        std::fill(s.begin(), s.end(), sigma);
        if (m.eta <= 0.0) {
            Field p(g, 0.0), dp(g, 0.0);
            for (int i = 0; i < n; ++i) {
                p[i] = plastic_rate_Pi(sigma, theta[i], law);
                dp[i] = plastic_rate_dsigma(sigma, theta[i], law);
            }
            deriv = integrate(dp);
            last = p.values;
            return integrate(p);
        }
        auto sol = solve_flow_rule(pb, last);
        // d pi / d sigma solves (I - D eta L) w = D 1
        const double k = m.eta / (g.dx() * g.dx());
        std::vector<double> lower(n - 2), diag(n - 2), upper(n - 2), rhs(n - 2);
        for (int i = 1; i + 1 < n; ++i) {
            const double d = shifted_plastic_rate_slope(sol.pi[i], 0.0, law);
            diag[i - 1] = 1.0 + 2.0 * d * k;
            lower[i - 1] = upper[i - 1] = -d * k;
            rhs[i - 1] = d;
        }
        const auto w = solve_tridiagonal(lower, diag, upper, rhs);
        Field wf(g, 0.0);
        for (int i = 1; i + 1 < n; ++i) wf[i] = w[i - 1];
        deriv = integrate(wf);
        last = sol.pi;
        return integrate(Field(g, sol.pi));
    };

    double lo = thr_min, hi = thr_max + law.A(std::fabs(v_inf) / g.H()) + 1e-12;
    double d = 0.0;
    double ghi = evaluate(hi, d) - target;
    int grow = 0;
    while (ghi < 0.0) {
        lo = hi;
        hi = thr_max + 2.0 * (hi - thr_max) + 1.0;
        ghi = evaluate(hi, d) - target;
        if (++grow > 60) throw NonConvergence("multiplier bracket exhausted", ghi, grow);
    }
    double sigma = hi;
    double gs = ghi;
    const double ftol = 1e-14 * std::max(1.0, target);
    int it = 0;
    for (; it < 200; ++it) {
        if (std::fabs(gs) <= ftol || hi - lo <= 4e-16 * std::max(1.0, hi)) break;
        double next = d > 0.0 ? sigma - gs / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        sigma = next;
        gs = evaluate(sigma, d) - target;
        if (gs > 0.0) hi = sigma; else lo = sigma;
    }
    if (std::fabs(gs) > 1e-9 * std::max(1.0, target)) throw NonConvergence("multiplier iteration", gs, it);

    out.sigma = sgn * sigma;
    for (int i = 0; i < n; ++i) out.pi[i] = sgn * last[i];
    std::vector<double> sv(n, out.sigma);
    pb.s = &sv;
    out.kkt = flow_rule_kkt_residual(pb, out.pi.values);
    return out;
}

// Gc ell^2 alpha'' = C'(alpha)/(2 C(alpha)^2) sigma^2 + Gc (alpha - 1)/ell^2, alpha(+-H) = 1.
inline Field solve_damage(double sigma, const ModelParams& m, const Grid1D& g) {
    Field alpha(g, 1.0);
    const StiffnessLaw& st = m.stiffness;
    if (st.mode == StiffnessMode::constant || sigma == 0.0) return alpha;
    const int n = g.size();
    const double dx = g.dx();
    const double l2 = m.ell * m.ell;
    const double k = m.Gc * l2 / (dx * dx);
    const double scale = 2.0 * k + m.Gc / l2;
    const double s2 = sigma * sigma;
    auto drive = [&](double a) {
        const double C = st.value(a);
        return st.slope(a) / (2.0 * C * C);
    };
    auto drive_slope = [&](double a) {
        const double C = st.value(a), Cp = st.slope(a);
        return st.curvature(a) / (2.0 * C * C) - Cp * Cp / (C * C * C);
    };
    auto residual = [&](const Field& a, std::vector<double>& G) {
        G.assign(n, 0.0);
        double r = 0.0;
        for (int i = 1; i + 1 < n; ++i) {
            G[i] = k * (a[i - 1] - 2.0 * a[i] + a[i + 1]) - drive(a[i]) * s2 - m.Gc * (a[i] - 1.0) / l2;
            r = std::max(r, std::fabs(G[i]) / scale);
        }
        return r;
    };
    std::vector<double> G, lower(n - 2), diag(n - 2), upper(n - 2), rhs(n - 2);
    double r = residual(alpha, G);
    int it = 0;
    for (; it < 100 && r > 1e-14; ++it) {
        for (int i = 1; i + 1 < n; ++i) {
            diag[i - 1] = -2.0 * k - drive_slope(alpha[i]) * s2 - m.Gc / l2;
            lower[i - 1] = upper[i - 1] = k;
            rhs[i - 1] = -G[i];
        }
        const auto step = solve_tridiagonal(lower, diag, upper, rhs);
        double lambda = 1.0;
        bool accepted = false;
        for (int h = 0; h < 40; ++h) {
            Field trial = alpha;
            for (int i = 1; i + 1 < n; ++i) trial[i] += lambda * step[i - 1];
            std::vector<double> Gt;
            const double rt = residual(trial, Gt);
            if (rt <= (1.0 - 1e-4 * lambda) * r) {
                alpha = std::move(trial);
                G = std::move(Gt);
                r = rt;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) break;
    }
    if (r > 1e-10) throw NonConvergence("damage solve", r, it);
    return alpha;
}

inline double damage_residual(double sigma, const ModelParams& m, const Field& alpha) {
    const StiffnessLaw& st = m.stiffness;
    const double dx = alpha.grid.dx();
    const double l2 = m.ell * m.ell;
    const double k = m.Gc * l2 / (dx * dx);
    const double scale = 2.0 * k + m.Gc / l2;
    double r = 0.0;
    for (int i = 1; i + 1 < alpha.size(); ++i) {
        const double C = st.value(alpha[i]);
        const double G = k * (alpha[i - 1] - 2.0 * alpha[i] + alpha[i + 1]) - st.slope(alpha[i]) / (2.0 * C * C) * sigma * sigma -
                         m.Gc * (alpha[i] - 1.0) / l2;
        r = std::max(r, std::fabs(G) / scale);
    }
    return r;
}

// eps = sigma / C(alpha); v = cumulative trapezoid of pi starting from -v_inf.
inline std::pair<Field, Field> recover_strain_velocity(double sigma, const Field& alpha, const Field& pi, double v_inf,
                                                       const StiffnessLaw& st) {
    const Grid1D& g = pi.grid;
    Field eps(g), v(g);
    for (int i = 0; i < g.size(); ++i) eps[i] = sigma / st.value(alpha[i]);
    v[0] = -v_inf;
    for (int i = 1; i < g.size(); ++i) v[i] = v[i - 1] + 0.5 * g.dx() * (pi[i - 1] + pi[i]);
    return {eps, v};
}

inline void recover_strain_velocity(SteadyState& s, const ModelParams& m) {
    auto [eps, v] = recover_strain_velocity(s.sigma, s.alpha, s.pi, s.v_inf, m.stiffness);
    s.eps = std::move(eps);
    s.v = std::move(v);
}

namespace detail {

struct CoupledGuess {
    Field theta, pi;
    double sigma;
};

// Plastic rate with the yield excess e replaced by (e + sqrt(e^2 + delta^2))/2; delta = 0 is exact.
// Returns the rate and its derivative with respect to the drive.
inline std::pair<double, double> smoothed_rate(double drive, double theta, double delta, const FrictionLaw& law) {
    const double e = std::fabs(drive) - yield_threshold(theta, law);
    double es, des;
    if (delta > 0.0) {
        const double r = std::hypot(e, delta);
        es = 0.5 * (e + r);
        des = 0.5 * (1.0 + e / r);
    } else {
        es = std::max(e, 0.0);
        des = e > 0.0 ? 1.0 : 0.0;
    }
    const double p = law.A_inverse(es);
    const double dp = des / law.A_slope(p);
    return {drive >= 0.0 ? p : -p, dp};
}

// Coupled (theta, pi, sigma) system. Unknowns: interior theta, the free pi nodes
// (all nodes when eta = 0, interior when eta > 0) and sigma.
class CoupledSystem {
public:
    CoupledSystem(const ModelParams& m, const Grid1D& g, double v_inf)
        : m_(m), g_(g), v_inf_(v_inf), n_(g.size()), N_(n_ - 2), pinned_(m.eta > 0.0),
          p_first_(pinned_ ? 1 : 0), p_count_(pinned_ ? N_ : n_), dim_(N_ + p_count_ + 1) {
        const double dx = g.dx();
        k_ = m.kappa / (dx * dx);
        ke_ = m.eta / (dx * dx);
        tscale_ = theta_row_scale(m, dx);
    }

    int dim() const { return dim_; }

    // Residual vector; returns its sup-norm. delta > 0 smooths the yield kink.
    double residual(const CoupledGuess& c, std::vector<double>& R, double delta) const {
        R.assign(dim_, 0.0);
        for (int i = 1; i + 1 < n_; ++i) {
            const double F = k_ * (c.theta[i - 1] - 2.0 * c.theta[i] + c.theta[i + 1]) + aging_rhs(c.theta[i], c.pi[i], m_.aging);
            R[i - 1] = F / tscale_;
        }
        for (int i = p_first_; i < p_first_ + p_count_; ++i)
            R[p_index(i)] = c.pi[i] - smoothed_rate(drive(c, i), c.theta[i], delta, m_.friction).first;
        R[dim_ - 1] = (integrate(c.pi) - 2.0 * v_inf_) / (2.0 * g_.H());
        double r = 0.0;
        for (double x : R) r = std::max(r, std::fabs(x));
        return r;
    }

    // Jacobian; shift is subtracted from the theta-row diagonal (pseudo-time term).
    Eigen::SparseMatrix<double> jacobian(const CoupledGuess& s, double delta, double shift) const {
        const FrictionLaw& law = m_.friction;
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(8 * dim_);
        for (int i = 1; i + 1 < n_; ++i) {
            const int row = i - 1;
            const double d = -2.0 * k_ + m_.aging.f0_slope(s.theta[i]) - std::fabs(s.pi[i]) * m_.aging.f1_slope(s.theta[i]);
            trip.emplace_back(row, row, d / tscale_ - shift);
            if (i > 1) trip.emplace_back(row, row - 1, k_ / tscale_);
            if (i + 2 < n_) trip.emplace_back(row, row + 1, k_ / tscale_);
            const double sg = s.pi[i] < 0.0 ? -1.0 : 1.0;
            trip.emplace_back(row, p_index(i), -sg * m_.aging.f1(s.theta[i]) / tscale_);
        }
        for (int i = p_first_; i < p_first_ + p_count_; ++i) {
            const int row = p_index(i);
            const double dr = drive(s, i);
            const double d = smoothed_rate(dr, s.theta[i], delta, law).second;
            trip.emplace_back(row, row, 1.0 + (pinned_ ? 2.0 * d * ke_ : 0.0));
            if (pinned_) {
                if (i > 1) trip.emplace_back(row, p_index(i - 1), -d * ke_);
                if (i + 2 < n_) trip.emplace_back(row, p_index(i + 1), -d * ke_);
            }
            if (i >= 1 && i + 1 < n_ && d != 0.0) {
                const double sg = dr >= 0.0 ? 1.0 : -1.0;
                trip.emplace_back(row, i - 1, sg * law.B_slope(s.theta[i]) * d);
            }
            trip.emplace_back(row, dim_ - 1, -d);
        }
        for (int i = p_first_; i < p_first_ + p_count_; ++i)
            trip.emplace_back(dim_ - 1, p_index(i), g_.weight(i) / (2.0 * g_.H()));
        Eigen::SparseMatrix<double> J(dim_, dim_);
        J.setFromTriplets(trip.begin(), trip.end());
        return J;
    }

    // s + lambda * step; false if theta leaves [0, inf).
    bool apply(const CoupledGuess& s, const Eigen::VectorXd& step, double lambda, CoupledGuess& t) const {
        t = s;
        for (int i = 1; i + 1 < n_; ++i) {
            t.theta[i] = s.theta[i] + lambda * step[i - 1];
            if (!(t.theta[i] >= 0.0)) return false;
        }
        for (int i = p_first_; i < p_first_ + p_count_; ++i) t.pi[i] = s.pi[i] + lambda * step[p_index(i)];
        t.sigma = s.sigma + lambda * step[dim_ - 1];
        symmetrize(t.theta);
        symmetrize(t.pi);
        return true;
    }

private:
    int p_index(int node) const { return N_ + node - p_first_; }
    double drive(const CoupledGuess& c, int i) const {
        double d = c.sigma;
        if (pinned_) d += ke_ * (c.pi[i - 1] - 2.0 * c.pi[i] + c.pi[i + 1]);
        return d;
    }

    const ModelParams& m_;
    Grid1D g_;
    double v_inf_;
    int n_, N_;
    bool pinned_;
    int p_first_, p_count_, dim_;
    double k_ = 0.0, ke_ = 0.0, tscale_ = 1.0;
};

inline bool solve_linear(const Eigen::SparseMatrix<double>& J, const std::vector<double>& R, Eigen::VectorXd& step) {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(J);
    if (lu.info() != Eigen::Success) return false;
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(R.size()));
    for (std::size_t i = 0; i < R.size(); ++i) rhs[static_cast<Eigen::Index>(i)] = -R[i];
    step = lu.solve(rhs);
    return lu.info() == Eigen::Success && step.allFinite();
}

inline double sum_squares(const std::vector<double>& v) {
    double q = 0.0;
    for (double x : v) q += x * x;
    return q;
}

// Semismooth Newton with Armijo backtracking (factor 0.5, at most 40 halvings).
// Returns true on convergence; the guess is overwritten with the last iterate.
inline bool coupled_newton(const ModelParams& m, double v_inf, CoupledGuess& s, int max_it = 100,
                           double delta = 0.0) {
    const CoupledSystem sys(m, s.theta.grid, v_inf);
    const double tol = delta > 0.0 ? 1e-10 : 1e-12;
    std::vector<double> R, Rt;
    double r = sys.residual(s, R, delta);
    for (int it = 0; it < max_it; ++it) {
        if (r < tol) return true;
        Eigen::VectorXd step;
        if (!solve_linear(sys.jacobian(s, delta, 0.0), R, step)) return false;
        const double m0 = sum_squares(R);
        double lambda = 1.0;
        bool accepted = false;
        CoupledGuess t;
        for (int h = 0; h < 40; ++h, lambda *= 0.5) {
            if (!sys.apply(s, step, lambda, t)) continue;
            const double rt = sys.residual(t, Rt, delta);
            if (sum_squares(Rt) <= (1.0 - 1e-4 * lambda) * m0 || rt < tol) {
                s = std::move(t);
                R.swap(Rt);
                r = rt;
                accepted = true;
                break;
            }
        }
        if (!accepted) return false;
    }
    return r < tol;
}

// Pseudo-transient continuation: linearized implicit Euler in a pseudo-time for theta
// with sigma and pi kept algebraic; the pseudo step grows as the residual falls.
inline bool pseudo_transient(const ModelParams& m, double v_inf, CoupledGuess& s, int max_steps = 20000) {
    const CoupledSystem sys(m, s.theta.grid, v_inf);
    const double delta = 1e-6;
    {
        auto pisol = solve_pi_given_theta(m, s.theta, v_inf, &s.pi);
        s.pi = pisol.pi;
        s.sigma = pisol.sigma;
    }
    std::vector<double> R, Rt;
    double r = sys.residual(s, R, delta);
    double dt = 1e-2;
    for (int it = 0; it < max_steps; ++it) {
        if (r < 1e-9) break;
        Eigen::VectorXd step;
        if (!solve_linear(sys.jacobian(s, delta, 1.0 / dt), R, step)) return false;
        CoupledGuess t;
        if (!sys.apply(s, step, 1.0, t)) {
            dt *= 0.25;
            if (dt < 1e-10) return false;
            continue;
        }
        const double rt = sys.residual(t, Rt, delta);
        if (!(rt < 10.0 * r)) {
            dt *= 0.25;
            if (dt < 1e-10) return false;
            continue;
        }
        dt = std::min(1e8, dt * std::clamp(r / rt, 0.5, 2.0));
        s = std::move(t);
        R.swap(Rt);
        r = rt;
    }
    return coupled_newton(m, v_inf, s, 100, delta) && coupled_newton(m, v_inf, s);
}

// Exact Newton, then smoothing continuation in delta if the exact iteration stalls.
inline bool robust_newton(const ModelParams& m, double v_inf, CoupledGuess& s) {
    CoupledGuess t = s;
    if (coupled_newton(m, v_inf, t)) {
        s = std::move(t);
        return true;
    }
    t = s;
    for (double delta = 1e-2; delta > 1e-11; delta *= 0.1) {
        if (!coupled_newton(m, v_inf, t, 100, delta)) return false;
    }
    if (!coupled_newton(m, v_inf, t)) return false;
    s = std::move(t);
    return true;
}


inline bool picard(const ModelParams& m, double v_inf, const SteadyOptions& opt, CoupledGuess& s, int& iterations,
                   double& last_residual) {
    const Grid1D& g = s.theta.grid;
    double omega = opt.damping;
    double prev = INFINITY;
    Field pi_warm = s.pi;
    for (int it = 0; it < opt.max_iter; ++it) {
        auto pisol = solve_pi_given_theta(m, s.theta, v_inf, &pi_warm);
        Field next = solve_theta_given_pi(m, pisol.pi);
        const double d = sup_distance(next, s.theta);
        iterations = it + 1;
        last_residual = d;
        s.pi = pisol.pi;
        s.sigma = pisol.sigma;
        pi_warm = pisol.pi;
        if (d < opt.tol) {
            s.theta = std::move(next);
            return true;
        }
        if (d > prev) omega = std::max(omega * 0.5, 1.0 / 1024.0);
        else omega = std::min(opt.damping, omega * 1.25);
        prev = d;
        for (int i = 0; i < g.size(); ++i) s.theta[i] = (1.0 - omega) * s.theta[i] + omega * next[i];
        symmetrize(s.theta);
    }
    return false;
}

}  // namespace detail

// Even fixed point of theta -> S_A(S_B(theta)) and recovered alpha, eps, v.
inline SteadyState solve_steady(const ModelParams& m, const Grid1D& g, double v_inf, const SteadyOptions& opt = {}) {
    m.validate();
    SteadyState st;
    st.v_inf = v_inf;
    const double tinf = m.aging.theta_inf;
    detail::CoupledGuess s{Field(g, tinf), Field(g, 0.0), 0.0};

    if (v_inf == 0.0) {
        st.method = "trivial";
    } else {
        int iters = 0;
        double last = INFINITY;
        bool ok = false;
        try {
            ok = detail::picard(m, v_inf, opt, s, iters, last);
        } catch (const NonConvergence&) {
            ok = false;
        }
        st.iterations = iters;
        st.method = "picard";
        if (!ok && opt.newton_fallback) {
            detail::CoupledGuess t = s;
            if (detail::robust_newton(m, v_inf, t)) {
                s = std::move(t);
                ok = true;
                st.method = "newton";
            }
        }
        if (!ok && opt.newton_fallback) {
            detail::CoupledGuess t{Field(g, tinf), Field(g, 0.0), 0.0};
            bool pt = false;
            try {
                pt = detail::pseudo_transient(m, v_inf, t);
            } catch (const NonConvergence&) {
                pt = false;
            }
            if (pt) {
                s = std::move(t);
                ok = true;
                st.method = "pseudo-transient";
            }
        }
        if (!ok && opt.continuation && opt.newton_fallback && m.kappa > 0.0) {
            // Walk kappa down geometrically from a value where the fixed-point iteration is reliable.
            ModelParams mc = m;
            mc.kappa = std::max(m.kappa, 0.04);
            SteadyOptions inner = opt;
            inner.continuation = false;
            detail::CoupledGuess cur{Field(g, tinf), Field(g, 0.0), 0.0};
            int ci = 0;
            double cl = 0.0;
            bool anchored = false;
            try {
                anchored = detail::picard(mc, v_inf, inner, cur, ci, cl) || detail::robust_newton(mc, v_inf, cur);
            } catch (const NonConvergence&) {
                anchored = false;
            }
            double ratio = 0.7;
            int steps = 0;
            while (anchored && mc.kappa > m.kappa && steps < 2000) {
                ++steps;
                ModelParams trial = mc;
                trial.kappa = std::max(m.kappa, mc.kappa * ratio);
                detail::CoupledGuess t = cur;
                if (detail::robust_newton(trial, v_inf, t)) {
                    mc = trial;
                    cur = std::move(t);
                    ratio = std::max(0.5, ratio * ratio);
                } else {
                    ratio = std::sqrt(ratio);
                    if (ratio > 0.999) break;
                }
            }
            if (anchored && mc.kappa == m.kappa) {
                s = std::move(cur);
                ok = true;
                st.method = "continuation";
                st.iterations += steps;
            } else {
                last = detail::theta_residual(m, s.pi, s.theta);
            }
        }
        if (!ok) throw NonConvergence("steady fixed point", last, st.iterations);
    }

    st.theta = s.theta;
    st.pi = s.pi;
    st.sigma = s.sigma;
    st.alpha = solve_damage(st.sigma, m, g);
    recover_strain_velocity(st, m);

    st.residuals.theta = detail::theta_residual(m, st.pi, st.theta);
    {
        std::vector<double> sv(g.size(), st.sigma);
        FlowRuleProblem pb;
        pb.s = &sv;
        pb.theta = &st.theta.values;
        pb.eta = m.eta;
        pb.dx = g.dx();
        pb.pin_boundary = m.eta > 0.0;
        pb.law = &m.friction;
        st.residuals.pi = flow_rule_kkt_residual(pb, st.pi.values);
    }
    st.residuals.constraint = std::fabs(integrate(st.pi) - 2.0 * v_inf);
    st.residuals.damage = damage_residual(st.sigma, m, st.alpha);
    if (v_inf != 0.0) {
        auto pisol = solve_pi_given_theta(m, st.theta, v_inf, &st.pi);
        st.residuals.fixed_point = sup_distance(solve_theta_given_pi(m, pisol.pi), st.theta);
    }
    return st;
}

inline void write_steady_csv(std::ostream& os, const SteadyState& s) {
    os << "# sigma=" << format_number(s.sigma) << '\n';
    os << "# v_inf=" << format_number(s.v_inf) << '\n';
    os << "# h_star=" << format_number(s.h_star()) << '\n';
    os << "# residual_theta=" << format_number(s.residuals.theta) << '\n';
    os << "# residual_pi=" << format_number(s.residuals.pi) << '\n';
    os << "# residual_constraint=" << format_number(s.residuals.constraint) << '\n';
    os << "# residual_damage=" << format_number(s.residuals.damage) << '\n';
    os << "# residual_fixed_point=" << format_number(s.residuals.fixed_point) << '\n';
    os << "# iterations=" << s.iterations << '\n';
    os << "# method=" << s.method << '\n';
    os << "x,theta,pi,alpha,eps,v\n";
    for (int i = 0; i < s.theta.size(); ++i) {
        os << format_number(s.theta.grid.x(i)) << ',' << format_number(s.theta[i]) << ',' << format_number(s.pi[i]) << ','
           << format_number(s.alpha[i]) << ',' << format_number(s.eps[i]) << ',' << format_number(s.v[i]) << '\n';
    }
}

}  // namespace rsf
