#pragma once

// Damage-free evolution with inertia:
//   rho v_t = (C eps)_x,  eps_t = v_x - pi,  mu(pi, theta) Sign(pi) + eta... contains C eps + eta pi_xx,
//   theta_t = kappa theta_xx + f0(theta) - |pi| f1(theta)
// with v(+-H) = +-v_inf(t), pi(+-H) = 0, theta(+-H) = theta_inf.
//
// Space: eps, p, pi, theta, xi live on the grid nodes; v lives on the cell midpoints,
// with the Dirichlet values at x = +-H. The nodal difference D and the midpoint
// difference G satisfy exact summation by parts, so the discrete energy identity
// holds up to the implicit Euler numerical dissipation.
// Time: per step, (v, eps, pi) minimize a convex functional with theta frozen, then
// theta takes an implicit aging step with the new pi.

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <vector>

#include "rsf/aging_step.hpp"
#include "rsf/errors.hpp"
#include "rsf/flow_rule.hpp"
#include "rsf/grid.hpp"
#include "rsf/linalg.hpp"
#include "rsf/model.hpp"

namespace rsf {

struct EvolState {
    double t = 0.0;
    Field v;                     // nodal velocity (midpoint average inside, boundary data at the ends)
    Field eps, p, pi, theta, xi;
    std::vector<double> v_mid;   // primary velocity unknowns, size N+1
};

struct EnergyLedger {
    double kinetic = 0.0;
    double stored = 0.0;
    double dissipated = 0.0;
    double work = 0.0;
    double residual = 0.0;
    double initial = 0.0;  // kinetic + stored at the start of the run
};

struct LedgerRow {
    double t, kinetic, stored, dissipated, work, residual;
};

struct StepStats {
    int inner_iterations = 0;
    double functional = 0.0;
    bool monotone = true;  // functional never increased across inner iterations
    double kkt = 0.0;
};

inline Field nodal_velocity(const std::vector<double>& v_mid, double v_inf, const Grid1D& g) {
    Field v(g);
    const int n = g.size();
    v[0] = -v_inf;
    v[n - 1] = v_inf;
    for (int i = 1; i + 1 < n; ++i) v[i] = 0.5 * (v_mid[i - 1] + v_mid[i]);
    return v;
}

// Rest state with an affine velocity profile matching the boundary data.
inline EvolState initial_state(const ModelParams& m, const Grid1D& g, double v_inf0 = 0.0) {
    EvolState s;
    const int n = g.size();
    s.v_mid.resize(n - 1);
    for (int j = 0; j + 1 < n; ++j) s.v_mid[j] = v_inf0 * (g.x(j) + 0.5 * g.dx()) / g.H();
    s.v = nodal_velocity(s.v_mid, v_inf0, g);
    s.eps = Field(g, 0.0);
    s.p = Field(g, 0.0);
    s.pi = Field(g, 0.0);
    s.theta = Field(g, m.aging.theta_inf);
    s.xi = Field(g, 0.0);
    return s;
}

// Stationary sliding state from steady profiles: uniform strain sigma/C and a velocity
// that integrates pi from -v_inf. Interior theta is raised by perturbation, capped at theta_inf.
inline EvolState state_from_profiles(const ModelParams& m, const Field& theta, const Field& pi, double sigma,
                                     double v_inf, double perturbation = 0.0) {
    const Grid1D& g = theta.grid;
    EvolState s = initial_state(m, g, v_inf);
    s.theta = theta;
    for (int i = 1; i + 1 < g.size(); ++i) s.theta[i] = std::min(m.aging.theta_inf, theta[i] + perturbation);
    s.pi = pi;
    s.eps = Field(g, sigma / m.C());
    double acc = -v_inf;
    for (int j = 0; j + 1 < g.size(); ++j) {
        const double cell = 0.5 * g.dx() * (pi[j] + pi[j + 1]);
        s.v_mid[j] = acc + 0.5 * cell;
        acc += cell;
    }
    s.v = nodal_velocity(s.v_mid, v_inf, g);
    return s;
}

inline double kinetic_energy(const EvolState& s, const ModelParams& m) {
    double k = 0.0;
    const double dx = s.eps.grid.dx();
    for (double v : s.v_mid) k += 0.5 * dx * m.rho * v * v;
    return k;
}

inline double stored_energy(const EvolState& s, const ModelParams& m) {
    double e = 0.0;
    for (int i = 0; i < s.eps.size(); ++i) e += 0.5 * s.eps.grid.weight(i) * m.C() * s.eps[i] * s.eps[i];
    return e;
}

class FullStepper {
public:
    FullStepper(const ModelParams& m, const Grid1D& g) : m_(m), g_(g), n_(g.size()) {
        if (!(m.rho > 0.0)) throw ConfigError("evolution with inertia needs rho > 0");
        if (m.stiffness.mode != StiffnessMode::constant)
            throw ConfigError("evolution is damage-free: constant stiffness only");
    }

    int max_inner = 5000;
    double functional_tol = 1e-12;
    double rate_tol = 1e-11;

    // One step of length tau with boundary velocity v_inf_k.
    EvolState step(const EvolState& s, double tau, double v_inf_k, EnergyLedger* ledger = nullptr,
                   StepStats* stats = nullptr) const {
        const double C = m_.C();
        const double dx = g_.dx();
        std::vector<double> pi = s.pi.values;
        std::vector<double> v = s.v_mid;
        std::vector<double> E(n_), s_tr(n_);

        FlowRuleProblem pb;
        pb.s = &s_tr;
        pb.theta = &s.theta.values;
        pb.c = C * tau;
        pb.eta = m_.eta;
        pb.dx = dx;
        pb.pin_boundary = true;
        pb.law = &m_.friction;

        double phi_prev = INFINITY;
        StepStats st;
        int it = 0;
        for (; it < max_inner; ++it) {
            solve_velocity(s, pi, tau, v_inf_k, v);
            trial_strain(s, v, tau, v_inf_k, s_tr);
            for (double& x : s_tr) x *= C;
            std::vector<double> next = solve_flow_rule(pb, pi).pi;
            double change = 0.0, scale = 1.0;
            for (int i = 0; i < n_; ++i) {
                change = std::max(change, std::fabs(next[i] - pi[i]));
                scale = std::max(scale, std::fabs(next[i]));
            }
            pi = std::move(next);
            const double phi = functional(s, v, pi, tau, v_inf_k);
            if (phi > phi_prev + 1e-12 * std::max(1.0, std::fabs(phi))) st.monotone = false;
            const bool done = phi_prev - phi < functional_tol * std::max(1.0, std::fabs(phi)) && change < rate_tol * scale;
            phi_prev = phi;
            st.functional = phi;
            if (done && it > 0) break;
        }
        if (it >= max_inner) throw NonConvergence("staggered step: inner alternation", phi_prev, it);
        st.inner_iterations = it + 1;
        // consistent velocity for the final plastic rate
        solve_velocity(s, pi, tau, v_inf_k, v);
        trial_strain(s, v, tau, v_inf_k, E);
        for (int i = 0; i < n_; ++i) E[i] -= tau * pi[i];

        EvolState out;
        out.t = s.t + tau;
        out.v_mid = v;
        out.v = nodal_velocity(v, v_inf_k, g_);
        out.eps = Field(g_, E);
        out.pi = Field(g_, pi);
        out.p = s.p;
        for (int i = 0; i < n_; ++i) out.p[i] += tau * pi[i];
        out.xi = Field(g_, 0.0);
        {
            std::vector<double> lap;
            detail::apply_laplacian(pi, dx, lap);
            for (int i = 0; i < n_; ++i) {
                if (std::fabs(pi[i]) > 1e-12) {
                    out.xi[i] = pi[i] > 0.0 ? 1.0 : -1.0;
                } else {
                    const double drive = C * E[i] + m_.eta * lap[i];
                    out.xi[i] = std::clamp(drive / yield_threshold(s.theta[i], m_.friction), -1.0, 1.0);
                }
            }
            std::vector<double> sE(n_);
            for (int i = 0; i < n_; ++i) sE[i] = C * E[i];
            FlowRuleProblem chk = pb;
            chk.c = 0.0;
            chk.s = &sE;
            st.kkt = flow_rule_kkt_residual(chk, pi);
        }
        out.theta = implicit_aging_step(s.theta, out.pi, tau, m_);

        if (ledger) {
            double diss = 0.0;
            for (int i = 0; i < n_; ++i) diss += g_.weight(i) * mu(pi[i], s.theta[i], m_.friction) * std::fabs(pi[i]);
            for (int i = 0; i + 1 < n_; ++i) diss += m_.eta * (pi[i + 1] - pi[i]) * (pi[i + 1] - pi[i]) / dx;
            ledger->dissipated += tau * diss;
            ledger->work += tau * C * (E[n_ - 1] * v_inf_k + E[0] * v_inf_k);
            ledger->kinetic = kinetic_energy(out, m_);
            ledger->stored = stored_energy(out, m_);
            ledger->residual = ledger->kinetic + ledger->stored + ledger->dissipated - ledger->initial - ledger->work;
        }
        if (stats) *stats = st;
        return out;
    }

    // Step functional of (v, pi) with eps eliminated.
    double functional(const EvolState& s, const std::vector<double>& v, const std::vector<double>& pi, double tau,
                      double v_inf_k) const {
        const double C = m_.C();
        const double dx = g_.dx();
        std::vector<double> E(n_);
        trial_strain(s, v, tau, v_inf_k, E);
        double phi = 0.0;
        for (std::size_t j = 0; j < v.size(); ++j) phi += dx * m_.rho * (v[j] - s.v_mid[j]) * (v[j] - s.v_mid[j]) / (2.0 * tau);
        for (int i = 0; i < n_; ++i) {
            const double e = E[i] - tau * pi[i];
            phi += g_.weight(i) * (C * e * e / (2.0 * tau) + dissipation_R(pi[i], s.theta[i], m_.friction));
        }
        for (int i = 0; i + 1 < n_; ++i) phi += 0.5 * m_.eta * (pi[i + 1] - pi[i]) * (pi[i + 1] - pi[i]) / dx;
        return phi;
    }

private:
    // eps_old + tau D v at every node.
    void trial_strain(const EvolState& s, const std::vector<double>& v, double tau, double v_inf_k,
                      std::vector<double>& out) const {
        for (int i = 0; i < n_; ++i) {
            const double right = i == n_ - 1 ? v_inf_k : v[i];
            const double left = i == 0 ? -v_inf_k : v[i - 1];
            out[i] = s.eps[i] + tau * (right - left) / g_.weight(i);
        }
    }

    // Minimizes the functional over the midpoint velocities for fixed pi (SPD tridiagonal).
    void solve_velocity(const EvolState& s, const std::vector<double>& pi, double tau, double v_inf_k,
                        std::vector<double>& v) const {
        const double C = m_.C();
        const double dx = g_.dx();
        const int nm = n_ - 1;
        std::vector<double> b(n_);
        for (int i = 0; i < n_; ++i) b[i] = s.eps[i] - tau * pi[i];
        b[0] += tau * v_inf_k / g_.weight(0);
        b[n_ - 1] += tau * v_inf_k / g_.weight(n_ - 1);
        std::vector<double> lower(nm), diag(nm), upper(nm), rhs(nm);
        const double mass = dx * m_.rho / tau;
        for (int j = 0; j < nm; ++j) {
            const double hl = g_.weight(j), hr = g_.weight(j + 1);
            diag[j] = mass + C * tau * (1.0 / hl + 1.0 / hr);
            lower[j] = j > 0 ? -C * tau / hl : 0.0;
            upper[j] = j + 1 < nm ? -C * tau / hr : 0.0;
            rhs[j] = mass * s.v_mid[j] - C * (b[j] - b[j + 1]);
        }
        v = solve_tridiagonal(lower, diag, upper, rhs);
    }

    const ModelParams& m_;
    Grid1D g_;
    int n_;
};

inline EvolState step_staggered(const ModelParams& m, const EvolState& s, double tau, double v_inf_k,
                                EnergyLedger* ledger = nullptr, StepStats* stats = nullptr) {
    return FullStepper(m, s.eps.grid).step(s, tau, v_inf_k, ledger, stats);
}

struct EvolutionResult {
    std::vector<EvolState> snapshots;
    std::vector<LedgerRow> ledger_rows;
    EnergyLedger ledger;
    EvolState final_state;
    double theta_min_seen = 0.0, theta_max_seen = 0.0;
    bool functional_monotone = true;
    double max_kkt = 0.0;
    long steps = 0;
};

struct EvolutionOptions {
    std::vector<double> probes;
    int ledger_every = 1;
    double tau_floor = 1e-9;
};

namespace detail {

// Mean of f over [a, b] by three-point Gauss-Legendre.
inline double step_average(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double r = std::sqrt(0.6);
    return (5.0 * f(c - r * h) + 8.0 * f(c) + 5.0 * f(c + r * h)) / 18.0;
}

}  // namespace detail

inline EvolutionResult run_evolution(const ModelParams& m, const Grid1D& g, const std::function<double(double)>& v_inf,
                                     double T, double tau, EvolState init, const EvolutionOptions& opt = {}) {
    if (!(T > 0.0)) throw std::invalid_argument("run_evolution: T must be positive");
    const FullStepper stepper(m, g);
    EvolutionResult res;
    EvolState s = std::move(init);
    res.ledger.kinetic = kinetic_energy(s, m);
    res.ledger.stored = stored_energy(s, m);
    res.ledger.initial = res.ledger.kinetic + res.ledger.stored;
    res.ledger_rows.push_back({s.t, res.ledger.kinetic, res.ledger.stored, 0.0, 0.0, 0.0});
    res.theta_min_seen = s.theta.min();
    res.theta_max_seen = s.theta.max();

    std::vector<double> probes = opt.probes;
    std::sort(probes.begin(), probes.end());
    std::size_t next_probe = 0;
    auto take_probes = [&]() {
        while (next_probe < probes.size() && probes[next_probe] <= s.t + 0.5 * tau) {
            res.snapshots.push_back(s);
            ++next_probe;
        }
    };
    take_probes();

    // advances over [a, a + dt], splitting the step if the inner solve fails
    std::function<void(double, double)> advance = [&](double a, double dt) {
        const double vk = detail::step_average(v_inf, a, a + dt);
        StepStats st;
        try {
            EnergyLedger trial = res.ledger;
            EvolState next = stepper.step(s, dt, vk, &trial, &st);
            s = std::move(next);
            res.ledger = trial;
        } catch (const NonConvergence&) {
            if (0.5 * dt < opt.tau_floor) throw StabilityRefused("time step could not be reduced below the floor");
            advance(a, 0.5 * dt);
            advance(a + 0.5 * dt, 0.5 * dt);
            return;
        }
        res.functional_monotone = res.functional_monotone && st.monotone;
        res.max_kkt = std::max(res.max_kkt, st.kkt);
        res.theta_min_seen = std::min(res.theta_min_seen, s.theta.min());
        res.theta_max_seen = std::max(res.theta_max_seen, s.theta.max());
    };

    const long steps = static_cast<long>(std::llround(T / tau));
    for (long k = 1; k <= steps; ++k) {
        const double a = (k - 1) * tau;
        advance(a, tau);
        s.t = k * tau;
        if (k % opt.ledger_every == 0 || k == steps)
            res.ledger_rows.push_back({s.t, res.ledger.kinetic, res.ledger.stored, res.ledger.dissipated,
                                       res.ledger.work, res.ledger.residual});
        take_probes();
    }
    res.steps = steps;
    res.final_state = s;
    return res;
}

inline void write_profile_csv(std::ostream& os, const EvolState& s) {
    os << "x,v,eps,p,pi,theta\n";
    for (int i = 0; i < s.eps.size(); ++i)
        os << format_number(s.eps.grid.x(i)) << ',' << format_number(s.v[i]) << ',' << format_number(s.eps[i]) << ','
           << format_number(s.p[i]) << ',' << format_number(s.pi[i]) << ',' << format_number(s.theta[i]) << '\n';
}

inline void write_ledger_csv(std::ostream& os, const std::vector<LedgerRow>& rows) {
    os << "t,kinetic,stored,dissipated,work,residual\n";
    for (const auto& r : rows)
        os << format_number(r.t) << ',' << format_number(r.kinetic) << ',' << format_number(r.stored) << ','
           << format_number(r.dissipated) << ',' << format_number(r.work) << ',' << format_number(r.residual) << '\n';
}

}  // namespace rsf
