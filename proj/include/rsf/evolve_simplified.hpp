#pragma once

// Simplified model: scalar stress ODE coupled to the aging reaction-diffusion equation,
//   sigma' = (C/H) v_inf(t) - (C/2H) int Pi(sigma, theta) dx
//   theta_t = kappa theta_xx + f0(theta) - |Pi(sigma, theta)| f1(theta),  theta(+-H) = theta_inf.

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "rsf/aging_step.hpp"
#include "rsf/errors.hpp"
#include "rsf/grid.hpp"
#include "rsf/model.hpp"

namespace rsf {

struct SimpleState {
    double t = 0.0;
    double sigma = 0.0;
    Field theta;
    Field pi;
};

inline Field plastic_rate_field(double sigma, const Field& theta, const FrictionLaw& law) {
    Field p(theta.grid);
    for (int i = 0; i < theta.size(); ++i) p[i] = plastic_rate_Pi(sigma, theta[i], law);
    return p;
}

inline SimpleState make_simple_state(double sigma, const Field& theta, const ModelParams& m, double t = 0.0) {
    return {t, sigma, theta, plastic_rate_field(sigma, theta, m.friction)};
}

// Interior values raised by delta and capped at theta_inf; the boundary values are kept.
inline Field perturbed_profile(const Field& theta, double delta, double theta_inf) {
    Field out = theta;
    for (int i = 1; i + 1 < theta.size(); ++i) out[i] = std::min(theta_inf, theta[i] + delta);
    return out;
}

// Implicit stress update: sigma+ + (C tau/2H) int Pi(sigma+, theta) = sigma + (C tau/H) v_inf.
inline double implicit_stress_step(double sigma, const Field& theta, double tau, double v_inf, const ModelParams& m) {
    const double c = m.C() * tau / (2.0 * m.H);
    const double r = sigma + m.C() * tau / m.H * v_inf;
    const Grid1D& g = theta.grid;
    auto phi = [&](double s, double& d) {
        double I = 0.0, dI = 0.0;
        for (int i = 0; i < g.size(); ++i) {
            I += g.weight(i) * plastic_rate_Pi(s, theta[i], m.friction);
            dI += g.weight(i) * plastic_rate_dsigma(s, theta[i], m.friction);
        }
        d = 1.0 + c * dI;
        return s + c * I - r;
    };
    double d = 0.0;
    double fr = phi(r, d);
    if (fr == 0.0) return r;  // stick: exact linear loading
    double lo = std::min(0.0, r), hi = std::max(0.0, r);
    double s = r;
    double f = fr;
    for (int it = 0; it < 200; ++it) {
        if (f > 0.0) hi = s; else lo = s;
        if (std::fabs(f) <= 1e-15 * std::max(1.0, std::fabs(r)) || hi - lo <= 4e-16 * std::max(1.0, std::fabs(hi)))
            return s;
        double next = s - f / d;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        s = next;
        f = phi(s, d);
    }
    if (std::fabs(f) < 1e-10) return s;
    throw NonConvergence("implicit stress step", f, 200);
}

// Stress first, then aging with pi+ = Pi(sigma+, theta_old) frozen in the f1 coefficient.
inline SimpleState step_sm(const SimpleState& s, double tau, double v_inf, const ModelParams& m) {
    if (!(tau > 0.0)) throw std::invalid_argument("step_sm: tau must be positive");
    SimpleState out;
    out.t = s.t + tau;
    out.sigma = implicit_stress_step(s.sigma, s.theta, tau, v_inf, m);
    const Field frozen = plastic_rate_field(out.sigma, s.theta, m.friction);
    out.theta = implicit_aging_step(s.theta, frozen, tau, m);
    out.pi = plastic_rate_field(out.sigma, out.theta, m.friction);
    return out;
}

struct SmRecord {
    double t, sigma, int_pi, theta_min, theta_max;
};

struct SmProfile {
    double t;
    Field theta, pi;
};

struct SmTrajectory {
    std::vector<SmRecord> rows;
    std::vector<SmProfile> profiles;
    SimpleState final_state;
    double tau = 0.0;  // step actually used
    double theta_min_seen = 0.0, theta_max_seen = 0.0;
};

struct SmRunOptions {
    std::vector<double> probes;
    int record_every = 1;
    double richardson_tol = 1e-3;  // |one step - two half steps| in sigma at run start
};

inline SmRecord sm_record(const SimpleState& s) {
    return {s.t, s.sigma, integrate(s.pi), s.theta.min(), s.theta.max()};
}

inline SmTrajectory run_sm(const ModelParams& m, const std::function<double(double)>& v_inf, double T, double tau,
                           const Field& theta0, double sigma0, const SmRunOptions& opt = {}) {
    if (!(T > 0.0)) throw std::invalid_argument("run_sm: T must be positive");
    SimpleState s = make_simple_state(sigma0, theta0, m);
    // Richardson check on the first step
    while (tau > 1e-6) {
        const SimpleState one = step_sm(s, tau, v_inf(0.0), m);
        const SimpleState half = step_sm(step_sm(s, 0.5 * tau, v_inf(0.0), m), 0.5 * tau, v_inf(0.25 * tau), m);
        if (std::fabs(one.sigma - half.sigma) <= opt.richardson_tol) break;
        tau *= 0.5;
    }
    SmTrajectory tr;
    tr.tau = tau;
    tr.rows.push_back(sm_record(s));
    tr.theta_min_seen = s.theta.min();
    tr.theta_max_seen = s.theta.max();
    std::vector<double> probes = opt.probes;
    std::sort(probes.begin(), probes.end());
    std::size_t next_probe = 0;
    auto take_probes = [&]() {
        while (next_probe < probes.size() && probes[next_probe] <= s.t + 0.5 * tau) {
            tr.profiles.push_back({s.t, s.theta, s.pi});
            ++next_probe;
        }
    };
    take_probes();
    const long steps = static_cast<long>(std::llround(T / tau));
    for (long k = 1; k <= steps; ++k) {
        const double t0 = (k - 1) * tau;
        s = step_sm(s, tau, v_inf(t0 + 0.5 * tau), m);
        s.t = k * tau;
        tr.theta_min_seen = std::min(tr.theta_min_seen, s.theta.min());
        tr.theta_max_seen = std::max(tr.theta_max_seen, s.theta.max());
        if (k % opt.record_every == 0 || k == steps) tr.rows.push_back(sm_record(s));
        take_probes();
    }
    tr.final_state = s;
    return tr;
}

enum class Verdict { converged, oscillatory, undecided };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::converged: return "converged";
        case Verdict::oscillatory: return "oscillatory";
        default: return "undecided";
    }
}

struct RegimeReport {
    Verdict verdict = Verdict::undecided;
    double period = 0.0;
    double amplitude = 0.0;
    double distance = NAN;  // to a reference steady state, when supplied
    int maxima = 0;
};

// Classifies the tail of a trajectory. window is the fraction of rows examined.
inline RegimeReport detect_regime(const std::vector<SmRecord>& rows, double window = 0.2) {
    RegimeReport rep;
    const std::size_t n = rows.size();
    if (n < 8) return rep;
    const std::size_t first = n - std::max<std::size_t>(4, static_cast<std::size_t>(window * n));
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t i = first; i < n; ++i) {
        lo = std::min(lo, rows[i].sigma);
        hi = std::max(hi, rows[i].sigma);
    }
    rep.amplitude = hi - lo;
    if (rep.amplitude < 1e-5) {
        rep.verdict = Verdict::converged;
        return rep;
    }
    // strict local maxima of sigma over the whole record, then the last few are examined
    std::vector<std::size_t> peaks;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (rows[i].sigma > rows[i - 1].sigma && rows[i].sigma >= rows[i + 1].sigma &&
            rows[i].sigma > lo + 0.5 * rep.amplitude)
            peaks.push_back(i);
    }
    std::vector<std::size_t> tail;
    for (std::size_t p : peaks)
        if (p >= first) tail.push_back(p);
    rep.maxima = static_cast<int>(tail.size());
    if (tail.size() < 3) return rep;
    std::vector<double> gaps;
    for (std::size_t k = 1; k < tail.size(); ++k) gaps.push_back(rows[tail[k]].t - rows[tail[k - 1]].t);
    double mean = 0.0;
    for (double g : gaps) mean += g;
    mean /= gaps.size();
    for (double g : gaps)
        if (std::fabs(g - mean) > 0.02 * mean) return rep;
    // peak-to-trough amplitude per cycle must be stationary
    std::vector<double> amps;
    for (std::size_t k = 1; k < tail.size(); ++k) {
        double trough = INFINITY;
        for (std::size_t i = tail[k - 1]; i <= tail[k]; ++i) trough = std::min(trough, rows[i].sigma);
        amps.push_back(rows[tail[k]].sigma - trough);
    }
    const auto [amin, amax] = std::minmax_element(amps.begin(), amps.end());
    if (*amax - *amin > 0.02 * *amax) return rep;
    rep.verdict = Verdict::oscillatory;
    rep.period = mean;
    return rep;
}

inline void write_sm_csv(std::ostream& os, const std::vector<SmRecord>& rows) {
    os << "t,sigma,int_pi,theta_min,theta_max\n";
    for (const auto& r : rows)
        os << format_number(r.t) << ',' << format_number(r.sigma) << ',' << format_number(r.int_pi) << ','
           << format_number(r.theta_min) << ',' << format_number(r.theta_max) << '\n';
}

}  // namespace rsf
