#pragma once

// Vanishing-diffusion limit: effective friction along the aging equilibrium,
// its primitive R, the convex hull R**, the critical rates and the plateau profile.

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rsf/errors.hpp"
#include "rsf/model.hpp"

namespace rsf {

namespace detail {

template <class F>
double simpson_rec(const F& f, double a, double b, double fa, double fm, double fb, double whole, double tol,
                   int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double diff = left + right - whole;
    if (depth <= 0 || std::fabs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
    if (b == a) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 50);
}

}  // namespace detail

// Lower convex envelope of sampled points (xs increasing), evaluated back at xs.
inline std::vector<double> lower_convex_envelope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    std::vector<std::size_t> hull;
    for (std::size_t i = 0; i < n; ++i) {
        while (hull.size() >= 2) {
            const std::size_t a = hull[hull.size() - 2], b = hull.back();
            const double cross = (xs[b] - xs[a]) * (ys[i] - ys[a]) - (ys[b] - ys[a]) * (xs[i] - xs[a]);
            if (cross <= 0.0) hull.pop_back(); else break;
        }
        hull.push_back(i);
    }
    std::vector<double> out(n);
    std::size_t seg = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (seg + 1 < hull.size() && xs[hull[seg + 1]] < xs[i]) ++seg;
        if (seg + 1 >= hull.size()) {
            out[i] = ys[hull.back()];
            continue;
        }
        const std::size_t a = hull[seg], b = hull[seg + 1];
        const double t = (xs[i] - xs[a]) / (xs[b] - xs[a]);
        out[i] = (1.0 - t) * ys[a] + t * ys[b];
    }
    return out;
}

struct ShapeReport {
    bool unimodal = true;
    double argmin_scan = 0.0;
    double bad_lo = 0.0, bad_hi = 0.0;  // first scan interval breaking the shape
};

struct PlateauProfile {
    double h = 0.0;
    double theta_in = 0.0, pi_in = 0.0;
    double theta_out = 0.0, pi_out = 0.0;
    bool uniform = false;

    double pi_at(double x) const { return std::fabs(x) < h || uniform ? pi_in : pi_out; }
    double theta_at(double x) const { return std::fabs(x) < h || uniform ? theta_in : theta_out; }
};

class EffectiveFriction {
public:
    explicit EffectiveFriction(FrictionLaw f = {}, AgingLaw a = {})
        : friction_(std::move(f)), aging_(std::move(a)), cache_(std::make_shared<Cache>()) {}

    const FrictionLaw& friction() const { return friction_; }
    const AgingLaw& aging() const { return aging_; }

    double mu_tilde(double pi) const { return mu(pi, theta_f(pi, aging_), friction_); }

    double mu_tilde_slope(double pi) const {
        pi = std::fabs(pi);
        const double th = theta_f(pi, aging_);
        const double dth = aging_.f1(th) / (aging_.f0_slope(th) - pi * aging_.f1_slope(th));
        return friction_.A_slope(pi) + friction_.B_slope(th) * dth;
    }

    // R(p) = int_0^p mu_tilde
    double R(double pi) const {
        if (pi <= 0.0) return 0.0;
        return detail::adaptive_simpson([this](double s) { return mu_tilde(s); }, 0.0, pi, 1e-12);
    }

    // Sign of R''(0+); negative means the hull has an affine piece near zero.
    double R_second_at_zero() const { return mu_tilde_slope(0.0); }

    ShapeReport scan_shape(double pi_max = 100.0, int samples = 1000) const {
        ShapeReport rep;
        std::vector<double> xs(samples + 1), ys(samples + 1);
        for (int k = 0; k <= samples; ++k) {
            const double t = static_cast<double>(k) / samples;
            xs[k] = pi_max * t * t;
            ys[k] = mu_tilde(xs[k]);
        }
        const int kmin = static_cast<int>(std::min_element(ys.begin(), ys.end()) - ys.begin());
        rep.argmin_scan = xs[kmin];
        if (kmin == 0 || kmin == samples) {
            rep.unimodal = false;
            const int k = kmin == 0 ? 0 : samples - 1;
            rep.bad_lo = xs[k];
            rep.bad_hi = xs[k + 1];
            return rep;
        }
        for (int k = 0; k < samples; ++k) {
            const bool ok = k < kmin ? ys[k + 1] < ys[k] : ys[k + 1] > ys[k];
            if (!ok) {
                rep.unimodal = false;
                rep.bad_lo = xs[k];
                rep.bad_hi = xs[k + 1];
                return rep;
            }
        }
        return rep;
    }

    double find_pi_circ() const {
        std::lock_guard<std::mutex> lock(cache_->m);
        return pi_circ_locked();
    }

    double find_pi_star() const {
        std::lock_guard<std::mutex> lock(cache_->m);
        return pi_star_locked();
    }

    // Residual of R(p) - p mu_tilde(p) at p.
    double tangency_gap(double p) const { return R(p) - p * mu_tilde(p); }

    std::pair<double, double> R_and_hull(double pi) const {
        pi = std::fabs(pi);
        double ps, Rs;
        {
            std::lock_guard<std::mutex> lock(cache_->m);
            ps = pi_star_locked();
            Rs = *cache_->R_star;
        }
        const double r = R(pi);
        if (pi >= ps) return {r, r};
        return {r, Rs * pi / ps};
    }

    PlateauProfile plateau_solution(double v_inf, double H) const {
        if (v_inf < 0.0) throw std::invalid_argument("plateau_solution expects v_inf >= 0");
        PlateauProfile p;
        p.theta_out = aging_.theta_inf;
        p.pi_out = 0.0;
        if (v_inf == 0.0) {
            p.theta_in = aging_.theta_inf;
            return p;
        }
        const double ps = find_pi_star();
        if (v_inf < ps * H) {
            p.h = v_inf / ps;
            p.pi_in = ps;
            p.theta_in = theta_f(ps, aging_);
        } else {
            p.h = H;
            p.uniform = true;
            p.pi_in = p.pi_out = v_inf / H;
            p.theta_in = p.theta_out = theta_f(v_inf / H, aging_);
        }
        return p;
    }

private:
    struct Cache {
        std::mutex m;
        std::optional<double> pi_circ, pi_star, R_star;
    };

    double pi_circ_locked() const {
        if (cache_->pi_circ) return *cache_->pi_circ;
        const ShapeReport rep = scan_shape();
        if (!rep.unimodal)
            throw ShapeViolation("effective friction is not decreasing-then-increasing", rep.bad_lo, rep.bad_hi);
        // golden section on a bracket around the scan minimum
        const double pi_max = 100.0;
        const int samples = 1000;
        const double k = std::sqrt(rep.argmin_scan / pi_max) * samples;
        const double step = 1.0 / samples;
        double a = pi_max * std::pow(std::max(0.0, k / samples - step), 2);
        double b = pi_max * std::pow(k / samples + step, 2);
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double c = b - gr * (b - a), d = a + gr * (b - a);
        double fc = mu_tilde(c), fd = mu_tilde(d);
        while (b - a > 1e-9) {
            if (fc < fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - gr * (b - a);
                fc = mu_tilde(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + gr * (b - a);
                fd = mu_tilde(d);
            }
        }
        // polish on the sign change of the slope
        double lo = std::max(0.0, a - 1e-8), hi = b + 1e-8;
        for (int k = 0; k < 40 && mu_tilde_slope(lo) >= 0.0 && lo > 0.0; ++k) lo = std::max(0.0, lo - (b - a + 1e-8) * (1 << std::min(k, 20)));
        for (int k = 0; k < 40 && mu_tilde_slope(hi) <= 0.0; ++k) hi += (b - a + 1e-8) * (1 << std::min(k, 20));
        if (mu_tilde_slope(lo) < 0.0 && mu_tilde_slope(hi) > 0.0) {
            for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
                const double m = 0.5 * (lo + hi);
                if (mu_tilde_slope(m) < 0.0) lo = m; else hi = m;
            }
        }
        cache_->pi_circ = 0.5 * (lo + hi);
        return *cache_->pi_circ;
    }

    double pi_star_locked() const {
        if (cache_->pi_star) return *cache_->pi_star;
        const double pc = pi_circ_locked();
        double lo = pc, hi = 2.0 * pc;
        int grow = 0;
        while (tangency_gap(hi) > 0.0) {
            lo = hi;
            hi *= 2.0;
            if (++grow > 60) throw BracketFailure("no tangency point for the convex hull");
        }
        double p = 0.5 * (lo + hi);
        for (int it = 0; it < 100; ++it) {
            const double g = tangency_gap(p);
            if (g > 0.0) lo = p; else hi = p;
            if (std::fabs(g) < 1e-13 || hi - lo < 1e-14) break;
            const double dg = -p * mu_tilde_slope(p);
            double next = dg != 0.0 ? p - g / dg : 0.5 * (lo + hi);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            p = next;
        }
        cache_->pi_star = p;
        cache_->R_star = R(p);
        return p;
    }

    FrictionLaw friction_;
    AgingLaw aging_;
    std::shared_ptr<Cache> cache_;
};

// Convex hull of the sampled graph of R on [0, pi_max]; used when the two-branch formula does not apply.
inline std::pair<std::vector<double>, std::vector<double>> sampled_hull(const EffectiveFriction& ef, double pi_max,
                                                                        int samples = 10000) {
    std::vector<double> xs(samples + 1), ys(samples + 1);
    double acc = 0.0;
    xs[0] = 0.0;
    ys[0] = 0.0;
    for (int k = 1; k <= samples; ++k) {
        xs[k] = pi_max * k / samples;
        acc += detail::adaptive_simpson([&](double s) { return ef.mu_tilde(s); }, xs[k - 1], xs[k], 1e-13);
        ys[k] = acc;
    }
    return {xs, lower_convex_envelope(xs, ys)};
}

}  // namespace rsf
