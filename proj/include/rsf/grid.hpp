#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsf/errors.hpp"

namespace rsf {

// Uniform grid on [-H, H] with N interior nodes and two boundary nodes.
class Grid1D {
public:
    Grid1D() = default;
    Grid1D(double H, int interior) : H_(H), N_(interior) {
        if (!(H > 0.0)) throw ConfigError("grid: H must be positive");
        if (interior < 3 || interior % 2 == 0)
            throw ConfigError("grid: interior node count must be odd and at least 3");
        dx_ = 2.0 * H / (interior + 1);
    }

    double H() const { return H_; }
    int interior() const { return N_; }
    int size() const { return N_ + 2; }
    int center() const { return (N_ + 1) / 2; }
    double dx() const { return dx_; }
    // Symmetric by construction: x(i) = -x(size()-1-i) exactly.
    double x(int i) const {
        const int c = center();
        return (i - c) * dx_;
    }
    // Trapezoid weight of node i.
    double weight(int i) const { return (i == 0 || i == N_ + 1) ? 0.5 * dx_ : dx_; }

    bool operator==(const Grid1D& o) const { return H_ == o.H_ && N_ == o.N_; }

private:
    double H_ = 1.0;
    int N_ = 3;
    double dx_ = 0.5;
};

struct Field {
    Grid1D grid;
    std::vector<double> values;

    Field() = default;
    explicit Field(const Grid1D& g, double fill = 0.0) : grid(g), values(g.size(), fill) {}
    Field(const Grid1D& g, std::vector<double> v) : grid(g), values(std::move(v)) {
        if (static_cast<int>(values.size()) != g.size()) throw std::invalid_argument("field length mismatch");
    }
    template <class F>
    static Field from_function(const Grid1D& g, F f) {
        Field out(g);
        for (int i = 0; i < g.size(); ++i) out.values[i] = f(g.x(i));
        return out;
    }

    int size() const { return static_cast<int>(values.size()); }
    double& operator[](int i) { return values[i]; }
    double operator[](int i) const { return values[i]; }
    double max() const { return *std::max_element(values.begin(), values.end()); }
    double min() const { return *std::min_element(values.begin(), values.end()); }
};

inline double integrate(const Field& f) {
    double s = 0.0;
    for (int i = 0; i < f.size(); ++i) s += f.grid.weight(i) * f[i];
    return s;
}

inline double sup_distance(const Field& a, const Field& b) {
    double d = 0.0;
    for (int i = 0; i < a.size(); ++i) d = std::max(d, std::fabs(a[i] - b[i]));
    return d;
}

// Second central difference at interior nodes; boundary values replaced by g-/g+.
inline Field laplacian_dirichlet(const Field& f, double g_minus, double g_plus) {
    Field out(f.grid, 0.0);
    const int n = f.size();
    const double inv = 1.0 / (f.grid.dx() * f.grid.dx());
    for (int i = 1; i < n - 1; ++i) {
        const double l = i == 1 ? g_minus : f[i - 1];
        const double r = i == n - 2 ? g_plus : f[i + 1];
        out[i] = (l - 2.0 * f[i] + r) * inv;
    }
    return out;
}

// Node indices ordered by distance from the center, negative side first on ties.
inline std::vector<int> center_out_order(const Grid1D& g) {
    std::vector<int> order;
    order.reserve(g.size());
    const int c = g.center();
    order.push_back(c);
    for (int k = 1; k <= c; ++k) {
        order.push_back(c - k);
        order.push_back(c + k);
    }
    return order;
}

inline Field decreasing_rearrangement(const Field& f) {
    std::vector<double> v = f.values;
    std::sort(v.begin(), v.end(), std::greater<double>());
    Field out(f.grid);
    const auto order = center_out_order(f.grid);
    for (std::size_t k = 0; k < order.size(); ++k) out[order[k]] = v[k];
    return out;
}

inline Field increasing_rearrangement(const Field& f) {
    std::vector<double> v = f.values;
    std::sort(v.begin(), v.end());
    Field out(f.grid);
    const auto order = center_out_order(f.grid);
    for (std::size_t k = 0; k < order.size(); ++k) out[order[k]] = v[k];
    return out;
}

// Projection onto even fields.
inline void symmetrize(Field& f) {
    const int n = f.size();
    for (int i = 0; i < n / 2; ++i) {
        const double m = 0.5 * (f[i] + f[n - 1 - i]);
        f[i] = m;
        f[n - 1 - i] = m;
    }
}

inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_csv(std::ostream& os, const Field& f) {
    os << "x,value\n";
    for (int i = 0; i < f.size(); ++i) os << format_number(f.grid.x(i)) << ',' << format_number(f[i]) << '\n';
}

}  // namespace rsf
