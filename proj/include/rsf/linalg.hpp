#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace rsf {

// Thomas algorithm for lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i].
// lower[0] and upper[n-1] are ignored. Assumes no pivoting is needed
// (diagonally dominant or SPD systems).
inline std::vector<double> solve_tridiagonal(const std::vector<double>& lower, const std::vector<double>& diag,
                                             const std::vector<double>& upper, std::vector<double> rhs) {
    const std::size_t n = diag.size();
    if (n == 0) return rhs;
    std::vector<double> c(n);
    double beta = diag[0];
    if (beta == 0.0) throw std::runtime_error("tridiagonal solve: zero pivot");
    rhs[0] /= beta;
    for (std::size_t i = 1; i < n; ++i) {
        c[i] = upper[i - 1] / beta;
        beta = diag[i] - lower[i] * c[i];
        if (beta == 0.0) throw std::runtime_error("tridiagonal solve: zero pivot");
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / beta;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i + 1] * rhs[i + 1];
    return rhs;
}

}  // namespace rsf
