// SPDX-License-Identifier: Apache-2.0
#include "allee/tridiagonal.hpp"

#include <stdexcept>

namespace allee {

TridiagonalSolver::TridiagonalSolver(std::span<const double> lower, std::span<const double> diag,
                                     std::span<const double> upper)
    : lower_(lower.begin(), lower.end()), pivot_(diag.size()), upper_(diag.size()) {
    const std::size_t n = diag.size();
    if (lower.size() != n || upper.size() != n) throw std::invalid_argument("tridiagonal bands differ in length");
    double prev_upper = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = diag[i] - (i > 0 ? lower[i] * prev_upper : 0.0);
        if (d == 0.0) throw std::runtime_error("zero pivot in tridiagonal solve");
        pivot_[i] = 1.0 / d;
        upper_[i] = i + 1 < n ? upper[i] * pivot_[i] : 0.0;
        prev_upper = upper_[i];
    }
}

void TridiagonalSolver::solve(std::span<const double> rhs, std::span<double> x) const {
    const std::size_t n = pivot_.size();
    if (rhs.size() != n || x.size() != n) throw std::invalid_argument("tridiagonal solve size mismatch");
    double prev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        prev = (rhs[i] - (i > 0 ? lower_[i] * prev : 0.0)) * pivot_[i];
        x[i] = prev;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= upper_[i] * x[i + 1];
}

}  // namespace allee
