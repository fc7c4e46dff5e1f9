// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

namespace allee {

/// Thomas algorithm for a tridiagonal system; lower[0] and upper[n-1] are ignored.
/// Stable without pivoting for diagonally dominant M-matrices, which is what the implicit transport step produces.
/// Throws std::runtime_error on a zero pivot.
class TridiagonalSolver {
public:
    TridiagonalSolver(std::span<const double> lower, std::span<const double> diag, std::span<const double> upper);

    void solve(std::span<const double> rhs, std::span<double> x) const;
    std::size_t size() const { return pivot_.size(); }

private:
    std::vector<double> lower_;
    std::vector<double> pivot_;  // reciprocal of the eliminated diagonal
    std::vector<double> upper_;  // eliminated super-diagonal
};

}  // namespace allee
