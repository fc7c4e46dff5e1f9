// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace allee {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Composite 5-point Gauss–Legendre on [lower, upper] with `panels` equal panels.
QuadratureRule composite_gauss_legendre(double lower, double upper, int panels);

}  // namespace allee
