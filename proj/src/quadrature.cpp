// SPDX-License-Identifier: Apache-2.0
#include "allee/quadrature.hpp"

#include <array>
#include <stdexcept>

namespace allee {

QuadratureRule composite_gauss_legendre(double lower, double upper, int panels) {
    if (panels < 1 || !(upper > lower)) throw std::invalid_argument("bad quadrature interval");
    static constexpr std::array<double, 5> x{-0.9061798459386639927976269, -0.5384693101056830910363144, 0.0,
                                             0.5384693101056830910363144, 0.9061798459386639927976269};
    static constexpr std::array<double, 5> w{0.2369268850561890875142640, 0.4786286704993664680412915,
                                             0.5688888888888888888888889, 0.4786286704993664680412915,
                                             0.2369268850561890875142640};
    QuadratureRule rule;
    rule.nodes.reserve(static_cast<size_t>(panels) * 5);
    rule.weights.reserve(static_cast<size_t>(panels) * 5);
    const double width = (upper - lower) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = lower + (p + 0.5) * width;
        for (size_t k = 0; k < 5; ++k) {
            rule.nodes.push_back(mid + 0.5 * width * x[k]);
            rule.weights.push_back(0.5 * width * w[k]);
        }
    }
    return rule;
}

}  // namespace allee
