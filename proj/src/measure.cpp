// SPDX-License-Identifier: Apache-2.0
#include "allee/solver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace allee {

namespace {

constexpr double kOffHeight = 1e-6;

double parabolic_shift(double left, double mid, double right) {
    const double curv = left - 2.0 * mid + right;
    if (curv >= 0.0) return 0.0;
    return 0.5 * (left - right) / curv;
}

/// Distance from `peak` to where the line of values drops below `level`, walking in direction `step`.
/// NaN when the walk reaches the boundary first.
double crossing(std::span<const double> field, std::size_t start, std::ptrdiff_t stride, int steps, double level,
                double spacing, double peak_offset) {
    std::size_t k = start;
    for (int s = 1; s <= steps; ++s) {
        const std::size_t next = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(k) + stride);
        if (field[next] < level) {
            const double frac = (field[k] - level) / (field[k] - field[next]);
            return std::abs((s - 1 + frac) * spacing - peak_offset);
        }
        k = next;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

std::vector<SpikeMeasurement> measure_spikes(std::span<const double> field, const Grid& grid,
                                             std::span<const CriticalPoint> maxima) {
    if (field.size() != grid.size()) throw std::invalid_argument("field size does not match the grid");
    const int dim = grid.dimension();
    std::vector<SpikeMeasurement> out(maxima.size());
    if (maxima.empty()) return out;

    std::vector<std::size_t> best(maxima.size(), std::numeric_limits<std::size_t>::max());
    for (std::size_t k = 0; k < field.size(); ++k) {
        if (!std::isfinite(field[k])) throw std::invalid_argument("field is not finite");
        const Vec2 p = grid.center_of(k);
        std::size_t owner = 0;
        double closest = std::numeric_limits<double>::infinity();
        for (std::size_t m = 0; m < maxima.size(); ++m) {
            double dist = 0.0;
            for (int i = 0; i < dim; ++i) {
                const double dx = p[static_cast<std::size_t>(i)] - maxima[m].location[static_cast<std::size_t>(i)];
                dist += dx * dx;
            }
            if (dist < closest) {
                closest = dist;
                owner = m;
            }
        }
        if (best[owner] == std::numeric_limits<std::size_t>::max() || field[k] > field[best[owner]]) best[owner] = k;
    }

    const int nx = grid.cells(0);
    const int ny = dim == 2 ? grid.cells(1) : 1;
    for (std::size_t m = 0; m < maxima.size(); ++m) {
        SpikeMeasurement& s = out[m];
        if (best[m] == std::numeric_limits<std::size_t>::max()) continue;
        const std::size_t k = best[m];
        s.height = field[k];
        s.off = !(s.height >= kOffHeight);
        const int i = static_cast<int>(k % static_cast<std::size_t>(nx));
        const int j = static_cast<int>(k / static_cast<std::size_t>(nx));
        const double level = s.height / std::exp(1.0);

        double widths = 0.0;
        int found = 0;
        auto side = [&](double w) {
            if (std::isfinite(w)) {
                widths += w;
                ++found;
            }
        };

        const double hx = grid.spacing(0);
        double shift_x = 0.0;
        if (i > 0 && i + 1 < nx) shift_x = parabolic_shift(field[k - 1], field[k], field[k + 1]) * hx;
        const Vec2 c = grid.center_of(k);
        s.offset[0] = c[0] + shift_x - maxima[m].location[0];
        side(crossing(field, k, -1, i, level, hx, -shift_x));
        side(crossing(field, k, +1, nx - 1 - i, level, hx, shift_x));

        if (dim == 2) {
            const double hy = grid.spacing(1);
            const auto row = static_cast<std::size_t>(nx);
            double shift_y = 0.0;
            if (j > 0 && j + 1 < ny) shift_y = parabolic_shift(field[k - row], field[k], field[k + row]) * hy;
            s.offset[1] = c[1] + shift_y - maxima[m].location[1];
            side(crossing(field, k, -static_cast<std::ptrdiff_t>(row), j, level, hy, -shift_y));
            side(crossing(field, k, static_cast<std::ptrdiff_t>(row), ny - 1 - j, level, hy, shift_y));
        }
        s.half_width = found > 0 ? widths / found : std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

}  // namespace allee
