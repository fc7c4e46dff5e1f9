// SPDX-License-Identifier: Apache-2.0
#include "allee/solver.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace allee {

Grid::Grid(const Box& box, std::array<int, 2> cells) : box_(box), cells_(cells) {
    if (box.dim != 1 && box.dim != 2) throw std::invalid_argument("grid dimension must be 1 or 2");
    if (box.dim == 1) cells_[1] = 1;
    for (int axis = 0; axis < box.dim; ++axis) {
        if (cells_[static_cast<std::size_t>(axis)] < 16)
            throw std::invalid_argument("grid needs at least 16 cells per axis, got " +
                                        std::to_string(cells_[static_cast<std::size_t>(axis)]));
        if (!(box.upper[static_cast<std::size_t>(axis)] > box.lower[static_cast<std::size_t>(axis)]))
            throw std::invalid_argument("grid bounds must satisfy lower < upper");
    }
}

Grid::Grid(double lower, double upper, int cells) : Grid(Box{1, {lower, 0.0}, {upper, 0.0}}, {cells, 1}) {}

double Grid::spacing(int axis) const {
    const auto a = static_cast<std::size_t>(axis);
    return (box_.upper[a] - box_.lower[a]) / cells_[a];
}

std::size_t Grid::size() const {
    return static_cast<std::size_t>(cells_[0]) * static_cast<std::size_t>(box_.dim == 2 ? cells_[1] : 1);
}

double Grid::cell_volume() const { return box_.dim == 2 ? spacing(0) * spacing(1) : spacing(0); }

double Grid::center(int axis, int i) const {
    return box_.lower[static_cast<std::size_t>(axis)] + (i + 0.5) * spacing(axis);
}

Vec2 Grid::center_of(std::size_t k) const {
    const auto nx = static_cast<std::size_t>(cells_[0]);
    if (box_.dim == 1) return {center(0, static_cast<int>(k)), 0.0};
    return {center(0, static_cast<int>(k % nx)), center(1, static_cast<int>(k / nx))};
}

double Resource::operator()(const Potential& potential, std::span<const double> x) const {
    switch (kind) {
        case Kind::unit: return 1.0;
        case Kind::constant: return a0;
        case Kind::affine: return a0 + a1 * x[0];
        case Kind::exp_potential: return std::exp(potential.value(x));
    }
    return 1.0;
}

std::string_view to_string(ReactionSpec::Kind kind) {
    switch (kind) {
        case ReactionSpec::Kind::cubic_allee: return "cubic-allee";
        case ReactionSpec::Kind::logistic_allee: return "logistic-allee";
        case ReactionSpec::Kind::shared_competition: return "shared-competition";
    }
    return "cubic-allee";
}

std::string_view to_string(Termination t) {
    switch (t) {
        case Termination::steady: return "steady";
        case Termination::time_limit: return "time-limit";
        case Termination::blow_up: return "blow-up";
    }
    return "time-limit";
}

}  // namespace allee
