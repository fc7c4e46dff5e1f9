// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "allee/potential.hpp"

#include <Eigen/SparseCore>

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace allee {

/// Uniform cell-centred tensor grid. 2D fields are stored row-major (x fastest).
class Grid {
public:
    Grid(const Box& box, std::array<int, 2> cells);
    Grid(double lower, double upper, int cells);

    int dimension() const { return box_.dim; }
    const Box& box() const { return box_; }
    int cells(int axis) const { return cells_[static_cast<std::size_t>(axis)]; }
    double spacing(int axis) const;
    std::size_t size() const;
    double cell_volume() const;
    /// Centre of cell i along `axis`.
    double center(int axis, int i) const;
    Vec2 center_of(std::size_t k) const;
    /// Cell-centred samples of `fn`.
    template <class F>
    std::vector<double> sample(F&& fn) const {
        std::vector<double> out(size());
        for (std::size_t k = 0; k < out.size(); ++k) {
            const Vec2 p = center_of(k);
            out[k] = fn(std::span<const double>(p.data(), static_cast<std::size_t>(dimension())));
        }
        return out;
    }

    bool operator==(const Grid&) const = default;

private:
    Box box_;
    std::array<int, 2> cells_{1, 1};
};

/// Carrying-capacity field r(x).
struct Resource {
    enum class Kind { unit, constant, affine, exp_potential };
    Kind kind = Kind::unit;
    double a0 = 1.0;
    double a1 = 0.0;

    double operator()(const Potential& potential, std::span<const double> x) const;
    bool operator==(const Resource&) const = default;
};

struct ReactionSpec {
    enum class Kind { cubic_allee, logistic_allee, shared_competition };
    Kind kind = Kind::cubic_allee;
    double mu = 1.0;
    double theta = 0.3;
    Resource resource;

    bool operator==(const ReactionSpec&) const = default;
};

std::string_view to_string(ReactionSpec::Kind kind);

/// B(x) = x / (e^x − 1)
double bernoulli(double x);

/// Exponentially fitted finite-volume discretisation of ∇·(d∇u − χ u∇A) with no-flux walls.
/// Stored as a 5-band operator: west/east along x, south/north along y (unused in 1D).
class TransportOperator {
public:
    TransportOperator(const Grid& grid, const Potential& potential, double chi, double d);

    const Grid& grid() const { return grid_; }
    double chi() const { return chi_; }
    double diffusion() const { return d_; }
    std::span<const double> potential_samples() const { return a_; }
    double potential_max() const { return a_max_; }

    std::span<const double> diag() const { return diag_; }
    std::span<const double> west() const { return west_; }
    std::span<const double> east() const { return east_; }
    std::span<const double> south() const { return south_; }
    std::span<const double> north() const { return north_; }

    void apply(std::span<const double> x, std::span<double> y) const;
    /// Same product assembled face by face, so the entries of y telescope and mass is kept to rounding.
    void apply_conservative(std::span<const double> x, std::span<double> y) const;
    /// Σ_i T_ij for each column j.
    std::vector<double> column_sums() const;
    /// exp(χ(A − max A)/d): the discrete equilibrium.
    std::vector<double> equilibrium() const;
    double norm_inf() const;

    /// Symmetrised operator S = W^{-1/2} T W^{1/2} with W = diag(equilibrium()).
    Eigen::SparseMatrix<double> symmetric_matrix() const;
    Eigen::SparseMatrix<double> matrix() const;
    /// −Σ_faces k(√B(v) y_q − √B(−v) y_p)², equal to yᵀ S y without cancellation.
    double energy(std::span<const double> y) const;

private:
    void add_face(std::size_t p, std::size_t q, double k, double v, std::vector<double>& fwd, std::vector<double>& back);

    Grid grid_;
    double chi_;
    double d_;
    std::vector<double> a_;
    double a_max_ = 0.0;
    std::vector<double> phi_;  // χ(A − max A)/d
    std::vector<double> diag_, west_, east_, south_, north_;
    struct Face {
        std::size_t p;
        std::size_t q;
        double k;
        double v;
    };
    std::vector<Face> faces_;
};

TransportOperator assemble_transport(const Grid& grid, const Potential& potential, double chi, double d);

struct Schedule {
    double t_end = 100.0;
    std::vector<double> snapshots;
    double steady_tol = 1e-9;
    double dt_initial = 1e-3;
    double dt_max = 0.25;
    int max_steps = 5'000'000;

    bool operator==(const Schedule&) const = default;
};

struct Snapshot {
    double t = 0.0;
    std::vector<double> u;
};

struct DiagnosticRow {
    double t = 0.0;
    double mass = 0.0;
    double umax = 0.0;
    double umin = 0.0;
    double reaction_integral = 0.0;
    double dt = 0.0;
};

enum class Termination { steady, time_limit, blow_up };

std::string_view to_string(Termination t);

struct Trajectory {
    std::vector<Snapshot> snapshots;
    std::vector<DiagnosticRow> diagnostics;
    Termination termination = Termination::time_limit;
    std::vector<double> final_state;
    double final_time = 0.0;
    std::size_t steps = 0;
    std::size_t rejected_steps = 0;
};

/// Implicit transport, explicit reaction. Cubic and logistic reactions only.
Trajectory run_transient(const Grid& grid, const Potential& potential, double chi, double d,
                         const ReactionSpec& reaction, std::span<const double> initial, const Schedule& schedule);

struct TwoSpeciesTrajectory {
    Trajectory u;
    Trajectory v;
};

/// Shared-competition reaction; both species advance with the same step.
TwoSpeciesTrajectory run_two_species(const Grid& grid, const Potential& potential, std::array<double, 2> chi, double d,
                                     const ReactionSpec& reaction, std::span<const double> u0,
                                     std::span<const double> v0, const Schedule& schedule);

/// Newton iteration on T u + f(u) = 0 starting from `guess`. Throws std::runtime_error on failure.
std::vector<double> solve_steady_newton(const Grid& grid, const Potential& potential, double chi, double d,
                                        const ReactionSpec& reaction, std::span<const double> guess,
                                        double tol = 1e-11, int max_iterations = 100);

/// Cell values of f'(u) for single-species reactions.
std::vector<double> reaction_derivative(const ReactionSpec& reaction, std::span<const double> u,
                                        std::span<const double> r);

struct EigenPair {
    double value = 0.0;
    std::vector<double> vector;  // max |entry| = 1, largest entry positive
    double residual = 0.0;
};

/// k largest eigenvalues of T + diag(f'(steady)).
std::vector<EigenPair> linearized_leading_eigen(const Grid& grid, const Potential& potential, double chi, double d,
                                                const ReactionSpec& reaction, std::span<const double> steady, int count);

struct SpikeMeasurement {
    double height = 0.0;
    Vec2 offset{0.0, 0.0};
    double half_width = 0.0;
    bool off = true;
};

std::vector<SpikeMeasurement> measure_spikes(std::span<const double> field, const Grid& grid,
                                             std::span<const CriticalPoint> maxima);

}  // namespace allee
