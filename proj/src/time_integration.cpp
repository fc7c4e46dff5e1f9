// SPDX-License-Identifier: Apache-2.0
#include "allee/kernels.hpp"
#include "allee/solver.hpp"
#include "allee/tridiagonal.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <memory>
#include <stdexcept>

namespace allee {

namespace {

constexpr double kNegativeClip = 1e-10;
constexpr int kMaxLevel = 400;

/// Factorisations of (I − dt·T), cached by dt.
class ImplicitTransport {
public:
    explicit ImplicitTransport(const TransportOperator& op) : op_(op) {}

    void solve(double dt, std::span<const double> rhs, std::span<double> out) {
        if (op_.grid().dimension() == 1) {
            tridiagonal(dt).solve(rhs, out);
            return;
        }
        auto& lu = sparse(dt);
        Eigen::Map<const Eigen::VectorXd> b(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
        Eigen::VectorXd x = lu.solve(b);
        if (lu.info() != Eigen::Success) throw std::runtime_error("sparse transport solve failed");
        std::copy(x.data(), x.data() + x.size(), out.begin());
    }

private:
    const TridiagonalSolver& tridiagonal(double dt) {
        if (auto it = tri_.find(dt); it != tri_.end()) return *it->second;
        if (tri_.size() > 16) tri_.clear();
        const std::size_t n = op_.grid().size();
        std::vector<double> lo(n), di(n), up(n);
        for (std::size_t i = 0; i < n; ++i) {
            lo[i] = -dt * op_.west()[i];
            di[i] = 1.0 - dt * op_.diag()[i];
            up[i] = -dt * op_.east()[i];
        }
        return *tri_.emplace(dt, std::make_unique<TridiagonalSolver>(lo, di, up)).first->second;
    }

    Eigen::SparseLU<Eigen::SparseMatrix<double>>& sparse(double dt) {
        if (auto it = lu_.find(dt); it != lu_.end()) return *it->second;
        if (lu_.size() > 8) lu_.clear();
        if (matrix_.rows() == 0) matrix_ = op_.matrix();
        Eigen::SparseMatrix<double> id(matrix_.rows(), matrix_.cols());
        id.setIdentity();
        Eigen::SparseMatrix<double> m = id - dt * matrix_;
        m.makeCompressed();
        auto lu = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
        lu->compute(m);
        if (lu->info() != Eigen::Success) throw std::runtime_error("sparse LU factorisation failed");
        return *lu_.emplace(dt, std::move(lu)).first->second;
    }

    const TransportOperator& op_;
    Eigen::SparseMatrix<double> matrix_;
    std::map<double, std::unique_ptr<TridiagonalSolver>> tri_;
    std::map<double, std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>>> lu_;
};

std::vector<double> resource_samples(const Grid& grid, const Potential& potential, const ReactionSpec& reaction) {
    std::vector<double> r = grid.sample([&](std::span<const double> x) { return reaction.resource(potential, x); });
    if (reaction.kind != ReactionSpec::Kind::cubic_allee) {
        for (double v : r) {
            if (!(v > 0.0)) throw std::invalid_argument("resource must be positive on the grid");
        }
    }
    return r;
}

void scale(std::span<double> f, double mu) {
    if (mu == 1.0) return;
    for (double& x : f) x *= mu;
}

/// Fills f for every species; returns a bound on |∂f/∂u|.
double evaluate_reaction(const ReactionSpec& reaction, std::span<const double> r,
                         const std::vector<std::vector<double>>& u, std::vector<std::vector<double>>& f) {
    switch (reaction.kind) {
        case ReactionSpec::Kind::cubic_allee:
            return kernels::cubic_reaction(u[0], reaction.mu, reaction.theta, f[0]);
        case ReactionSpec::Kind::logistic_allee: {
            const double s = kernels::logistic_reaction(u[0], r, reaction.theta, f[0]);
            scale(f[0], reaction.mu);
            return s * std::abs(reaction.mu);
        }
        case ReactionSpec::Kind::shared_competition: {
            const double s = kernels::shared_reaction(u[0], u[1], r, reaction.theta, f[0], f[1]);
            scale(f[0], reaction.mu);
            scale(f[1], reaction.mu);
            return s * std::abs(reaction.mu);
        }
    }
    return 0.0;
}

void check_initial(std::span<const double> u0, const Grid& grid) {
    if (u0.size() != grid.size()) throw std::invalid_argument("initial field size does not match the grid");
    for (double v : u0) {
        if (!std::isfinite(v)) throw std::invalid_argument("initial field is not finite");
        if (v < -kNegativeClip) throw std::invalid_argument("initial field has negative values");
    }
}

void check_schedule(const Schedule& s) {
    if (!(s.t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
    if (!(s.dt_max > 0.0) || !(s.dt_initial > 0.0)) throw std::invalid_argument("time steps must be positive");
    if (!(s.steady_tol > 0.0)) throw std::invalid_argument("steady tolerance must be positive");
}

std::vector<Trajectory> integrate(const Grid& grid, const std::vector<const TransportOperator*>& ops,
                                  const ReactionSpec& reaction, std::span<const double> r,
                                  std::vector<std::vector<double>> u, const Schedule& schedule) {
    check_schedule(schedule);
    const std::size_t species = u.size();
    const std::size_t n = grid.size();
    const double vol = grid.cell_volume();
    for (auto& field : u) {
        for (double& v : field) v = std::max(v, 0.0);
    }

    std::deque<ImplicitTransport> implicit;
    for (const auto* op : ops) implicit.emplace_back(*op);

    std::vector<double> requests = schedule.snapshots;
    std::sort(requests.begin(), requests.end());
    std::size_t next_request = 0;

    std::vector<Trajectory> out(species);
    std::vector<std::vector<double>> f(species, std::vector<double>(n)), rhs = f, unew = f, delta = f;
    double slope = evaluate_reaction(reaction, r, u, f);

    double initial_max = 0.0;
    for (const auto& field : u) initial_max = std::max(initial_max, kernels::field_stats(field).max);
    const double blow_up = 1e3 * std::max(1.0, initial_max);

    double t = 0.0;
    auto record = [&](double dt) {
        for (std::size_t s = 0; s < species; ++s) {
            const kernels::FieldStats st = kernels::field_stats(u[s]);
            const kernels::FieldStats fr = kernels::field_stats(f[s]);
            out[s].diagnostics.push_back({t, st.sum * vol, st.max, st.min, fr.sum * vol, dt});
        }
        while (next_request < requests.size() && t >= requests[next_request]) {
            for (std::size_t s = 0; s < species; ++s) out[s].snapshots.push_back({t, u[s]});
            ++next_request;
        }
    };
    record(0.0);

    auto level_dt = [&](int level) { return schedule.dt_max * std::exp2(-0.25 * level); };
    int level = std::max(0, static_cast<int>(std::ceil(4.0 * std::log2(schedule.dt_max / schedule.dt_initial))));
    Termination termination = Termination::time_limit;
    std::size_t steps = 0, rejected = 0;

    while (t < schedule.t_end && steps < static_cast<std::size_t>(schedule.max_steps)) {
        const double cap = slope > 0.0 ? 0.5 / slope : std::numeric_limits<double>::infinity();
        int k = std::max(0, level - 1);
        while (level_dt(k) > cap && k < kMaxLevel) ++k;
        double dt = level_dt(k);
        bool clipped = false;
        if (t + dt >= schedule.t_end) {
            dt = schedule.t_end - t;
            clipped = true;
        }

        bool negative = false;
        for (std::size_t s = 0; s < species && !negative; ++s) {
            // increment form: (I - dt T) delta = dt (T u + f)
            ops[s]->apply_conservative(u[s], rhs[s]);
            for (std::size_t i = 0; i < n; ++i) rhs[s][i] = dt * (rhs[s][i] + f[s][i]);
            implicit[s].solve(dt, rhs[s], delta[s]);
            kernels::explicit_update(u[s], delta[s], 1.0, unew[s]);
            for (double& v : unew[s]) {
                if (v < 0.0) {
                    if (v < -kNegativeClip || !std::isfinite(v)) {
                        negative = true;
                        break;
                    }
                    v = 0.0;
                }
            }
        }
        if (negative) {
            ++rejected;
            level = k + 4;
            if (level > kMaxLevel) throw std::runtime_error("time step underflow: persistent negative densities");
            continue;
        }

        double change = 0.0;
        for (std::size_t s = 0; s < species; ++s) change = std::max(change, kernels::max_abs_diff(unew[s], u[s]) / dt);
        std::swap(u, unew);
        t = clipped ? schedule.t_end : t + dt;
        level = k;
        ++steps;
        slope = evaluate_reaction(reaction, r, u, f);
        record(dt);

        double current_max = 0.0;
        for (std::size_t s = 0; s < species; ++s) current_max = std::max(current_max, out[s].diagnostics.back().umax);
        if (!(current_max <= blow_up)) {
            termination = Termination::blow_up;
            break;
        }
        if (change < schedule.steady_tol) {
            termination = Termination::steady;
            break;
        }
    }

    for (std::size_t s = 0; s < species; ++s) {
        if (out[s].snapshots.empty() || out[s].snapshots.back().t != t) out[s].snapshots.push_back({t, u[s]});
        out[s].termination = termination;
        out[s].final_state = u[s];
        out[s].final_time = t;
        out[s].steps = steps;
        out[s].rejected_steps = rejected;
    }
    return out;
}

}  // namespace

Trajectory run_transient(const Grid& grid, const Potential& potential, double chi, double d,
                         const ReactionSpec& reaction, std::span<const double> initial, const Schedule& schedule) {
    if (reaction.kind == ReactionSpec::Kind::shared_competition)
        throw std::invalid_argument("shared-competition needs two species");
    check_initial(initial, grid);
    const TransportOperator op(grid, potential, chi, d);
    const std::vector<double> r = resource_samples(grid, potential, reaction);
    auto trajectories = integrate(grid, {&op}, reaction, r, {std::vector<double>(initial.begin(), initial.end())}, schedule);
    return std::move(trajectories[0]);
}

TwoSpeciesTrajectory run_two_species(const Grid& grid, const Potential& potential, std::array<double, 2> chi, double d,
                                     const ReactionSpec& reaction, std::span<const double> u0,
                                     std::span<const double> v0, const Schedule& schedule) {
    if (reaction.kind != ReactionSpec::Kind::shared_competition)
        throw std::invalid_argument("two-species runs need the shared-competition reaction");
    check_initial(u0, grid);
    check_initial(v0, grid);
    const TransportOperator op_u(grid, potential, chi[0], d);
    const TransportOperator op_v(grid, potential, chi[1], d);
    const std::vector<double> r = resource_samples(grid, potential, reaction);
    auto trajectories = integrate(grid, {&op_u, &op_v}, reaction, r,
                                  {std::vector<double>(u0.begin(), u0.end()), std::vector<double>(v0.begin(), v0.end())},
                                  schedule);
    return {std::move(trajectories[0]), std::move(trajectories[1])};
}

std::vector<double> reaction_derivative(const ReactionSpec& reaction, std::span<const double> u,
                                        std::span<const double> r) {
    std::vector<double> out(u.size());
    const double th = reaction.theta;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double v = u[i];
        switch (reaction.kind) {
            case ReactionSpec::Kind::cubic_allee:
                out[i] = reaction.mu * (-3.0 * v * v + 2.0 * (1.0 + th) * v - th);
                break;
            case ReactionSpec::Kind::logistic_allee:
                out[i] = reaction.mu * (-3.0 * v * v + 2.0 * (r[i] + th) * v - th * r[i]);
                break;
            case ReactionSpec::Kind::shared_competition:
                throw std::invalid_argument("reaction derivative is defined for single-species reactions");
        }
    }
    return out;
}

std::vector<double> solve_steady_newton(const Grid& grid, const Potential& potential, double chi, double d,
                                        const ReactionSpec& reaction, std::span<const double> guess, double tol,
                                        int max_iterations) {
    if (reaction.kind == ReactionSpec::Kind::shared_competition)
        throw std::invalid_argument("steady Newton supports single-species reactions");
    if (guess.size() != grid.size()) throw std::invalid_argument("guess size does not match the grid");
    const TransportOperator op(grid, potential, chi, d);
    const std::vector<double> r = resource_samples(grid, potential, reaction);
    const Eigen::SparseMatrix<double> t = op.matrix();
    const auto n = static_cast<Eigen::Index>(grid.size());

    Eigen::VectorXd u = Eigen::Map<const Eigen::VectorXd>(guess.data(), n);
    auto residual = [&](const Eigen::VectorXd& x) {
        std::vector<std::vector<double>> uu{std::vector<double>(x.data(), x.data() + n)};
        std::vector<std::vector<double>> ff{std::vector<double>(static_cast<std::size_t>(n))};
        evaluate_reaction(reaction, r, uu, ff);
        Eigen::VectorXd res = t * x;
        for (Eigen::Index i = 0; i < n; ++i) res[i] += ff[0][static_cast<std::size_t>(i)];
        return res;
    };

    Eigen::VectorXd res = residual(u);
    for (int it = 0; it < max_iterations; ++it) {
        const std::vector<double> fp = reaction_derivative(reaction, std::span<const double>(u.data(), u.size()), r);
        Eigen::SparseMatrix<double> jac = t;
        for (Eigen::Index i = 0; i < n; ++i) jac.coeffRef(i, i) += fp[static_cast<std::size_t>(i)];
        jac.makeCompressed();
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(jac);
        if (lu.info() != Eigen::Success) throw std::runtime_error("Newton Jacobian is singular");
        const Eigen::VectorXd step = lu.solve(-res);
        double alpha = 1.0;
        Eigen::VectorXd trial = u + step;
        Eigen::VectorXd trial_res = residual(trial);
        for (int ls = 0; ls < 30 && trial_res.lpNorm<Eigen::Infinity>() > res.lpNorm<Eigen::Infinity>(); ++ls) {
            alpha *= 0.5;
            trial = u + alpha * step;
            trial_res = residual(trial);
        }
        u = trial;
        res = trial_res;
        if (alpha * step.lpNorm<Eigen::Infinity>() <= tol * std::max(1.0, u.lpNorm<Eigen::Infinity>())) {
            return std::vector<double>(u.data(), u.data() + n);
        }
    }
    throw std::runtime_error("steady Newton did not converge; residual " + std::to_string(res.lpNorm<Eigen::Infinity>()));
}

}  // namespace allee
