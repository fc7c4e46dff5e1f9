// SPDX-License-Identifier: Apache-2.0
#include "allee/harness.hpp"
#include "allee/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

namespace allee::harness {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Metrics {
    double height = kNaN;
    double half_width = kNaN;
    double lambda = kNaN;
    Verdict verdict = Verdict::marginal;
    Termination termination = Termination::time_limit;
};

struct Context {
    const ExperimentConfig& config;
    fs::path dir;
    int seeds;
    std::vector<std::string> files;
    std::ostringstream text;
    Metrics metrics;

    void table(const std::string& name, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
        csv::write_table(dir / name, header, columns);
        files.push_back(name);
    }
    void write(const std::string& name, std::string_view body) {
        csv::write_text(dir / name, body);
        files.push_back(name);
    }
};

std::string num(double v) { return csv::number(v); }

std::vector<CriticalPoint> locate_maxima(Context& ctx, const Potential& pot) {
    const CriticalPointSearch search = find_maxima(pot, ctx.config.box(), ctx.seeds);
    for (const auto& d : search.diagnostics) {
        ctx.text << "search diagnostic at (" << num(d.seed[0]) << ", " << num(d.seed[1]) << "): " << d.message << '\n';
    }
    return search.maxima;
}

std::vector<double> site_plateaus(const ExperimentConfig& c, const Potential& pot, const std::vector<CriticalPoint>& maxima) {
    std::vector<double> out;
    for (const auto& m : maxima) {
        if (c.physics.reaction == ReactionSpec::Kind::cubic_allee) {
            out.push_back(1.0);
        } else {
            out.push_back(c.physics.resource(pot, std::span<const double>(m.location.data(),
                                                                           static_cast<std::size_t>(c.potential.dimension))));
        }
    }
    return out;
}

std::vector<std::vector<double>> coordinate_columns(const Grid& grid) {
    std::vector<std::vector<double>> cols(static_cast<std::size_t>(grid.dimension()), std::vector<double>(grid.size()));
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const Vec2 p = grid.center_of(k);
        for (int a = 0; a < grid.dimension(); ++a) cols[static_cast<std::size_t>(a)][k] = p[static_cast<std::size_t>(a)];
    }
    return cols;
}

std::vector<std::string> coordinate_header(const Grid& grid) {
    return grid.dimension() == 1 ? std::vector<std::string>{"x"} : std::vector<std::string>{"x", "y"};
}

std::string snapshot_name(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "snapshot_%04zu.csv", i);
    return buf;
}

void write_fields(Context& ctx, const std::string& name, const Grid& grid,
                  const std::vector<std::pair<std::string, const std::vector<double>*>>& fields) {
    auto header = coordinate_header(grid);
    auto cols = coordinate_columns(grid);
    for (const auto& [label, field] : fields) {
        header.push_back(label);
        cols.push_back(*field);
    }
    ctx.table(name, header, cols);
}

void write_diagnostics(Context& ctx, const std::string& name, const Trajectory& traj) {
    std::vector<std::vector<double>> cols(6);
    for (const auto& d : traj.diagnostics) {
        cols[0].push_back(d.t);
        cols[1].push_back(d.mass);
        cols[2].push_back(d.umax);
        cols[3].push_back(d.umin);
        cols[4].push_back(d.reaction_integral);
        cols[5].push_back(d.dt);
    }
    ctx.table(name, {"t", "mass", "umax", "umin", "reaction_integral", "dt"}, cols);
}

void write_comparison(Context& ctx, const ComparisonReport& report) {
    std::ostringstream out;
    out << "site,x,y,branch,predicted_height,measured_height,height_error,half_width,predicted_lambda,lambda_rayleigh,"
           "measured_lambda,lambda_error,predicted_verdict,observed_verdict\n";
    for (const auto& r : report.rows) {
        out << r.site << ',' << num(r.location[0]) << ',' << num(r.location[1]) << ',' << to_string(r.branch) << ','
            << num(r.predicted_height) << ',' << num(r.measured_height) << ',' << num(r.height_error) << ','
            << num(r.half_width) << ',' << num(r.predicted_lambda) << ',' << num(r.lambda_rayleigh) << ','
            << num(r.measured_lambda) << ',' << num(r.lambda_error) << ',' << to_string(r.predicted_verdict) << ','
            << to_string(r.observed_verdict) << '\n';
    }
    ctx.write("comparison.csv", out.str());
}

void describe_comparison(Context& ctx, const ComparisonReport& report) {
    for (const auto& r : report.rows) {
        ctx.text << "site " << r.site << " at (" << num(r.location[0]) << ", " << num(r.location[1])
                 << "): branch " << to_string(r.branch) << ", predicted height " << num(r.predicted_height)
                 << ", measured " << num(r.measured_height) << " (rel. error " << num(r.height_error) << ")"
                 << ", half-width " << num(r.half_width) << '\n';
    }
}

double leading_eigenvalue(const ExperimentConfig& c, const Grid& grid, const Potential& pot,
                          std::span<const double> steady) {
    const auto pairs = linearized_leading_eigen(grid, pot, c.physics.chi, c.physics.d, c.reaction(), steady, 1);
    return pairs.front().value;
}

void summarize(Context& ctx, const std::vector<SpikeMeasurement>& measured, double lambda, Termination term) {
    ctx.metrics.termination = term;
    ctx.metrics.lambda = lambda;
    if (!measured.empty()) {
        ctx.metrics.height = measured.front().height;
        ctx.metrics.half_width = measured.front().half_width;
    }
    if (std::isfinite(lambda)) ctx.metrics.verdict = verdict_from_lambda(lambda);
    else if (term == Termination::blow_up) ctx.metrics.verdict = Verdict::unstable;
}

void run_analyze(Context& ctx) {
    const auto& c = ctx.config;
    const Potential pot = c.potential.build();
    const int n = c.potential.dimension;
    const double theta = c.physics.theta;
    auto& t = ctx.text;

    t << "dimension = " << n << '\n';
    t << "theta = " << num(theta) << '\n';
    t << "theta_max = " << num(theta_max(n)) << '\n';
    const HeightPair hp = spike_heights(n, theta);
    t << "c01 = " << num(hp.c01) << '\n';
    t << "c02 = " << num(hp.c02) << '\n';
    t << "discriminant = " << num(hp.discriminant) << '\n';
    t << "admissible = " << (hp.admissible ? "true" : "false") << '\n';
    if (hp.admissible) {
        for (const auto& [b, height] : {std::pair{Branch::tall, hp.c01}, std::pair{Branch::low, hp.c02}}) {
            const double lambda = std::pow(std::numbers::pi, -0.5 * n) * h_eval(n, theta, 1.0, height).h_prime;
            t << "branch " << to_string(b) << ": height " << num(height) << ", lambda " << num(lambda) << ", "
              << to_string(verdict_from_lambda(lambda)) << '\n';
        }
    }

    const auto maxima = locate_maxima(ctx, pot);
    t << "maxima = " << maxima.size() << '\n';
    for (std::size_t m = 0; m < maxima.size(); ++m) {
        t << "  maximum " << m << ": location (" << num(maxima[m].location[0]);
        if (n == 2) t << ", " << num(maxima[m].location[1]);
        t << "), A = " << num(maxima[m].value) << ", h = " << num(maxima[m].h[0]);
        if (n == 2) t << ", " << num(maxima[m].h[1]);
        t << '\n';
    }

    const HypothesisReport hyp = verify_hypotheses(pot, c.box(), std::max(64, ctx.seeds));
    t << "laplacian_bound = " << num(hyp.laplacian_bound) << '\n';
    t << "h1_ok = " << (hyp.h1_ok ? "true" : "false") << '\n';
    t << "h2_ok = " << (hyp.h2_ok ? "true" : "false") << '\n';
    for (const auto& v : hyp.violations) {
        t << "  violation at (" << num(v.point[0]) << ", " << num(v.point[1]) << "): " << v.description << '\n';
    }
    if (maxima.empty()) {
        ctx.write("analysis.txt", t.str());
        return;
    }

    std::vector<Branch> branches = c.physics.branches;
    if (branches.empty()) branches.assign(maxima.size(), Branch::tall);
    if (branches.size() != maxima.size()) {
        throw ConfigError({{0, "physics.branches lists " + std::to_string(branches.size()) + " branches but " +
                                   std::to_string(maxima.size()) + " maxima were found"}});
    }
    const std::vector<double> plateaus = site_plateaus(c, pot, maxima);
    const SpikePattern pattern = build_pattern(maxima, branches, c.physics.chi, theta, n, PatternOptions{1.0, plateaus});
    for (const auto& w : pattern.warnings) t << "warning: " << w << '\n';
    const StabilityReport report = classify_pattern(pattern);
    t << "alpha0 = " << num(report.alpha0) << '\n';
    for (std::size_t m = 0; m < report.sites.size(); ++m) {
        const auto& s = report.sites[m];
        t << "  site " << m << ": branch " << to_string(s.branch) << ", plateau " << num(pattern.sites[m].plateau)
          << ", height " << num(s.height) << ", h_prime " << num(s.h_prime) << ", lambda_leading "
          << num(s.lambda_leading) << ", lambda_rayleigh " << num(std::pow(6.0, -0.5 * n) * s.h_prime) << '\n';
    }
    t << "verdict = " << to_string(report.verdict) << '\n';

    if (c.physics.reaction == ReactionSpec::Kind::shared_competition && c.physics.strategy == Strategy::ifd) {
        const ScalarField r = [&](std::span<const double> x) { return c.physics.resource(pot, x); };
        const IfdReport ifd = ifd_equilibria_report(n, theta, r, c.box(), maxima, branches, c.physics.chi);
        t << "beta = " << num(ifd.beta) << (ifd.beta_below_one ? " (below one: the (0, beta*theta*r) eigenvalue is negative)" : "")
          << '\n';
        t << "(0,r): lambda " << num(ifd.resource_state.lambda) << ", " << to_string(ifd.resource_state.verdict) << '\n';
        t << "(0,beta*theta*r): " << to_string(ifd.beta_state_verdict);
        for (double l : ifd.beta_state_lambdas) t << ", lambda " << num(l);
        t << '\n';
        t << "alpha1 = " << num(ifd.threshold.alpha1) << ", C4 = " << num(ifd.threshold.c4)
          << ", epsilon_star = " << num(ifd.threshold.epsilon_star) << '\n';
        t << "(u*,0): " << to_string(ifd.spike_state.verdict)
          << (ifd.small_theta_override ? " (theta below epsilon_star/chi^(n/2) = " + num(ifd.override_theta) + ")" : "")
          << '\n';
    }
    if (c.physics.reaction == ReactionSpec::Kind::shared_competition && c.physics.strategy == Strategy::aggressive) {
        const double ratio = c.physics.speed_ratio;
        if (theta > 0.0 && theta < theta_max(n)) {
            const auto roots = solve_coexistence(n, ratio, theta);
            t << "coexistence roots (c = " << num(ratio) << ") = " << roots.size() << '\n';
            for (const auto& root : roots) {
                const CoexistenceVerdict v = coexistence_stability(n, ratio, theta, root);
                t << "  case " << to_string(root.match) << ": S1 " << num(root.s1) << ", S2 " << num(root.s2)
                  << ", trace " << num(v.trace) << ", det " << num(v.determinant) << ", " << to_string(v.verdict)
                  << (root.degenerate ? " (degenerate family)" : "") << '\n';
            }
        }
    }

    const Grid grid = c.grid();
    std::vector<double> u = grid.sample([&](std::span<const double> x) { return evaluate_pattern(pattern, x); });
    write_fields(ctx, "pattern.csv", grid, {{"u", &u}});
    ctx.write("analysis.txt", t.str());
}

void run_simulate(Context& ctx) {
    const auto& c = ctx.config;
    const Potential pot = c.potential.build();
    const Grid grid = c.grid();
    const std::vector<double> u0 = initial_field(c, c.initial.u, grid, ctx.seeds);
    const Trajectory traj =
        run_transient(grid, pot, c.physics.chi, c.physics.d, c.reaction(), u0, c.schedule.schedule);
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) write_fields(ctx, snapshot_name(i), grid, {{"u", &traj.snapshots[i].u}});
    write_diagnostics(ctx, "diagnostics.csv", traj);

    const auto maxima = locate_maxima(ctx, pot);
    const auto measured = measure_spikes(traj.final_state, grid, maxima);
    const double lambda =
        traj.termination == Termination::steady ? leading_eigenvalue(c, grid, pot, traj.final_state) : kNaN;
    const auto plateaus = site_plateaus(c, pot, maxima);
    const ComparisonReport report = compare(maxima, measured, c.potential.dimension, c.physics.theta, plateaus, lambda);
    write_comparison(ctx, report);
    ctx.text << "termination = " << to_string(traj.termination) << " at t = " << num(traj.final_time) << " after "
             << traj.steps << " steps\n";
    ctx.text << "leading eigenvalue = " << num(lambda) << '\n';
    describe_comparison(ctx, report);
    summarize(ctx, measured, lambda, traj.termination);
}

void run_compete(Context& ctx) {
    const auto& c = ctx.config;
    const Potential pot = c.potential.build();
    const Grid grid = c.grid();
    const std::vector<double> u0 = initial_field(c, c.initial.u, grid, ctx.seeds);
    const std::vector<double> v0 = initial_field(c, c.initial.v, grid, ctx.seeds);
    const std::array<double, 2> chi{c.physics.chi, c.physics.strategy == Strategy::ifd
                                                       ? 1.0
                                                       : c.physics.speed_ratio * c.physics.chi};
    const TwoSpeciesTrajectory traj = run_two_species(grid, pot, chi, c.physics.d, c.reaction(), u0, v0, c.schedule.schedule);
    for (std::size_t i = 0; i < traj.u.snapshots.size(); ++i) {
        write_fields(ctx, snapshot_name(i), grid, {{"u", &traj.u.snapshots[i].u}, {"v", &traj.v.snapshots[i].u}});
    }
    write_diagnostics(ctx, "diagnostics_u.csv", traj.u);
    write_diagnostics(ctx, "diagnostics_v.csv", traj.v);

    const auto maxima = locate_maxima(ctx, pot);
    const auto measured = measure_spikes(traj.u.final_state, grid, maxima);
    const auto plateaus = site_plateaus(c, pot, maxima);
    const ComparisonReport report = compare(maxima, measured, c.potential.dimension, c.physics.theta, plateaus, kNaN);
    write_comparison(ctx, report);

    const double vol = grid.cell_volume();
    const double u_mass0 = traj.u.diagnostics.front().mass, v_mass0 = traj.v.diagnostics.front().mass;
    const double u_mass = kernels::field_stats(traj.u.final_state).sum * vol;
    const double v_mass = kernels::field_stats(traj.v.final_state).sum * vol;
    ctx.text << "termination = " << to_string(traj.u.termination) << " at t = " << num(traj.u.final_time) << " after "
             << traj.u.steps << " steps\n";
    ctx.text << "u mass " << num(u_mass0) << " -> " << num(u_mass) << '\n';
    ctx.text << "v mass " << num(v_mass0) << " -> " << num(v_mass) << " (ratio " << num(v_mass / v_mass0) << ")\n";
    describe_comparison(ctx, report);
    summarize(ctx, measured, kNaN, traj.u.termination);
}

void run_eig(Context& ctx) {
    const auto& c = ctx.config;
    const Potential pot = c.potential.build();
    const Grid grid = c.grid();
    const std::vector<double> u0 = initial_field(c, c.initial.u, grid, ctx.seeds);
    const Trajectory traj =
        run_transient(grid, pot, c.physics.chi, c.physics.d, c.reaction(), u0, c.schedule.schedule);
    std::vector<double> steady = traj.final_state;
    try {
        steady = solve_steady_newton(grid, pot, c.physics.chi, c.physics.d, c.reaction(), steady);
    } catch (const std::runtime_error& e) {
        ctx.text << "Newton polish skipped: " << e.what() << '\n';
    }
    write_fields(ctx, "steady.csv", grid, {{"u", &steady}});

    const auto pairs = linearized_leading_eigen(grid, pot, c.physics.chi, c.physics.d, c.reaction(), steady,
                                                c.schedule.eigen_count);
    std::vector<std::vector<double>> cols(3);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        cols[0].push_back(static_cast<double>(k));
        cols[1].push_back(pairs[k].value);
        cols[2].push_back(pairs[k].residual);
        char name[40];
        std::snprintf(name, sizeof name, "eigenvector_%02zu.csv", k);
        write_fields(ctx, name, grid, {{"psi", &pairs[k].vector}});
    }
    ctx.table("spectrum.csv", {"index", "eigenvalue", "residual"}, cols);

    const auto maxima = locate_maxima(ctx, pot);
    const auto measured = measure_spikes(steady, grid, maxima);
    const auto plateaus = site_plateaus(c, pot, maxima);
    const ComparisonReport report =
        compare(maxima, measured, c.potential.dimension, c.physics.theta, plateaus, pairs.front().value);
    write_comparison(ctx, report);
    ctx.text << "transient termination = " << to_string(traj.termination) << " at t = " << num(traj.final_time) << '\n';
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        ctx.text << "eigenvalue " << k << " = " << num(pairs[k].value) << " (residual " << num(pairs[k].residual) << ")\n";
    }
    describe_comparison(ctx, report);
    summarize(ctx, measured, pairs.front().value, traj.termination);
}

Metrics run_mode(Context& ctx, Mode mode, const RunOptions& options);

void run_sweep(Context& ctx, const RunOptions& options) {
    const auto& c = ctx.config;
    std::vector<std::vector<double>> tuples{{}};
    for (const auto& axis : c.sweep.axes) {
        std::vector<std::vector<double>> next;
        for (const auto& t : tuples) {
            for (double v : axis.values) {
                auto e = t;
                e.push_back(v);
                next.push_back(std::move(e));
            }
        }
        tuples = std::move(next);
    }

    std::vector<Metrics> results(tuples.size());
    std::vector<std::string> failures(tuples.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tuples.size(); i = next++) {
            try {
                ExperimentConfig sub = c;
                for (std::size_t a = 0; a < c.sweep.axes.size(); ++a) apply_sweep_value(sub, c.sweep.axes[a].key, tuples[i][a]);
                char name[32];
                std::snprintf(name, sizeof name, "job_%04zu", i);
                RunOptions job = options;
                job.out = ctx.dir / name;
                Context sub_ctx{sub, *job.out, options.seed_grid, {}, {}, {}};
                fs::create_directories(sub_ctx.dir);
                results[i] = run_mode(sub_ctx, c.sweep.run, job);
            } catch (const std::exception& e) {
                failures[i] = e.what();
            }
        }
    };
    const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(tuples.size())));
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::ostringstream out;
    for (const auto& axis : c.sweep.axes) out << axis.key << ',';
    out << "height,half_width,leading_eigenvalue,verdict,termination,status\n";
    std::string first_failure;
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        for (double v : tuples[i]) out << num(v) << ',';
        const Metrics& m = results[i];
        out << num(m.height) << ',' << num(m.half_width) << ',' << num(m.lambda) << ',' << to_string(m.verdict) << ','
            << to_string(m.termination) << ',' << (failures[i].empty() ? "ok" : "failed") << '\n';
        if (!failures[i].empty()) {
            ctx.text << "job " << i << " failed: " << failures[i] << '\n';
            if (first_failure.empty()) first_failure = failures[i];
        }
    }
    ctx.write("summary.csv", out.str());
    ctx.text << tuples.size() << " sweep jobs\n";
    if (!first_failure.empty()) throw std::runtime_error("sweep job failed: " + first_failure);
}

void write_manifest(Context& ctx, Mode mode, const std::string& status) {
    std::ostringstream m;
    m << "mode: " << to_string(mode) << '\n';
    m << "status: " << status << '\n';
    for (const auto& f : ctx.files) m << "file: " << f << '\n';
    csv::write_text(ctx.dir / "MANIFEST", m.str());
}

Metrics run_mode(Context& ctx, Mode mode, const RunOptions& options) {
    try {
        require_mode_inputs(ctx.config, mode);
        switch (mode) {
            case Mode::analyze: run_analyze(ctx); break;
            case Mode::simulate: run_simulate(ctx); break;
            case Mode::compete: run_compete(ctx); break;
            case Mode::eig: run_eig(ctx); break;
            case Mode::sweep: run_sweep(ctx, options); break;
        }
        if (mode != Mode::analyze) ctx.write("report.txt", ctx.text.str());
    } catch (const std::exception& e) {
        write_manifest(ctx, mode, std::string("failed: ") + e.what());
        throw;
    }
    write_manifest(ctx, mode, "complete");
    return ctx.metrics;
}

}  // namespace

std::vector<double> initial_field(const ExperimentConfig& c, const std::vector<InitialTerm>& terms, const Grid& grid,
                                  int seeds_per_axis) {
    const int n = grid.dimension();
    std::vector<double> out(grid.size(), 0.0);
    for (const auto& term : terms) {
        if (term.kind == InitialTerm::Kind::pattern) {
            const Potential pot = c.potential.build();
            const auto maxima = find_maxima(pot, c.box(), seeds_per_axis).maxima;
            if (maxima.size() != term.branches.size()) {
                throw ConfigError({{0, "pattern() lists " + std::to_string(term.branches.size()) + " branches but " +
                                           std::to_string(maxima.size()) + " maxima were found"}});
            }
            const auto plateaus = site_plateaus(c, pot, maxima);
            const SpikePattern pattern =
                build_pattern(maxima, term.branches, c.physics.chi, c.physics.theta, n, PatternOptions{1.0, plateaus});
            for (std::size_t k = 0; k < out.size(); ++k) {
                const Vec2 p = grid.center_of(k);
                out[k] += evaluate_pattern(pattern, std::span<const double>(p.data(), static_cast<std::size_t>(n)));
            }
            continue;
        }
        const auto& a = term.params;
        for (std::size_t k = 0; k < out.size(); ++k) {
            const Vec2 p = grid.center_of(k);
            if (term.kind == InitialTerm::Kind::constant_plus_cosine) {
                const double phase = a.size() > 3 ? a[3] : 0.0;
                double wave = std::cos(a[2] * p[0] + phase);
                if (n == 2) wave *= std::cos(a[2] * p[1] + phase);
                out[k] += a[0] + a[1] * wave;
            } else {
                double r2 = 0.0;
                for (int i = 0; i < n; ++i) {
                    const auto idx = static_cast<std::size_t>(2 + i);
                    const double dx = p[static_cast<std::size_t>(i)] - (a.size() > idx ? a[idx] : 0.0);
                    r2 += dx * dx;
                }
                out[k] += a[0] * std::exp(-a[1] * r2);
            }
        }
    }
    for (double& v : out) v = std::max(v, 0.0);
    return out;
}

ComparisonReport compare(const std::vector<CriticalPoint>& maxima, std::span<const SpikeMeasurement> measured, int n,
                         double theta, std::span<const double> plateaus, double measured_lambda) {
    ComparisonReport report;
    const double alpha0 = std::pow(std::numbers::pi, -0.5 * n);
    for (std::size_t m = 0; m < maxima.size(); ++m) {
        ComparisonRow row;
        row.site = m;
        row.location = maxima[m].location;
        const SpikeMeasurement& s = measured[m];
        row.measured_height = s.height;
        row.half_width = s.half_width;
        const double plateau = plateaus.empty() ? 1.0 : plateaus[m];
        const HeightPair hp = theta >= 0.0 ? spike_heights(n, theta, plateau) : HeightPair{};
        std::vector<std::pair<Branch, double>> candidates{{Branch::off, 0.0}};
        if (hp.admissible) {
            candidates.emplace_back(Branch::tall, hp.c01);
            candidates.emplace_back(Branch::low, hp.c02);
        }
        double best = std::numeric_limits<double>::infinity();
        for (const auto& [b, h] : candidates) {
            if (std::abs(s.height - h) < best) {
                best = std::abs(s.height - h);
                row.branch = b;
                row.predicted_height = h;
            }
        }
        row.height_error = row.predicted_height != 0.0 ? std::abs(s.height - row.predicted_height) / row.predicted_height
                                                       : std::abs(s.height);
        const double hprime = h_eval(n, theta, plateau, row.predicted_height).h_prime;
        row.predicted_lambda = alpha0 * hprime;
        row.lambda_rayleigh = std::pow(6.0, -0.5 * n) * hprime;
        row.predicted_verdict = verdict_from_lambda(row.predicted_lambda);
        row.measured_lambda = measured_lambda;
        row.lambda_error = std::isfinite(measured_lambda) && row.predicted_lambda != 0.0
                               ? std::abs(measured_lambda - row.predicted_lambda) / std::abs(row.predicted_lambda)
                               : kNaN;
        row.observed_verdict = std::isfinite(measured_lambda) ? verdict_from_lambda(measured_lambda) : Verdict::marginal;
        report.rows.push_back(row);
    }
    return report;
}

RunResult run_experiment(const ExperimentConfig& config, Mode mode, const RunOptions& options) {
    if (config.mode && *config.mode != mode) {
        throw ConfigError({{0, "config declares mode " + std::string(to_string(*config.mode)) + " but " +
                                   std::string(to_string(mode)) + " was requested"}});
    }
    if (options.jobs < 1) throw ConfigError({{0, "--jobs must be at least 1"}});
    if (options.seed_grid < 8) throw ConfigError({{0, "--seed-grid must be at least 8"}});
    Context ctx{config, options.out.value_or(fs::path(config.output_dir)), options.seed_grid, {}, {}, {}};
    fs::create_directories(ctx.dir);
    run_mode(ctx, mode, options);
    return RunResult{ctx.dir, ctx.files, ctx.text.str()};
}

}  // namespace allee::harness
