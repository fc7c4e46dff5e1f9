// SPDX-License-Identifier: Apache-2.0
#include "allee/stability.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace allee {

HValue h_eval(int n, double theta, double plateau, double xi) {
    if (n != 1 && n != 2) throw std::invalid_argument("dimension must be 1 or 2");
    const double a = std::pow(2.0, 0.5 * n);
    const double b = std::pow(3.0, 0.5 * n) * (plateau + theta);
    const double k = std::pow(6.0, 0.5 * n) * theta * plateau;
    return {xi * (-a * xi * xi + b * xi - k), -3.0 * a * xi * xi + 2.0 * b * xi - k};
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::linearly_stable: return "linearly-stable";
        case Verdict::unstable: return "unstable";
        case Verdict::marginal: return "marginal";
    }
    return "marginal";
}

Verdict verdict_from_lambda(double lambda) {
    if (std::abs(lambda) <= kMarginalLambda) return Verdict::marginal;
    return lambda > 0.0 ? Verdict::unstable : Verdict::linearly_stable;
}

namespace {

Verdict combine(Verdict acc, Verdict next) {
    if (acc == Verdict::unstable || next == Verdict::unstable) return Verdict::unstable;
    if (acc == Verdict::marginal || next == Verdict::marginal) return Verdict::marginal;
    return Verdict::linearly_stable;
}

}  // namespace

StabilityReport classify_pattern(const SpikePattern& pattern) {
    StabilityReport report;
    report.alpha0 = std::pow(std::numbers::pi, -0.5 * pattern.dim);
    for (const auto& s : pattern.sites) {
        SiteStability site;
        site.branch = s.branch;
        site.height = s.height;
        site.h_prime = h_eval(pattern.dim, pattern.theta, s.plateau, s.height).h_prime;
        site.lambda_leading = report.alpha0 * site.h_prime;
        report.verdict = combine(report.verdict, verdict_from_lambda(site.lambda_leading));
        report.sites.push_back(site);
    }
    return report;
}

IfdReport ifd_equilibria_report(int n, double theta, const ScalarField& resource, const Box& domain,
                                std::span<const CriticalPoint> maxima, std::span<const Branch> branches, double chi) {
    if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
    IfdReport out;
    out.moments = resource_moments(resource, domain);
    out.beta = out.moments.r2 / out.moments.r3;
    out.beta_below_one = out.beta < 1.0;

    out.resource_state.lambda = (theta * out.moments.r2 - out.moments.r3) / out.moments.r1;
    out.resource_state.verdict = verdict_from_lambda(out.resource_state.lambda);

    const double alpha0 = std::pow(std::numbers::pi, -0.5 * n);
    std::vector<double> plateaus;
    std::vector<IfdSite> sites;
    out.beta_state_verdict = Verdict::linearly_stable;
    for (const auto& cp : maxima) {
        const double plateau = resource(std::span<const double>(cp.location.data(), static_cast<size_t>(n)));
        plateaus.push_back(plateau);
        sites.push_back({plateau, cp.h});
        const double lambda = alpha0 * plateau * theta * (1.0 - out.beta * theta) * (out.beta - 1.0);
        out.beta_state_lambdas.push_back(lambda);
        out.beta_state_verdict = combine(out.beta_state_verdict, verdict_from_lambda(lambda));
    }

    const SpikePattern pattern = build_pattern(maxima, branches, chi, theta, n, PatternOptions{1.0, plateaus});
    out.spike_state = classify_pattern(pattern);

    std::vector<IfdSite> active;
    for (size_t m = 0; m < sites.size(); ++m) {
        if (branches[m] != Branch::off) active.push_back(sites[m]);
    }
    out.threshold = ifd_threshold(n, active, static_cast<int>(active.size()), resource, domain);
    out.override_theta = out.threshold.epsilon_star / std::pow(chi, 0.5 * n);
    if (theta < out.override_theta) {
        out.small_theta_override = true;
        out.spike_state.verdict = Verdict::unstable;
    }
    return out;
}

std::string_view to_string(CoexistenceClass v) {
    return v == CoexistenceClass::unstable ? "unstable" : "stable-candidate";
}

CoexistenceVerdict coexistence_stability(int n, double c, double theta, const CoexistenceRoot& root) {
    CoexistenceVerdict out;
    out.jacobian = balancing_jacobian(n, c, theta, root.s1, root.s2);
    out.trace = out.jacobian.trace();
    out.determinant = out.jacobian.determinant();
    out.det_crosscheck = determinant_polynomial(n, c, theta, root.s1, root.s2);
    out.verdict = (out.determinant < 0.0 || out.trace > 0.0) ? CoexistenceClass::unstable
                                                             : CoexistenceClass::stable_candidate;
    return out;
}

}  // namespace allee
