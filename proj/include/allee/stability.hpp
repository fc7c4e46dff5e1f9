// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "allee/asymptotics.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace allee {

struct HValue {
    double h = 0.0;
    double h_prime = 0.0;
};

/// h(ξ) = ξ[−2^{n/2}ξ² + 3^{n/2}(ā+θ)ξ − 6^{n/2}θā] and its derivative.
HValue h_eval(int n, double theta, double plateau, double xi);

enum class Verdict { linearly_stable, unstable, marginal };

std::string_view to_string(Verdict v);

/// |λ| at or below this is marginal.
inline constexpr double kMarginalLambda = 1e-10;

Verdict verdict_from_lambda(double lambda);

struct SiteStability {
    Branch branch = Branch::off;
    double height = 0.0;
    double h_prime = 0.0;
    double lambda_leading = 0.0;
};

struct StabilityReport {
    std::vector<SiteStability> sites;
    Verdict verdict = Verdict::linearly_stable;
    double alpha0 = 0.0;  // π^{-n/2}
};

StabilityReport classify_pattern(const SpikePattern& pattern);

struct EquilibriumVerdict {
    double lambda = 0.0;
    Verdict verdict = Verdict::linearly_stable;
};

struct IfdReport {
    double beta = 0.0;
    ResourceMoments moments;

    /// (0, r)
    EquilibriumVerdict resource_state;
    /// (0, βθr): one signed eigenvalue per site, verdict from their signs.
    std::vector<double> beta_state_lambdas;
    Verdict beta_state_verdict = Verdict::unstable;
    bool beta_below_one = false;

    /// (u*, 0)
    StabilityReport spike_state;
    IfdThreshold threshold;
    double override_theta = 0.0;  // ε1*/χ^{n/2}
    bool small_theta_override = false;
};

/// Sites use plateau ā_m = r(x_m).
IfdReport ifd_equilibria_report(int n, double theta, const ScalarField& resource, const Box& domain,
                                std::span<const CriticalPoint> maxima, std::span<const Branch> branches, double chi);

enum class CoexistenceClass { stable_candidate, unstable };

std::string_view to_string(CoexistenceClass v);

struct CoexistenceVerdict {
    BalancingJacobian jacobian;
    double trace = 0.0;
    double determinant = 0.0;
    double det_crosscheck = 0.0;
    CoexistenceClass verdict = CoexistenceClass::unstable;
};

CoexistenceVerdict coexistence_stability(int n, double c, double theta, const CoexistenceRoot& root);

}  // namespace allee
