// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

/// Data-parallel inner loops. Each entry point dispatches at runtime to an AVX2+FMA variant when the CPU
/// supports it and to the scalar reference otherwise.
namespace allee::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

bool avx2_available();
Isa active_isa();

/// Pin the dispatch target (tests); nullopt restores auto-detection. Throws if the ISA is unavailable.
void force_isa(std::optional<Isa> isa);

/// y[i] = lower[i]*x[i-1] + diag[i]*x[i] + upper[i]*x[i+1]; lower[0] and upper[n-1] are ignored.
void tridiagonal_apply(std::span<const double> lower, std::span<const double> diag, std::span<const double> upper,
                       std::span<const double> x, std::span<double> y);

/// Five-point stencil on an nx-by-ny row-major grid; coefficients pointing off-grid are ignored.
void stencil5_apply(std::size_t nx, std::size_t ny, std::span<const double> diag, std::span<const double> west,
                    std::span<const double> east, std::span<const double> south, std::span<const double> north,
                    std::span<const double> x, std::span<double> y);

/// f = mu·u(1−u)(u−θ). Returns max |f'(u)|.
double cubic_reaction(std::span<const double> u, double mu, double theta, std::span<double> f);

/// f = u(u−θ)(r−u). Returns max |f'(u)|.
double logistic_reaction(std::span<const double> u, std::span<const double> r, double theta, std::span<double> f);

/// With w = u+v and g = (w−θ)(r−w): fu = u·g, fv = v·g. Returns the largest row sum of |∂(fu,fv)/∂(u,v)|.
double shared_reaction(std::span<const double> u, std::span<const double> v, std::span<const double> r, double theta,
                       std::span<double> fu, std::span<double> fv);

/// out = u + dt·f
void explicit_update(std::span<const double> u, std::span<const double> f, double dt, std::span<double> out);

struct FieldStats {
    double sum = 0.0;
    double max = 0.0;
    double min = 0.0;
};

FieldStats field_stats(std::span<const double> u);

double max_abs_diff(std::span<const double> a, std::span<const double> b);

}  // namespace allee::kernels
