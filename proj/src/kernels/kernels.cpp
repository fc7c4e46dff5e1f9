// SPDX-License-Identifier: Apache-2.0
#include "impl.hpp"

#include <atomic>
#include <stdexcept>

namespace allee::kernels {

namespace {

Isa detect() { return avx2_available() ? Isa::avx2 : Isa::scalar; }

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

void require_same(std::size_t a, std::size_t b) {
    if (a != b) throw std::invalid_argument("kernel operand sizes differ");
}

}  // namespace

std::string_view to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool avx2_available() {
#if defined(ALLEE_HAVE_AVX2_KERNELS)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void force_isa(std::optional<Isa> isa) {
    if (isa == Isa::avx2 && !avx2_available()) throw std::runtime_error("AVX2 kernels are not available on this CPU");
    current().store(isa.value_or(detect()), std::memory_order_relaxed);
}

#if defined(ALLEE_HAVE_AVX2_KERNELS)
#define ALLEE_DISPATCH(name, ...) \
    (active_isa() == Isa::avx2 ? avx2::name(__VA_ARGS__) : scalar::name(__VA_ARGS__))
#else
#define ALLEE_DISPATCH(name, ...) scalar::name(__VA_ARGS__)
#endif

void tridiagonal_apply(std::span<const double> lower, std::span<const double> diag, std::span<const double> upper,
                       std::span<const double> x, std::span<double> y) {
    const std::size_t n = diag.size();
    require_same(lower.size(), n);
    require_same(upper.size(), n);
    require_same(x.size(), n);
    require_same(y.size(), n);
    ALLEE_DISPATCH(tridiagonal_apply, lower.data(), diag.data(), upper.data(), x.data(), y.data(), n);
}

void stencil5_apply(std::size_t nx, std::size_t ny, std::span<const double> diag, std::span<const double> west,
                    std::span<const double> east, std::span<const double> south, std::span<const double> north,
                    std::span<const double> x, std::span<double> y) {
    const std::size_t n = nx * ny;
    for (std::size_t s : {diag.size(), west.size(), east.size(), south.size(), north.size(), x.size(), y.size()})
        require_same(s, n);
    ALLEE_DISPATCH(stencil5_apply, nx, ny, diag.data(), west.data(), east.data(), south.data(), north.data(), x.data(),
                   y.data());
}

double cubic_reaction(std::span<const double> u, double mu, double theta, std::span<double> f) {
    require_same(u.size(), f.size());
    return ALLEE_DISPATCH(cubic_reaction, u.data(), mu, theta, f.data(), u.size());
}

double logistic_reaction(std::span<const double> u, std::span<const double> r, double theta, std::span<double> f) {
    require_same(u.size(), f.size());
    require_same(u.size(), r.size());
    return ALLEE_DISPATCH(logistic_reaction, u.data(), r.data(), theta, f.data(), u.size());
}

double shared_reaction(std::span<const double> u, std::span<const double> v, std::span<const double> r, double theta,
                       std::span<double> fu, std::span<double> fv) {
    for (std::size_t s : {v.size(), r.size(), fu.size(), fv.size()}) require_same(s, u.size());
    return ALLEE_DISPATCH(shared_reaction, u.data(), v.data(), r.data(), theta, fu.data(), fv.data(), u.size());
}

void explicit_update(std::span<const double> u, std::span<const double> f, double dt, std::span<double> out) {
    require_same(u.size(), f.size());
    require_same(u.size(), out.size());
    ALLEE_DISPATCH(explicit_update, u.data(), f.data(), dt, out.data(), u.size());
}

FieldStats field_stats(std::span<const double> u) { return ALLEE_DISPATCH(field_stats, u.data(), u.size()); }

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    require_same(a.size(), b.size());
    return ALLEE_DISPATCH(max_abs_diff, a.data(), b.data(), a.size());
}

#undef ALLEE_DISPATCH

}  // namespace allee::kernels
