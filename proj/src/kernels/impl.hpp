// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "allee/kernels.hpp"

namespace allee::kernels {

#define ALLEE_KERNEL_SET                                                                                         \
    void tridiagonal_apply(const double* lower, const double* diag, const double* upper, const double* x,       \
                           double* y, std::size_t n);                                                           \
    void stencil5_apply(std::size_t nx, std::size_t ny, const double* diag, const double* west, const double* east, \
                        const double* south, const double* north, const double* x, double* y);                  \
    double cubic_reaction(const double* u, double mu, double theta, double* f, std::size_t n);                  \
    double logistic_reaction(const double* u, const double* r, double theta, double* f, std::size_t n);         \
    double shared_reaction(const double* u, const double* v, const double* r, double theta, double* fu,         \
                           double* fv, std::size_t n);                                                          \
    void explicit_update(const double* u, const double* f, double dt, double* out, std::size_t n);              \
    FieldStats field_stats(const double* u, std::size_t n);                                                     \
    double max_abs_diff(const double* a, const double* b, std::size_t n);

namespace scalar {
ALLEE_KERNEL_SET
}

#if defined(ALLEE_HAVE_AVX2_KERNELS)
namespace avx2 {
ALLEE_KERNEL_SET
}
#endif

#undef ALLEE_KERNEL_SET

}  // namespace allee::kernels
