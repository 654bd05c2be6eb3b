#pragma once

#include "driftfit/kernels.hpp"
#include "driftfit/model.hpp"
#include "driftfit/quadrature.hpp"

namespace driftfit {

// int_0^inf e^{-z} z^{-alpha} dz = Gamma(1-alpha), alpha in (0,1).
QuadResult gamma_tail(double alpha);

// int_0^inf phi(v) v^{-alpha} dv, alpha in (0,1). The v -> u^{1/(1-alpha)}
// substitution regularizes the endpoint on (0,1].
QuadResult kernel_fractional_moment(const TruncationKernel& kernel, double alpha);

// Per-unit-time truncation compensator of the conditional-moment expansion:
//   int z * gamma_x * (1 - phi(gamma_x z / (c Delta^beta))) F(z) dz.
// The caller multiplies by the step Delta.
double trunc_compensator(double gamma_x, double delta, double beta, double c,
                         const TruncationKernel& kernel, const LevyMeasure& levy);

// Tempered-stable helpers used by the jump sampler and its tests.
// int_eps^inf e^{-z} z^{-1-alpha} dz  (retained jump intensity above eps)
QuadResult ts_tail_intensity(double alpha, double eps);
// int_0^eps z e^{-z} z^{-1-alpha} dz  (small-jump mean removed by the cutoff)
QuadResult ts_small_jump_mean(double alpha, double eps);

}  // namespace driftfit
