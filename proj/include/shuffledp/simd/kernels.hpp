// Copyright 2026 The shuffledp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SHUFFLEDP_SIMD_KERNELS_HPP_
#define SHUFFLEDP_SIMD_KERNELS_HPP_

#include <cstddef>
#include <span>
#include <string_view>

// Data-parallel reduction kernels behind the Renyi summations and PMF mass
// totals.  Every kernel has a scalar reference implementation and, on x86
// hosts built with AVX2 support, a vectorized variant selected at runtime.
// The two are equivalence-tested against each other; callers only see the
// dispatched front functions.

namespace shuffledp::simd {

enum class Backend {
  kAuto,    // pick the best supported backend at first use
  kScalar,  // force the scalar reference kernels
  kAvx2,    // force AVX2 (throws if the CPU lacks it)
};

// Overrides backend selection process-wide.  Intended for tests and the
// SHUFFLEDP_FORCE_SCALAR=1 environment escape hatch; not thread-safe against
// concurrent kernel invocations.
void set_backend(Backend backend);
Backend active_backend();
std::string_view backend_name();
bool cpu_supports_avx2();

// max over x; -inf for an empty span.
double reduce_max(std::span<const double> x);

// sum over i of exp(x[i] - shift).
double sum_exp_shifted(std::span<const double> x, double shift);

// max over i of lambda*log_p[i] + (1-lambda)*log_q[i].  Spans must have equal
// length; -inf when empty.
double power_term_max(std::span<const double> log_p,
                      std::span<const double> log_q, double lambda);

// sum over i of exp(lambda*log_p[i] + (1-lambda)*log_q[i] - shift).
double power_term_sum_exp(std::span<const double> log_p,
                          std::span<const double> log_q, double lambda,
                          double shift);

// log sum exp(x[i]); -inf for an empty span.
double log_sum_exp(std::span<const double> x);

// log sum exp(lambda*log_p[i] + (1-lambda)*log_q[i]) -- the Renyi power-sum
// inner loop.
double log_power_sum(std::span<const double> log_p,
                     std::span<const double> log_q, double lambda);

namespace detail {

struct KernelTable {
  double (*reduce_max)(std::span<const double>);
  double (*sum_exp_shifted)(std::span<const double>, double);
  double (*power_term_max)(std::span<const double>, std::span<const double>,
                           double);
  double (*power_term_sum_exp)(std::span<const double>,
                               std::span<const double>, double, double);
};

extern const KernelTable kScalarKernels;
#if SHUFFLEDP_BUILD_AVX2
extern const KernelTable kAvx2Kernels;
#endif

}  // namespace detail

}  // namespace shuffledp::simd

#endif  // SHUFFLEDP_SIMD_KERNELS_HPP_
