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

#include <cmath>
#include <limits>
#include <span>

#include "shuffledp/simd/kernels.hpp"

// Scalar reference kernels.  These define the semantics the vector variants
// are equivalence-tested against; sums are Kahan-compensated so the reference
// stays accurate on million-atom supports.

namespace shuffledp::simd {
namespace {

double reduce_max_impl(std::span<const double> x) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : x) {
    if (v > m) m = v;
  }
  return m;
}

double sum_exp_shifted_impl(std::span<const double> x, double shift) {
  double sum = 0.0;
  double comp = 0.0;
  for (double v : x) {
    const double y = std::exp(v - shift) - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

double power_term_max_impl(std::span<const double> log_p,
                           std::span<const double> log_q, double lambda) {
  const double one_minus = 1.0 - lambda;
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < log_p.size(); ++i) {
    const double t = lambda * log_p[i] + one_minus * log_q[i];
    if (t > m) m = t;
  }
  return m;
}

double power_term_sum_exp_impl(std::span<const double> log_p,
                               std::span<const double> log_q, double lambda,
                               double shift) {
  const double one_minus = 1.0 - lambda;
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t i = 0; i < log_p.size(); ++i) {
    const double t = lambda * log_p[i] + one_minus * log_q[i];
    const double y = std::exp(t - shift) - comp;
    const double s = sum + y;
    comp = (s - sum) - y;
    sum = s;
  }
  return sum;
}

}  // namespace

namespace detail {

const KernelTable kScalarKernels = {
    reduce_max_impl,
    sum_exp_shifted_impl,
    power_term_max_impl,
    power_term_sum_exp_impl,
};

}  // namespace detail
}  // namespace shuffledp::simd
