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

// AVX2 + FMA kernel variants.  This translation unit is the only one built
// with -mavx2 -mfma; it must never run unless the dispatcher verified CPU
// support.

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>

#include <immintrin.h>

#include "shuffledp/simd/kernels.hpp"

namespace shuffledp::simd {
namespace {

// Arguments below this produce values under ~3.3e-308; flushed to zero so
// the 2^n scaling never has to encode a subnormal exponent.
constexpr double kExpUnderflow = -708.0;
constexpr double kExpOverflow = 709.78;

// Vectorized double-precision exp, Cephes-style: reduce x = n ln2 + r with
// |r| <= ln2/2, evaluate the rational expm1 approximant on r, scale by 2^n
// through the exponent bits.  Accurate to within a couple of ulps over the
// flush thresholds.
inline __m256d exp_pd(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
  const __m256d ln2_hi = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d ln2_lo = _mm256_set1_pd(1.42860682030941723212e-6);

  const __m256d p0 = _mm256_set1_pd(1.26177193074810590878e-4);
  const __m256d p1 = _mm256_set1_pd(3.02994407707441961300e-2);
  const __m256d p2 = _mm256_set1_pd(9.99999999999999999910e-1);
  const __m256d q0 = _mm256_set1_pd(3.00198505138664455042e-6);
  const __m256d q1 = _mm256_set1_pd(2.52448340349684104192e-3);
  const __m256d q2 = _mm256_set1_pd(2.27265548208155028766e-1);
  const __m256d q3 = _mm256_set1_pd(2.00000000000000000005e0);

  const __m256d clamped = _mm256_max_pd(
      _mm256_min_pd(x, _mm256_set1_pd(kExpOverflow + 1.0)),
      _mm256_set1_pd(kExpUnderflow - 1.0));

  const __m256d n = _mm256_round_pd(_mm256_mul_pd(clamped, log2e),
                                    _MM_FROUND_TO_NEAREST_INT |
                                        _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, ln2_hi, clamped);
  r = _mm256_fnmadd_pd(n, ln2_lo, r);

  const __m256d rr = _mm256_mul_pd(r, r);
  __m256d pe = _mm256_fmadd_pd(p0, rr, p1);
  pe = _mm256_fmadd_pd(pe, rr, p2);
  pe = _mm256_mul_pd(pe, r);
  __m256d qe = _mm256_fmadd_pd(q0, rr, q1);
  qe = _mm256_fmadd_pd(qe, rr, q2);
  qe = _mm256_fmadd_pd(qe, rr, q3);
  const __m256d expm1_half = _mm256_div_pd(pe, _mm256_sub_pd(qe, pe));
  __m256d result = _mm256_fmadd_pd(_mm256_set1_pd(2.0), expm1_half,
                                   _mm256_set1_pd(1.0));

  // 2^n via exponent bits (n is within [-1022, 1024] after clamping).
  const __m128i n32 = _mm256_cvtpd_epi32(n);
  const __m256i n64 = _mm256_cvtepi32_epi64(n32);
  const __m256i biased = _mm256_add_epi64(n64, _mm256_set1_epi64x(1023));
  const __m256d scale =
      _mm256_castsi256_pd(_mm256_slli_epi64(biased, 52));
  result = _mm256_mul_pd(result, scale);

  result = _mm256_blendv_pd(result, _mm256_setzero_pd(),
                            _mm256_cmp_pd(x, _mm256_set1_pd(kExpUnderflow),
                                          _CMP_LT_OQ));
  result = _mm256_blendv_pd(
      result, _mm256_set1_pd(std::numeric_limits<double>::infinity()),
      _mm256_cmp_pd(x, _mm256_set1_pd(kExpOverflow), _CMP_GT_OQ));
  return result;
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s2 = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(s2) + _mm_cvtsd_f64(_mm_unpackhi_pd(s2, s2));
}

inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m2 = _mm_max_pd(lo, hi);
  const double a = _mm_cvtsd_f64(m2);
  const double b = _mm_cvtsd_f64(_mm_unpackhi_pd(m2, m2));
  return a > b ? a : b;
}

// Lane-wise Kahan accumulator.
struct CompensatedLanes {
  __m256d sum = _mm256_setzero_pd();
  __m256d comp = _mm256_setzero_pd();

  inline void add(__m256d v) {
    const __m256d y = _mm256_sub_pd(v, comp);
    const __m256d t = _mm256_add_pd(sum, y);
    comp = _mm256_sub_pd(_mm256_sub_pd(t, sum), y);
    sum = t;
  }

  inline double merge_with_scalar_tail(double tail_sum, double tail_comp) {
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, sum);
    double s = tail_sum;
    double c = tail_comp;
    for (double lane : lanes) {
      const double y = lane - c;
      const double t = s + y;
      c = (t - s) - y;
      s = t;
    }
    return s;
  }
};

double reduce_max_impl(std::span<const double> x) {
  const std::size_t n = x.size();
  std::size_t i = 0;
  double m = -std::numeric_limits<double>::infinity();
  if (n >= 4) {
    __m256d vm = _mm256_set1_pd(m);
    for (; i + 4 <= n; i += 4) {
      vm = _mm256_max_pd(vm, _mm256_loadu_pd(x.data() + i));
    }
    m = hmax(vm);
  }
  for (; i < n; ++i) {
    if (x[i] > m) m = x[i];
  }
  return m;
}

double sum_exp_shifted_impl(std::span<const double> x, double shift) {
  const std::size_t n = x.size();
  const __m256d vshift = _mm256_set1_pd(shift);
  CompensatedLanes acc;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_sub_pd(_mm256_loadu_pd(x.data() + i), vshift);
    acc.add(exp_pd(v));
  }
  double tail = 0.0;
  double tail_comp = 0.0;
  for (; i < n; ++i) {
    const double arg = x[i] - shift;
    const double e = arg < kExpUnderflow ? 0.0 : std::exp(arg);
    const double y = e - tail_comp;
    const double t = tail + y;
    tail_comp = (t - tail) - y;
    tail = t;
  }
  return acc.merge_with_scalar_tail(tail, tail_comp);
}

double power_term_max_impl(std::span<const double> log_p,
                           std::span<const double> log_q, double lambda) {
  const std::size_t n = log_p.size();
  const __m256d vl = _mm256_set1_pd(lambda);
  const __m256d vo = _mm256_set1_pd(1.0 - lambda);
  std::size_t i = 0;
  double m = -std::numeric_limits<double>::infinity();
  if (n >= 4) {
    __m256d vm = _mm256_set1_pd(m);
    for (; i + 4 <= n; i += 4) {
      const __m256d t =
          _mm256_fmadd_pd(vl, _mm256_loadu_pd(log_p.data() + i),
                          _mm256_mul_pd(vo, _mm256_loadu_pd(log_q.data() + i)));
      vm = _mm256_max_pd(vm, t);
    }
    m = hmax(vm);
  }
  for (; i < n; ++i) {
    const double t = lambda * log_p[i] + (1.0 - lambda) * log_q[i];
    if (t > m) m = t;
  }
  return m;
}

double power_term_sum_exp_impl(std::span<const double> log_p,
                               std::span<const double> log_q, double lambda,
                               double shift) {
  const std::size_t n = log_p.size();
  const __m256d vl = _mm256_set1_pd(lambda);
  const __m256d vo = _mm256_set1_pd(1.0 - lambda);
  const __m256d vshift = _mm256_set1_pd(shift);
  CompensatedLanes acc;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d t =
        _mm256_fmadd_pd(vl, _mm256_loadu_pd(log_p.data() + i),
                        _mm256_mul_pd(vo, _mm256_loadu_pd(log_q.data() + i)));
    acc.add(exp_pd(_mm256_sub_pd(t, vshift)));
  }
  double tail = 0.0;
  double tail_comp = 0.0;
  for (; i < n; ++i) {
    const double t = lambda * log_p[i] + (1.0 - lambda) * log_q[i] - shift;
    const double e = t < kExpUnderflow ? 0.0 : std::exp(t);
    const double y = e - tail_comp;
    const double s = tail + y;
    tail_comp = (s - tail) - y;
    tail = s;
  }
  return acc.merge_with_scalar_tail(tail, tail_comp);
}

}  // namespace

namespace detail {

const KernelTable kAvx2Kernels = {
    reduce_max_impl,
    sum_exp_shifted_impl,
    power_term_max_impl,
    power_term_sum_exp_impl,
};

}  // namespace detail
}  // namespace shuffledp::simd
