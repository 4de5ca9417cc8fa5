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

#include "shuffledp/dist.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "shuffledp/params.hpp"
#include "shuffledp/rng.hpp"

namespace shuffledp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

// ---------------------------------------------------------------------------
// RngStream (xoshiro256++, splitmix64 seeding)
// ---------------------------------------------------------------------------

RngStream::RngStream(std::uint64_t seed) : seed_(seed) {
  std::uint64_t s = seed;
  for (auto& word : state_) word = splitmix64(s);
}

RngStream RngStream::split(std::uint64_t key) const {
  // Children are a pure function of (parent seed, key); the parent state is
  // untouched, so fan-out order does not matter.
  std::uint64_t s = seed_ ^ (0x6a09e667f3bcc909ULL + key);
  const std::uint64_t h1 = splitmix64(s);
  const std::uint64_t h2 = splitmix64(s);
  return RngStream(h1 ^ rotl(h2, 32));
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RngStream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_open_double() {
  // Centered 52-bit lattice: never hits 0 or 1 and is symmetric around 1/2.
  return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
}

bool RngStream::bernoulli(double prob) { return next_double() < prob; }

std::uint64_t RngStream::next_below(std::uint64_t bound) {
  if (bound == 0) throw std::domain_error("next_below: bound must be >= 1");
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r >= threshold) return r % bound;
  }
}

// ---------------------------------------------------------------------------
// ShuffleParams
// ---------------------------------------------------------------------------

ShuffleParams::ShuffleParams(double epsilon0, std::int64_t n)
    : epsilon0_(epsilon0), n_(n) {
  if (!(epsilon0 >= 0.0) || !std::isfinite(epsilon0)) {
    throw std::domain_error("ShuffleParams: epsilon0 must be finite and >= 0");
  }
  if (n < 1) throw std::domain_error("ShuffleParams: n must be >= 1");
  p_ = std::exp(-epsilon0);
}

// ---------------------------------------------------------------------------
// Binomial
// ---------------------------------------------------------------------------

namespace {

// ln(x!) - ln(Stirling approximation of x!): the correction term of the
// saddle-point PMF evaluation.  Direct lgamma differencing loses ~1e-11 of
// absolute precision at large arguments because lgamma itself is huge; the
// asymptotic series keeps every intermediate small.
double stirling_error(double x) {
  if (x <= 15.0) {
    return std::lgamma(x + 1.0) -
           ((x + 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * M_PI));
  }
  const double xx = x * x;
  return (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - 1.0 / (1680.0 * xx)) /
                                          xx) /
                           xx) /
         x;
}

// x ln(x/m) + m - x, evaluated by series when x is close to m (Loader's
// bd0), where the direct form cancels.
double bd0(double x, double m) {
  if (std::abs(x - m) < 0.1 * (x + m)) {
    const double d = (x - m) / (x + m);
    double s = (x - m) * d;
    double ej = 2.0 * x * d;
    const double v = d * d;
    for (int j = 1;; ++j) {
      ej *= v;
      const double s1 = s + ej / static_cast<double>(2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
  }
  return x * std::log(x / m) + m - x;
}

}  // namespace

double log_binomial_coefficient(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) {
    throw std::domain_error("log_binomial_coefficient: k outside [0, n]");
  }
  if (k == 0 || k == n) return 0.0;
  // Saddle-point form at p = k/n keeps full precision for large n.
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  const double md = static_cast<double>(n - k);
  return stirling_error(nd) - stirling_error(kd) - stirling_error(md) +
         0.5 * std::log(nd / (2.0 * M_PI * kd * md)) + nd * std::log(nd) -
         kd * std::log(kd) - md * std::log(md);
}

double log_binomial_pmf(std::int64_t k, const BinomialSpec& spec) {
  if (spec.trials < 0) {
    throw std::domain_error("log_binomial_pmf: trials must be >= 0");
  }
  if (!(spec.success_prob >= 0.0) || !(spec.success_prob <= 1.0)) {
    throw std::domain_error("log_binomial_pmf: success_prob outside [0, 1]");
  }
  if (k < 0 || k > spec.trials) {
    throw std::domain_error("log_binomial_pmf: k outside [0, trials]");
  }
  const double p = spec.success_prob;
  if (p == 0.0) return k == 0 ? 0.0 : -kInf;
  if (p == 1.0) return k == spec.trials ? 0.0 : -kInf;
  const std::int64_t n = spec.trials;
  if (n == 0) return 0.0;
  if (k == 0) return static_cast<double>(n) * std::log1p(-p);
  if (k == n) return static_cast<double>(n) * std::log(p);

  // Saddle-point evaluation (Loader): exact Stirling corrections plus the
  // deviance terms, all of modest magnitude.
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  const double md = static_cast<double>(n - k);
  const double correction =
      stirling_error(nd) - stirling_error(kd) - stirling_error(md);
  return correction - bd0(kd, nd * p) - bd0(md, nd * (1.0 - p)) +
         0.5 * std::log(nd / (2.0 * M_PI * kd * md));
}

// ---------------------------------------------------------------------------
// Normal CDF / quantile
// ---------------------------------------------------------------------------

double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

double log_normal_cdf(double x) {
  if (x > -1.0) return std::log(normal_cdf(x));
  if (x > -36.5) {
    // erfc still carries full relative precision here.
    return std::log(0.5) + std::log(std::erfc(-x * M_SQRT1_2));
  }
  // Asymptotic expansion of the Mills ratio; relative error < 1e-12 for
  // x < -36.5.
  const double z = -x;
  const double zz = z * z;
  const double series =
      1.0 - 1.0 / zz + 3.0 / (zz * zz) - 15.0 / (zz * zz * zz) +
      105.0 / (zz * zz * zz * zz);
  return -0.5 * zz - std::log(z) - 0.5 * std::log(2.0 * M_PI) +
         std::log(series);
}

namespace {

// Rational approximation for the lower-tail quantile (Acklam's coefficients),
// accurate to ~1e-9 before polishing.
double quantile_initial_guess(double u) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double u_low = 0.02425;
  if (u < u_low) {
    const double q = std::sqrt(-2.0 * std::log(u));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = u - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
          a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

double quantile_lower_half(double u) {
  double x = quantile_initial_guess(u);
  for (int step = 0; step < 2; ++step) {
    const double err = normal_cdf(x) - u;
    const double pdf = normal_pdf(x);
    if (pdf <= 0.0) break;
    x -= err / pdf;
  }
  return x;
}

}  // namespace

double normal_quantile(double u) {
  if (!(u > 0.0) || !(u < 1.0)) {
    throw std::domain_error("normal_quantile: u must lie strictly in (0, 1)");
  }
  if (u == 0.5) return 0.0;
  if (u > 0.5) return -quantile_lower_half(1.0 - u);
  return quantile_lower_half(u);
}

// ---------------------------------------------------------------------------
// Laplace sampling
// ---------------------------------------------------------------------------

std::vector<double> laplace_sample(double scale, std::int64_t dim,
                                   RngStream& rng) {
  if (!(scale > 0.0)) {
    throw std::domain_error("laplace_sample: scale must be positive");
  }
  if (dim < 1) throw std::domain_error("laplace_sample: dim must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(dim));
  for (double& value : out) {
    const double v = rng.next_open_double() - 0.5;  // in (-1/2, 1/2)
    const double magnitude = -scale * std::log1p(-2.0 * std::abs(v));
    value = v < 0.0 ? -magnitude : magnitude;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Multinomial moments and the pair quadratic form
// ---------------------------------------------------------------------------

MultinomialMoments multinomial_moments(const ShuffleParams& params) {
  if (params.n() < 2) {
    throw std::domain_error("multinomial_moments: n must be >= 2");
  }
  const double m = static_cast<double>(params.n() - 1);
  const double p = params.p();
  MultinomialMoments out;
  out.mean = {m * p / 2.0, m * p / 2.0, m * (1.0 - p)};
  const double diag = m * (p / 2.0) * (1.0 - p / 2.0);
  const double off01 = -m * p * p / 4.0;
  const double off2 = -m * p * (1.0 - p) / 2.0;
  out.covariance = {{{diag, off01, off2},
                     {off01, diag, off2},
                     {off2, off2, m * p * (1.0 - p)}}};
  return out;
}

double pair_quadratic_form(const ShuffleParams& params) {
  if (params.n() < 2) {
    throw std::domain_error("pair_quadratic_form: n must be >= 2");
  }
  if (!(params.epsilon0() > 0.0)) {
    throw std::domain_error(
        "pair_quadratic_form: epsilon0 must be positive (singular covariance "
        "at p = 1)");
  }
  const MultinomialMoments mom = multinomial_moments(params);
  const double s00 = mom.covariance[0][0];
  const double s01 = mom.covariance[0][1];
  const double det = s00 * s00 - s01 * s01;
  if (!(det > 0.0) || !std::isfinite(det)) {
    throw std::domain_error("pair_quadratic_form: singular sub-covariance");
  }
  const double inv00 = s00 / det;
  const double inv01 = -s01 / det;
  // Mean shift between the two hypotheses is (-1, 1).
  return inv00 + inv00 - 2.0 * inv01;
}

}  // namespace shuffledp
