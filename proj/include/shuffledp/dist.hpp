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

#ifndef SHUFFLEDP_DIST_HPP_
#define SHUFFLEDP_DIST_HPP_

#include <array>
#include <cstdint>
#include <vector>

#include "shuffledp/params.hpp"
#include "shuffledp/rng.hpp"

// Numerically stable probability primitives shared by the rest of the
// library: log-space binomial PMFs, the standard normal CDF and quantile,
// Laplace sampling, and the multinomial moments of the shuffled count vector.
// All functions are pure; sampling is pure given an explicit stream.

namespace shuffledp {

struct BinomialSpec {
  std::int64_t trials = 0;
  double success_prob = 0.0;
};

// Mean vector and covariance of (n0, n1, n2) ~ Multinom(n-1; p/2, p/2, 1-p).
// Rows of the covariance sum to zero (the counts are linearly constrained)
// and the mean entries sum to n-1.
struct MultinomialMoments {
  std::array<double, 3> mean;
  std::array<std::array<double, 3>, 3> covariance;
};

// ln binom(n, k) via log-gamma; exact 0 for the k==0 / k==n edges.
double log_binomial_coefficient(std::int64_t n, std::int64_t k);

// ln P(Bin(trials, p) = k).  Throws std::domain_error when k is outside
// [0, trials] or the spec is malformed.  Safe for trials up to 1e7.
double log_binomial_pmf(std::int64_t k, const BinomialSpec& spec);

// Standard normal CDF, implemented on erfc for full relative accuracy in the
// lower tail.
double normal_cdf(double x);

// ln of the standard normal CDF; usable far into the lower tail where
// normal_cdf underflows.
double log_normal_cdf(double x);

// Inverse of normal_cdf on (0, 1).  Rational initial guess polished with two
// Newton steps; |normal_cdf(normal_quantile(u)) - u| <= 1e-12 over
// [1e-10, 1 - 1e-10].  Throws std::domain_error at u <= 0 or u >= 1.
double normal_quantile(double u);

// dim independent Laplace(0, scale) draws from the stream.
std::vector<double> laplace_sample(double scale, std::int64_t dim,
                                   RngStream& rng);

// Moments of the multinomial count vector for the given shuffle parameters.
// Requires n >= 2.
MultinomialMoments multinomial_moments(const ShuffleParams& params);

// Builds the 2x2 sub-covariance of the first two multinomial coordinates,
// inverts it numerically, and returns the quadratic form of the unit mean
// shift (-1, 1).  Equals 4 / ((n-1) p) analytically; requires n >= 2 and
// epsilon0 > 0 (the matrix is singular at p = 1).
double pair_quadratic_form(const ShuffleParams& params);

}  // namespace shuffledp

#endif  // SHUFFLEDP_DIST_HPP_
