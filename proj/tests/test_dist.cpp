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
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "shuffledp/dist.hpp"
#include "shuffledp/params.hpp"
#include "shuffledp/rng.hpp"

using namespace shuffledp;

TEST_CASE("log_binomial_pmf spot values") {
  // Empty binomial: the only outcome has probability 1.
  CHECK(log_binomial_pmf(0, {0, 0.3}) == 0.0);
  CHECK(log_binomial_pmf(1, {2, 0.5}) ==
        doctest::Approx(std::log(0.5)).epsilon(1e-14));
  // C(10,3) 0.3^3 0.7^7 = 0.266827932, by exact rational arithmetic.
  CHECK(log_binomial_pmf(3, {10, 0.3}) ==
        doctest::Approx(-1.3211512777668886).epsilon(1e-13));
}

TEST_CASE("log_binomial_pmf rejects out-of-range k") {
  CHECK_THROWS_AS(log_binomial_pmf(-1, {5, 0.5}), std::domain_error);
  CHECK_THROWS_AS(log_binomial_pmf(6, {5, 0.5}), std::domain_error);
  CHECK_THROWS_AS(log_binomial_pmf(0, {5, 1.5}), std::domain_error);
}

TEST_CASE("binomial pmf sums to one") {
  for (const auto& [trials, p] :
       std::vector<std::pair<std::int64_t, double>>{
           {0, 0.3}, {1, 0.9}, {7, 0.2}, {100, 0.5}, {10000, 0.37}}) {
    double total = 0.0;
    for (std::int64_t k = 0; k <= trials; ++k) {
      total += std::exp(log_binomial_pmf(k, {trials, p}));
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("normal_cdf spot values and symmetry") {
  CHECK(normal_cdf(0.0) == 0.5);
  // High-precision erfc oracle value.
  CHECK(normal_cdf(1.96) == doctest::Approx(0.9750021048517796).epsilon(1e-12));
  double prev = -1.0;
  for (double x = -8.0; x <= 8.0; x += 0.125) {
    const double c = normal_cdf(x);
    CHECK(c >= prev);
    prev = c;
    CHECK(std::abs(normal_cdf(x) + normal_cdf(-x) - 1.0) <= 1e-14);
  }
}

TEST_CASE("normal_quantile round trip") {
  CHECK(normal_quantile(0.5) == 0.0);
  CHECK_THROWS_AS(normal_quantile(0.0), std::domain_error);
  CHECK_THROWS_AS(normal_quantile(1.0), std::domain_error);

  const std::vector<double> grid = {1e-10, 1e-8,  1e-4,   0.01, 0.3,
                                    0.5,   0.731, 0.9999, 1.0 - 1e-8,
                                    1.0 - 1e-10};
  for (double u : grid) {
    CHECK(std::abs(normal_cdf(normal_quantile(u)) - u) <= 1e-12);
  }
  RngStream rng(5);
  for (int i = 0; i < 2000; ++i) {
    const double u = rng.next_open_double();
    CHECK(std::abs(normal_cdf(normal_quantile(u)) - u) <= 1e-12);
  }
}

TEST_CASE("log_normal_cdf agrees with the direct log in range and decays") {
  for (double x = -30.0; x <= 3.0; x += 0.5) {
    CHECK(log_normal_cdf(x) ==
          doctest::Approx(std::log(normal_cdf(x))).epsilon(1e-11));
  }
  // Far tail: finite, decreasing, close to the quadratic leading term.
  const double v = log_normal_cdf(-50.0);
  CHECK(std::isfinite(v));
  CHECK(v < -1200.0);
  CHECK(v == doctest::Approx(-0.5 * 2500.0 - std::log(50.0) -
                             0.5 * std::log(2.0 * M_PI))
                 .epsilon(1e-3));
}

TEST_CASE("laplace_sample moments, determinism and shape") {
  RngStream a(123);
  RngStream b(123);
  const auto va = laplace_sample(2.5, 5, a);
  const auto vb = laplace_sample(2.5, 5, b);
  CHECK(va == vb);
  CHECK(va.size() == 5);

  CHECK_THROWS_AS(laplace_sample(0.0, 1, a), std::domain_error);
  CHECK_THROWS_AS(laplace_sample(-1.0, 1, a), std::domain_error);

  RngStream rng(2024);
  const std::int64_t n = 1000000;
  const auto draws = laplace_sample(1.0, n, rng);
  double mean = 0.0;
  for (double v : draws) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : draws) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n - 1);
  CHECK(std::abs(mean) <= 0.01);
  CHECK(var >= 1.96);
  CHECK(var <= 2.04);
}

TEST_CASE("multinomial_moments matches the printed mean and covariance") {
  // epsilon0 = ln 2 so p = 1/2, n = 3.
  const ShuffleParams params(std::log(2.0), 3);
  const MultinomialMoments mom = multinomial_moments(params);
  CHECK(mom.mean[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mom.mean[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mom.mean[2] == doctest::Approx(1.0).epsilon(1e-15));

  // p = 1 (epsilon0 = 0), n = 11: the diagonal is 10 * (1/2)(1/2).
  const MultinomialMoments degenerate =
      multinomial_moments(ShuffleParams(0.0, 11));
  CHECK(degenerate.covariance[0][0] == doctest::Approx(2.5).epsilon(1e-15));

  CHECK_THROWS_AS(multinomial_moments(ShuffleParams(1.0, 1)),
                  std::domain_error);
}

TEST_CASE("multinomial covariance rows sum to zero and mean sums to n-1") {
  RngStream rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const double eps0 = 3.0 * rng.next_open_double();
    const std::int64_t n = 2 + static_cast<std::int64_t>(rng.next_below(5000));
    const MultinomialMoments mom = multinomial_moments(ShuffleParams(eps0, n));
    const double scale = static_cast<double>(n - 1);
    CHECK(std::abs(mom.mean[0] + mom.mean[1] + mom.mean[2] - scale) <=
          1e-12 * scale);
    for (int r = 0; r < 3; ++r) {
      const double row_sum =
          mom.covariance[r][0] + mom.covariance[r][1] + mom.covariance[r][2];
      CHECK(std::abs(row_sum) <= 1e-12 * scale);
      for (int c = 0; c < 3; ++c) {
        CHECK(mom.covariance[r][c] == mom.covariance[c][r]);
      }
    }
    // Positive semidefinite: quadratic forms stay above -1e-10 after
    // normalizing by n-1.
    for (int probe = 0; probe < 20; ++probe) {
      double v[3];
      double norm = 0.0;
      for (double& x : v) {
        x = 2.0 * rng.next_double() - 1.0;
        norm += x * x;
      }
      if (norm == 0.0) continue;
      double quad = 0.0;
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
          quad += v[r] * mom.covariance[r][c] * v[c];
        }
      }
      CHECK(quad / (scale * norm) >= -1e-10);
    }
  }
}

TEST_CASE("pair_quadratic_form equals 4/((n-1)p)") {
  // n = 11, p = 0.5 (epsilon0 = ln 2).
  CHECK(pair_quadratic_form(ShuffleParams(std::log(2.0), 11)) ==
        doctest::Approx(0.8).epsilon(1e-10));
  // n = 101, p = 1/e.
  CHECK(pair_quadratic_form(ShuffleParams(1.0, 101)) ==
        doctest::Approx(4.0 * std::exp(1.0) / 100.0).epsilon(1e-12));

  RngStream rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const double eps0 = 0.05 + 3.0 * rng.next_double();
    const std::int64_t n = 2 + static_cast<std::int64_t>(rng.next_below(100000));
    const ShuffleParams params(eps0, n);
    const double qf = pair_quadratic_form(params);
    const double expected =
        4.0 / (static_cast<double>(n - 1) * params.p());
    CHECK(qf == doctest::Approx(expected).epsilon(1e-10));
    CHECK(qf * static_cast<double>(n - 1) * params.p() ==
          doctest::Approx(4.0).epsilon(1e-10));
  }

  CHECK_THROWS_AS(pair_quadratic_form(ShuffleParams(0.0, 11)),
                  std::domain_error);
  CHECK_THROWS_AS(pair_quadratic_form(ShuffleParams(1.0, 1)),
                  std::domain_error);
}

TEST_CASE("split streams are independent of parent consumption") {
  RngStream parent(42);
  const RngStream child_before = parent.split(7);
  parent.next_u64();
  parent.next_u64();
  RngStream child_after = parent.split(7);
  RngStream child_copy = child_before;
  CHECK(child_copy.next_u64() == child_after.next_u64());

  RngStream other = parent.split(8);
  CHECK(other.next_u64() != child_after.next_u64());
}
