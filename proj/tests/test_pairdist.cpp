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

#include "brute_force.hpp"
#include "doctest.h"
#include "shuffledp/pair_pmf.hpp"

using namespace shuffledp;

TEST_CASE("n = 1 reduces to two Bernoulli atoms with zero neglected mass") {
  const ShuffleParams params(std::log(2.0), 1);
  const auto [P, Q] = build_pair(params, 1e-12);

  CHECK(P.size() == 2);
  CHECK(P.neglected_mass() == 0.0);
  CHECK(P.log_mass_at(1, 0) == doctest::Approx(std::log(2.0 / 3.0)).epsilon(1e-14));
  CHECK(P.log_mass_at(0, 1) == doctest::Approx(std::log(1.0 / 3.0)).epsilon(1e-14));
  CHECK(Q.log_mass_at(1, 0) == doctest::Approx(std::log(1.0 / 3.0)).epsilon(1e-14));
  CHECK(Q.log_mass_at(0, 1) == doctest::Approx(std::log(2.0 / 3.0)).epsilon(1e-14));
}

TEST_CASE("total stored mass stays within the truncation contract") {
  for (const double eps0 : {0.25, 1.0, 2.5}) {
    for (const std::int64_t n : {std::int64_t{1}, std::int64_t{10},
                                 std::int64_t{500}, std::int64_t{5000}}) {
      const double tol = 1e-12;
      const auto [P, Q] = build_pair(ShuffleParams(eps0, n), tol);
      CHECK(P.total_mass() <= 1.0 + 1e-12);
      CHECK(P.total_mass() >= 1.0 - tol - 1e-12);
      CHECK(Q.total_mass() <= 1.0 + 1e-12);
      CHECK(Q.total_mass() >= 1.0 - tol - 1e-12);
      CHECK(P.neglected_mass() <= tol);
    }
  }
}

TEST_CASE("small-n construction matches direct enumeration exactly") {
  for (const double eps0 : {0.5, 1.0, 2.0}) {
    for (std::int64_t n = 1; n <= 12; ++n) {
      const ShuffleParams params(eps0, n);
      const auto [P, Q] = build_pair(params, 1e-15);
      const testing::BrutePair brute = testing::brute_force_pair(params);

      // No truncation should occur at these sizes.
      CHECK(P.neglected_mass() == 0.0);
      CHECK(P.size() == brute.p.size());

      P.for_each_atom([&](std::int64_t a, std::int64_t b, double log_mass) {
        const double expected = brute.p.at({a, b});
        CHECK(std::exp(log_mass) ==
              doctest::Approx(expected).epsilon(1e-14));
      });
      Q.for_each_atom([&](std::int64_t a, std::int64_t b, double log_mass) {
        const double expected = brute.q.at({a, b});
        CHECK(std::exp(log_mass) ==
              doctest::Approx(expected).epsilon(1e-14));
      });
    }
  }
}

TEST_CASE("swap symmetry maps P onto Q atom by atom") {
  const ShuffleParams params(1.5, 40);
  const auto [P, Q] = build_pair(params, 1e-15);
  P.for_each_atom([&](std::int64_t a, std::int64_t b, double log_mass) {
    CHECK(Q.contains(b, a));
    CHECK(std::abs(Q.log_mass_at(b, a) - log_mass) <= 1e-12);
  });
}

TEST_CASE("every stored atom respects the pointwise epsilon0 cap") {
  for (const double eps0 : {0.5, 1.0, 2.0}) {
    const ShuffleParams params(eps0, 60);
    const auto pair = build_pair(params, 1e-13);
    pair.first.for_each_atom(
        [&](std::int64_t a, std::int64_t b, double log_p) {
          const double log_q = pair.second.log_mass_at(a, b);
          CHECK(std::abs(log_p - log_q) <= eps0 + 1e-12);
        });
  }
}

TEST_CASE("likelihood_ratio spot values and bounds") {
  const ShuffleParams two_atom(std::log(2.0), 1);
  const auto pair1 = build_pair(two_atom, 1e-12);
  CHECK(likelihood_ratio(0, 1, two_atom, pair1) ==
        doctest::Approx(2.0).epsilon(1e-13));
  CHECK(likelihood_ratio(1, 0, two_atom, pair1) ==
        doctest::Approx(0.5).epsilon(1e-13));

  // Symmetric atom (1, 1) carries equal mass under both sides.
  const ShuffleParams params3(std::log(2.0), 3);
  const auto pair3 = build_pair(params3, 1e-12);
  CHECK(likelihood_ratio(1, 1, params3, pair3) ==
        doctest::Approx(1.0).epsilon(1e-13));

  const ShuffleParams params50(1.0, 50);
  const auto pair50 = build_pair(params50, 1e-15);
  const double lo = std::exp(-1.0) * (1.0 - 1e-12);
  const double hi = std::exp(1.0) * (1.0 + 1e-12);
  pair50.first.for_each_atom([&](std::int64_t a, std::int64_t b, double) {
    const double ratio = likelihood_ratio(a, b, params50, pair50);
    CHECK(ratio >= lo);
    CHECK(ratio <= hi);
  });

  CHECK_THROWS_AS(likelihood_ratio(500, 500, params50, pair50),
                  std::domain_error);
}

TEST_CASE("neglected mass shrinks as tail_tol shrinks") {
  const ShuffleParams params(1.0, 2000);
  double prev = 1.0;
  for (const double tol : {1e-7, 1e-9, 1e-11, 1e-13, 1e-15}) {
    const auto [P, Q] = build_pair(params, tol);
    CHECK(P.neglected_mass() <= prev + 1e-300);
    CHECK(P.neglected_mass() <= tol);
    prev = P.neglected_mass();
  }
}

TEST_CASE("build_pair validates tail_tol") {
  const ShuffleParams params(1.0, 10);
  CHECK_THROWS_AS(build_pair(params, 0.0), std::domain_error);
  CHECK_THROWS_AS(build_pair(params, -1e-9), std::domain_error);
  CHECK_THROWS_AS(build_pair(params, 1e-3), std::domain_error);
}

TEST_CASE("support coordinates satisfy the structural constraints") {
  const ShuffleParams params(0.75, 200);
  const auto [P, Q] = build_pair(params, 1e-13);
  P.for_each_atom([&](std::int64_t a, std::int64_t b, double) {
    CHECK(a >= 0);
    CHECK(b >= 0);
    CHECK(a + b >= 1);
    CHECK(a + b <= params.n());
  });
}
