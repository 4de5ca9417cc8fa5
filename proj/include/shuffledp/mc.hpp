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

#ifndef SHUFFLEDP_MC_HPP_
#define SHUFFLEDP_MC_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "shuffledp/pair_pmf.hpp"
#include "shuffledp/params.hpp"
#include "shuffledp/rng.hpp"

// Monte Carlo oracle: samples the shuffled pair through its (C, A, Delta)
// reduction and estimates empirical (alpha, beta) points and plug-in Renyi
// divergences.  Used to statistically validate the exact machinery at
// small n.

namespace shuffledp {

struct McEstimate {
  double value = 0.0;
  double stderror = 0.0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
};

// Draws atoms of P or Q.  Precomputes the Bin(n-1, p) CDF once; A ~ Bin(C,
// 1/2) is drawn by popcount of C fair bits.
class PairSampler {
 public:
  explicit PairSampler(const ShuffleParams& params);
  std::pair<std::int64_t, std::int64_t> sample(PairPmf::Side side,
                                               RngStream& rng) const;

 private:
  ShuffleParams params_;
  std::vector<double> c_cdf_;
};

// One draw of (a, b) from the requested side.  Builds the sampler tables on
// every call; loops should construct a PairSampler instead.
std::pair<std::int64_t, std::int64_t> sample_pair(const ShuffleParams& params,
                                                  PairPmf::Side side,
                                                  RngStream& rng);

// Calibrates the exact randomized likelihood-ratio threshold test to type-I
// error alpha on the exact P, then estimates type-II error on Q by Monte
// Carlo with binomial stderr.  alpha in (0, 1), samples >= 1e4.
McEstimate estimate_beta_at_alpha(const ShuffleParams& params, double alpha,
                                  std::int64_t samples, std::uint64_t seed);

// Plug-in Renyi divergence of order lambda from empirical PMFs of both
// sides, restricted to the common empirical support; stderr via
// nonparametric bootstrap (200 resamples).  Requires n <= 200 (plug-in
// reliability window) and samples >= 1e5.
McEstimate estimate_renyi_plugin(const ShuffleParams& params, double lambda,
                                 std::int64_t samples, std::uint64_t seed);

struct CltReport {
  // Largest absolute entry of the standardized sample mean.
  double max_abs_mean = 0.0;
  // Largest absolute deviation of the standardized sample covariance from
  // the identity.
  double max_abs_cov_dev = 0.0;
  // Largest absolute standardized third moment; trends to 0 as n grows and
  // is the distance to eyeball for the convergence-rate claim.  No pass/fail
  // judgement is attached to the rate itself.
  double skewness_distance = 0.0;
  std::int64_t samples = 0;
};

// Draws multinomial count triples, standardizes the free two coordinates by
// the exact moments, and reports moment deviations.  Requires epsilon0 > 0
// (the sub-covariance is singular at p = 1) and samples >= 1e5.
CltReport clt_diagnostic(const ShuffleParams& params, std::int64_t samples,
                         std::uint64_t seed);

}  // namespace shuffledp

#endif  // SHUFFLEDP_MC_HPP_
