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

#ifndef SHUFFLEDP_RENYI_HPP_
#define SHUFFLEDP_RENYI_HPP_

#include "shuffledp/pair_pmf.hpp"
#include "shuffledp/params.hpp"
#include "shuffledp/tradeoff.hpp"

// Exact Renyi divergence engines: direct truncated summation over the pair
// PMFs, and the trade-off-integral route.  The two are algebraically equal on
// the exact Neyman-Pearson curve, which is the library's central built-in
// consistency check.

namespace shuffledp {

// A (lambda, epsilon(lambda)) Renyi guarantee with a certified numerical
// slack.  divergent marks the integral route's failure mode (a zero-slope
// segment making the integrand blow up), reported as +inf.
struct RdpPoint {
  double lambda = 0.0;
  double epsilon = 0.0;
  double error_bound = 0.0;
  bool divergent = false;
};

// D^lambda(P || Q) = 1/(lambda-1) ln sum P(x)^lambda Q(x)^{1-lambda}, summed
// in log space over the shared support.  error_bound covers the truncated
// mass amplified by the e^{lambda epsilon0} worst-case ratio.  Requires
// lambda > 1 and P, Q from the same build_pair call.
RdpPoint renyi_direct(const PairPmf& P, const PairPmf& Q, double lambda);

// 1/(lambda-1) ln integral_0^1 |f'(x)|^{1-lambda} dx.  For a piecewise-linear
// curve the integral is the exact per-segment closed form
// sum_i w_i |s_i|^{1-lambda}.  A zero-slope segment makes the result +inf
// (divergent flag set).
RdpPoint renyi_from_curve(const TradeoffCurve& f, double lambda);

// Same integral for the analytic Gaussian curve, by adaptive quadrature to
// absolute 1e-10.  Equals mu^2 lambda / 2 analytically.
RdpPoint renyi_from_curve(const GaussianCurve& f, double lambda);

// The shuffled process's exact RDP point: builds the pair, takes
// max{D(P||Q), D(Q||P)}, and cross-checks the direct sum against the
// trade-off integral of the NP curve within max(1e-9, certified bounds),
// throwing std::logic_error if the two routes disagree.
RdpPoint shuffle_rdp_exact(const ShuffleParams& params, double lambda,
                           double tail_tol = 1e-15);

}  // namespace shuffledp

#endif  // SHUFFLEDP_RENYI_HPP_
