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

#ifndef SHUFFLEDP_BOUNDS_HPP_
#define SHUFFLEDP_BOUNDS_HPP_

#include <cstdint>
#include <span>

#include "shuffledp/params.hpp"
#include "shuffledp/renyi.hpp"

// Closed-form accountant: the asymptotic GDP/RDP bounds for the shuffled
// process, prior-work comparison bounds, and the GDP conversion/composition
// toolbox.

namespace shuffledp {

struct GdpParam {
  double mu = 0.0;
};

struct EpsDelta {
  double epsilon = 0.0;
  double delta = 0.0;
};

// mu = 2 e^{epsilon0/2} / sqrt(n-1).  Requires n >= 2.
GdpParam theorem2_gdp(const ShuffleParams& params);

// epsilon = 2 e^{epsilon0} lambda / (n-1) for lambda >= 2; algebraically
// identical to gdp_to_rdp(theorem2_gdp(params), lambda).  Requires n >= 2.
RdpPoint corollary2_rdp(const ShuffleParams& params, double lambda);

// mu-GDP implies (lambda, mu^2 lambda / 2)-RDP.
RdpPoint gdp_to_rdp(const GdpParam& g, double lambda);

// delta(epsilon) = Phi(-eps/mu + mu/2) - e^eps Phi(-eps/mu - mu/2), computed
// with the stable normal CDF and a log-space second term deep in the tail.
// mu == 0 gives delta == 0.
EpsDelta gdp_to_eps_delta(const GdpParam& g, double epsilon);

// Composition: mu = sqrt(sum mu_i^2).
GdpParam gdp_compose(std::span<const double> mus);

// Prior-work upper bound, valid for integer lambda >= 2:
//   1/(lambda-1) ln( exp(lambda^2 (e^{e0}-1)^2 / nbar)
//                  + exp(e0 lambda - (n-1)/(8 e^{e0})) )
// with nbar = floor((n-1) / (2 e^{e0})) + 1, via stable log-sum-exp.
RdpPoint girgis_upper(const ShuffleParams& params, std::int64_t lambda);

// Prior-work lower bound, any lambda > 1:
//   1/(lambda-1) ln(1 + lambda(lambda-1) (e^{e0}-1)^2 / (2 n e^{e0})).
RdpPoint girgis_lower(const ShuffleParams& params, double lambda);

// Order-level reference 64 e^{epsilon0} lambda / n.  The constant comes from
// a big-O statement, so this is a comparison row, not a certified bound;
// callers must surface it as approximate.
RdpPoint feldman_ref(const ShuffleParams& params, double lambda);

}  // namespace shuffledp

#endif  // SHUFFLEDP_BOUNDS_HPP_
