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

#include "shuffledp/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "shuffledp/dist.hpp"

namespace shuffledp {
namespace {

// ln(e^a + e^b) without overflow.
double log_add_exp(double a, double b) {
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  if (!std::isfinite(hi)) return hi;
  return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace

GdpParam theorem2_gdp(const ShuffleParams& params) {
  if (params.n() < 2) throw std::domain_error("theorem2_gdp: n must be >= 2");
  const double mu = 2.0 * std::exp(params.epsilon0() / 2.0) /
                    std::sqrt(static_cast<double>(params.n() - 1));
  return GdpParam{mu};
}

RdpPoint corollary2_rdp(const ShuffleParams& params, double lambda) {
  if (params.n() < 2) throw std::domain_error("corollary2_rdp: n must be >= 2");
  if (!(lambda >= 2.0)) {
    throw std::domain_error("corollary2_rdp: stated for lambda >= 2");
  }
  const double epsilon = 2.0 * std::exp(params.epsilon0()) * lambda /
                         static_cast<double>(params.n() - 1);
  return RdpPoint{lambda, epsilon, 0.0, false};
}

RdpPoint gdp_to_rdp(const GdpParam& g, double lambda) {
  if (!(lambda > 1.0)) throw std::domain_error("gdp_to_rdp: lambda must be > 1");
  return RdpPoint{lambda, 0.5 * g.mu * g.mu * lambda, 0.0, false};
}

EpsDelta gdp_to_eps_delta(const GdpParam& g, double epsilon) {
  if (!(epsilon >= 0.0)) {
    throw std::domain_error("gdp_to_eps_delta: epsilon must be >= 0");
  }
  if (g.mu < 0.0) throw std::domain_error("gdp_to_eps_delta: mu must be >= 0");
  if (g.mu == 0.0) return EpsDelta{epsilon, 0.0};

  const double a = -epsilon / g.mu + g.mu / 2.0;
  const double b = -epsilon / g.mu - g.mu / 2.0;
  // e^epsilon Phi(b) in log space so large epsilon cannot overflow before
  // the tail kills the product.
  const double log_term2 = epsilon + log_normal_cdf(b);
  const double raw = normal_cdf(a) - std::exp(log_term2);
  if (raw < -1e-12 || raw > 1.0 + 1e-12) {
    throw std::logic_error("gdp_to_eps_delta: delta escaped [0, 1]");
  }
  return EpsDelta{epsilon, std::min(1.0, std::max(0.0, raw))};
}

GdpParam gdp_compose(std::span<const double> mus) {
  double sum_sq = 0.0;
  for (double mu : mus) {
    if (mu < 0.0) throw std::domain_error("gdp_compose: mu must be >= 0");
    sum_sq += mu * mu;
  }
  return GdpParam{std::sqrt(sum_sq)};
}

RdpPoint girgis_upper(const ShuffleParams& params, std::int64_t lambda) {
  if (params.n() < 2) throw std::domain_error("girgis_upper: n must be >= 2");
  if (lambda < 2) {
    throw std::domain_error("girgis_upper: stated for integer lambda >= 2");
  }
  const double e0 = params.epsilon0();
  const double exp_e0 = std::exp(e0);
  const double n_minus_1 = static_cast<double>(params.n() - 1);
  const double nbar = std::floor(n_minus_1 / (2.0 * exp_e0)) + 1.0;
  const double lam = static_cast<double>(lambda);
  const double t1 = lam * lam * (exp_e0 - 1.0) * (exp_e0 - 1.0) / nbar;
  const double t2 = e0 * lam - n_minus_1 / (8.0 * exp_e0);
  const double epsilon = log_add_exp(t1, t2) / (lam - 1.0);
  return RdpPoint{lam, epsilon, 0.0, false};
}

RdpPoint girgis_lower(const ShuffleParams& params, double lambda) {
  if (!(lambda > 1.0)) {
    throw std::domain_error("girgis_lower: lambda must be > 1");
  }
  const double e0 = params.epsilon0();
  const double exp_e0 = std::exp(e0);
  const double arg = lambda * (lambda - 1.0) / 2.0 * (exp_e0 - 1.0) *
                     (exp_e0 - 1.0) /
                     (static_cast<double>(params.n()) * exp_e0);
  return RdpPoint{lambda, std::log1p(arg) / (lambda - 1.0), 0.0, false};
}

RdpPoint feldman_ref(const ShuffleParams& params, double lambda) {
  const double epsilon = 64.0 * std::exp(params.epsilon0()) * lambda /
                         static_cast<double>(params.n());
  return RdpPoint{lambda, epsilon, 0.0, false};
}

}  // namespace shuffledp
