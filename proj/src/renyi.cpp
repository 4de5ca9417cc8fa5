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

#include "shuffledp/renyi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "shuffledp/simd/kernels.hpp"

namespace shuffledp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double truncation_error_bound(double neglected, double epsilon0,
                              double lambda) {
  if (neglected <= 0.0) return 0.0;
  // Every excluded outcome carries a likelihood ratio within e^{epsilon0},
  // so the missing power-sum mass is at most neglected * e^{lambda epsilon0};
  // propagate it through the logarithm.
  const double log_amplified = std::log(neglected) + lambda * epsilon0;
  if (log_amplified > 700.0) return kInf;
  return std::log1p(std::exp(log_amplified)) / (lambda - 1.0);
}

}  // namespace

RdpPoint renyi_direct(const PairPmf& P, const PairPmf& Q, double lambda) {
  if (!(lambda > 1.0)) {
    throw std::domain_error("renyi_direct: lambda must be > 1");
  }
  if (P.size() == 0 || P.size() != Q.size()) {
    throw std::domain_error("renyi_direct: empty or mismatched supports");
  }
  const double log_sum =
      simd::log_power_sum(P.log_masses(), Q.log_masses(), lambda);
  const double epsilon = std::max(0.0, log_sum / (lambda - 1.0));
  const double neglected =
      std::max(P.neglected_mass(), Q.neglected_mass());
  return RdpPoint{lambda, epsilon,
                  truncation_error_bound(neglected, P.params().epsilon0(),
                                         lambda),
                  false};
}

RdpPoint renyi_from_curve(const TradeoffCurve& f, double lambda) {
  if (!(lambda > 1.0)) {
    throw std::domain_error("renyi_from_curve: lambda must be > 1");
  }
  std::vector<double> log_terms;
  log_terms.reserve(f.segments().size());
  for (const TradeoffCurve::Segment& seg : f.segments()) {
    if (seg.drop <= 0.0) {
      // A zero-slope segment makes |f'|^{1-lambda} blow up: the integral
      // diverges for every lambda > 1.
      return RdpPoint{lambda, kInf, 0.0, true};
    }
    // w * |s|^{1-lambda} with s = drop / width.
    log_terms.push_back(std::log(seg.width) +
                        (1.0 - lambda) *
                            (std::log(seg.drop) - std::log(seg.width)));
  }
  const double log_integral = simd::log_sum_exp(log_terms);
  return RdpPoint{lambda, std::max(0.0, log_integral / (lambda - 1.0)), 0.0,
                  false};
}

RdpPoint renyi_from_curve(const GaussianCurve& f, double lambda) {
  if (!(lambda > 1.0)) {
    throw std::domain_error("renyi_from_curve: lambda must be > 1");
  }
  const double mu = f.mu();
  if (mu == 0.0) return RdpPoint{lambda, 0.0, 0.0, false};

  // integral_0^1 |f'(alpha)|^{1-lambda} d alpha with u = Phi^{-1}(1 - alpha)
  // becomes integral exp(E(u)) du with
  //   E(u) = (1 - lambda)(mu u - mu^2/2) - u^2/2 - ln sqrt(2 pi),
  // a Gaussian bump centered at u* = (1 - lambda) mu.  Integrate the
  // max-shifted integrand by adaptive Simpson.
  const double center = (1.0 - lambda) * mu;
  const double half_width = 15.0;
  const auto exponent = [&](double u) {
    return (1.0 - lambda) * (mu * u - 0.5 * mu * mu) - 0.5 * u * u -
           0.5 * std::log(2.0 * M_PI);
  };
  const double e_max = exponent(center);
  const auto integrand = [&](double u) { return std::exp(exponent(u) - e_max); };

  struct Simpson {
    const decltype(integrand)& g;
    double operator()(double a, double fa, double b, double fb, double fm,
                      double whole, double tol, int depth) const {
      const double m = 0.5 * (a + b);
      const double lm = 0.5 * (a + m);
      const double rm = 0.5 * (m + b);
      const double flm = g(lm);
      const double frm = g(rm);
      const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      const double delta = left + right - whole;
      if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
      }
      return (*this)(a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
             (*this)(m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
    }
  } simpson{integrand};

  const double a = center - half_width;
  const double b = center + half_width;
  const double fa = integrand(a);
  const double fb = integrand(b);
  const double fm = integrand(center);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double integral = simpson(a, fa, b, fb, fm, whole, 1e-13, 48);

  const double log_integral = e_max + std::log(integral);
  return RdpPoint{lambda, std::max(0.0, log_integral / (lambda - 1.0)), 1e-10,
                  false};
}

RdpPoint shuffle_rdp_exact(const ShuffleParams& params, double lambda,
                           double tail_tol) {
  if (!(lambda > 1.0)) {
    throw std::domain_error("shuffle_rdp_exact: lambda must be > 1");
  }
  const auto pair = build_pair(params, tail_tol);
  const RdpPoint d_pq = renyi_direct(pair.first, pair.second, lambda);
  const RdpPoint d_qp = renyi_direct(pair.second, pair.first, lambda);

  // Consistency gate: the trade-off integral of the exact NP curve must
  // reproduce the direct summation.
  const RdpPoint d_curve =
      renyi_from_curve(np_curve(pair.first, pair.second), lambda);
  const double allowed = std::max(
      1e-9, d_pq.error_bound + d_curve.error_bound + 1e-12);
  if (d_curve.divergent ||
      std::abs(d_pq.epsilon - d_curve.epsilon) > allowed) {
    throw std::logic_error(
        "shuffle_rdp_exact: direct summation and trade-off integral disagree "
        "beyond certified bounds");
  }

  RdpPoint out;
  out.lambda = lambda;
  out.epsilon = std::max(d_pq.epsilon, d_qp.epsilon);
  out.error_bound = std::max(d_pq.error_bound, d_qp.error_bound);
  out.divergent = false;
  return out;
}

}  // namespace shuffledp
