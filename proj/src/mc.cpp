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

#include "shuffledp/mc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "shuffledp/dist.hpp"
#include "shuffledp/tradeoff.hpp"

namespace shuffledp {
namespace {

struct KahanSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

// Exact Bin(c, 1/2) draw by popcount of c fair bits.
std::int64_t fair_binomial(std::int64_t c, RngStream& rng) {
  std::int64_t total = 0;
  std::int64_t remaining = c;
  while (remaining >= 64) {
    total += std::popcount(rng.next_u64());
    remaining -= 64;
  }
  if (remaining > 0) {
    const std::uint64_t mask = (std::uint64_t{1} << remaining) - 1;
    total += std::popcount(rng.next_u64() & mask);
  }
  return total;
}

// Exact Bin(m, p) draw by CDF inversion walked outward from the mode; the
// enumeration order is fixed, so the draw is deterministic given the stream.
std::int64_t binomial_sample(std::int64_t m, double p, RngStream& rng) {
  if (m <= 0) return 0;
  if (p <= 0.0) return 0;
  if (p >= 1.0) return m;
  const std::int64_t mode = std::clamp<std::int64_t>(
      static_cast<std::int64_t>(std::floor(static_cast<double>(m + 1) * p)), 0,
      m);
  const double mode_pmf =
      std::exp(log_binomial_pmf(mode, BinomialSpec{m, p}));
  const double u = rng.next_double();

  const double odds = p / (1.0 - p);
  std::int64_t lo = mode;
  std::int64_t hi = mode;
  double lo_pmf = mode_pmf;
  double hi_pmf = mode_pmf;
  double cum = mode_pmf;
  std::int64_t last = mode;
  if (u < cum) return mode;
  while (lo > 0 || hi < m) {
    const double next_lo =
        lo > 0 ? lo_pmf * (static_cast<double>(lo) /
                           static_cast<double>(m - lo + 1)) /
                     odds
               : -1.0;
    const double next_hi =
        hi < m ? hi_pmf * (static_cast<double>(m - hi) /
                           static_cast<double>(hi + 1)) *
                     odds
               : -1.0;
    if (next_lo >= next_hi) {
      --lo;
      lo_pmf = next_lo;
      cum += next_lo;
      last = lo;
    } else {
      ++hi;
      hi_pmf = next_hi;
      cum += next_hi;
      last = hi;
    }
    if (u < cum) return last;
  }
  return last;  // u landed in accumulated rounding slack
}

// Multinomial counts over `weights` (unnormalized) by sequential conditional
// binomials.
std::vector<std::int64_t> multinomial_counts(std::int64_t total,
                                             std::span<const double> weights,
                                             RngStream& rng) {
  double remaining_mass = 0.0;
  for (double w : weights) remaining_mass += w;
  std::vector<std::int64_t> counts(weights.size(), 0);
  std::int64_t remaining = total;
  for (std::size_t i = 0; i + 1 < weights.size() && remaining > 0; ++i) {
    const double prob =
        remaining_mass > 0.0 ? std::min(1.0, weights[i] / remaining_mass) : 0.0;
    counts[i] = binomial_sample(remaining, prob, rng);
    remaining -= counts[i];
    remaining_mass -= weights[i];
  }
  if (!counts.empty()) counts.back() = remaining;
  return counts;
}

std::uint64_t pack_atom(std::int64_t a, std::int64_t b) {
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

}  // namespace

// ---------------------------------------------------------------------------
// PairSampler
// ---------------------------------------------------------------------------

PairSampler::PairSampler(const ShuffleParams& params) : params_(params) {
  if (params.n() > 10000000) {
    throw std::domain_error(
        "PairSampler: the inversion table is O(n); n capped at 1e7");
  }
  const std::int64_t m = params.n() - 1;
  c_cdf_.resize(static_cast<std::size_t>(m) + 1);
  KahanSum cum;
  for (std::int64_t c = 0; c <= m; ++c) {
    cum.add(std::exp(log_binomial_pmf(c, BinomialSpec{m, params.p()})));
    c_cdf_[static_cast<std::size_t>(c)] = cum.sum;
  }
  c_cdf_.back() = 1.0;
}

std::pair<std::int64_t, std::int64_t> PairSampler::sample(
    PairPmf::Side side, RngStream& rng) const {
  const double u = rng.next_double();
  const auto it = std::upper_bound(c_cdf_.begin(), c_cdf_.end(), u);
  const std::int64_t c = it == c_cdf_.end()
                             ? static_cast<std::int64_t>(c_cdf_.size()) - 1
                             : it - c_cdf_.begin();
  const std::int64_t a = fair_binomial(c, rng);
  const bool delta = rng.bernoulli(params_.q());
  if (side == PairPmf::Side::kP) {
    return delta ? std::make_pair(a + 1, c - a) : std::make_pair(a, c - a + 1);
  }
  return delta ? std::make_pair(a, c - a + 1) : std::make_pair(a + 1, c - a);
}

std::pair<std::int64_t, std::int64_t> sample_pair(const ShuffleParams& params,
                                                  PairPmf::Side side,
                                                  RngStream& rng) {
  return PairSampler(params).sample(side, rng);
}

// ---------------------------------------------------------------------------
// Empirical beta at fixed alpha
// ---------------------------------------------------------------------------

McEstimate estimate_beta_at_alpha(const ShuffleParams& params, double alpha,
                                  std::int64_t samples, std::uint64_t seed) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw std::domain_error("estimate_beta_at_alpha: alpha must be in (0, 1)");
  }
  if (samples < 10000) {
    throw std::domain_error("estimate_beta_at_alpha: need samples >= 1e4");
  }

  // Calibrate the randomized threshold test on the exact P: reject the first
  // j-1 ratio classes outright and class j with probability gamma.
  const auto pair = build_pair(params, 1e-15);
  const std::vector<RatioClass> classes =
      np_ratio_classes(pair.first, pair.second);
  const double tot_p = pair.first.total_mass();
  std::size_t j = 0;
  double gamma = 0.0;
  {
    long double cum = 0.0L;
    long double prev = 0.0L;
    for (; j < classes.size(); ++j) {
      cum += classes[j].p_mass;
      if (static_cast<double>(cum) / tot_p >= alpha) break;
      prev = cum;
    }
    if (j == classes.size()) --j;
    const double lo = static_cast<double>(prev) / tot_p;
    const double hi = static_cast<double>(cum) / tot_p;
    gamma = hi > lo ? (alpha - lo) / (hi - lo) : 0.0;
  }
  const std::int64_t rep_a = classes[j].a;
  const std::int64_t rep_b = classes[j].b;

  const PairSampler sampler(params);
  RngStream stream = RngStream(seed).split(1);
  std::int64_t accepted = 0;
  for (std::int64_t s = 0; s < samples; ++s) {
    const auto [a, b] = sampler.sample(PairPmf::Side::kQ, stream);
    const int cmp = compare_ratio(a, b, rep_a, rep_b);
    bool reject;
    if (cmp < 0) {
      reject = true;  // higher likelihood ratio than the boundary class
    } else if (cmp == 0) {
      reject = stream.next_double() < gamma;
    } else {
      reject = false;
    }
    if (!reject) ++accepted;
  }
  const double beta_hat =
      static_cast<double>(accepted) / static_cast<double>(samples);
  const double stderror =
      std::sqrt(beta_hat * (1.0 - beta_hat) / static_cast<double>(samples));
  return McEstimate{beta_hat, stderror, samples, seed};
}

// ---------------------------------------------------------------------------
// Plug-in Renyi estimate
// ---------------------------------------------------------------------------

namespace {

double plugin_divergence(const std::vector<std::int64_t>& p_counts,
                         const std::vector<std::int64_t>& q_counts,
                         double lambda, std::int64_t samples) {
  // sum over the common support of (cp/N)^lambda (cq/N)^{1-lambda}
  //   = (1/N) sum cp^lambda cq^{1-lambda}.
  double sum = 0.0;
  for (std::size_t i = 0; i < p_counts.size(); ++i) {
    if (p_counts[i] <= 0 || q_counts[i] <= 0) continue;
    sum += std::exp(lambda * std::log(static_cast<double>(p_counts[i])) +
                    (1.0 - lambda) * std::log(static_cast<double>(q_counts[i])));
  }
  sum /= static_cast<double>(samples);
  return std::log(sum) / (lambda - 1.0);
}

}  // namespace

McEstimate estimate_renyi_plugin(const ShuffleParams& params, double lambda,
                                 std::int64_t samples, std::uint64_t seed) {
  if (!(lambda > 1.0)) {
    throw std::domain_error("estimate_renyi_plugin: lambda must be > 1");
  }
  if (params.n() > 200) {
    throw std::domain_error(
        "estimate_renyi_plugin: plug-in estimation is only reliable for "
        "n <= 200");
  }
  if (samples < 100000) {
    throw std::domain_error("estimate_renyi_plugin: need samples >= 1e5");
  }

  const PairSampler sampler(params);
  const RngStream root(seed);
  RngStream p_stream = root.split(1);
  RngStream q_stream = root.split(2);
  RngStream boot_stream = root.split(3);

  std::unordered_map<std::uint64_t, std::size_t> index;
  std::vector<std::int64_t> p_counts;
  std::vector<std::int64_t> q_counts;
  auto bump = [&](std::int64_t a, std::int64_t b, bool is_p) {
    const std::uint64_t key = pack_atom(a, b);
    auto [it, inserted] = index.try_emplace(key, p_counts.size());
    if (inserted) {
      p_counts.push_back(0);
      q_counts.push_back(0);
    }
    (is_p ? p_counts : q_counts)[it->second] += 1;
  };
  for (std::int64_t s = 0; s < samples; ++s) {
    const auto [pa, pb] = sampler.sample(PairPmf::Side::kP, p_stream);
    bump(pa, pb, true);
    const auto [qa, qb] = sampler.sample(PairPmf::Side::kQ, q_stream);
    bump(qa, qb, false);
  }

  const double value = plugin_divergence(p_counts, q_counts, lambda, samples);

  // Nonparametric bootstrap: resample both empirical PMFs and re-estimate.
  constexpr int kResamples = 200;
  std::vector<double> p_weights(p_counts.begin(), p_counts.end());
  std::vector<double> q_weights(q_counts.begin(), q_counts.end());
  double mean = 0.0;
  double m2 = 0.0;
  for (int r = 0; r < kResamples; ++r) {
    const std::vector<std::int64_t> rp =
        multinomial_counts(samples, p_weights, boot_stream);
    const std::vector<std::int64_t> rq =
        multinomial_counts(samples, q_weights, boot_stream);
    const double d = plugin_divergence(rp, rq, lambda, samples);
    const double delta = d - mean;
    mean += delta / static_cast<double>(r + 1);
    m2 += delta * (d - mean);
  }
  const double stderror = std::sqrt(m2 / static_cast<double>(kResamples - 1));
  return McEstimate{value, stderror, samples, seed};
}

// ---------------------------------------------------------------------------
// CLT diagnostic
// ---------------------------------------------------------------------------

CltReport clt_diagnostic(const ShuffleParams& params, std::int64_t samples,
                         std::uint64_t seed) {
  if (samples < 100000) {
    throw std::domain_error("clt_diagnostic: need samples >= 1e5");
  }
  if (!(params.epsilon0() > 0.0) || params.n() < 2) {
    throw std::domain_error(
        "clt_diagnostic: needs epsilon0 > 0 and n >= 2 (the standardizing "
        "covariance is singular at p = 1)");
  }

  const MultinomialMoments mom = multinomial_moments(params);
  const double s00 = mom.covariance[0][0];
  const double s01 = mom.covariance[0][1];
  // Cholesky factor of the free 2x2 block.
  const double l11 = std::sqrt(s00);
  const double l21 = s01 / l11;
  const double l22 = std::sqrt(s00 - l21 * l21);

  RngStream stream = RngStream(seed).split(17);

  const std::int64_t m = params.n() - 1;
  double sum_z[2] = {0.0, 0.0};
  double sum_zz[3] = {0.0, 0.0, 0.0};  // z0^2, z1^2, z0 z1
  double sum_z3[2] = {0.0, 0.0};
  // Draw (n0, n1) through C = n0 + n1 ~ Bin(m, p), n0 | C ~ Bin(C, 1/2).
  std::vector<double> c_cdf(static_cast<std::size_t>(m) + 1);
  {
    KahanSum cum;
    for (std::int64_t c = 0; c <= m; ++c) {
      cum.add(std::exp(log_binomial_pmf(c, BinomialSpec{m, params.p()})));
      c_cdf[static_cast<std::size_t>(c)] = cum.sum;
    }
    c_cdf.back() = 1.0;
  }
  for (std::int64_t s = 0; s < samples; ++s) {
    const double u = stream.next_double();
    const auto it = std::upper_bound(c_cdf.begin(), c_cdf.end(), u);
    const std::int64_t c =
        it == c_cdf.end() ? m : it - c_cdf.begin();
    const std::int64_t n0 = fair_binomial(c, stream);
    const double x0 = static_cast<double>(n0) - mom.mean[0];
    const double x1 = static_cast<double>(c - n0) - mom.mean[1];
    const double z0 = x0 / l11;
    const double z1 = (x1 - l21 * z0) / l22;
    sum_z[0] += z0;
    sum_z[1] += z1;
    sum_zz[0] += z0 * z0;
    sum_zz[1] += z1 * z1;
    sum_zz[2] += z0 * z1;
    sum_z3[0] += z0 * z0 * z0;
    sum_z3[1] += z1 * z1 * z1;
  }

  const double inv_n = 1.0 / static_cast<double>(samples);
  const double mean0 = sum_z[0] * inv_n;
  const double mean1 = sum_z[1] * inv_n;
  const double cov00 = sum_zz[0] * inv_n - mean0 * mean0;
  const double cov11 = sum_zz[1] * inv_n - mean1 * mean1;
  const double cov01 = sum_zz[2] * inv_n - mean0 * mean1;

  CltReport report;
  report.max_abs_mean = std::max(std::abs(mean0), std::abs(mean1));
  report.max_abs_cov_dev = std::max(
      {std::abs(cov00 - 1.0), std::abs(cov11 - 1.0), std::abs(cov01)});
  report.skewness_distance =
      std::max(std::abs(sum_z3[0] * inv_n), std::abs(sum_z3[1] * inv_n));
  report.samples = samples;
  return report;
}

}  // namespace shuffledp
