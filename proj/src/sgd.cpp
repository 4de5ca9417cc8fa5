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

#include "shuffledp/sgd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "shuffledp/dist.hpp"

namespace shuffledp {

// ---------------------------------------------------------------------------
// Losses
// ---------------------------------------------------------------------------

double LogisticLoss::value(std::span<const double> theta,
                           const LabeledExample& ex) const {
  double dot = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    dot += theta[i] * ex.features[i];
  }
  const double margin = static_cast<double>(ex.label) * dot;
  // ln(1 + e^{-margin}) without overflow.
  return margin > 0.0 ? std::log1p(std::exp(-margin))
                      : -margin + std::log1p(std::exp(margin));
}

void LogisticLoss::gradient(std::span<const double> theta,
                            const LabeledExample& ex,
                            std::span<double> grad_out) const {
  double dot = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    dot += theta[i] * ex.features[i];
  }
  const double y = static_cast<double>(ex.label);
  const double sigma = 1.0 / (1.0 + std::exp(y * dot));
  for (std::size_t i = 0; i < theta.size(); ++i) {
    grad_out[i] = -y * sigma * ex.features[i];
  }
}

double SquaredErrorLoss::value(std::span<const double> theta,
                               const LabeledExample& ex) const {
  double dot = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    dot += theta[i] * ex.features[i];
  }
  const double residual = dot - static_cast<double>(ex.label);
  return 0.5 * residual * residual;
}

void SquaredErrorLoss::gradient(std::span<const double> theta,
                                const LabeledExample& ex,
                                std::span<double> grad_out) const {
  double dot = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    dot += theta[i] * ex.features[i];
  }
  const double residual = dot - static_cast<double>(ex.label);
  for (std::size_t i = 0; i < theta.size(); ++i) {
    grad_out[i] = residual * ex.features[i];
  }
}

// ---------------------------------------------------------------------------
// Clipping
// ---------------------------------------------------------------------------

std::vector<double> l1_clip(std::span<const double> g, double clip) {
  if (!(clip > 0.0)) throw std::domain_error("l1_clip: clip must be positive");
  double norm = 0.0;
  for (double v : g) norm += std::abs(v);
  std::vector<double> out(g.begin(), g.end());
  const double scale = std::max(1.0, norm / clip);
  if (scale > 1.0) {
    for (double& v : out) v /= scale;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Training loop
// ---------------------------------------------------------------------------

namespace {

void validate_config(const SgdConfig& cfg) {
  if (cfg.blocks < 2) {
    throw std::domain_error("run_shuffled_sgd: blocks must be >= 2");
  }
  if (!(cfg.epsilon0 > 0.0)) {
    throw std::domain_error("run_shuffled_sgd: epsilon0 must be positive");
  }
  if (!(cfg.eta > 0.0)) {
    throw std::domain_error("run_shuffled_sgd: eta must be positive");
  }
  if (!(cfg.clip > 0.0)) {
    throw std::domain_error("run_shuffled_sgd: clip must be positive");
  }
  if (cfg.epochs < 1 || cfg.dim < 1) {
    throw std::domain_error("run_shuffled_sgd: epochs and dim must be >= 1");
  }
}

SgdPrivacy account(const SgdConfig& cfg, double lambda) {
  const double t = static_cast<double>(cfg.epochs);
  const double m1 = static_cast<double>(cfg.blocks - 1);
  SgdPrivacy privacy;
  privacy.rdp = RdpPoint{lambda,
                         2.0 * t * std::exp(cfg.epsilon0) * lambda / m1, 0.0,
                         false};
  privacy.gdp =
      GdpParam{2.0 * std::sqrt(t) * std::exp(cfg.epsilon0 / 2.0) /
               std::sqrt(m1)};
  return privacy;
}

}  // namespace

SgdReport run_shuffled_sgd(const std::vector<LabeledExample>& data,
                           const PerExampleLoss& loss, const SgdConfig& cfg,
                           double lambda) {
  validate_config(cfg);
  if (!(lambda >= 2.0)) {
    throw std::domain_error("run_shuffled_sgd: lambda must be >= 2");
  }
  if (data.empty()) {
    throw std::domain_error("run_shuffled_sgd: empty dataset");
  }
  for (const LabeledExample& ex : data) {
    if (static_cast<std::int64_t>(ex.features.size()) != cfg.dim) {
      throw std::domain_error("run_shuffled_sgd: feature dim mismatch");
    }
  }

  const std::int64_t m = cfg.blocks;
  std::int64_t usable = static_cast<std::int64_t>(data.size());
  if (usable % m != 0) {
    const std::int64_t truncated = usable - usable % m;
    std::fprintf(stderr,
                 "run_shuffled_sgd: data size %lld not divisible by %lld "
                 "blocks; truncating to %lld examples\n",
                 static_cast<long long>(usable), static_cast<long long>(m),
                 static_cast<long long>(truncated));
    usable = truncated;
  }
  if (usable < m) {
    throw std::domain_error("run_shuffled_sgd: fewer examples than blocks");
  }
  const std::int64_t block_size = usable / m;

  RngStream noise_stream = RngStream(cfg.seed).split(2);
  RngStream perm_stream = RngStream(cfg.perm_seed).split(3);
  const double noise_scale =
      2.0 * cfg.clip / (cfg.epsilon0 * static_cast<double>(m));

  std::vector<double> theta(static_cast<std::size_t>(cfg.dim), 0.0);
  std::vector<double> grad(static_cast<std::size_t>(cfg.dim), 0.0);
  std::vector<double> block_sum(static_cast<std::size_t>(cfg.dim), 0.0);
  std::vector<std::int64_t> perm(static_cast<std::size_t>(m));

  SgdReport report;
  report.config = cfg;
  report.loss_trace.reserve(static_cast<std::size_t>(cfg.epochs));

  for (std::int64_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::iota(perm.begin(), perm.end(), 0);
    for (std::int64_t i = m - 1; i > 0; --i) {
      const std::int64_t k = static_cast<std::int64_t>(
          perm_stream.next_below(static_cast<std::uint64_t>(i + 1)));
      std::swap(perm[static_cast<std::size_t>(i)],
                perm[static_cast<std::size_t>(k)]);
    }

    for (std::int64_t i = 0; i < m; ++i) {
      std::vector<double> noise;
      if (cfg.noise_free) {
        noise.assign(static_cast<std::size_t>(cfg.dim), 0.0);
      } else {
        noise = laplace_sample(noise_scale, cfg.dim, noise_stream);
      }

      std::fill(block_sum.begin(), block_sum.end(), 0.0);
      const std::int64_t block = perm[static_cast<std::size_t>(i)];
      const std::int64_t begin = block * block_size;
      for (std::int64_t idx = begin; idx < begin + block_size; ++idx) {
        loss.gradient(theta, data[static_cast<std::size_t>(idx)], grad);
        const std::vector<double> clipped = l1_clip(grad, cfg.clip);
        for (std::size_t d = 0; d < block_sum.size(); ++d) {
          block_sum[d] += clipped[d];
        }
      }
      for (std::size_t d = 0; d < theta.size(); ++d) {
        theta[d] -= cfg.eta *
                    (block_sum[d] / static_cast<double>(m) + noise[d]);
      }
    }

    double epoch_loss = 0.0;
    for (std::int64_t idx = 0; idx < usable; ++idx) {
      epoch_loss += loss.value(theta, data[static_cast<std::size_t>(idx)]);
    }
    report.loss_trace.emplace_back(epoch,
                                   epoch_loss / static_cast<double>(usable));
  }

  report.final_params = std::move(theta);
  report.privacy = account(cfg, lambda);
  return report;
}

// ---------------------------------------------------------------------------
// Planner
// ---------------------------------------------------------------------------

PlanResult plan_epsilon0(const RdpPoint& target, std::int64_t epochs,
                         std::int64_t blocks) {
  if (blocks < 2) throw std::domain_error("plan_epsilon0: blocks must be >= 2");
  if (epochs < 1) throw std::domain_error("plan_epsilon0: epochs must be >= 1");
  if (!(target.epsilon > 0.0) || !(target.lambda > 1.0)) {
    throw std::domain_error(
        "plan_epsilon0: target epsilon and lambda must be positive");
  }
  const double t = static_cast<double>(epochs);
  const double m1 = static_cast<double>(blocks - 1);
  const double arg = target.epsilon * m1 / (2.0 * t * target.lambda);
  PlanResult result;
  result.min_achievable = 2.0 * t * target.lambda / m1;  // epsilon0 -> 0+
  if (arg <= 1.0) {
    result.feasible = false;
    return result;
  }
  result.feasible = true;
  result.epsilon0 = std::log(arg);
  return result;
}

PlanResult plan_epsilon0(const GdpParam& target, std::int64_t epochs,
                         std::int64_t blocks) {
  if (blocks < 2) throw std::domain_error("plan_epsilon0: blocks must be >= 2");
  if (epochs < 1) throw std::domain_error("plan_epsilon0: epochs must be >= 1");
  if (!(target.mu > 0.0)) {
    throw std::domain_error("plan_epsilon0: target mu must be positive");
  }
  const double t = static_cast<double>(epochs);
  const double m1 = static_cast<double>(blocks - 1);
  const double arg = target.mu * std::sqrt(m1) / (2.0 * std::sqrt(t));
  PlanResult result;
  result.min_achievable = 2.0 * std::sqrt(t) / std::sqrt(m1);
  if (arg <= 1.0) {
    result.feasible = false;
    return result;
  }
  result.feasible = true;
  result.epsilon0 = 2.0 * std::log(arg);
  return result;
}

// ---------------------------------------------------------------------------
// Synthetic data
// ---------------------------------------------------------------------------

std::vector<LabeledExample> make_two_blobs(std::int64_t count,
                                           std::int64_t dim,
                                           double separation,
                                           std::uint64_t seed) {
  if (count < 2 || dim < 1) {
    throw std::domain_error("make_two_blobs: count >= 2 and dim >= 1 required");
  }
  RngStream stream = RngStream(seed).split(4);
  const double offset = separation / (2.0 * std::sqrt(static_cast<double>(dim)));
  std::vector<LabeledExample> data;
  data.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    const int label = (i % 2 == 0) ? 1 : -1;
    LabeledExample ex;
    ex.label = label;
    ex.features.resize(static_cast<std::size_t>(dim));
    for (double& f : ex.features) {
      f = normal_quantile(stream.next_open_double()) +
          static_cast<double>(label) * offset;
    }
    data.push_back(std::move(ex));
  }
  return data;
}

}  // namespace shuffledp
