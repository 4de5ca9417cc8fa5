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

#ifndef SHUFFLEDP_SGD_HPP_
#define SHUFFLEDP_SGD_HPP_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "shuffledp/bounds.hpp"
#include "shuffledp/renyi.hpp"
#include "shuffledp/rng.hpp"

// Shuffled noisy SGD with l1 clipping and per-block Laplace noise, its
// RDP/GDP accounting, and a budget planner inverting the accountant.
//
// Note on the update scale: the block-gradient sum is averaged by 1/m (the
// number of blocks), not by the block size, and the per-block noise scale is
// 2*clip/(epsilon0*m).  The l1 sensitivity of one block update is 2*clip/m,
// so the two are consistent; both follow the published procedure verbatim.

namespace shuffledp {

struct LabeledExample {
  std::vector<double> features;
  int label = 1;  // +1 or -1
};

class PerExampleLoss {
 public:
  virtual ~PerExampleLoss() = default;
  virtual double value(std::span<const double> theta,
                       const LabeledExample& ex) const = 0;
  virtual void gradient(std::span<const double> theta,
                        const LabeledExample& ex,
                        std::span<double> grad_out) const = 0;
};

// Binary logistic loss ln(1 + exp(-y theta.x)).
class LogisticLoss final : public PerExampleLoss {
 public:
  double value(std::span<const double> theta,
               const LabeledExample& ex) const override;
  void gradient(std::span<const double> theta, const LabeledExample& ex,
                std::span<double> grad_out) const override;
};

// Convex quadratic 0.5 (theta.x - y)^2, used to isolate the noise path.
class SquaredErrorLoss final : public PerExampleLoss {
 public:
  double value(std::span<const double> theta,
               const LabeledExample& ex) const override;
  void gradient(std::span<const double> theta, const LabeledExample& ex,
                std::span<double> grad_out) const override;
};

struct SgdConfig {
  double eta = 0.05;          // step size
  std::int64_t epochs = 1;    // T
  std::int64_t blocks = 2;    // m, must be >= 2
  double clip = 1.0;          // l1 clipping bound
  double epsilon0 = 1.0;
  std::int64_t dim = 1;       // parameter dimension d
  std::uint64_t seed = 0;     // noise stream
  std::uint64_t perm_seed = 1;  // block permutation stream
  bool noise_free = false;    // test hook: forces b_i = 0
};

struct SgdPrivacy {
  RdpPoint rdp;
  GdpParam gdp;
};

struct SgdReport {
  std::vector<double> final_params;
  std::vector<std::pair<std::int64_t, double>> loss_trace;  // (epoch, loss)
  SgdPrivacy privacy;
  SgdConfig config;
};

// g scaled so its l1 norm is at most clip; inputs already inside the ball
// are returned unchanged.
std::vector<double> l1_clip(std::span<const double> g, double clip);

// Runs the shuffled noisy SGD loop and reports the trajectory, per-epoch
// mean loss and the claimed privacy at the requested Renyi order
// (epsilon = 2 T e^{epsilon0} lambda / (m-1), mu = 2 sqrt(T) e^{epsilon0/2}
// / sqrt(m-1)).  Data whose size is not divisible by the block count is
// truncated with a warning on stderr.
SgdReport run_shuffled_sgd(const std::vector<LabeledExample>& data,
                           const PerExampleLoss& loss, const SgdConfig& cfg,
                           double lambda);

struct PlanResult {
  bool feasible = false;
  double epsilon0 = 0.0;
  // Infimum of the achievable target as epsilon0 -> 0+: epsilon(lambda) for
  // the RDP form, mu for the GDP form.  Populated on infeasible results.
  double min_achievable = 0.0;
};

// Inverts the accountant: finds epsilon0 such that T epochs over m blocks
// report exactly the target.  Returns an infeasibility result (never a
// nonpositive epsilon0) when the target is below what epsilon0 -> 0+ already
// yields.
PlanResult plan_epsilon0(const RdpPoint& target, std::int64_t epochs,
                         std::int64_t blocks);
PlanResult plan_epsilon0(const GdpParam& target, std::int64_t epochs,
                         std::int64_t blocks);

// Two Gaussian blobs at +/- separation/2 along the all-ones direction,
// labels +1/-1; the desk-scale stand-in dataset for training runs.
std::vector<LabeledExample> make_two_blobs(std::int64_t count,
                                           std::int64_t dim,
                                           double separation,
                                           std::uint64_t seed);

}  // namespace shuffledp

#endif  // SHUFFLEDP_SGD_HPP_
