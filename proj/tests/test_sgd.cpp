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
#include <numeric>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "shuffledp/rng.hpp"
#include "shuffledp/sgd.hpp"

using namespace shuffledp;

namespace {

// Plain block SGD with the same splitting, permutation stream and 1/m
// averaging but no clipping interaction (gradients kept inside the ball) and
// no noise; the reference for the noise-path isolation test.
std::vector<double> plain_block_sgd(const std::vector<LabeledExample>& data,
                                    const PerExampleLoss& loss,
                                    const SgdConfig& cfg) {
  const std::int64_t m = cfg.blocks;
  const std::int64_t block_size = static_cast<std::int64_t>(data.size()) / m;
  std::vector<double> theta(static_cast<std::size_t>(cfg.dim), 0.0);
  std::vector<double> grad(static_cast<std::size_t>(cfg.dim), 0.0);
  RngStream perm_stream = RngStream(cfg.perm_seed).split(3);
  std::vector<std::int64_t> perm(static_cast<std::size_t>(m));
  for (std::int64_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::iota(perm.begin(), perm.end(), 0);
    for (std::int64_t i = m - 1; i > 0; --i) {
      const std::int64_t k = static_cast<std::int64_t>(
          perm_stream.next_below(static_cast<std::uint64_t>(i + 1)));
      std::swap(perm[static_cast<std::size_t>(i)],
                perm[static_cast<std::size_t>(k)]);
    }
    for (std::int64_t i = 0; i < m; ++i) {
      std::vector<double> sum(static_cast<std::size_t>(cfg.dim), 0.0);
      const std::int64_t begin = perm[static_cast<std::size_t>(i)] * block_size;
      for (std::int64_t idx = begin; idx < begin + block_size; ++idx) {
        loss.gradient(theta, data[static_cast<std::size_t>(idx)], grad);
        for (std::size_t d = 0; d < sum.size(); ++d) sum[d] += grad[d];
      }
      for (std::size_t d = 0; d < theta.size(); ++d) {
        theta[d] -= cfg.eta * (sum[d] / static_cast<double>(m));
      }
    }
  }
  return theta;
}

}  // namespace

TEST_CASE("l1_clip examples and properties") {
  const std::vector<double> zero = {0.0, 0.0, 0.0};
  CHECK(l1_clip(zero, 1.0) == zero);

  const std::vector<double> g = {3.0, -4.0};
  const std::vector<double> clipped = l1_clip(g, 1.0);
  CHECK(clipped[0] == doctest::Approx(3.0 / 7.0).epsilon(1e-15));
  CHECK(clipped[1] == doctest::Approx(-4.0 / 7.0).epsilon(1e-15));
  CHECK(std::abs(clipped[0]) + std::abs(clipped[1]) ==
        doctest::Approx(1.0).epsilon(1e-15));

  // Boundary: norm exactly at the clip stays untouched.
  const std::vector<double> boundary = {0.25, -0.75};
  CHECK(l1_clip(boundary, 1.0) == boundary);

  RngStream rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(5);
    for (double& x : v) x = 20.0 * (rng.next_double() - 0.5);
    const double clip = 0.1 + 3.0 * rng.next_double();
    const auto out = l1_clip(v, clip);
    double norm = 0.0;
    for (double x : out) norm += std::abs(x);
    CHECK(norm <= clip * (1.0 + 1e-12));
    // Direction preserved.
    for (std::size_t i = 0; i < v.size(); ++i) {
      CHECK(out[i] * v[i] >= 0.0);
    }
  }
  CHECK_THROWS_AS(l1_clip(g, 0.0), std::domain_error);
}

TEST_CASE("privacy accounting follows the closed form") {
  SgdConfig cfg;
  cfg.epochs = 50;
  cfg.blocks = 100;
  cfg.epsilon0 = 1.0;
  cfg.dim = 2;
  cfg.eta = 0.05;
  cfg.clip = 1.0;
  const auto data = make_two_blobs(200, 2, 3.0, 17);
  const LogisticLoss loss;
  const SgdReport report = run_shuffled_sgd(data, loss, cfg, 2.0);

  CHECK(report.privacy.rdp.epsilon ==
        doctest::Approx(200.0 * std::exp(1.0) / 99.0).epsilon(1e-14));
  const double mu = report.privacy.gdp.mu;
  CHECK(report.privacy.rdp.epsilon ==
        doctest::Approx(0.5 * mu * mu * 2.0).epsilon(1e-14));
  CHECK(report.loss_trace.size() == 50);
}

TEST_CASE("descent sanity with vanishing noise") {
  SgdConfig cfg;
  cfg.epochs = 20;
  cfg.blocks = 10;
  cfg.epsilon0 = 50.0;  // noise scale ~ 0
  cfg.dim = 3;
  cfg.eta = 0.2;
  cfg.clip = 5.0;
  cfg.seed = 3;
  const auto data = make_two_blobs(400, 3, 4.0, 8);
  const LogisticLoss loss;
  const SgdReport report = run_shuffled_sgd(data, loss, cfg, 2.0);

  double initial_loss = 0.0;
  const std::vector<double> origin(3, 0.0);
  for (const auto& ex : data) initial_loss += loss.value(origin, ex);
  initial_loss /= static_cast<double>(data.size());
  CHECK(report.loss_trace.back().second < initial_loss);
  CHECK(report.loss_trace.back().second < report.loss_trace.front().second);
}

TEST_CASE("fixed seeds give identical reports") {
  SgdConfig cfg;
  cfg.epochs = 5;
  cfg.blocks = 8;
  cfg.epsilon0 = 1.0;
  cfg.dim = 2;
  cfg.seed = 42;
  cfg.perm_seed = 9;
  const auto data = make_two_blobs(64, 2, 3.0, 5);
  const LogisticLoss loss;
  const SgdReport a = run_shuffled_sgd(data, loss, cfg, 2.0);
  const SgdReport b = run_shuffled_sgd(data, loss, cfg, 2.0);
  CHECK(a.final_params == b.final_params);
  CHECK(a.loss_trace == b.loss_trace);
}

TEST_CASE("permutation seed moves the trajectory but not the privacy") {
  SgdConfig cfg;
  cfg.epochs = 5;
  cfg.blocks = 8;
  cfg.epsilon0 = 1.0;
  cfg.dim = 2;
  cfg.seed = 42;
  cfg.perm_seed = 9;
  const auto data = make_two_blobs(64, 2, 3.0, 5);
  const LogisticLoss loss;
  const SgdReport a = run_shuffled_sgd(data, loss, cfg, 2.0);
  cfg.perm_seed = 10;
  const SgdReport b = run_shuffled_sgd(data, loss, cfg, 2.0);
  CHECK(a.final_params != b.final_params);
  CHECK(a.privacy.rdp.epsilon == b.privacy.rdp.epsilon);
  CHECK(a.privacy.gdp.mu == b.privacy.gdp.mu);
}

TEST_CASE("noise-free convex run matches plain block SGD") {
  SgdConfig cfg;
  cfg.epochs = 10;
  cfg.blocks = 4;
  cfg.epsilon0 = 1.0;
  cfg.dim = 3;
  cfg.eta = 0.01;
  cfg.clip = 1e9;  // keep clipping inactive so the paths are identical
  cfg.noise_free = true;
  cfg.perm_seed = 77;
  const auto data = make_two_blobs(200, 3, 2.0, 13);
  const SquaredErrorLoss loss;
  const SgdReport report = run_shuffled_sgd(data, loss, cfg, 2.0);
  const std::vector<double> reference = plain_block_sgd(data, loss, cfg);
  REQUIRE(report.final_params.size() == reference.size());
  for (std::size_t i = 0; i < reference.size(); ++i) {
    CHECK(report.final_params[i] ==
          doctest::Approx(reference[i]).epsilon(1e-12));
  }
}

TEST_CASE("clipping caps the reachable trajectory") {
  // A loss with enormous gradients: the l1 clip bounds every block update by
  // eta * block_size * clip / m, so the whole trajectory stays inside a ball.
  struct HugeGradientLoss final : public PerExampleLoss {
    double value(std::span<const double>, const LabeledExample&) const override {
      return 0.0;
    }
    void gradient(std::span<const double>, const LabeledExample&,
                  std::span<double> out) const override {
      for (double& v : out) v = 1e9;
    }
  };
  SgdConfig cfg;
  cfg.epochs = 3;
  cfg.blocks = 5;
  cfg.epsilon0 = 2.0;
  cfg.dim = 2;
  cfg.eta = 0.1;
  cfg.clip = 0.5;
  cfg.noise_free = true;
  const auto data = make_two_blobs(50, 2, 1.0, 3);
  const SgdReport report = run_shuffled_sgd(data, HugeGradientLoss{}, cfg, 2.0);
  const double block_size = 10.0;
  const double bound = cfg.eta * static_cast<double>(cfg.epochs) *
                       static_cast<double>(cfg.blocks) * block_size *
                       cfg.clip / static_cast<double>(cfg.blocks);
  double norm = 0.0;
  for (double v : report.final_params) norm += std::abs(v);
  CHECK(norm <= bound * (1.0 + 1e-12));
}

TEST_CASE("planner inverts the accountant") {
  // epsilon(lambda) = 0.5 lambda, T = 10, m = 1000.
  const PlanResult plan =
      plan_epsilon0(RdpPoint{2.0, 1.0, 0.0, false}, 10, 1000);
  CHECK(plan.feasible);
  CHECK(plan.epsilon0 == doctest::Approx(3.2178753245346172).epsilon(1e-12));

  // Round trip: the run reports exactly the planned target.
  SgdConfig cfg;
  cfg.epochs = 10;
  cfg.blocks = 1000;
  cfg.epsilon0 = plan.epsilon0;
  cfg.dim = 1;
  const auto data = make_two_blobs(2000, 1, 2.0, 4);
  const LogisticLoss loss;
  const SgdReport report = run_shuffled_sgd(data, loss, cfg, 2.0);
  CHECK(report.privacy.rdp.epsilon == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("planner reports infeasible targets with the achievable floor") {
  // The (lambda, 0.008 lambda) budget at T = 50, m = 100 is unreachable:
  // even epsilon0 -> 0 already costs slope 2T/(m-1).
  const PlanResult plan =
      plan_epsilon0(RdpPoint{2.0, 0.016, 0.0, false}, 50, 100);
  CHECK(!plan.feasible);
  CHECK(plan.min_achievable ==
        doctest::Approx(2.0 * 50.0 * 2.0 / 99.0).epsilon(1e-12));

  const PlanResult gdp_plan = plan_epsilon0(GdpParam{0.1}, 50, 100);
  CHECK(!gdp_plan.feasible);
  CHECK(gdp_plan.min_achievable ==
        doctest::Approx(2.0 * std::sqrt(50.0) / std::sqrt(99.0)).epsilon(1e-12));

  const PlanResult gdp_ok = plan_epsilon0(GdpParam{3.0}, 50, 100);
  CHECK(gdp_ok.feasible);
  CHECK(gdp_ok.epsilon0 ==
        doctest::Approx(2.0 * std::log(3.0 * std::sqrt(99.0) /
                                       (2.0 * std::sqrt(50.0))))
            .epsilon(1e-12));
}

TEST_CASE("config validation") {
  const auto data = make_two_blobs(10, 1, 1.0, 2);
  const LogisticLoss loss;
  SgdConfig cfg;
  cfg.dim = 1;
  cfg.blocks = 1;
  CHECK_THROWS_AS(run_shuffled_sgd(data, loss, cfg, 2.0), std::domain_error);
  cfg.blocks = 2;
  cfg.epsilon0 = 0.0;
  CHECK_THROWS_AS(run_shuffled_sgd(data, loss, cfg, 2.0), std::domain_error);
}
