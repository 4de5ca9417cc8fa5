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

#ifndef SHUFFLEDP_PAIR_PMF_HPP_
#define SHUFFLEDP_PAIR_PMF_HPP_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "shuffledp/params.hpp"

// The two mixture distributions P and Q over integer pairs (a, b) whose
// distinguishability characterizes the privacy of the shuffled epsilon0-LDP
// process.  With C ~ Bin(n-1, p), A ~ Bin(C, 1/2) and Delta ~ Bern(q):
//
//   P is the law of (A + Delta,     C - A + 1 - Delta)
//   Q is the law of (A + 1 - Delta, C - A + Delta)
//
// Both are materialized as truncated PMFs over a shared support, with a
// certified upper bound on the truncated mass.

namespace shuffledp {

class PairPmf {
 public:
  enum class Side { kP, kQ };

  // Atoms are grouped by c = a + b - 1; within a row, atom j is
  // (a_lo + j, c + 1 - a_lo - j) with log mass log_mass[offset + j].
  struct Row {
    std::int64_t c;
    std::int64_t a_lo;
    std::size_t offset;
    std::size_t len;
  };

  Side side() const { return side_; }
  const ShuffleParams& params() const { return params_; }

  // Certified upper bound on the total probability excluded by truncation.
  double neglected_mass() const { return neglected_mass_; }

  // Sum of exp(log mass) over the stored support; in [1 - neglected_mass, 1].
  double total_mass() const { return total_mass_; }

  std::size_t size() const { return log_mass_.size(); }
  const std::vector<Row>& rows() const { return rows_; }
  std::span<const double> log_masses() const { return log_mass_; }

  bool contains(std::int64_t a, std::int64_t b) const;

  // Natural-log mass at (a, b); throws std::domain_error outside the support.
  double log_mass_at(std::int64_t a, std::int64_t b) const;

  // Calls fn(a, b, log_mass) for every stored atom, in row order.
  template <typename Fn>
  void for_each_atom(Fn&& fn) const {
    for (const Row& row : rows_) {
      for (std::size_t j = 0; j < row.len; ++j) {
        const std::int64_t a = row.a_lo + static_cast<std::int64_t>(j);
        fn(a, row.c + 1 - a, log_mass_[row.offset + j]);
      }
    }
  }

 private:
  friend std::pair<PairPmf, PairPmf> build_pair(const ShuffleParams& params,
                                                double tail_tol);

  PairPmf(Side side, ShuffleParams params) : side_(side), params_(params) {}

  Side side_;
  ShuffleParams params_;
  double neglected_mass_ = 0.0;
  double total_mass_ = 0.0;
  std::vector<Row> rows_;
  std::vector<double> log_mass_;
};

// Materializes (P, Q) with total excluded probability at most tail_tol.
// Truncation windows come from exact binomial tail certificates: the C range
// and the per-C A range are walked outward from their modes until the
// geometric bound on the remaining tails drops below the budget.  Both sides
// share the identical support; every stored atom has positive mass under
// both.  tail_tol must lie in (0, 1e-6].
std::pair<PairPmf, PairPmf> build_pair(const ShuffleParams& params,
                                       double tail_tol);

// Q(a, b) / P(a, b) from the stored masses.  Always within
// [e^{-epsilon0}, e^{epsilon0}] up to rounding.  Throws std::domain_error for
// (a, b) outside the common support.
double likelihood_ratio(std::int64_t a, std::int64_t b,
                        const ShuffleParams& params,
                        const std::pair<PairPmf, PairPmf>& pair);

}  // namespace shuffledp

#endif  // SHUFFLEDP_PAIR_PMF_HPP_
