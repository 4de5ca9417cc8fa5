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

#include "shuffledp/pair_pmf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "shuffledp/dist.hpp"

namespace shuffledp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// A contiguous binomial window [lo, lo + pmf.size() - 1] with linear-space
// probabilities and a certified upper bound on the mass outside it.
struct BinomialWindow {
  std::int64_t lo = 0;
  std::vector<double> pmf;
  double tail_bound = 0.0;
};

// pmf(c+1) / pmf(c) for Bin(m, p).
inline double step_up_ratio(std::int64_t c, std::int64_t m, double p) {
  return (static_cast<double>(m - c) / static_cast<double>(c + 1)) *
         (p / (1.0 - p));
}

// pmf(c-1) / pmf(c) for Bin(m, p).
inline double step_down_ratio(std::int64_t c, std::int64_t m, double p) {
  return (static_cast<double>(c) / static_cast<double>(m - c + 1)) *
         ((1.0 - p) / p);
}

// Geometric tail bound past a boundary value with pmf mass `edge` and
// next-step ratio r: the ratios keep shrinking away from the mode, so the
// remaining tail is at most edge * r / (1 - r).  +inf when r >= 1, which
// forces the walk to keep extending.
inline double geometric_tail(double edge, double r) {
  if (r <= 0.0) return 0.0;
  if (r >= 1.0) return kInf;
  return edge * r / (1.0 - r);
}

// Walks outward from the mode of Bin(m, p) until the certified excluded mass
// drops below tol.  Degenerate p (0 or 1) yields a single-atom window.
BinomialWindow binomial_window(std::int64_t m, double p, double tol) {
  BinomialWindow window;
  if (m == 0 || p == 0.0 || p == 1.0) {
    window.lo = p == 1.0 ? m : 0;
    window.pmf = {1.0};
    window.tail_bound = 0.0;
    return window;
  }

  const std::int64_t mode = std::clamp<std::int64_t>(
      static_cast<std::int64_t>(std::floor(static_cast<double>(m + 1) * p)), 0,
      m);
  const double mode_pmf =
      std::exp(log_binomial_pmf(mode, BinomialSpec{m, p}));

  std::int64_t lo = mode;
  std::int64_t hi = mode;
  std::vector<double> left;   // pmf(mode-1), pmf(mode-2), ...
  std::vector<double> right;  // pmf(mode+1), pmf(mode+2), ...
  double lo_pmf = mode_pmf;
  double hi_pmf = mode_pmf;

  auto left_bound = [&]() {
    if (lo == 0) return 0.0;
    return geometric_tail(lo_pmf, step_down_ratio(lo, m, p));
  };
  auto right_bound = [&]() {
    if (hi == m) return 0.0;
    return geometric_tail(hi_pmf, step_up_ratio(hi, m, p));
  };

  while (left_bound() + right_bound() > tol) {
    const double next_left =
        lo > 0 ? lo_pmf * step_down_ratio(lo, m, p) : -1.0;
    const double next_right =
        hi < m ? hi_pmf * step_up_ratio(hi, m, p) : -1.0;
    if (next_left >= next_right) {
      left.push_back(next_left);
      lo_pmf = next_left;
      --lo;
    } else {
      right.push_back(next_right);
      hi_pmf = next_right;
      ++hi;
    }
    // Underflowed edges terminate through geometric_tail returning 0.
    if (lo == 0 && hi == m) break;
  }

  window.lo = lo;
  window.pmf.reserve(left.size() + 1 + right.size());
  for (auto it = left.rbegin(); it != left.rend(); ++it) {
    window.pmf.push_back(*it);
  }
  window.pmf.push_back(mode_pmf);
  for (double v : right) window.pmf.push_back(v);
  window.tail_bound = left_bound() + right_bound();

  // Edge cells can underflow to exact zero; they carry no representable mass,
  // so drop them rather than store log(0) atoms.
  while (!window.pmf.empty() && window.pmf.front() == 0.0) {
    window.pmf.erase(window.pmf.begin());
    ++window.lo;
  }
  while (!window.pmf.empty() && window.pmf.back() == 0.0) {
    window.pmf.pop_back();
  }
  return window;
}

// Window for Bin(c, 1/2), expanded in mirrored pairs so that lo = c - hi at
// every step and pmf[j] is bitwise equal to its mirror.  The coordinate swap
// (a, b) -> (b, a) maps each row onto itself, so this symmetry is what makes
// P and Q exact mirror images atom by atom.
BinomialWindow binomial_half_window(std::int64_t c, double tol) {
  BinomialWindow window;
  if (c == 0) {
    window.lo = 0;
    window.pmf = {1.0};
    window.tail_bound = 0.0;
    return window;
  }

  std::int64_t hi = (c + 1) / 2;
  std::int64_t lo = c - hi;
  const double center_pmf =
      std::exp(log_binomial_pmf(hi, BinomialSpec{c, 0.5}));
  double edge_pmf = center_pmf;

  // pmf(lo - 1) / pmf(lo) for Bin(c, 1/2); equals the mirrored up-step by
  // construction.
  auto down_ratio = [c](std::int64_t k) {
    return static_cast<double>(k) / static_cast<double>(c - k + 1);
  };

  std::vector<double> wings;  // pmf(lo-1), pmf(lo-2), ... as the walk extends
  auto bound = [&]() {
    if (lo == 0) return 0.0;
    return 2.0 * geometric_tail(edge_pmf, down_ratio(lo));
  };
  while (bound() > tol) {
    const double next = edge_pmf * down_ratio(lo);
    wings.push_back(next);
    edge_pmf = next;
    --lo;
    hi = c - lo;
  }
  while (!wings.empty() && wings.back() == 0.0) {
    wings.pop_back();
    ++lo;
    hi = c - lo;
  }

  window.lo = lo;
  window.pmf.reserve(static_cast<std::size_t>(hi - lo) + 1);
  for (auto it = wings.rbegin(); it != wings.rend(); ++it) {
    window.pmf.push_back(*it);
  }
  window.pmf.push_back(center_pmf);
  if (c % 2 == 1) window.pmf.push_back(center_pmf);  // two equal center cells
  for (double v : wings) window.pmf.push_back(v);
  window.tail_bound = bound();
  return window;
}

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

}  // namespace

bool PairPmf::contains(std::int64_t a, std::int64_t b) const {
  if (a < 0 || b < 0) return false;
  const std::int64_t c = a + b - 1;
  auto it = std::lower_bound(
      rows_.begin(), rows_.end(), c,
      [](const Row& row, std::int64_t value) { return row.c < value; });
  if (it == rows_.end() || it->c != c) return false;
  return a >= it->a_lo && a < it->a_lo + static_cast<std::int64_t>(it->len);
}

double PairPmf::log_mass_at(std::int64_t a, std::int64_t b) const {
  const std::int64_t c = a + b - 1;
  auto it = std::lower_bound(
      rows_.begin(), rows_.end(), c,
      [](const Row& row, std::int64_t value) { return row.c < value; });
  if (it == rows_.end() || it->c != c || a < it->a_lo ||
      a >= it->a_lo + static_cast<std::int64_t>(it->len)) {
    throw std::domain_error("PairPmf: (a, b) outside the stored support");
  }
  return log_mass_[it->offset + static_cast<std::size_t>(a - it->a_lo)];
}

std::pair<PairPmf, PairPmf> build_pair(const ShuffleParams& params,
                                       double tail_tol) {
  if (!(tail_tol > 0.0) || tail_tol > 1e-6) {
    throw std::domain_error("build_pair: tail_tol must lie in (0, 1e-6]");
  }

  const std::int64_t m = params.n() - 1;
  const double p = params.p();
  const double q = params.q();

  PairPmf P(PairPmf::Side::kP, params);
  PairPmf Q(PairPmf::Side::kQ, params);

  const BinomialWindow c_window = binomial_window(m, p, tail_tol / 2.0);

  double neglected = c_window.tail_bound;
  KahanSum total_p;
  KahanSum total_q;

  std::vector<double> p_row;
  std::vector<double> q_row;
  for (std::size_t ci = 0; ci < c_window.pmf.size(); ++ci) {
    const std::int64_t c = c_window.lo + static_cast<std::int64_t>(ci);
    const double c_mass = c_window.pmf[ci];
    const BinomialWindow a_window = binomial_half_window(c, tail_tol / 2.0);
    neglected += c_mass * a_window.tail_bound;

    const std::int64_t k_lo = a_window.lo;
    const std::int64_t k_hi =
        k_lo + static_cast<std::int64_t>(a_window.pmf.size()) - 1;
    const double w_delta1 = q * c_mass;
    const double w_delta0 = (1.0 - q) * c_mass;

    p_row.clear();
    q_row.clear();
    // Atom a receives the Delta=0 contribution of k = a and the Delta=1
    // contribution of k = a - 1.
    for (std::int64_t a = k_lo; a <= k_hi + 1; ++a) {
      const double pa0 =
          a <= k_hi ? a_window.pmf[static_cast<std::size_t>(a - k_lo)] : 0.0;
      const double pa1 =
          a - 1 >= k_lo ? a_window.pmf[static_cast<std::size_t>(a - 1 - k_lo)]
                        : 0.0;
      const double p_mass = w_delta0 * pa0 + w_delta1 * pa1;
      const double q_mass = w_delta1 * pa0 + w_delta0 * pa1;
      p_row.push_back(p_mass);
      q_row.push_back(q_mass);
      total_p.add(p_mass);
      total_q.add(q_mass);
    }

    const std::size_t offset = P.log_mass_.size();
    P.rows_.push_back({c, k_lo, offset, p_row.size()});
    Q.rows_.push_back({c, k_lo, offset, q_row.size()});
    for (double v : p_row) P.log_mass_.push_back(std::log(v));
    for (double v : q_row) Q.log_mass_.push_back(std::log(v));
  }

  // Inflate the certificate slightly to absorb accumulation rounding.
  neglected = neglected * (1.0 + 1e-9) + 1e-300 * (neglected > 0.0 ? 1.0 : 0.0);

  P.neglected_mass_ = neglected;
  Q.neglected_mass_ = neglected;
  P.total_mass_ = total_p.sum;
  Q.total_mass_ = total_q.sum;
  return {std::move(P), std::move(Q)};
}

double likelihood_ratio(std::int64_t a, std::int64_t b,
                        const ShuffleParams& /*params*/,
                        const std::pair<PairPmf, PairPmf>& pair) {
  const double log_p = pair.first.log_mass_at(a, b);
  const double log_q = pair.second.log_mass_at(a, b);
  return std::exp(log_q - log_p);
}

}  // namespace shuffledp
