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

#ifndef SHUFFLEDP_TRADEOFF_HPP_
#define SHUFFLEDP_TRADEOFF_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "shuffledp/pair_pmf.hpp"
#include "shuffledp/params.hpp"

// Hypothesis-testing trade-off machinery: the exact Neyman-Pearson curve
// between the discrete pair (P, Q), the closed-form step curve built from raw
// binomial sums, the Gaussian trade-off curve, and curve algebra.

namespace shuffledp {

struct CurvePoint {
  double alpha;
  double beta;
};

// Exact three-way comparison of the rationals a1/b1 and a2/b2 over
// nonnegative coordinates, with x/0 = +inf.  Likelihood ratios of the pair
// are monotone in a/b, so this is the tie-exact ordering shared by the NP
// construction and the Monte Carlo threshold test.
inline int compare_ratio(std::int64_t a1, std::int64_t b1, std::int64_t a2,
                         std::int64_t b2) {
  const __int128 lhs = static_cast<__int128>(a1) * b2;
  const __int128 rhs = static_cast<__int128>(a2) * b1;
  if (lhs < rhs) return -1;
  if (lhs > rhs) return 1;
  return 0;
}

// Convex, nonincreasing piecewise-linear map [0,1] -> [0,1] given by
// breakpoints from (0, beta0) to (1, 0).  Linear interpolation between
// breakpoints realizes randomized tests between support atoms.
//
// Segments, not breakpoints, are the primary representation: segment i has
// an exact width and beta drop, so ratio classes far smaller than one ulp of
// the cumulative coordinates keep their exact slopes.  That exactness is
// what makes the trade-off integral reproduce the direct Renyi summation to
// near machine precision.
class TradeoffCurve {
 public:
  struct Segment {
    double width;  // alpha extent, > 0
    double drop;   // beta decrease over the segment, >= 0
  };

  // Validates ordering, convexity and the beta <= 1 - alpha envelope;
  // throws std::invalid_argument on violations.
  static TradeoffCurve from_breakpoints(std::vector<CurvePoint> points);

  // Builds from beta0 and exact segments (widths summing to 1 and drops
  // summing to beta0, both within 1e-9; slopes must be nonincreasing in
  // beta, i.e. -drop/width nondecreasing).
  static TradeoffCurve from_segments(double beta0, std::vector<Segment> segments);

  // Cumulative breakpoints derived from the segments; consecutive points
  // whose alpha collides in double precision are collapsed, and the curve
  // ends exactly at (1, 0).
  const std::vector<CurvePoint>& breakpoints() const { return points_; }

  const std::vector<Segment>& segments() const { return segments_; }
  double beta0() const { return beta0_; }

  // Linear interpolation; exact at breakpoints.  Throws std::domain_error
  // outside [0, 1].
  double eval(double alpha) const;

 private:
  TradeoffCurve() = default;
  double beta0_ = 1.0;
  std::vector<Segment> segments_;
  std::vector<CurvePoint> points_;
};

// One likelihood-ratio class of the support: all atoms sharing the exact
// rational a/b, with their aggregated masses.  Classes are ordered by
// descending ratio Q/P, i.e. the Neyman-Pearson rejection order.
struct RatioClass {
  std::int64_t a;  // representative atom
  std::int64_t b;
  double p_mass;
  double q_mass;
};

// Support atoms grouped by exact likelihood ratio, sorted in rejection order.
// Exposed because the Monte Carlo estimator calibrates its threshold test on
// the same classes.
std::vector<RatioClass> np_ratio_classes(const PairPmf& P, const PairPmf& Q);

// Exact trade-off curve T(P, Q): atoms sorted by likelihood ratio Q/P
// descending, ties merged into single segments, breakpoints accumulated as
// (P mass, 1 - Q mass) with compensated summation and normalized so the curve
// runs from (0, 1) to (1, 0).  Segment slopes equal minus the merged class
// ratio.  Throws std::domain_error on an empty support.
TradeoffCurve np_curve(const PairPmf& P, const PairPmf& Q);

// Closed-form trade-off evaluated on a grid, built independently of
// build_pair from raw binomial sums over all (C, A, Delta) outcomes.  For
// each grid alpha the achievable threshold t = g(alpha) is found by monotone
// search over the finite ratio set and beta is the step value at t, capped by
// the blind-test envelope 1 - alpha.  Coincides with np_curve wherever alpha
// is an achievable type-I error and otherwise lies on or above it.
std::vector<CurvePoint> h_closed_form(const ShuffleParams& params,
                                      std::span<const double> alpha_grid);

// The one-atom window mass of the closed form: for threshold t = num/den,
// sum over v of P(B1(v) < A <= B2(v) | C = v) P(C = v) with
// B1 = (t v - 1)/(t + 1) and B2 = B1 + 1.  Multiplied by
// |c0| = (1 - p)/(1 + p) this equals 1 - alpha - beta at every achievable
// threshold; kept public as the numeric cross-check surface for that
// identity.
double closed_form_window_mass(const ShuffleParams& params, std::int64_t num,
                               std::int64_t den);

// Analytic Gaussian trade-off alpha -> Phi(Phi^{-1}(1 - alpha) - mu).
class GaussianCurve {
 public:
  explicit GaussianCurve(double mu);

  double mu() const { return mu_; }
  double eval(double alpha) const;

  // Dense piecewise-linear upper approximation with sup-norm error at most
  // max_err (default tuned for lambda-integration).
  TradeoffCurve piecewise(double max_err = 1e-6) const;

 private:
  double mu_;
};

// Requires mu >= 0.
GaussianCurve gaussian_curve(double mu);

// Pointwise minimum of f and its functional inverse, re-convexified by the
// lower convex envelope.
TradeoffCurve curve_symmetrize(const TradeoffCurve& f);

inline double curve_eval(const TradeoffCurve& f, double alpha) {
  return f.eval(alpha);
}

}  // namespace shuffledp

#endif  // SHUFFLEDP_TRADEOFF_HPP_
