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

#include "shuffledp/tradeoff.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "shuffledp/dist.hpp"

namespace shuffledp {
namespace {

struct AtomMass {
  std::int64_t a;
  std::int64_t b;
  double p_mass;
  double q_mass;
};

}  // namespace

// ---------------------------------------------------------------------------
// TradeoffCurve
// ---------------------------------------------------------------------------

TradeoffCurve TradeoffCurve::from_segments(double beta0,
                                           std::vector<Segment> segments) {
  if (segments.empty()) {
    throw std::invalid_argument("TradeoffCurve: need at least one segment");
  }
  if (beta0 < -1e-12 || beta0 > 1.0 + 1e-12) {
    throw std::invalid_argument("TradeoffCurve: beta0 outside [0, 1]");
  }
  long double width_sum = 0.0L;
  long double drop_sum = 0.0L;
  double prev_slope = -std::numeric_limits<double>::infinity();
  for (const Segment& seg : segments) {
    if (!(seg.width > 0.0)) {
      throw std::invalid_argument("TradeoffCurve: segment width must be > 0");
    }
    if (seg.drop < 0.0) {
      throw std::invalid_argument("TradeoffCurve: betas must be nonincreasing");
    }
    const double slope = -seg.drop / seg.width;
    if (slope < prev_slope - 1e-9 * (1.0 + std::abs(prev_slope))) {
      throw std::invalid_argument("TradeoffCurve: breakpoints are not convex");
    }
    prev_slope = slope;
    width_sum += seg.width;
    drop_sum += seg.drop;
  }
  if (std::abs(static_cast<double>(width_sum) - 1.0) > 1e-9 ||
      std::abs(static_cast<double>(drop_sum) - beta0) > 1e-9) {
    throw std::invalid_argument(
        "TradeoffCurve: segments must span alpha in [0, 1] and descend from "
        "beta0 to 0");
  }

  TradeoffCurve curve;
  curve.beta0_ = beta0;
  curve.points_.reserve(segments.size() + 1);
  curve.points_.push_back({0.0, beta0});
  long double alpha_cum = 0.0L;
  long double beta_cum = beta0;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    alpha_cum += segments[i].width;
    beta_cum -= segments[i].drop;
    double alpha = static_cast<double>(alpha_cum);
    double beta = std::max(0.0, static_cast<double>(beta_cum));
    if (i + 1 == segments.size()) {
      alpha = 1.0;
      beta = 0.0;
    }
    CurvePoint& last = curve.points_.back();
    if (alpha <= last.alpha) {
      last.beta = std::min(last.beta, beta);
      continue;
    }
    beta = std::min(beta, last.beta);
    // Envelope sanity: a valid trade-off never exceeds the blind test.
    if (beta > 1.0 - alpha + 1e-9) {
      throw std::invalid_argument(
          "TradeoffCurve: beta exceeds the blind-test envelope 1 - alpha");
    }
    curve.points_.push_back({alpha, beta});
  }
  curve.segments_ = std::move(segments);
  return curve;
}

TradeoffCurve TradeoffCurve::from_breakpoints(std::vector<CurvePoint> points) {
  if (points.size() < 2) {
    throw std::invalid_argument("TradeoffCurve: need at least two breakpoints");
  }
  if (points.front().alpha != 0.0 || points.back().alpha != 1.0 ||
      points.back().beta != 0.0) {
    throw std::invalid_argument(
        "TradeoffCurve: must start at alpha = 0 and end at (1, 0)");
  }
  for (const CurvePoint& pt : points) {
    if (pt.beta < -1e-12 || pt.beta > 1.0 + 1e-12) {
      throw std::invalid_argument("TradeoffCurve: beta outside [0, 1]");
    }
    if (pt.beta > 1.0 - pt.alpha + 1e-9) {
      throw std::invalid_argument(
          "TradeoffCurve: beta exceeds the blind-test envelope 1 - alpha");
    }
  }
  std::vector<Segment> segments;
  segments.reserve(points.size() - 1);
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double width = points[i].alpha - points[i - 1].alpha;
    if (!(width > 0.0)) {
      throw std::invalid_argument("TradeoffCurve: alphas must be increasing");
    }
    const double drop = points[i - 1].beta - points[i].beta;
    if (drop < -1e-12) {
      throw std::invalid_argument("TradeoffCurve: betas must be nonincreasing");
    }
    segments.push_back({width, std::max(0.0, drop)});
  }
  return from_segments(points.front().beta, std::move(segments));
}

double TradeoffCurve::eval(double alpha) const {
  if (alpha < 0.0 || alpha > 1.0) {
    throw std::domain_error("TradeoffCurve::eval: alpha outside [0, 1]");
  }
  auto it = std::lower_bound(
      points_.begin(), points_.end(), alpha,
      [](const CurvePoint& pt, double value) { return pt.alpha < value; });
  if (it != points_.end() && it->alpha == alpha) return it->beta;
  const CurvePoint& hi = *it;
  const CurvePoint& lo = *(it - 1);
  const double t = (alpha - lo.alpha) / (hi.alpha - lo.alpha);
  return lo.beta + t * (hi.beta - lo.beta);
}

// ---------------------------------------------------------------------------
// Neyman-Pearson construction
// ---------------------------------------------------------------------------

std::vector<RatioClass> np_ratio_classes(const PairPmf& P, const PairPmf& Q) {
  if (P.size() == 0 || P.size() != Q.size()) {
    throw std::domain_error("np_ratio_classes: empty or mismatched supports");
  }

  std::vector<AtomMass> atoms;
  atoms.reserve(P.size());
  const auto p_logs = P.log_masses();
  const auto q_logs = Q.log_masses();
  for (const PairPmf::Row& row : P.rows()) {
    for (std::size_t j = 0; j < row.len; ++j) {
      const std::int64_t a = row.a_lo + static_cast<std::int64_t>(j);
      // The first atom of a row carries only its Delta = 0 mixture component
      // and the last only its Delta = 1 component (either truly, at a = 0 or
      // b = 0, or because truncation cut the companion cell), so their
      // likelihood ratios sit exactly at the e^{+-eps0} extremes: key them to
      // the extreme a/b class whose ratio they share.
      std::int64_t key_a = a;
      std::int64_t key_b = row.c + 1 - a;
      if (j == 0) {
        key_a = 0;
        key_b = 1;
      } else if (j + 1 == row.len) {
        key_a = 1;
        key_b = 0;
      }
      atoms.push_back({key_a, key_b, std::exp(p_logs[row.offset + j]),
                       std::exp(q_logs[row.offset + j])});
    }
  }

  // The likelihood ratio second/first is strictly monotone in a/b: decreasing
  // for the (P, Q) orientation, increasing for (Q, P).  Sorting a/b in the
  // matching direction yields the NP rejection order (ratio descending) with
  // exact rational tie merging.
  const bool ascending = P.side() == PairPmf::Side::kP;
  std::sort(atoms.begin(), atoms.end(),
            [ascending](const AtomMass& x, const AtomMass& y) {
              const int cmp = compare_ratio(x.a, x.b, y.a, y.b);
              return ascending ? cmp < 0 : cmp > 0;
            });

  std::vector<RatioClass> classes;
  for (const AtomMass& atom : atoms) {
    if (!classes.empty() &&
        compare_ratio(classes.back().a, classes.back().b, atom.a, atom.b) ==
            0) {
      classes.back().p_mass += atom.p_mass;
      classes.back().q_mass += atom.q_mass;
    } else {
      classes.push_back({atom.a, atom.b, atom.p_mass, atom.q_mass});
    }
  }
  return classes;
}

TradeoffCurve np_curve(const PairPmf& P, const PairPmf& Q) {
  const std::vector<RatioClass> classes = np_ratio_classes(P, Q);

  long double tot_p = 0.0L;
  long double tot_q = 0.0L;
  for (const RatioClass& cl : classes) {
    tot_p += cl.p_mass;
    tot_q += cl.q_mass;
  }

  // Each ratio class becomes one exact segment: width is its P share, drop
  // its Q share, so the segment slope is exactly minus the class likelihood
  // ratio (up to the normalization of the two truncated totals).
  std::vector<TradeoffCurve::Segment> segments;
  segments.reserve(classes.size());
  for (const RatioClass& cl : classes) {
    segments.push_back(
        {static_cast<double>(static_cast<long double>(cl.p_mass) / tot_p),
         static_cast<double>(static_cast<long double>(cl.q_mass) / tot_q)});
  }
  return TradeoffCurve::from_segments(1.0, std::move(segments));
}

// ---------------------------------------------------------------------------
// Closed-form curve from raw binomial sums
// ---------------------------------------------------------------------------

namespace {

std::int64_t floor_div(std::int64_t x, std::int64_t d) {
  std::int64_t quot = x / d;
  if (x % d != 0 && ((x < 0) != (d < 0))) --quot;
  return quot;
}

struct ClosedFormClass {
  std::int64_t a;
  std::int64_t b;
  long double p_mass;
  long double q_mass;
};

// All likelihood-ratio classes from direct enumeration of (C, A, Delta),
// without truncation.  Quadratic in n; guarded accordingly.
std::vector<ClosedFormClass> closed_form_classes(const ShuffleParams& params) {
  constexpr std::int64_t kMaxN = 8192;
  if (params.n() > kMaxN) {
    throw std::domain_error(
        "h_closed_form: full enumeration is quadratic in n; use np_curve "
        "beyond n = 8192");
  }
  const std::int64_t m = params.n() - 1;
  const double p = params.p();
  const double q = params.q();

  struct Acc {
    long double p_mass = 0.0L;
    long double q_mass = 0.0L;
  };
  std::unordered_map<std::uint64_t, Acc> by_ratio;
  by_ratio.reserve(static_cast<std::size_t>(m + 1) * 8);

  auto add = [&](std::int64_t a, std::int64_t b, double pm, double qm) {
    const std::int64_t g = std::gcd(a, b);
    const std::int64_t ra = g > 0 ? a / g : (b == 0 ? 1 : 0);
    const std::int64_t rb = g > 0 ? b / g : (a == 0 ? 1 : 0);
    const std::uint64_t key = (static_cast<std::uint64_t>(ra) << 32) |
                              static_cast<std::uint64_t>(rb);
    Acc& acc = by_ratio[key];
    acc.p_mass += pm;
    acc.q_mass += qm;
  };

  for (std::int64_t v = 0; v <= m; ++v) {
    const double log_c = log_binomial_pmf(v, BinomialSpec{m, p});
    if (log_c == -std::numeric_limits<double>::infinity()) continue;
    // ln P(A = k | C = v) by recurrence, in log space so deep tails stay
    // representable.
    double log_a = -static_cast<double>(v) * M_LN2;
    for (std::int64_t k = 0; k <= v; ++k) {
      const double joint = std::exp(log_c + log_a);
      if (joint > 0.0) {
        // Delta = 0: P-sample (k, v-k+1); Delta = 1: P-sample (k+1, v-k).
        add(k, v - k + 1, (1.0 - q) * joint, q * joint);
        add(k + 1, v - k, q * joint, (1.0 - q) * joint);
      }
      if (k < v) {
        log_a += std::log(static_cast<double>(v - k)) -
                 std::log(static_cast<double>(k + 1));
      }
    }
  }

  std::vector<ClosedFormClass> classes;
  classes.reserve(by_ratio.size());
  for (const auto& [key, acc] : by_ratio) {
    classes.push_back({static_cast<std::int64_t>(key >> 32),
                       static_cast<std::int64_t>(key & 0xffffffffULL),
                       acc.p_mass, acc.q_mass});
  }
  std::sort(classes.begin(), classes.end(),
            [](const ClosedFormClass& x, const ClosedFormClass& y) {
              return compare_ratio(x.a, x.b, y.a, y.b) < 0;
            });
  return classes;
}

}  // namespace

std::vector<CurvePoint> h_closed_form(const ShuffleParams& params,
                                      std::span<const double> alpha_grid) {
  for (double alpha : alpha_grid) {
    if (alpha < 0.0 || alpha > 1.0) {
      throw std::domain_error("h_closed_form: grid alpha outside [0, 1]");
    }
  }
  const std::vector<ClosedFormClass> classes = closed_form_classes(params);

  // Achievable (type-I, type-II) pairs of the pure threshold test, in
  // rejection order.
  std::vector<double> achievable_alpha;
  std::vector<double> beta_at;
  achievable_alpha.reserve(classes.size() + 1);
  beta_at.reserve(classes.size() + 1);
  achievable_alpha.push_back(0.0);
  beta_at.push_back(1.0);
  long double cum_p = 0.0L;
  long double cum_q = 0.0L;
  long double tot_p = 0.0L;
  long double tot_q = 0.0L;
  for (const ClosedFormClass& cl : classes) {
    tot_p += cl.p_mass;
    tot_q += cl.q_mass;
  }
  for (const ClosedFormClass& cl : classes) {
    cum_p += cl.p_mass;
    cum_q += cl.q_mass;
    achievable_alpha.push_back(static_cast<double>(cum_p / tot_p));
    beta_at.push_back(static_cast<double>(1.0L - cum_q / tot_q));
  }

  std::vector<CurvePoint> out;
  out.reserve(alpha_grid.size());
  for (double alpha : alpha_grid) {
    // Largest achievable type-I error not exceeding alpha; the threshold
    // search over the finite ratio set is this step lookup.  The 1e-12 slack
    // keeps a grid alpha that IS an achievable error, up to rounding, from
    // falling one step short.
    auto it = std::upper_bound(achievable_alpha.begin(),
                               achievable_alpha.end(), alpha + 1e-12);
    const std::size_t j =
        static_cast<std::size_t>(it - achievable_alpha.begin()) - 1;
    const double step_beta = beta_at[j];
    out.push_back({alpha, std::min(1.0 - alpha, step_beta)});
  }
  return out;
}

double closed_form_window_mass(const ShuffleParams& params, std::int64_t num,
                               std::int64_t den) {
  if (num < 0 || den < 0 || (num == 0 && den == 0)) {
    throw std::domain_error(
        "closed_form_window_mass: threshold must be a nonnegative rational");
  }
  if (den == 0) return 0.0;  // t = +inf: the window (v, v+1] holds no atom
  const std::int64_t m = params.n() - 1;
  const double p = params.p();
  double total = 0.0;
  for (std::int64_t v = 0; v <= m; ++v) {
    // Single atom of (B1, B1 + 1] with B1 = (t v - 1)/(t + 1).
    const std::int64_t k = floor_div(num * v - den, num + den) + 1;
    if (k < 0 || k > v) continue;
    const double c_mass = std::exp(log_binomial_pmf(v, BinomialSpec{m, p}));
    const double a_mass = std::exp(log_binomial_coefficient(v, k) -
                                   static_cast<double>(v) * M_LN2);
    total += c_mass * a_mass;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Gaussian trade-off
// ---------------------------------------------------------------------------

GaussianCurve::GaussianCurve(double mu) : mu_(mu) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw std::domain_error("GaussianCurve: mu must be finite and >= 0");
  }
}

GaussianCurve gaussian_curve(double mu) { return GaussianCurve(mu); }

double GaussianCurve::eval(double alpha) const {
  if (alpha < 0.0 || alpha > 1.0) {
    throw std::domain_error("GaussianCurve::eval: alpha outside [0, 1]");
  }
  if (alpha == 0.0) return 1.0;
  if (alpha == 1.0) return 0.0;
  if (mu_ == 0.0) return 1.0 - alpha;
  return normal_cdf(normal_quantile(1.0 - alpha) - mu_);
}

TradeoffCurve GaussianCurve::piecewise(double max_err) const {
  if (!(max_err > 0.0)) {
    throw std::domain_error("GaussianCurve::piecewise: max_err must be > 0");
  }
  std::vector<CurvePoint> points;
  points.push_back({0.0, 1.0});

  // Midpoint-refined subdivision.  Breakpoints lie on the convex curve and
  // the chord-minus-curve gap is concave per segment, so a midpoint gap of
  // max_err/2 certifies a sup-norm error of max_err over the whole segment.
  struct Span {
    double a0, f0, a1, f1;
    int depth;
  };
  std::vector<Span> stack;
  stack.push_back({0.0, 1.0, 1.0, 0.0, 0});
  std::vector<CurvePoint> leaf_ends;
  while (!stack.empty()) {
    const Span s = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (s.a0 + s.a1);
    const double fmid = eval(mid);
    const double chord = 0.5 * (s.f0 + s.f1);
    if ((chord - fmid <= 0.5 * max_err && s.depth >= 2) || s.depth >= 26) {
      leaf_ends.push_back({s.a1, s.f1});
      continue;
    }
    stack.push_back({s.a0, s.f0, mid, fmid, s.depth + 1});
    stack.push_back({mid, fmid, s.a1, s.f1, s.depth + 1});
  }
  std::sort(leaf_ends.begin(), leaf_ends.end(),
            [](const CurvePoint& x, const CurvePoint& y) {
              return x.alpha < y.alpha;
            });
  for (const CurvePoint& pt : leaf_ends) {
    if (pt.alpha > points.back().alpha && pt.alpha < 1.0) points.push_back(pt);
  }
  points.push_back({1.0, 0.0});
  return TradeoffCurve::from_breakpoints(std::move(points));
}

// ---------------------------------------------------------------------------
// Symmetrization
// ---------------------------------------------------------------------------

TradeoffCurve curve_symmetrize(const TradeoffCurve& f) {
  const std::vector<CurvePoint>& fp = f.breakpoints();

  // Functional inverse: reflect breakpoints across beta = alpha.  Flat
  // segments reflect onto zero-width steps, which interpolation handles by
  // keeping the lower value.
  std::vector<CurvePoint> gp;
  gp.reserve(fp.size());
  for (auto it = fp.rbegin(); it != fp.rend(); ++it) {
    if (!gp.empty() && it->beta <= gp.back().alpha) {
      gp.back().beta = std::min(gp.back().beta, it->alpha);
      continue;
    }
    gp.push_back({it->beta, it->alpha});
  }
  // A curve starting below beta = 1 inverts to a plateau at 0 past beta0.
  if (gp.back().alpha < 1.0) gp.push_back({1.0, 0.0});
  const TradeoffCurve g = TradeoffCurve::from_breakpoints(std::move(gp));

  // Knots: both curves' breakpoints plus segment crossings.
  std::vector<double> knots;
  knots.reserve(fp.size() + g.breakpoints().size());
  for (const CurvePoint& pt : fp) knots.push_back(pt.alpha);
  for (const CurvePoint& pt : g.breakpoints()) knots.push_back(pt.alpha);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

  std::vector<CurvePoint> raw;
  raw.reserve(knots.size() * 2);
  for (std::size_t i = 0; i < knots.size(); ++i) {
    const double x = knots[i];
    const double fv = f.eval(x);
    const double gv = g.eval(x);
    if (i > 0) {
      const double x0 = knots[i - 1];
      const double d0 = f.eval(x0) - g.eval(x0);
      const double d1 = fv - gv;
      if (d0 * d1 < 0.0) {
        const double t = d0 / (d0 - d1);
        const double xc = x0 + t * (x - x0);
        raw.push_back({xc, f.eval(xc)});
      }
    }
    raw.push_back({x, std::min(fv, gv)});
  }

  // Lower convex envelope (monotone chain over the sampled minimum).  The
  // middle point survives only while it lies strictly below the chord of its
  // neighbors.
  std::vector<CurvePoint> hull;
  for (const CurvePoint& pt : raw) {
    if (!hull.empty() && pt.alpha <= hull.back().alpha) {
      if (pt.beta < hull.back().beta) hull.back().beta = pt.beta;
      continue;
    }
    while (hull.size() >= 2) {
      const CurvePoint& p1 = hull[hull.size() - 2];
      const CurvePoint& p2 = hull[hull.size() - 1];
      const double cross = (p2.alpha - p1.alpha) * (pt.beta - p1.beta) -
                           (pt.alpha - p1.alpha) * (p2.beta - p1.beta);
      if (cross > 0.0) break;
      hull.pop_back();
    }
    hull.push_back(pt);
  }
  hull.back() = {1.0, 0.0};
  return TradeoffCurve::from_breakpoints(std::move(hull));
}

}  // namespace shuffledp
