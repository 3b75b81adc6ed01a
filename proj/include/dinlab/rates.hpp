// Copyright 2026 The dinlab Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Closed-form rate calculus for the damped inertial system under a PL
// condition with constant mu.
//
// Notation used throughout:
//   b  = (alpha - mu beta) beta + 1
//   c  = (1 - alpha beta) mu beta^2
//   P2(a) = a^2 - b a + c                (Lyapunov weight polynomial)
//   D  = b^2 - 4c,   Q = sqrt(D) - mu beta^2
// A weight a is admissible when 1 - alpha beta <= a <= 1 + alpha beta,
// a >= 0 and P2(a) >= 0; it then certifies the rate (1 + alpha beta - a)/beta.

#ifndef DINLAB_RATES_HPP
#define DINLAB_RATES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "dinlab/common.hpp"
#include "dinlab/dynamics.hpp"

namespace dinlab {

inline constexpr double kRegionSlack = 1e-12;

struct RateEnvelope {
  double R = 0.0;
  double C = 1.0;
  double M0 = 0.0;
  double t0 = 0.0;

  // M0 already carries e^{R t0}.
  double value(double t) const { return M0 * std::exp(-R * t); }
};

struct RegionBoundaries {
  std::optional<double> beta1, beta2;
  std::optional<double> beta0, beta3, beta4;
  std::optional<double> y_minus, y_plus;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double a, double slack = kRegionSlack) const {
    return a >= lo - slack && a <= hi + slack;
  }
};

struct AdmissibleSet {
  std::vector<Interval> intervals;

  bool empty() const { return intervals.empty(); }
  bool contains(double a, double slack = kRegionSlack) const {
    return std::any_of(intervals.begin(), intervals.end(),
                       [&](const Interval& iv) { return iv.contains(a, slack); });
  }
  double min() const { return intervals.front().lo; }
  double max() const { return intervals.back().hi; }
};

namespace detail {

inline void check_rate_args(const FrictionParams& p, double mu) {
  require(std::isfinite(p.alpha) && p.alpha > 0.0, "rates: alpha must be positive");
  require(std::isfinite(p.beta) && p.beta > 0.0, "rates: beta must be positive");
  require(std::isfinite(mu) && mu > 0.0, "rates: mu must be positive");
}

struct P2Coeffs {
  double b, c, D;
};

inline P2Coeffs p2_coeffs(const FrictionParams& p, double mu) {
  const double a = p.alpha, be = p.beta;
  const double b = (a - mu * be) * be + 1.0;
  const double c = (1.0 - a * be) * mu * be * be;
  return {b, c, b * b - 4.0 * c};
}

// Roots of a^2 - b a + c without cancellation. Requires D >= 0.
inline std::pair<double, double> p2_roots(const P2Coeffs& k) {
  const double s = std::sqrt(std::max(0.0, k.D));
  double lo, hi;
  if (k.b >= 0.0) {
    hi = 0.5 * (k.b + s);
    lo = hi != 0.0 ? k.c / hi : 0.5 * (k.b - s);
  } else {
    lo = 0.5 * (k.b - s);
    hi = lo != 0.0 ? k.c / lo : 0.5 * (k.b + s);
  }
  if (lo > hi) std::swap(lo, hi);
  return {lo, hi};
}

inline bool first_branch(const FrictionParams& p, double mu) {
  const double sm = std::sqrt(mu);
  return p.alpha <= sm + kRegionSlack && p.beta >= p.alpha / mu - kRegionSlack &&
         p.beta <= 1.0 / p.alpha + kRegionSlack;
}

}  // namespace detail

/// P2(a) = a^2 - ((alpha - mu beta) beta + 1) a + (1 - alpha beta) mu beta^2.
inline double p2(const FrictionParams& p, double mu, double a) {
  const auto k = detail::p2_coeffs(p, mu);
  return a * a - k.b * a + k.c;
}

/// Direct evaluation of the admissibility conditions for weight a.
inline bool h1_holds(const FrictionParams& p, double mu, double a,
                     double slack = kRegionSlack) {
  const double ab = p.alpha * p.beta;
  if (a < std::max(0.0, 1.0 - ab) - slack || a > 1.0 + ab + slack) return false;
  return p2(p, mu, a) >= -slack;
}

inline double p2_discriminant(const FrictionParams& p, double mu) {
  return detail::p2_coeffs(p, mu).D;
}

/// Q = sqrt(D) - mu beta^2. Throws RegionError when D < 0.
inline double q_factor(const FrictionParams& p, double mu) {
  detail::check_rate_args(p, mu);
  const double D = p2_discriminant(p, mu);
  if (D < -kRegionSlack)
    throw RegionError("q_factor: negative discriminant " + std::to_string(D));
  return std::sqrt(std::max(0.0, D)) - mu * p.beta * p.beta;
}

/// Exponential rate certified by the best admissible weight. On the closed
/// region alpha <= sqrt(mu), alpha/mu <= beta <= 1/alpha it is 2 alpha.
inline double rate_R(const FrictionParams& p, double mu) {
  detail::check_rate_args(p, mu);
  if (detail::first_branch(p, mu)) return 2.0 * p.alpha;
  // Outside the first-branch region D >= 0 up to rounding.
  const double D = p2_discriminant(p, mu);
  const double Q = std::sqrt(std::max(0.0, D)) - mu * p.beta * p.beta;
  return (1.0 + p.alpha * p.beta - Q) / (2.0 * p.beta);
}

/// Weight a that attains rate_R. At beta = 1/alpha the second formula is
/// used, since 1 - alpha beta would vanish there.
inline double prefactor_C(const FrictionParams& p, double mu) {
  detail::check_rate_args(p, mu);
  const double ab = p.alpha * p.beta;
  if (detail::first_branch(p, mu) && ab < 1.0 - kRegionSlack) return 1.0 - ab;
  const double D = p2_discriminant(p, mu);
  const double Q = std::sqrt(std::max(0.0, D)) - mu * p.beta * p.beta;
  return 0.5 * (1.0 + ab + Q);
}

/// Beta thresholds and the roots y- <= y+ of P2.
inline RegionBoundaries region_boundaries(const FrictionParams& p, double mu) {
  require(std::isfinite(p.alpha) && p.alpha > 0.0, "region_boundaries: alpha must be positive");
  require(std::isfinite(mu) && mu > 0.0, "region_boundaries: mu must be positive");
  const double a = p.alpha;
  RegionBoundaries rb;

  const double s = 2.0 * std::sqrt(2.0 * mu) - a;
  const double d12 = s * s - 4.0 * mu;
  if (s > 0.0 && d12 >= -kRegionSlack) {
    const double r = std::sqrt(std::max(0.0, d12));
    rb.beta1 = (s - r) / (2.0 * mu);
    rb.beta2 = (s + r) / (2.0 * mu);
  }

  rb.beta0 = (a + std::sqrt(a * a + 4.0 * mu)) / (2.0 * mu);

  const double d34 = 9.0 * a * a - 4.0 * mu;
  if (d34 >= -kRegionSlack) {
    const double r = std::sqrt(std::max(0.0, d34));
    rb.beta3 = (3.0 * a - r) / (2.0 * mu);
    rb.beta4 = (3.0 * a + r) / (2.0 * mu);
  }

  if (std::isfinite(p.beta) && p.beta > 0.0) {
    const auto k = detail::p2_coeffs(p, mu);
    if (k.D >= 0.0) {
      auto [lo, hi] = detail::p2_roots(k);
      rb.y_minus = lo;
      rb.y_plus = hi;
    }
  }
  return rb;
}

/// All weights a satisfying the admissibility conditions, as at most two
/// closed intervals inside [max(0, 1 - alpha beta), 1 + alpha beta].
inline AdmissibleSet admissible_a(const FrictionParams& p, double mu) {
  detail::check_rate_args(p, mu);
  const double ab = p.alpha * p.beta;
  const double lo = std::max(0.0, 1.0 - ab);
  const double hi = 1.0 + ab;
  const auto k = detail::p2_coeffs(p, mu);

  AdmissibleSet out;
  if (k.D <= 0.0) {
    out.intervals.push_back({lo, hi});
    return out;
  }
  const auto [ym, yp] = detail::p2_roots(k);
  if (ym >= lo - kRegionSlack) out.intervals.push_back({lo, std::min(std::max(ym, lo), hi)});
  const double upper_lo = std::max(lo, yp);
  if (upper_lo <= hi + kRegionSlack) {
    if (!out.intervals.empty() && out.intervals.back().hi >= upper_lo - kRegionSlack)
      out.intervals.back().hi = hi;
    else
      out.intervals.push_back({upper_lo, hi});
  }
  return out;
}

/// Sign of P2(y) for y >= 0 predicted from the threshold case analysis
/// (no direct evaluation of the polynomial).
inline bool p2_nonnegative_predicted(const FrictionParams& p, double mu, double y) {
  const auto rb = region_boundaries(p, mu);
  if (rb.beta1 && rb.beta2 && p.beta >= *rb.beta1 - kRegionSlack &&
      p.beta <= *rb.beta2 + kRegionSlack)
    return true;
  if (!rb.y_minus) return true;
  const double ym = *rb.y_minus, yp = *rb.y_plus;
  if (ym >= 0.0 && y <= ym) return true;
  return y >= std::max(0.0, yp);
}

struct Tuning {
  FrictionParams params;
  double target_rate = 0.0;
  double beta_lo = 0.0;  // open interval of valid beta
  double beta_hi = 0.0;
};

/// alpha = sqrt(mu) - eps/2, beta at the midpoint of
/// ((2 sqrt(mu) - eps)/(2 mu), 2/(2 sqrt(mu) - eps)), target 2 sqrt(mu) - eps.
inline Tuning optimal_tuning(double mu, double epsilon) {
  require(std::isfinite(mu) && mu > 0.0, "optimal_tuning: mu must be positive");
  const double sm = std::sqrt(mu);
  require(std::isfinite(epsilon) && epsilon > 0.0 && epsilon < 2.0 * sm,
          "optimal_tuning: epsilon must lie in (0, 2 sqrt(mu))");
  Tuning t;
  const double w = 2.0 * sm - epsilon;
  t.beta_lo = w / (2.0 * mu);
  t.beta_hi = 2.0 / w;
  t.params.alpha = sm - 0.5 * epsilon;
  t.params.beta = 0.5 * (t.beta_lo + t.beta_hi);
  t.target_rate = w;
  const double r = rate_R(t.params, mu);
  if (std::abs(r - w) > 4.0 * std::numeric_limits<double>::epsilon() * w)
    throw RegionError("optimal_tuning: tuned parameters miss the target rate");
  return t;
}

/// Decay exponent of the 1-D quadratic with curvature mu:
/// alpha + mu beta - sqrt(max(0, (alpha + mu beta)^2 - 4 mu)).
inline double quadratic_rate(const FrictionParams& p, double mu) {
  require(p.alpha >= 0.0 && p.beta >= 0.0, "quadratic_rate: alpha, beta must be >= 0");
  require(mu > 0.0, "quadratic_rate: mu must be positive");
  const double s = p.alpha + mu * p.beta;
  return s - std::sqrt(std::max(0.0, s * s - 4.0 * mu));
}

/// Roots of s^2 + (alpha + mu beta) s + mu.
inline std::pair<std::complex<double>, std::complex<double>> linear_ode_roots(
    const FrictionParams& p, double mu) {
  const double s = p.alpha + mu * p.beta;
  const std::complex<double> r = std::sqrt(std::complex<double>(s * s - 4.0 * mu, 0.0));
  return {0.5 * (-s + r), 0.5 * (-s - r)};
}

/// Exact f-gap decay exponent of the 1-D quadratic: 2 min |Re root|.
inline double linear_ode_gap_rate(const FrictionParams& p, double mu) {
  const auto [r1, r2] = linear_ode_roots(p, mu);
  return 2.0 * std::min(std::abs(r1.real()), std::abs(r2.real()));
}

/// R on the product grid; rows follow alpha_grid, columns beta_grid.
inline Matrix rate_map(double mu, const std::vector<double>& alpha_grid,
                       const std::vector<double>& beta_grid) {
  require(!alpha_grid.empty() && !beta_grid.empty(), "rate_map: grids must be nonempty");
  for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
    require(alpha_grid[i] > 0.0, "rate_map: alpha grid must be positive");
    if (i) require(alpha_grid[i] > alpha_grid[i - 1], "rate_map: alpha grid must ascend");
  }
  for (std::size_t j = 0; j < beta_grid.size(); ++j) {
    require(beta_grid[j] > 0.0, "rate_map: beta grid must be positive");
    if (j) require(beta_grid[j] > beta_grid[j - 1], "rate_map: beta grid must ascend");
  }
  Matrix out(alpha_grid.size(), beta_grid.size());
  for (std::size_t i = 0; i < alpha_grid.size(); ++i)
    for (std::size_t j = 0; j < beta_grid.size(); ++j)
      out(i, j) = rate_R({alpha_grid[i], beta_grid[j]}, mu);
  return out;
}

/// n points i * hi / n, i = 1..n.
inline std::vector<double> uniform_grid(double hi, int n) {
  require(hi > 0.0 && n > 0, "uniform_grid: need hi > 0 and n > 0");
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = hi * (i + 1) / n;
  return g;
}

}  // namespace dinlab

#endif  // DINLAB_RATES_HPP
