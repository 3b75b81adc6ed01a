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

// Post-processing of trajectories: Lyapunov energies, decay envelopes,
// empirical rate fits, Lojasiewicz checks, perturbation integrals and the
// saddle-avoidance Monte Carlo.

#ifndef DINLAB_ANALYSIS_HPP
#define DINLAB_ANALYSIS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "dinlab/common.hpp"
#include "dinlab/dynamics.hpp"
#include "dinlab/integrator.hpp"
#include "dinlab/problems.hpp"
#include "dinlab/rates.hpp"

namespace dinlab {

// ---------------------------------------------------------------------------
// Lyapunov energies

enum class LyapunovKind { V_din, U_gdin };

struct LyapunovConfig {
  double a = 1.0;
  LyapunovKind kind = LyapunovKind::V_din;
};

/// V = a (f - f*) + 1/2 |beta grad(x) + v|^2 at every sample.
inline std::vector<double> lyapunov_V(const Objective& obj, const FrictionParams& params,
                                      double a, const Trajectory& traj) {
  require(traj.kind == PhaseKind::position_velocity,
          "lyapunov_V: trajectory must be in (x, v) coordinates");
  require(traj.dim == obj.dim, "lyapunov_V: dimension mismatch");
  std::vector<double> out(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const Vector x = traj.position(i);
    const Vector w = params.beta * obj.grad(x) + traj.companion(i);
    out[i] = a * traj.f_gap[i] + 0.5 * w.squaredNorm();
  }
  return out;
}

/// U = a (f - f*) + 1/2 |(alpha - 1/beta) x + y/beta|^2 at every sample.
inline std::vector<double> lyapunov_U(const Objective& obj, const FrictionParams& params,
                                      double a, const Trajectory& traj) {
  require(traj.kind == PhaseKind::position_auxiliary,
          "lyapunov_U: trajectory must be in (x, y) coordinates");
  require(traj.dim == obj.dim, "lyapunov_U: dimension mismatch");
  require(params.beta > 0.0, "lyapunov_U: beta must be positive");
  const double k = params.alpha - 1.0 / params.beta;
  std::vector<double> out(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const Vector w = k * traj.position(i) + traj.companion(i) / params.beta;
    out[i] = a * traj.f_gap[i] + 0.5 * w.squaredNorm();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Perturbation integrals

struct PerturbationIntegrals {
  double J = 0.0;
  double I = 0.0;
  bool finite_J_inf = true;
  std::optional<double> J_inf;
};

namespace detail {

inline double simpson_step(const std::function<double(double)>& f, double a, double fa,
                           double b, double fb, double m, double fm, double whole,
                           double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature with a mixed absolute/relative target.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-10) {
  if (b <= a) return 0.0;
  // Split into pieces so exponentially varying integrands stay resolved.
  const int pieces = std::clamp(static_cast<int>(std::ceil(b - a)), 1, 4096);
  const double w = (b - a) / pieces;
  double total = 0.0;
  for (int k = 0; k < pieces; ++k) {
    const double lo = a + k * w, hi = k + 1 == pieces ? b : lo + w;
    const double flo = f(lo), fhi = f(hi), m = 0.5 * (lo + hi), fm = f(m);
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
    const double piece_tol = std::max(tol / pieces, tol * std::abs(whole));
    total += detail::simpson_step(f, lo, flo, hi, fhi, m, fm, whole, piece_tol, 48);
  }
  return total;
}

/// J(t) = int_{t0}^t e^{R s/2} |g(s)| ds and
/// I(t) = int_{t0}^t s^{q/(2(2-q))} |g(s)| ds (I only for q in (1, 2)).
inline PerturbationIntegrals perturbation_integrals(const PerturbationSpec& pert, double R,
                                                    double q, double t0, double t) {
  require(R >= 0.0, "perturbation_integrals: R must be nonnegative");
  require(t >= t0 && t0 >= 0.0, "perturbation_integrals: need 0 <= t0 <= t");
  PerturbationIntegrals out;
  if (!pert.active()) {
    out.J_inf = 0.0;
    return out;
  }
  const double c = pert.c, g = pert.gamma_or_p;
  const bool sublinear = q > 1.0 && q < 2.0;
  const double e = sublinear ? q / (2.0 * (2.0 - q)) : 0.0;

  if (pert.kind == PerturbationSpec::Kind::exp_decay) {
    const double k = 0.5 * R - g;
    const double span = t - t0;
    if (std::abs(k) * std::max(span, 1.0) < 1e-14)
      out.J = c * std::exp(k * t0) * span;
    else
      out.J = c * std::exp(k * t0) * std::expm1(k * span) / k;
    out.finite_J_inf = g > 0.5 * R;
    if (out.finite_J_inf) out.J_inf = -c * std::exp(k * t0) / k;
    if (sublinear)
      out.I = adaptive_simpson(
          [&](double s) { return std::pow(s, e) * c * std::exp(-g * s); }, t0, t);
  } else {
    out.J = adaptive_simpson(
        [&](double s) { return std::exp(0.5 * R * s) * c * std::pow(1.0 + s, -g); }, t0, t);
    out.finite_J_inf = R == 0.0 ? g > 1.0 : false;
    if (sublinear)
      out.I = adaptive_simpson(
          [&](double s) { return std::pow(s, e) * c * std::pow(1.0 + s, -g); }, t0, t);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Envelope checks

struct EnvelopeReport {
  bool holds = true;
  double max_violation = -std::numeric_limits<double>::infinity();
  std::optional<double> first_violation_t;
  std::size_t n_checked = 0;
};

namespace detail {

inline void accumulate(EnvelopeReport& rep, double t, double observed, double bound,
                       double tol) {
  double v;
  if (bound > 0.0)
    v = (observed - bound) / bound;
  else
    v = observed > 0.0 ? std::numeric_limits<double>::infinity() : -1.0;
  ++rep.n_checked;
  rep.max_violation = std::max(rep.max_violation, v);
  if (v > tol) {
    rep.holds = false;
    if (!rep.first_violation_t) rep.first_violation_t = t;
  }
}

}  // namespace detail

/// First sample index inside the declared Lojasiewicz region: 0 for global
/// objectives, otherwise the first sample within `radius` of a listed
/// minimizer. Returns traj.size() when the trajectory never enters.
inline std::size_t entry_index(const Objective& obj, const Trajectory& traj,
                               double radius = 0.5) {
  if (obj.loj.global || obj.minimizers.empty()) return 0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const Vector x = traj.position(i);
    for (const auto& m : obj.minimizers)
      if ((x - m).norm() <= radius) return i;
  }
  return traj.size();
}

/// Envelope with R, C from the rate calculus and M0 from the state at t0:
/// M0 = (f_gap(t0) + |beta grad + x'|^2(t0) / (2C)) e^{R t0}.
/// M0 carries the e^{R t0} factor, so the bound reads M0 e^{-R t}.
inline RateEnvelope make_envelope(const Objective& obj, const FrictionParams& params,
                                  double mu, const Trajectory& traj, std::size_t i0) {
  require(i0 < traj.size(), "make_envelope: start index out of range");
  RateEnvelope env;
  env.R = rate_R(params, mu);
  env.C = prefactor_C(params, mu);
  env.t0 = traj.times[i0];
  const Vector x = traj.position(i0);
  const Vector w = params.beta * obj.grad(x) + traj.velocity(i0);
  // C = 0 happens on alpha beta = 1 with mu beta^2 >= 2: the bound is vacuous.
  env.M0 = env.C > 0.0
               ? (traj.f_gap[i0] + w.squaredNorm() / (2.0 * env.C)) * std::exp(env.R * env.t0)
               : std::numeric_limits<double>::infinity();
  return env;
}

/// Checks f_gap(t) <= (sqrt(M0) + J(t)/sqrt(2C))^2 e^{-R t} (1 + tol) for
/// t >= t0. `J` returns the perturbation integral at t (empty: J = 0).
inline EnvelopeReport check_exponential_envelope(const Trajectory& traj,
                                                 const RateEnvelope& env,
                                                 const std::function<double(double)>& J,
                                                 double tol) {
  require(env.M0 >= 0.0, "check_exponential_envelope: M0 must be nonnegative");
  EnvelopeReport rep;
  if (!(env.C > 0.0) || std::isinf(env.M0)) {
    rep.max_violation = -1.0;  // infinite bound
    return rep;
  }
  const double sm = std::sqrt(env.M0), s2c = std::sqrt(2.0 * env.C);
  for (std::size_t i = traj.index_at(env.t0); i < traj.size(); ++i) {
    const double t = traj.times[i];
    const double j = J ? J(t) : 0.0;
    const double amp = sm + j / s2c;
    detail::accumulate(rep, t, traj.f_gap[i], amp * amp * std::exp(-env.R * t), tol);
  }
  return rep;
}

inline EnvelopeReport check_exponential_envelope(const Trajectory& traj,
                                                 const RateEnvelope& env, double tol) {
  return check_exponential_envelope(traj, env, std::function<double(double)>{}, tol);
}

/// Perturbed form with J(t) evaluated from the parametric perturbation.
inline EnvelopeReport check_exponential_envelope(const Trajectory& traj,
                                                 const RateEnvelope& env,
                                                 const PerturbationSpec& pert, double tol) {
  return check_exponential_envelope(
      traj, env,
      [&](double t) { return perturbation_integrals(pert, env.R, 2.0, env.t0, t).J; }, tol);
}

/// Perturbed form with a fixed integral value (e.g. the limit J_inf).
inline EnvelopeReport check_exponential_envelope(const Trajectory& traj,
                                                 const RateEnvelope& env,
                                                 const PerturbationIntegrals& fixed,
                                                 double tol) {
  const double j = fixed.J;
  return check_exponential_envelope(traj, env, [j](double) { return j; }, tol);
}

struct SublinearReport : EnvelopeReport {
  double C4 = 0.0;
  double t0 = 0.0;
  double exponent = 0.0;  // q/(2-q)
};

/// First sample with t > 0 after which |x'| <= 1 and |grad| <= 1 hold for
/// the rest of the trajectory.
inline std::optional<std::size_t> bounded_tail_start(const Trajectory& traj) {
  std::optional<std::size_t> start;
  for (std::size_t i = traj.size(); i-- > 0;) {
    if (traj.times[i] <= 0.0) break;
    if (traj.speed_norm[i] <= 1.0 && traj.grad_norm[i] <= 1.0)
      start = i;
    else
      break;
  }
  return start;
}

/// Sublinear bound for q in (1, 2):
/// f_gap(t) <= (sqrt(C4) + I(t)/sqrt 2)^2 t^{-q/(2-q)} / (alpha beta + 1).
inline SublinearReport check_sublinear_envelope(const Trajectory& traj, const Objective& obj,
                                                const FrictionParams& params,
                                                const PerturbationSpec& pert, double tol) {
  const double q = obj.loj.q, mu = obj.loj.mu;
  if (!(q > 1.0 && q < 2.0))
    throw ValidationError("check_sublinear_envelope: Lojasiewicz order must lie in (1, 2)");
  const auto i0 = bounded_tail_start(traj);
  if (!i0)
    throw ValidationError(
        "check_sublinear_envelope: no sample satisfies |x'| <= 1 and |grad| <= 1");
  const double a = params.alpha, b = params.beta, ab1 = a * b + 1.0;
  const double ex = q / (2.0 - q);

  SublinearReport rep;
  rep.t0 = traj.times[*i0];
  rep.exponent = ex;
  const double inner = std::max(1.0, std::pow(ab1 / (2.0 * mu) + b * b, 2.0 / q));
  const double first = std::pow(q * inner / ((2.0 - q) * std::min(a, b)), ex);
  const Vector x0 = traj.position(*i0);
  const Vector w = b * obj.grad(x0) + traj.velocity(*i0);
  const double v0 = ab1 * traj.f_gap[*i0] + 0.5 * w.squaredNorm();
  rep.C4 = std::max(first, std::pow(rep.t0, ex) * v0);

  const double sc = std::sqrt(rep.C4);
  for (std::size_t i = *i0; i < traj.size(); ++i) {
    const double t = traj.times[i];
    const double I = perturbation_integrals(pert, 0.0, q, rep.t0, t).I;
    const double amp = sc + I / std::sqrt(2.0);
    detail::accumulate(rep, t, traj.f_gap[i], amp * amp * std::pow(t, -ex) / ab1, tol);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Decay fits

enum class FitMode { exponential, power };

struct DecayFit {
  double rate = 0.0;      // -slope of log f against t
  double exponent = 0.0;  // slope of log f against log t
  double r_squared = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::size_t n_used = 0;
  bool through_peaks = false;
};

namespace detail {

struct LineFit {
  double slope, intercept, r2;
};

inline LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  const double slope = sxy / sxx;
  double ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (my + slope * (x[i] - mx));
    ss_res += r * r;
  }
  const double r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return {slope, my - slope * mx, r2};
}

}  // namespace detail

/// Least-squares fit of log(values) on the window [lo, hi] * T of `times`
/// (T the last time), against t or log t. Samples at or below `floor` are
/// dropped. When the windowed series oscillates (three or more interior
/// local maxima) the fit runs through the local maxima only.
inline DecayFit fit_decay_series(const std::vector<double>& times,
                                 const std::vector<double>& values,
                                 std::pair<double, double> window_frac, FitMode mode,
                                 double floor = 1e-14) {
  require(times.size() == values.size(), "fit_decay: size mismatch");
  require(!times.empty(), "fit_decay: empty series");
  const auto [flo, fhi] = window_frac;
  require(flo >= 0.0 && fhi <= 1.0 && flo < fhi, "fit_decay: window must satisfy 0 <= lo < hi <= 1");
  const double T = times.back();
  const double t_lo = flo * T, t_hi = fhi * T;

  std::vector<double> ts, ls;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (t < t_lo - 1e-12 * T || t > t_hi + 1e-12 * T) continue;
    if (!(values[i] > floor) || !std::isfinite(values[i])) continue;
    if (mode == FitMode::power && t <= 0.0) continue;
    ts.push_back(t);
    ls.push_back(std::log(values[i]));
  }
  if (ts.size() < 10)
    throw ValidationError("fit_decay: fewer than 10 usable samples in the window");

  std::vector<double> pt, pl;
  for (std::size_t i = 1; i + 1 < ts.size(); ++i)
    if (ls[i] > ls[i - 1] && ls[i] >= ls[i + 1]) pt.push_back(ts[i]), pl.push_back(ls[i]);

  DecayFit fit;
  fit.t_lo = t_lo;
  fit.t_hi = t_hi;
  if (pt.size() >= 3) {
    fit.through_peaks = true;
    ts = std::move(pt);
    ls = std::move(pl);
  }
  std::vector<double> xs(ts);
  if (mode == FitMode::power)
    for (auto& x : xs) x = std::log(x);
  const auto lf = detail::least_squares(xs, ls);
  fit.n_used = xs.size();
  fit.r_squared = lf.r2;
  if (mode == FitMode::exponential)
    fit.rate = -lf.slope;
  else
    fit.exponent = lf.slope;
  return fit;
}

inline DecayFit fit_decay(const Trajectory& traj, std::pair<double, double> window_frac,
                          FitMode mode, double floor = 1e-14) {
  return fit_decay_series(traj.times, traj.f_gap, window_frac, mode, floor);
}

// ---------------------------------------------------------------------------
// Lojasiewicz check

struct LojReport {
  bool holds = true;
  double worst_ratio = 0.0;
  std::size_t n_checked = 0;
};

/// Worst |f_gap| 2 mu / |grad|^q over the samples; |grad| < 1e-12 is skipped.
inline LojReport loj_verify(const Objective& obj, const Trajectory& traj, double margin,
                            std::size_t first = 0) {
  LojReport rep;
  for (std::size_t i = first; i < traj.size(); ++i) {
    const double g = traj.grad_norm[i];
    if (g < 1e-12) continue;
    const double r = std::abs(traj.f_gap[i]) * 2.0 * obj.loj.mu / std::pow(g, obj.loj.q);
    rep.worst_ratio = std::max(rep.worst_ratio, r);
    ++rep.n_checked;
  }
  rep.holds = rep.worst_ratio <= 1.0 + margin;
  return rep;
}

// ---------------------------------------------------------------------------
// Gradient integrability

struct GradientDecayReport : EnvelopeReport {
  double integral = 0.0;
  double tail_fraction = 0.0;
  double K = 0.0;
  bool converged = true;
};

/// Trapezoid estimate of int e^{(R-eps) t} |grad|^2 dt over the recorded
/// window, with convergence judged by the last quarter contributing < 1%.
/// Pointwise: |grad(t)| <= K e^{-(R-eps) t/2} (1 + tol), K the largest
/// weighted gradient over the first tenth of the window.
inline GradientDecayReport gradient_decay_check(const Trajectory& traj, double R, double eps,
                                                double tol = 0.05, std::size_t first = 0) {
  require(first + 1 < traj.size(), "gradient_decay_check: need at least two samples");
  const double k = R - eps;
  GradientDecayReport rep;
  const double ta = traj.times[first], tb = traj.times.back();
  const double t_tail = ta + 0.75 * (tb - ta), t_head = ta + 0.1 * (tb - ta);

  // Weights are formed in log space: e^{k t} overflows long before the
  // product does.
  auto w = [&](std::size_t i) {
    const double g = traj.grad_norm[i];
    return g > 0.0 ? std::exp(k * traj.times[i] + 2.0 * std::log(g)) : 0.0;
  };
  double total = 0.0, tail = 0.0;
  for (std::size_t i = first; i + 1 < traj.size(); ++i) {
    const double piece = 0.5 * (w(i) + w(i + 1)) * (traj.times[i + 1] - traj.times[i]);
    total += piece;
    if (traj.times[i] >= t_tail) tail += piece;
  }
  rep.integral = total;
  rep.tail_fraction = total > 0.0 ? tail / total : 0.0;
  rep.converged = rep.tail_fraction < 0.01;

  auto weighted = [&](std::size_t i) {
    const double g = traj.grad_norm[i];
    return g > 0.0 ? std::exp(0.5 * k * traj.times[i] + std::log(g)) : 0.0;
  };
  std::size_t i = first;
  for (; i < traj.size() && traj.times[i] <= t_head; ++i) rep.K = std::max(rep.K, weighted(i));
  for (; i < traj.size(); ++i) detail::accumulate(rep, traj.times[i], weighted(i), rep.K, tol);
  rep.holds = rep.holds && rep.converged;
  return rep;
}

// ---------------------------------------------------------------------------
// Saddle avoidance

enum class Endpoint { minimizer, saddle, undecided };

inline Endpoint classify_endpoint(const Objective& obj, const Vector& x, double radius = 1e-3) {
  for (const auto& s : obj.strict_saddles)
    if ((x - s).norm() <= radius) return Endpoint::saddle;
  for (const auto& m : obj.minimizers)
    if ((x - m).norm() <= radius) return Endpoint::minimizer;
  return Endpoint::undecided;
}

/// Integrates unperturbed DIN from (x0, v0) and classifies
/// the final position.
inline Endpoint din_endpoint(const Objective& obj, const FrictionParams& params,
                             const Vector& x0, const Vector& v0, const SolverConfig& cfg,
                             double radius = 1e-3) {
  const auto sys = din_system(obj, params);
  const auto traj = integrate(sys, velocity_state(x0, v0), obj, cfg);
  if (traj.terminated_by == Termination::nonfinite) return Endpoint::undecided;
  return classify_endpoint(obj, traj.position(traj.size() - 1), radius);
}

struct SaddleMcReport {
  int n_to_saddle = 0;
  int n_to_min = 0;
  int n_undecided = 0;
  int n_trials = 0;
};

/// Uniform initial (x0, v0) in [-box, box]^{2d}; trial i draws from its own
/// generator seeded with derive_seed(seed, i).
inline SaddleMcReport saddle_monte_carlo(const Objective& obj, const FrictionParams& params,
                                         int n_trials, double init_box, std::uint64_t seed,
                                         const SolverConfig& cfg, double radius = 1e-3) {
  require(n_trials >= 0, "saddle_monte_carlo: n_trials must be nonnegative");
  require(init_box > 0.0, "saddle_monte_carlo: init_box must be positive");
  require(!obj.strict_saddles.empty(), "saddle_monte_carlo: objective lists no strict saddle");
  params.validate();
  SaddleMcReport rep;
  rep.n_trials = n_trials;
  const int d = obj.dim;
  for (int i = 0; i < n_trials; ++i) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    std::uniform_real_distribution<double> u(-init_box, init_box);
    Vector x0(d), v0(d);
    for (int j = 0; j < d; ++j) x0(j) = u(rng);
    for (int j = 0; j < d; ++j) v0(j) = u(rng);
    switch (din_endpoint(obj, params, x0, v0, cfg, radius)) {
      case Endpoint::saddle: ++rep.n_to_saddle; break;
      case Endpoint::minimizer: ++rep.n_to_min; break;
      case Endpoint::undecided: ++rep.n_undecided; break;
    }
  }
  return rep;
}

struct SaddleEigenReport {
  std::vector<std::pair<std::complex<double>, std::complex<double>>> roots;
  bool has_unstable = false;
};

/// Linearisation of DIN at a critical point: for each Hessian eigenvalue l,
/// lambda = 1/2 (-(alpha + beta l) +- sqrt((alpha + beta l)^2 - 4 l)).
inline SaddleEigenReport saddle_eigen_map(const std::vector<double>& hessian_eigs,
                                          const FrictionParams& params) {
  SaddleEigenReport rep;
  for (double l : hessian_eigs) {
    const double s = params.alpha + params.beta * l;
    const auto r = std::sqrt(std::complex<double>(s * s - 4.0 * l, 0.0));
    const std::complex<double> plus = 0.5 * (-s + r), minus = 0.5 * (-s - r);
    rep.roots.emplace_back(plus, minus);
    if (plus.real() > 0.0 || minus.real() > 0.0) rep.has_unstable = true;
  }
  return rep;
}

}  // namespace dinlab

#endif  // DINLAB_ANALYSIS_HPP
