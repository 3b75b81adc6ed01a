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

// Adaptive Dormand-Prince 5(4) integration with dense output on a uniform
// output grid.

#ifndef DINLAB_INTEGRATOR_HPP
#define DINLAB_INTEGRATOR_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "dinlab/common.hpp"
#include "dinlab/dynamics.hpp"
#include "dinlab/problems.hpp"

namespace dinlab {

struct SolverConfig {
  double abs_tol = 1e-12;
  double rel_tol = 1e-9;
  double t_end = 10.0;
  double output_dt = 0.01;
  long max_steps = 50'000'000;
  double grad_stop = 0.0;  // 0 disables
  // Extra absolute tolerance proportional to max(|u|_inf, |u_new|_inf).
  // Off by default. Decaying runs that must resolve the gap far below
  // abs_tol set abs_tol tiny and this to ~1e-12 instead, which keeps the
  // roundoff floor of near-zero components from stalling the controller.
  double state_abs_tol = 0.0;

  void validate() const {
    require(abs_tol > 0.0, "solver.abs_tol must be positive");
    require(rel_tol > 0.0, "solver.rel_tol must be positive");
    require(t_end > 0.0, "solver.t_end must be positive");
    require(output_dt > 0.0 && output_dt <= t_end,
            "solver.output_dt must lie in (0, t_end]");
    require(max_steps > 0, "solver.max_steps must be positive");
    require(grad_stop >= 0.0, "solver.grad_stop must be nonnegative");
    require(state_abs_tol >= 0.0, "solver.state_abs_tol must be nonnegative");
  }
};

enum class Termination { t_end, grad_stop, step_limit, nonfinite };

inline const char* to_string(Termination t) {
  switch (t) {
    case Termination::t_end: return "t_end";
    case Termination::grad_stop: return "grad_stop";
    case Termination::step_limit: return "step_limit";
    case Termination::nonfinite: return "nonfinite";
  }
  return "?";
}

struct SolverStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evals = 0;
};

/// Time-sampled phase-space path. States are stored packed (see dynamics.hpp)
/// together with the vector field value at each sample.
struct Trajectory {
  static constexpr double kGapFloor = 1e-15;

  PhaseKind kind = PhaseKind::position_velocity;
  int dim = 0;
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<Vector> derivatives;
  std::vector<double> f_gap;
  std::vector<double> grad_norm;
  std::vector<double> speed_norm;
  Termination terminated_by = Termination::t_end;
  SolverStats stats;

  std::size_t size() const { return times.size(); }
  double t_last() const { return times.back(); }

  Vector position(std::size_t i) const { return states[i].head(dim); }
  Vector companion(std::size_t i) const {
    if (kind == PhaseKind::position_only) return {};
    return states[i].tail(dim);
  }
  Vector velocity(std::size_t i) const { return derivatives[i].head(dim); }
  PhasePoint point(std::size_t i) const { return PhasePoint::unpack(states[i], kind); }

  /// True when the recorded gap sits at the floating-point floor and must
  /// not enter log-fits.
  bool gap_flagged(std::size_t i) const { return f_gap[i] < kGapFloor; }

  /// Index of the first sample with time >= t (size() if none).
  std::size_t index_at(double t) const {
    return static_cast<std::size_t>(
        std::lower_bound(times.begin(), times.end(), t - 1e-12 * (1.0 + std::abs(t))) -
        times.begin());
  }
};

namespace detail {

// Dormand-Prince 5(4) tableau with Hairer's continuous extension.
struct DoPri5 {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                          a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  static constexpr double d1 = -12715105075.0 / 11282082432.0,
                          d3 = 87487479700.0 / 32700410799.0,
                          d4 = -10690763975.0 / 1880347072.0,
                          d5 = 701980252875.0 / 199316789632.0,
                          d6 = -1453857185.0 / 822651844.0,
                          d7 = 69997945.0 / 29380423.0;
};

struct DenseStep {
  Vector r1, r2, r3, r4, r5;

  Vector at(double theta) const {
    const double t1 = 1.0 - theta;
    return r1 + theta * (r2 + t1 * (r3 + theta * (r4 + t1 * r5)));
  }
};

inline bool all_finite(const Vector& u) { return u.allFinite(); }

}  // namespace detail

/// Integrates u' = sys(t, u) from t = 0 and records samples at k * output_dt.
///
/// The step is accepted when the RMS over components of
/// e_i / (abs_tol + rel_tol * max(|u_i|, |u_new_i|)) is at most one. Step
/// sizes follow a PI controller with safety 0.9 and per-step factor in
/// [0.2, 5]. Output points come from the fourth-order continuous extension.
/// The objective must outlive the call; it supplies the recorded gap,
/// gradient norm and (through the field) the speed |x'|.
inline Trajectory integrate(const PhaseSystem& sys, const Vector& state0,
                            const Objective& obj, const SolverConfig& cfg) {
  cfg.validate();
  require(state0.allFinite(), "integrate: initial state must be finite");
  const int d = obj.dim;
  const auto expected = sys.kind == PhaseKind::position_only ? d : 2 * d;
  require(state0.size() == expected, "integrate: state dimension does not match objective");

  using T = detail::DoPri5;
  constexpr double kSafety = 0.9, kMinFactor = 0.2, kMaxFactor = 5.0;
  constexpr double kBeta = 0.04, kExpo = 0.2 - 0.75 * kBeta;

  Trajectory traj;
  traj.kind = sys.kind;
  traj.dim = d;

  auto rhs = [&](double t, const Vector& u) {
    ++traj.stats.rhs_evals;
    return sys(t, u);
  };
  auto record = [&](double t, const Vector& u, const Vector& du) {
    const Vector x = u.head(d);
    traj.times.push_back(t);
    traj.states.push_back(u);
    traj.derivatives.push_back(du);
    traj.f_gap.push_back(obj.gap(x));
    traj.grad_norm.push_back(obj.grad(x).norm());
    traj.speed_norm.push_back(du.head(d).norm());
  };

  double t = 0.0;
  Vector u = state0;
  Vector k1 = rhs(t, u);
  record(t, u, k1);
  if (!detail::all_finite(k1)) {
    traj.terminated_by = Termination::nonfinite;
    return traj;
  }

  const double t_end = cfg.t_end;
  double h = 1e-4 * (1.0 + u.norm()) / (1.0 + k1.norm());
  h = std::min(h, t_end);
  const double h_min = 16.0 * std::numeric_limits<double>::epsilon();
  double err_old = 1e-4;
  bool last_rejected = false;
  long next_out = 1;
  auto grid_time = [&](long k) { return static_cast<double>(k) * cfg.output_dt; };

  Vector k2, k3, k4, k5, k6, k7, unew, tmp;
  traj.terminated_by = Termination::t_end;

  while (t < t_end) {
    if (traj.stats.accepted + traj.stats.rejected >= cfg.max_steps) {
      traj.terminated_by = Termination::step_limit;
      break;
    }
    bool final_step = false;
    if (t + h >= t_end || t + 1.01 * h >= t_end) {
      h = t_end - t;
      final_step = true;
    }

    tmp = u + h * T::a21 * k1;
    k2 = rhs(t + T::c2 * h, tmp);
    tmp = u + h * (T::a31 * k1 + T::a32 * k2);
    k3 = rhs(t + T::c3 * h, tmp);
    tmp = u + h * (T::a41 * k1 + T::a42 * k2 + T::a43 * k3);
    k4 = rhs(t + T::c4 * h, tmp);
    tmp = u + h * (T::a51 * k1 + T::a52 * k2 + T::a53 * k3 + T::a54 * k4);
    k5 = rhs(t + T::c5 * h, tmp);
    tmp = u + h * (T::a61 * k1 + T::a62 * k2 + T::a63 * k3 + T::a64 * k4 + T::a65 * k5);
    k6 = rhs(t + h, tmp);
    unew = u + h * (T::a71 * k1 + T::a73 * k3 + T::a74 * k4 + T::a75 * k5 + T::a76 * k6);
    k7 = rhs(t + h, unew);

    const Vector e =
        h * (T::e1 * k1 + T::e3 * k3 + T::e4 * k4 + T::e5 * k5 + T::e6 * k6 + T::e7 * k7);
    double atol = cfg.abs_tol;
    if (cfg.state_abs_tol > 0.0)
      atol += cfg.state_abs_tol * std::max(u.lpNorm<Eigen::Infinity>(),
                                           unew.lpNorm<Eigen::Infinity>());
    const Vector scale =
        (atol + cfg.rel_tol * u.cwiseAbs().cwiseMax(unew.cwiseAbs()).array()).matrix();
    const double err =
        std::sqrt((e.array() / scale.array()).square().mean());

    if (!std::isfinite(err) || !detail::all_finite(unew)) {
      ++traj.stats.rejected;
      h *= kMinFactor;
      last_rejected = true;
      if (h < h_min * std::max(1.0, std::abs(t))) {
        traj.terminated_by = Termination::nonfinite;
        break;
      }
      continue;
    }

    if (err > 1.0) {
      ++traj.stats.rejected;
      h *= std::max(kMinFactor, kSafety * std::pow(err, -0.2));
      last_rejected = true;
      if (h < h_min * std::max(1.0, std::abs(t))) {
        traj.terminated_by = Termination::step_limit;
        break;
      }
      continue;
    }

    ++traj.stats.accepted;
    const double t_new = final_step ? t_end : t + h;

    // Dense output for every grid point in (t, t_new].
    if (next_out >= 0 && grid_time(next_out) <= t_new * (1.0 + 1e-14)) {
      detail::DenseStep ds;
      ds.r1 = u;
      ds.r2 = unew - u;
      ds.r3 = h * k1 - ds.r2;
      ds.r4 = ds.r2 - h * k7 - ds.r3;
      ds.r5 = h * (T::d1 * k1 + T::d3 * k3 + T::d4 * k4 + T::d5 * k5 + T::d6 * k6 +
                   T::d7 * k7);
      while (grid_time(next_out) <= t_new * (1.0 + 1e-14) &&
             grid_time(next_out) <= t_end * (1.0 + 1e-14)) {
        const double tg = grid_time(next_out);
        if (std::abs(tg - t_new) <= 1e-12 * std::max(1.0, t_new)) {
          record(t_new, unew, k7);
        } else {
          const Vector ug = ds.at((tg - t) / h);
          record(tg, ug, rhs(tg, ug));
        }
        ++next_out;
      }
    }

    t = t_new;
    u = unew;
    k1 = k7;

    double factor = kSafety * std::pow(std::max(err, 1e-10), -kExpo) * std::pow(err_old, kBeta);
    factor = std::clamp(factor, kMinFactor, kMaxFactor);
    if (last_rejected) factor = std::min(factor, 1.0);
    err_old = std::max(err, 1e-4);
    last_rejected = false;
    h *= factor;

    if (cfg.grad_stop > 0.0 && obj.grad(u.head(d)).norm() < cfg.grad_stop) {
      traj.terminated_by = Termination::grad_stop;
      break;
    }
  }

  if (t > traj.times.back() * (1.0 + 1e-14) + 1e-300) record(t, u, k1);
  return traj;
}

inline Trajectory integrate(const PhaseSystem& sys, const PhasePoint& state0,
                            const Objective& obj, const SolverConfig& cfg) {
  require(state0.kind == sys.kind, "integrate: state kind does not match the system");
  return integrate(sys, state0.packed(), obj, cfg);
}

namespace detail {

// Cubic Hermite basis on [0, 1].
struct Hermite {
  double h00, h10, h01, h11;
  double d00, d10, d01, d11;  // derivatives w.r.t. theta

  explicit Hermite(double s) {
    const double s2 = s * s, s3 = s2 * s;
    h00 = 2 * s3 - 3 * s2 + 1;
    h10 = s3 - 2 * s2 + s;
    h01 = -2 * s3 + 3 * s2;
    h11 = s3 - s2;
    d00 = 6 * s2 - 6 * s;
    d10 = 3 * s2 - 4 * s + 1;
    d01 = -6 * s2 + 6 * s;
    d11 = 3 * s2 - 2 * s;
  }
};

inline double series_slope(const std::vector<double>& t, const std::vector<double>& y,
                           std::size_t i) {
  const std::size_t n = t.size();
  if (n < 2) return 0.0;
  if (i == 0) return (y[1] - y[0]) / (t[1] - t[0]);
  if (i + 1 == n) return (y[n - 1] - y[n - 2]) / (t[n - 1] - t[n - 2]);
  return (y[i + 1] - y[i - 1]) / (t[i + 1] - t[i - 1]);
}

}  // namespace detail

/// Piecewise-cubic resampling. States use Hermite interpolation with the
/// recorded vector-field values as slopes; scalar records use Hermite with
/// centred-difference slopes. Requested times must be ascending and inside
/// [0, last recorded time].
inline Trajectory resample(const Trajectory& traj, const std::vector<double>& times) {
  require(traj.size() >= 2, "resample: trajectory needs at least two samples");
  Trajectory out;
  out.kind = traj.kind;
  out.dim = traj.dim;
  out.terminated_by = traj.terminated_by;
  out.stats = traj.stats;
  const double lo = traj.times.front(), hi = traj.times.back();
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double tq = times[k];
    if (!(tq >= lo - 1e-12 && tq <= hi + 1e-12 * std::max(1.0, hi)))
      throw ValidationError("resample: time " + std::to_string(tq) + " is out of range");
    if (k > 0) require(tq > times[k - 1], "resample: times must be strictly increasing");

    auto it = std::upper_bound(traj.times.begin(), traj.times.end(), tq);
    std::size_t j = it == traj.times.begin() ? 0 : static_cast<std::size_t>(it - traj.times.begin()) - 1;
    if (j + 1 >= traj.size()) j = traj.size() - 2;
    const double t0 = traj.times[j], t1 = traj.times[j + 1], dt = t1 - t0;

    out.times.push_back(tq);
    if (tq == t0 || tq == t1) {
      const std::size_t n = tq == t0 ? j : j + 1;
      out.states.push_back(traj.states[n]);
      out.derivatives.push_back(traj.derivatives[n]);
      out.f_gap.push_back(traj.f_gap[n]);
      out.grad_norm.push_back(traj.grad_norm[n]);
      out.speed_norm.push_back(traj.speed_norm[n]);
      continue;
    }
    const detail::Hermite hb((tq - t0) / dt);
    const Vector& u0 = traj.states[j];
    const Vector& u1 = traj.states[j + 1];
    const Vector& m0 = traj.derivatives[j];
    const Vector& m1 = traj.derivatives[j + 1];
    out.states.push_back(hb.h00 * u0 + hb.h10 * dt * m0 + hb.h01 * u1 + hb.h11 * dt * m1);
    out.derivatives.push_back((hb.d00 * u0 + hb.d01 * u1) / dt + hb.d10 * m0 + hb.d11 * m1);

    auto scalar = [&](const std::vector<double>& y) {
      const double s0 = detail::series_slope(traj.times, y, j);
      const double s1 = detail::series_slope(traj.times, y, j + 1);
      return hb.h00 * y[j] + hb.h10 * dt * s0 + hb.h01 * y[j + 1] + hb.h11 * dt * s1;
    };
    out.f_gap.push_back(scalar(traj.f_gap));
    out.grad_norm.push_back(scalar(traj.grad_norm));
    out.speed_norm.push_back(scalar(traj.speed_norm));
  }
  return out;
}

/// As above, but the gap, gradient norm and speed are re-evaluated from the
/// interpolated states instead of interpolated themselves.
inline Trajectory resample(const Trajectory& traj, const std::vector<double>& times,
                           const Objective& obj) {
  require(traj.dim == obj.dim, "resample: dimension mismatch");
  Trajectory out = resample(traj, times);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Vector x = out.position(i);
    out.f_gap[i] = obj.gap(x);
    out.grad_norm[i] = obj.grad(x).norm();
    out.speed_norm[i] = out.velocity(i).norm();
  }
  return out;
}

}  // namespace dinlab

#endif  // DINLAB_INTEGRATOR_HPP
