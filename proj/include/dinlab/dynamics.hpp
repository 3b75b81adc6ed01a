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

// Phase-space vector fields for the inertial systems with Hessian-driven
// damping (DIN), its first-order form (g-DIN), heavy ball with friction and
// gradient flow, plus the change of variables linking DIN and g-DIN.
//
// Packed state layout used by the integrator:
//   position_velocity   u = [x; v]
//   position_auxiliary  u = [x; y]
//   position_only       u = [x]

#ifndef DINLAB_DYNAMICS_HPP
#define DINLAB_DYNAMICS_HPP

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "dinlab/common.hpp"
#include "dinlab/problems.hpp"

namespace dinlab {

/// Viscous friction alpha and Hessian friction beta. Both strictly positive;
/// beta = 0 is the heavy ball system and is served by hbf_rhs.
struct FrictionParams {
  double alpha = 1.0;
  double beta = 1.0;

  void validate() const {
    require(std::isfinite(alpha) && alpha > 0.0, "params.alpha must be positive");
    require(std::isfinite(beta) && beta > 0.0,
            "params.beta must be positive (use the hbf system for beta = 0)");
  }
};

enum class PhaseKind { position_velocity, position_auxiliary, position_only };

inline const char* to_string(PhaseKind k) {
  switch (k) {
    case PhaseKind::position_velocity: return "position_velocity";
    case PhaseKind::position_auxiliary: return "position_auxiliary";
    case PhaseKind::position_only: return "position_only";
  }
  return "?";
}

struct PhasePoint {
  Vector primary;
  Vector companion;  // empty for position_only
  PhaseKind kind = PhaseKind::position_velocity;

  int dim() const { return static_cast<int>(primary.size()); }

  Vector packed() const {
    if (kind == PhaseKind::position_only) return primary;
    Vector u(2 * primary.size());
    u << primary, companion;
    return u;
  }

  static PhasePoint unpack(const Vector& u, PhaseKind kind) {
    PhasePoint p;
    p.kind = kind;
    if (kind == PhaseKind::position_only) {
      p.primary = u;
    } else {
      const auto d = u.size() / 2;
      p.primary = u.head(d);
      p.companion = u.tail(d);
    }
    return p;
  }
};

/// Additive gradient error g(t) = c e^{-gamma t} d  or  c (1+t)^{-p} d.
struct PerturbationSpec {
  enum class Kind { none, exp_decay, power_decay };

  Kind kind = Kind::none;
  double c = 0.0;
  double gamma_or_p = 1.0;
  Vector direction;

  static PerturbationSpec exponential(double c, double gamma, Vector dir) {
    return {Kind::exp_decay, c, gamma, std::move(dir)};
  }
  static PerturbationSpec power(double c, double p, Vector dir) {
    return {Kind::power_decay, c, p, std::move(dir)};
  }

  void validate(int dim) const {
    if (kind == Kind::none) return;
    require(c >= 0.0, "perturbation.c must be nonnegative");
    require(gamma_or_p > 0.0, "perturbation decay exponent must be positive");
    require(direction.size() == dim, "perturbation.direction has wrong dimension");
    require(std::abs(direction.norm() - 1.0) <= 1e-12,
            "perturbation.direction must be a unit vector");
  }

  double magnitude(double t) const {
    switch (kind) {
      case Kind::none: return 0.0;
      case Kind::exp_decay: return c * std::exp(-gamma_or_p * t);
      case Kind::power_decay: return c * std::pow(1.0 + t, -gamma_or_p);
    }
    return 0.0;
  }

  bool active() const { return kind != Kind::none && c != 0.0; }
};

namespace detail {

inline void check_state(const Objective& obj, const PhasePoint& s, PhaseKind want,
                        const char* who) {
  if (s.kind != want)
    throw ValidationError(std::string(who) + ": expected a " + to_string(want) +
                          " state");
  if (s.primary.size() != obj.dim ||
      (want != PhaseKind::position_only && s.companion.size() != obj.dim))
    throw ValidationError(std::string(who) + ": state dimension does not match objective");
}

}  // namespace detail

/// (x', v') = (v, -alpha v - beta H(x) v - grad(x) - g(t)).
inline PhasePoint din_rhs(const Objective& obj, const FrictionParams& params,
                          const PhasePoint& state, double t,
                          const PerturbationSpec& pert = {}) {
  detail::check_state(obj, state, PhaseKind::position_velocity, "din_rhs");
  const Vector& x = state.primary;
  const Vector& v = state.companion;
  PhasePoint out;
  out.kind = PhaseKind::position_velocity;
  out.primary = v;
  out.companion = -params.alpha * v - obj.damped_drive(x, v, params.beta);
  if (pert.active()) out.companion -= pert.magnitude(t) * pert.direction;
  return out;
}

/// x' = -beta grad(x) - (alpha - 1/beta) x - y/beta
/// y' = -(alpha - 1/beta) x - y/beta + beta g(t)
inline PhasePoint gdin_rhs(const Objective& obj, const FrictionParams& params,
                           const PhasePoint& state, double t,
                           const PerturbationSpec& pert = {}) {
  detail::check_state(obj, state, PhaseKind::position_auxiliary, "gdin_rhs");
  require(params.beta > 0.0, "gdin_rhs: beta must be positive");
  const Vector& x = state.primary;
  const Vector& y = state.companion;
  const double k = params.alpha - 1.0 / params.beta;
  Vector coupling = -k * x - y / params.beta;
  PhasePoint out;
  out.kind = PhaseKind::position_auxiliary;
  out.primary = coupling - params.beta * obj.grad(x);
  out.companion = std::move(coupling);
  if (pert.active()) out.companion += params.beta * pert.magnitude(t) * pert.direction;
  return out;
}

inline PhasePoint hbf_rhs(const Objective& obj, double alpha, const PhasePoint& state,
                          double t = 0.0, const PerturbationSpec& pert = {}) {
  detail::check_state(obj, state, PhaseKind::position_velocity, "hbf_rhs");
  PhasePoint out;
  out.kind = PhaseKind::position_velocity;
  out.primary = state.companion;
  out.companion = -alpha * state.companion - obj.grad(state.primary);
  if (pert.active()) out.companion -= pert.magnitude(t) * pert.direction;
  return out;
}

inline PhasePoint gf_rhs(const Objective& obj, const PhasePoint& state) {
  detail::check_state(obj, state, PhaseKind::position_only, "gf_rhs");
  PhasePoint out;
  out.kind = PhaseKind::position_only;
  out.primary = -obj.grad(state.primary);
  return out;
}

/// h(x, v) = (x, (1 - alpha beta) x - beta^2 grad(x) - beta v).
inline std::pair<Vector, Vector> h_transform(const Objective& obj,
                                             const FrictionParams& params,
                                             const Vector& x, const Vector& v) {
  const double a = params.alpha, b = params.beta;
  Vector y = (1.0 - a * b) * x - b * b * obj.grad(x) - b * v;
  return {x, std::move(y)};
}

inline std::pair<Vector, Vector> h_inverse(const Objective& obj,
                                           const FrictionParams& params,
                                           const Vector& x, const Vector& y) {
  require(params.beta > 0.0, "h_inverse: beta must be positive");
  const double a = params.alpha, b = params.beta;
  Vector v = ((1.0 - a * b) * x - b * b * obj.grad(x) - y) / b;
  return {x, std::move(v)};
}

inline PhasePoint initial_gdin_state(const Objective& obj, const FrictionParams& params,
                                     const Vector& x0, const Vector& v0) {
  auto [x, y] = h_transform(obj, params, x0, v0);
  return {std::move(x), std::move(y), PhaseKind::position_auxiliary};
}

inline PhasePoint velocity_state(Vector x, Vector v) {
  return {std::move(x), std::move(v), PhaseKind::position_velocity};
}

/// A packed first-order vector field u' = field(t, u) together with the
/// layout it expects.
struct PhaseSystem {
  std::string label;
  PhaseKind kind = PhaseKind::position_velocity;
  std::function<Vector(double, const Vector&)> field;

  Vector operator()(double t, const Vector& u) const { return field(t, u); }
};

inline PhaseSystem din_system(const Objective& obj, const FrictionParams& params,
                              const PerturbationSpec& pert = {}) {
  params.validate();
  pert.validate(obj.dim);
  return {"din", PhaseKind::position_velocity, [&obj, params, pert](double t, const Vector& u) {
            const auto d = u.size() / 2;
            Vector du(u.size());
            const auto x = u.head(d);
            const auto v = u.tail(d);
            du.head(d) = v;
            du.tail(d) = -params.alpha * v - obj.damped_drive(x, v, params.beta);
            if (pert.active()) du.tail(d) -= pert.magnitude(t) * pert.direction;
            return du;
          }};
}

inline PhaseSystem gdin_system(const Objective& obj, const FrictionParams& params,
                               const PerturbationSpec& pert = {}) {
  params.validate();
  pert.validate(obj.dim);
  return {"gdin", PhaseKind::position_auxiliary,
          [&obj, params, pert](double t, const Vector& u) {
            const auto d = u.size() / 2;
            const double k = params.alpha - 1.0 / params.beta;
            Vector du(u.size());
            du.tail(d) = -k * u.head(d) - u.tail(d) / params.beta;
            du.head(d) = du.tail(d) - params.beta * obj.grad(u.head(d));
            if (pert.active())
              du.tail(d) += params.beta * pert.magnitude(t) * pert.direction;
            return du;
          }};
}

inline PhaseSystem hbf_system(const Objective& obj, double alpha,
                              const PerturbationSpec& pert = {}) {
  require(std::isfinite(alpha) && alpha > 0.0, "hbf: alpha must be positive");
  pert.validate(obj.dim);
  return {"hbf", PhaseKind::position_velocity, [&obj, alpha, pert](double t, const Vector& u) {
            const auto d = u.size() / 2;
            Vector du(u.size());
            du.head(d) = u.tail(d);
            du.tail(d) = -alpha * u.tail(d) - obj.grad(u.head(d));
            if (pert.active()) du.tail(d) -= pert.magnitude(t) * pert.direction;
            return du;
          }};
}

inline PhaseSystem gf_system(const Objective& obj) {
  return {"gf", PhaseKind::position_only,
          [&obj](double, const Vector& u) -> Vector { return -obj.grad(u); }};
}

}  // namespace dinlab

#endif  // DINLAB_DYNAMICS_HPP
