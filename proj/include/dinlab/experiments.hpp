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

// Canned experiment drivers: single simulations, the quadratic tuning
// comparison and the Rosenbrock comparison.

#ifndef DINLAB_EXPERIMENTS_HPP
#define DINLAB_EXPERIMENTS_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dinlab/analysis.hpp"
#include "dinlab/common.hpp"
#include "dinlab/dynamics.hpp"
#include "dinlab/integrator.hpp"
#include "dinlab/problems.hpp"
#include "dinlab/rates.hpp"

namespace dinlab {

enum class SystemKind { din, gdin, hbf, gf };

inline const char* to_string(SystemKind s) {
  switch (s) {
    case SystemKind::din: return "din";
    case SystemKind::gdin: return "gdin";
    case SystemKind::hbf: return "hbf";
    case SystemKind::gf: return "gf";
  }
  return "?";
}

inline SystemKind parse_system(const std::string& s) {
  if (s == "din") return SystemKind::din;
  if (s == "gdin") return SystemKind::gdin;
  if (s == "hbf") return SystemKind::hbf;
  if (s == "gf") return SystemKind::gf;
  throw ValidationError("system: unknown value '" + s + "' (expected din, gdin, hbf or gf)");
}

/// Integrates the chosen system from position x0 and velocity v0. g-DIN
/// starts from the transformed state; HBF ignores beta; GF ignores v0.
inline Trajectory simulate(const Objective& obj, SystemKind system, const FrictionParams& params,
                           const Vector& x0, const Vector& v0, const PerturbationSpec& pert,
                           const SolverConfig& cfg) {
  require(x0.size() == obj.dim, "simulate: initial position has wrong dimension");
  require(system == SystemKind::gf || v0.size() == obj.dim,
          "simulate: initial velocity has wrong dimension");
  switch (system) {
    case SystemKind::din:
      return integrate(din_system(obj, params, pert), velocity_state(x0, v0), obj, cfg);
    case SystemKind::gdin:
      return integrate(gdin_system(obj, params, pert), initial_gdin_state(obj, params, x0, v0),
                       obj, cfg);
    case SystemKind::hbf:
      return integrate(hbf_system(obj, params.alpha, pert), velocity_state(x0, v0), obj, cfg);
    case SystemKind::gf:
      require(!pert.active(), "simulate: gradient flow takes no perturbation");
      return integrate(gf_system(obj), PhasePoint{x0, {}, PhaseKind::position_only}, obj, cfg);
  }
  throw ValidationError("simulate: unknown system");
}

/// Seeded standard-normal vector projected onto range(A). Starting in the
/// range keeps the kernel component exactly zero, so the gap decays without
/// a rounding floor.
inline Vector quadratic_start(const Quadratic& q, std::uint64_t seed) {
  std::mt19937_64 rng(derive_seed(seed, 0x5eed));
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector x(q.spec().dim);
  for (int i = 0; i < x.size(); ++i) x(i) = normal(rng);
  return q.project_range(x);
}

struct NamedTuning {
  std::string label;
  SystemKind system = SystemKind::din;
  FrictionParams params;
};

/// The four tunings compared on the quadratic benchmark. The last one is
/// the near-optimal (sqrt(mu) - eps, 1/sqrt(mu)).
inline std::vector<NamedTuning> fig2_tunings(double mu, double eps) {
  const double s = std::sqrt(mu);
  return {
      {"din(2sqrt(mu),1/(2sqrt(mu)))", SystemKind::din, {2.0 * s, 0.5 / s}},
      {"din(sqrt(mu/2),sqrt(2/mu))", SystemKind::din, {std::sqrt(mu / 2.0), std::sqrt(2.0 / mu)}},
      {"din(1,1)", SystemKind::din, {1.0, 1.0}},
      {"din(sqrt(mu)-eps,1/sqrt(mu))", SystemKind::din, {s - eps, 1.0 / s}},
  };
}

struct TuningRun {
  NamedTuning tuning;
  Trajectory traj;
  RateEnvelope envelope;
  EnvelopeReport envelope_report;
  std::optional<DecayFit> fit;
};

struct Fig2Options {
  double mu = 0.2;
  double eps = 1e-4;
  int dim = 400;
  double L = 20.0;
  int kernel_dim = 40;
  std::uint64_t seed = 42;
  double horizon = 60.0;  // T = horizon / sqrt(mu)
  int n_out = 1000;
  double rel_tol = 1e-10;
  // The gap falls far below 1e-12: absolute control follows the state norm.
  double abs_tol = 1e-300;
  double state_abs_tol = 1e-12;
  double envelope_tol = 0.05;
};

struct Fig2Result {
  double mu = 0.0;
  double T = 0.0;
  std::vector<TuningRun> runs;

  const TuningRun& optimal() const { return runs.back(); }
  /// Index of the run with the smallest final gap.
  std::size_t best_final() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < runs.size(); ++i)
      if (runs[i].traj.f_gap.back() < runs[best].traj.f_gap.back()) best = i;
    return best;
  }
};

inline Fig2Result run_fig2(const Fig2Options& o) {
  QuadraticSpec spec{o.dim, o.mu, o.L, o.kernel_dim, o.seed};
  const Quadratic q(spec);
  const Objective obj = q.objective();
  const Vector x0 = quadratic_start(q, o.seed);
  const Vector v0 = Vector::Zero(o.dim);

  Fig2Result res;
  res.mu = o.mu;
  res.T = o.horizon / std::sqrt(o.mu);
  SolverConfig cfg;
  cfg.t_end = res.T;
  cfg.output_dt = res.T / o.n_out;
  cfg.rel_tol = o.rel_tol;
  cfg.abs_tol = o.abs_tol;
  cfg.state_abs_tol = o.state_abs_tol;

  for (const auto& t : fig2_tunings(o.mu, o.eps)) {
    TuningRun run;
    run.tuning = t;
    run.traj = simulate(obj, t.system, t.params, x0, v0, {}, cfg);
    run.envelope = make_envelope(obj, t.params, o.mu, run.traj, 0);
    run.envelope_report = check_exponential_envelope(run.traj, run.envelope, o.envelope_tol);
    try {
      run.fit = fit_decay(run.traj, {0.5, 1.0}, FitMode::exponential, 1e-300);
    } catch (const ValidationError&) {
    }
    res.runs.push_back(std::move(run));
  }
  return res;
}

struct PathRun {
  NamedTuning tuning;
  Trajectory traj;
  std::optional<double> t_hit;  // first sample with f_gap below the threshold
  double final_distance = 0.0;
  double overshoot = 0.0;       // max (x - 1)^+ along the path
};

struct Fig3Options {
  double mu = 0.4;
  double L = 501.0;
  double eps = 1e-4;
  double x0 = -1.0;
  double y0 = 1.0;
  double t_end = 1500.0;
  double output_dt = 0.05;
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  double hit_threshold = 1e-8;
};

inline std::vector<NamedTuning> fig3_tunings(double mu, double L, double eps) {
  const double s = std::sqrt(mu), kappa = L / mu;
  return {
      {"din(2sqrt(mu),1/(2sqrt(mu)))", SystemKind::din, {2.0 * s, 0.5 / s}},
      {"din(sqrt(mu)-eps,1/sqrt(mu))", SystemKind::din, {s - eps, 1.0 / s}},
      {"hbf(2(sqrt(k)-sqrt(k-1))sqrt(mu))", SystemKind::hbf,
       {2.0 * (std::sqrt(kappa) - std::sqrt(kappa - 1.0)) * s, 0.0}},
      {"hbf(2sqrt(mu)-eps)", SystemKind::hbf, {2.0 * s - eps, 0.0}},
  };
}

inline std::vector<PathRun> run_fig3(const Fig3Options& o) {
  const Objective obj = make_rosenbrock();
  Vector x0(2);
  x0 << o.x0, o.y0;
  const Vector v0 = Vector::Zero(2);
  SolverConfig cfg;
  cfg.t_end = o.t_end;
  cfg.output_dt = o.output_dt;
  cfg.rel_tol = o.rel_tol;
  cfg.abs_tol = o.abs_tol;

  std::vector<PathRun> out;
  for (const auto& t : fig3_tunings(o.mu, o.L, o.eps)) {
    PathRun run;
    run.tuning = t;
    run.traj = simulate(obj, t.system, t.params, x0, v0, {}, cfg);
    for (std::size_t i = 0; i < run.traj.size(); ++i) {
      if (!run.t_hit && run.traj.f_gap[i] < o.hit_threshold) run.t_hit = run.traj.times[i];
      run.overshoot = std::max(run.overshoot, run.traj.states[i](0) - 1.0);
    }
    run.final_distance = (run.traj.position(run.traj.size() - 1) - Vector::Ones(2)).norm();
    out.push_back(std::move(run));
  }
  return out;
}

}  // namespace dinlab

#endif  // DINLAB_EXPERIMENTS_HPP
