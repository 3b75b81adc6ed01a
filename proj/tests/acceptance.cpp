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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dinlab/analysis.hpp"
#include "dinlab/experiments.hpp"
#include "dinlab/rates.hpp"

namespace {

using namespace dinlab;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

SolverConfig decaying_cfg(double t_end, double dt) {
  SolverConfig cfg;
  cfg.t_end = t_end;
  cfg.output_dt = dt;
  cfg.rel_tol = 1e-10;
  cfg.abs_tol = 1e-300;
  cfg.state_abs_tol = 1e-12;
  return cfg;
}

// 1. Fitted gap rate of the scalar quadratic vs. the characteristic roots.
Outcome criterion1() {
  const double mu = 1.0;
  const Quadratic q({1, mu, mu, 0, 7});
  const Objective obj = q.objective();
  const std::vector<std::pair<double, double>> cases = {{0.5, 1}, {2, 1}, {1, 1}, {3, 0}};
  Outcome out{true, ""};
  for (auto [a, b] : cases) {
    const FrictionParams p{a, b};
    // Oracle: roots of s^2 + (a + mu b) s + mu, computed here directly.
    const double s = a + mu * b, disc = s * s - 4.0 * mu;
    const double slow = disc >= 0.0 ? 0.5 * (s - std::sqrt(disc)) : 0.5 * s;
    const double expected = 2.0 * slow;
    // Start on the slow eigendirection to avoid a polynomial prefactor.
    Vector x0(1), v0(1);
    x0 << 1.0;
    v0 << -slow;
    const auto sys = b == 0.0 ? SystemKind::hbf : SystemKind::din;
    const auto traj = simulate(obj, sys, p, x0, v0, {}, decaying_cfg(40.0, 0.01));
    const auto fit = fit_decay(traj, {5.0 / 40.0, 1.0}, FitMode::exponential, 1e-300);
    const double rel = std::abs(fit.rate - expected) / expected;
    if (rel > 0.05) out.pass = false;
    std::ostringstream os;
    os << "(" << a << "," << b << "): fit=" << fmt("%.6f", fit.rate)
       << " expected=" << fmt("%.6f", expected) << " rel=" << fmt("%.2e", rel) << "; ";
    out.detail += os.str();
  }
  return out;
}

std::vector<Fig2Result> g_fig2;

void ensure_fig2() {
  if (!g_fig2.empty()) return;
  for (double mu : {0.2, 0.04, 0.02}) {
    Fig2Options o;
    o.mu = mu;
    g_fig2.push_back(run_fig2(o));
  }
}

// 2. Optimal tuning envelope and fitted rate on the d = 400 quadratic.
Outcome criterion2() {
  ensure_fig2();
  const double eps = 1e-4;
  Outcome out{true, ""};
  for (const auto& r : g_fig2) {
    const auto& run = r.optimal();
    RateEnvelope env = run.envelope;
    const double target = 2.0 * std::sqrt(r.mu) - eps;
    env.R = target;
    const auto rep = check_exponential_envelope(run.traj, env, 0.05);
    const bool fit_ok = run.fit && run.fit->rate >= 0.95 * target;
    if (!rep.holds || !fit_ok || run.traj.terminated_by != Termination::t_end) out.pass = false;
    std::ostringstream os;
    os << "mu=" << r.mu << ": envelope " << (rep.holds ? "ok" : "violated")
       << " max_viol=" << fmt("%.3e", rep.max_violation)
       << " fit=" << fmt("%.6f", run.fit ? run.fit->rate : NAN)
       << " >= " << fmt("%.6f", 0.95 * target) << "; ";
    out.detail += os.str();
  }
  return out;
}

// 3. Smallest final gap for the near-optimal tuning.
Outcome criterion3() {
  ensure_fig2();
  Outcome out{true, ""};
  for (const auto& r : g_fig2) {
    const std::size_t best = r.best_final();
    if (best != r.runs.size() - 1) out.pass = false;
    std::ostringstream os;
    os << "mu=" << r.mu << ": finals=[";
    for (std::size_t i = 0; i < r.runs.size(); ++i)
      os << (i ? "," : "") << fmt("%.2e", r.runs[i].traj.f_gap.back());
    os << "] best=" << r.runs[best].tuning.label << "; ";
    out.detail += os.str();
  }
  return out;
}

// 4. Rosenbrock comparison.
Outcome criterion4() {
  const auto runs = run_fig3({});
  Outcome out{true, ""};
  std::ostringstream os;
  for (const auto& r : runs) {
    if (!(r.final_distance < 1e-3)) out.pass = false;
    os << r.tuning.label << ": dist=" << fmt("%.2e", r.final_distance)
       << " t_hit=" << (r.t_hit ? fmt("%.2f", *r.t_hit) : std::string("none")) << "; ";
  }
  const auto& wide = runs[0];
  const auto& opt = runs[1];
  if (!opt.t_hit || !wide.t_hit || !(*opt.t_hit < *wide.t_hit)) out.pass = false;
  out.detail = os.str();
  return out;
}

// 5. Lyapunov decay along exact trajectories for random parameters.
Outcome criterion5() {
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int checked = 0, failed = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const double mu = 0.2 + 0.8 * U(rng);
    const double L = mu * (1.0 + 9.0 * U(rng));
    const double alpha = (0.05 + 2.95 * U(rng)) * std::sqrt(mu);
    const double beta = (0.05 + 2.95 * U(rng)) / std::sqrt(mu);
    const FrictionParams p{alpha, beta};
    const Quadratic q({6, mu, L, 1, derive_seed(77, trial)});
    const Objective obj = q.objective();
    const Vector x0 = quadratic_start(q, derive_seed(78, trial));
    const Vector v0 = quadratic_start(q, derive_seed(79, trial));
    const auto traj = simulate(obj, SystemKind::din, p, x0, v0, {}, decaying_cfg(20.0, 0.02));

    const auto set = admissible_a(p, mu);
    const auto& top = set.intervals.back();
    const std::vector<double> weights = {set.min(), set.max(), 0.5 * (top.lo + top.hi)};
    for (double a : weights) {
      const double R = (1.0 + alpha * beta - a) / beta;
      const auto V = lyapunov_V(obj, p, a, traj);
      ++checked;
      bool ok = true;
      for (std::size_t i = 0; i + 1 < V.size(); ++i) {
        const double w0 = V[i] * std::exp(R * traj.times[i]);
        const double w1 = V[i + 1] * std::exp(R * traj.times[i + 1]);
        const double excess = (w1 - w0) / w0;
        worst = std::max(worst, excess);
        if (excess > 1e-6) ok = false;
      }
      if (!ok) ++failed;
    }
  }
  return {failed == 0, std::to_string(checked) + " (trajectory, a) pairs, " +
                           std::to_string(failed) + " non-monotone; worst step increase " +
                           fmt("%.2e", worst)};
}

// Independent brute force: smallest a on a 1e-3 grid satisfying the direct
// inequalities, refined by bisection.
double brute_force_rate(const FrictionParams& p, double mu) {
  const double ab = p.alpha * p.beta, lo = std::max(0.0, 1.0 - ab), hi = 1.0 + ab;
  auto ok = [&](double a) {
    const double P = a * a - ((p.alpha - mu * p.beta) * p.beta + 1.0) * a +
                     (1.0 - ab) * mu * p.beta * p.beta;
    return a >= 1.0 - ab - 1e-12 && a <= hi + 1e-12 && P >= -1e-12;
  };
  double prev = lo, a_star = NAN;
  for (long k = 0;; ++k) {
    const double a = std::min(lo + 1e-3 * k, hi);
    if (ok(a)) {
      if (k == 0) {
        a_star = a;
      } else {
        double l = prev, r = a;
        for (int it = 0; it < 200 && r - l > 1e-15; ++it) {
          const double m = 0.5 * (l + r);
          (ok(m) ? r : l) = m;
        }
        a_star = r;
      }
      break;
    }
    prev = a;
    if (a >= hi) break;
  }
  return (1.0 + ab - a_star) / p.beta;
}

// 6. Rate calculus vs. brute force.
Outcome criterion6() {
  double worst_rate = 0.0, worst_excess = -1.0;
  long disagreements = 0, members = 0;
  for (double mu : {0.04, 0.2, 1.0}) {
    const double sm = std::sqrt(mu);
    for (int i = 1; i <= 50; ++i)
      for (int j = 1; j <= 50; ++j) {
        const FrictionParams p{3.0 * sm * i / 50.0, 3.0 / sm * j / 50.0};
        const double R = rate_R(p, mu);
        worst_rate = std::max(worst_rate, std::abs(R - brute_force_rate(p, mu)));
        worst_excess = std::max(worst_excess, R - quadratic_rate(p, mu));
      }
  }
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const double mu = 0.01 + 2.0 * U(rng);
    const FrictionParams p{(0.02 + 3.0 * U(rng)) * std::sqrt(mu),
                           (0.02 + 3.0 * U(rng)) / std::sqrt(mu)};
    const auto set = admissible_a(p, mu);
    const double ab = p.alpha * p.beta;
    for (double a = 0.0; a <= 1.0 + ab + 0.1; a += 1e-3) {
      const double P = a * a - ((p.alpha - mu * p.beta) * p.beta + 1.0) * a +
                       (1.0 - ab) * mu * p.beta * p.beta;
      const bool direct = a >= 1.0 - ab && a <= 1.0 + ab && P >= 0.0;
      ++members;
      if (direct != set.contains(a, 0.0)) ++disagreements;
    }
  }
  const bool pass = worst_rate <= 1e-6 && disagreements == 0 && worst_excess <= 1e-9;
  return {pass, "max |R - brute force| = " + fmt("%.2e", worst_rate) + "; membership " +
                    std::to_string(disagreements) + "/" + std::to_string(members) +
                    " disagreements; max(R - quadratic_rate) = " + fmt("%.2e", worst_excess)};
}

// 7. DIN and g-DIN produce the same positions.
Outcome criterion7() {
  SolverConfig cfg;
  cfg.t_end = 40.0;
  cfg.output_dt = 0.05;
  cfg.rel_tol = 1e-11;
  cfg.abs_tol = 1e-11;
  const double tol = 1e-11;

  Outcome out{true, ""};
  auto compare = [&](const std::string& name, const Objective& obj, const FrictionParams& p,
                     const Vector& x0, const Vector& v0) {
    const auto a = simulate(obj, SystemKind::din, p, x0, v0, {}, cfg);
    const auto b = simulate(obj, SystemKind::gdin, p, x0, v0, {}, cfg);
    double worst = 0.0;
    bool ok = a.size() == b.size();
    for (std::size_t i = 0; ok && i < a.size(); ++i) {
      const Vector xa = a.position(i), xb = b.position(i);
      for (int k = 0; k < xa.size(); ++k) {
        const double r = std::abs(xa(k) - xb(k)) / (tol * (1.0 + std::abs(xa(k))));
        worst = std::max(worst, r);
      }
    }
    if (!(ok && worst <= 10.0)) out.pass = false;
    out.detail += name + ": max |dx|/(tol (1+|x|)) = " + fmt("%.3f", worst) + " (limit 10); ";
  };

  const Quadratic q({50, 0.2, 20.0, 5, 42});
  const Vector x0 = quadratic_start(q, 42);
  compare("quadratic", q.objective(), optimal_tuning(0.2, 1e-4).params, x0,
          Vector::Zero(50));
  Vector r0(2);
  r0 << -1.0, 1.0;
  const double s = std::sqrt(0.4);
  compare("rosenbrock", make_rosenbrock(), {s - 1e-4, 1.0 / s}, r0, Vector::Zero(2));
  return out;
}

// 8. Exponentially decaying perturbations along the slow eigenvector.
Outcome criterion8() {
  const double mu = 0.2;
  const Quadratic q({400, mu, 20.0, 40, 42});
  const Objective obj = q.objective();
  const auto tune = optimal_tuning(mu, 1e-4);
  const double R = tune.target_rate;
  const Vector x0 = quadratic_start(q, 42), v0 = Vector::Zero(400);
  const double T = 60.0 / std::sqrt(mu);
  const auto cfg = decaying_cfg(T, T / 1000.0);

  Outcome out{true, ""};
  {
    const auto pert = PerturbationSpec::exponential(0.1, R, q.slow_direction());
    const auto traj = simulate(obj, SystemKind::din, tune.params, x0, v0, pert, cfg);
    const auto env = make_envelope(obj, tune.params, mu, traj, 0);
    const auto I = perturbation_integrals(pert, R, 2.0, 0.0, T);
    // Independent closed form of the limit for g = c e^{-R s}.
    const double j_inf = 0.1 / (R - 0.5 * R);
    PerturbationIntegrals lim;
    lim.J = j_inf;
    const auto rep = check_exponential_envelope(traj, env, lim, 0.05);
    const auto fit = fit_decay(traj, {0.5, 1.0}, FitMode::exponential, 1e-300);
    const bool ok = I.finite_J_inf && std::abs(*I.J_inf - j_inf) <= 1e-12 * j_inf &&
                    rep.holds && fit.rate >= 0.95 * R;
    if (!ok) out.pass = false;
    out.detail += "gamma=R: J_inf=" + fmt("%.6f", j_inf) + " envelope " +
                  (rep.holds ? "ok" : "violated") + " fit=" + fmt("%.5f", fit.rate) +
                  " >= " + fmt("%.5f", 0.95 * R) + "; ";
  }
  {
    const double gamma = 0.3 * R;
    const auto pert = PerturbationSpec::exponential(0.1, gamma, q.slow_direction());
    const auto traj = simulate(obj, SystemKind::din, tune.params, x0, v0, pert, cfg);
    const auto env = make_envelope(obj, tune.params, mu, traj, 0);
    const auto rep = check_exponential_envelope(traj, env, pert, 0.05);
    const auto fit = fit_decay(traj, {0.5, 1.0}, FitMode::exponential, 1e-300);
    if (!rep.holds) out.pass = false;
    out.detail += "gamma=0.3R: J(t) envelope " + std::string(rep.holds ? "ok" : "violated") +
                  " max_viol=" + fmt("%.3e", rep.max_violation) +
                  " (fit " + fmt("%.4f", fit.rate) + ")";
  }
  return out;
}

// 9. Sublinear decay on the quartic.
Outcome criterion9() {
  const Objective obj = make_quartic_1d();
  const FrictionParams p{1.0, 1.0};
  Vector x0(1), v0(1);
  x0 << 0.5;
  v0 << 0.0;
  const auto traj = simulate(obj, SystemKind::din, p, x0, v0, {}, decaying_cfg(1000.0, 0.5));
  const auto rep = check_sublinear_envelope(traj, obj, p, {}, 0.05);
  const auto fit = fit_decay(traj, {0.5, 1.0}, FitMode::power, 1e-300);
  const bool pass = rep.holds && std::abs(rep.exponent - 2.0) < 1e-12 && fit.exponent <= -1.8;
  return {pass, "t0=" + fmt("%.2f", rep.t0) + " C4=" + fmt("%.4f", rep.C4) +
                    " max_viol=" + fmt("%.3e", rep.max_violation) +
                    " tail slope=" + fmt("%.4f", fit.exponent)};
}

// 10. Saddle avoidance.
Outcome criterion10() {
  const Objective obj = make_double_well_saddle();
  const FrictionParams p{1.0, 1.0};
  SolverConfig cfg;
  cfg.t_end = 200.0;
  cfg.output_dt = 200.0;
  const auto rep = saddle_monte_carlo(obj, p, 1000, 2.0, 2026, cfg);
  const auto origin = din_endpoint(obj, p, Vector::Zero(2), Vector::Zero(2), cfg);
  const bool pass = rep.n_to_saddle == 0 && origin == Endpoint::saddle &&
                    rep.n_to_saddle + rep.n_to_min + rep.n_undecided == 1000;
  return {pass, "to_saddle=" + std::to_string(rep.n_to_saddle) +
                    " to_min=" + std::to_string(rep.n_to_min) +
                    " undecided=" + std::to_string(rep.n_undecided) + "; origin start -> " +
                    (origin == Endpoint::saddle ? "saddle" : "not saddle")};
}

// 11. Rate map bound and plateau.
Outcome criterion11() {
  Outcome out{true, ""};
  for (double mu : {0.04, 1.0}) {
    const double sm = std::sqrt(mu);
    const auto ag = uniform_grid(3.0 * sm, 200), bg = uniform_grid(3.0 / sm, 200);
    const Matrix M = rate_map(mu, ag, bg);
    long plateau = 0, plateau_bad = 0;
    for (int i = 0; i < 200; ++i)
      for (int j = 0; j < 200; ++j)
        if (ag[i] <= sm && bg[j] >= ag[i] / mu && bg[j] <= 1.0 / ag[i]) {
          ++plateau;
          if (M(i, j) != 2.0 * ag[i]) ++plateau_bad;
        }
    const double mx = M.maxCoeff();
    if (!(mx <= 2.0 * sm + 1e-9) || plateau_bad != 0 || plateau == 0) out.pass = false;
    out.detail += "mu=" + fmt("%g", mu) + ": max=" + fmt("%.12f", mx) + " <= " +
                  fmt("%.12f", 2.0 * sm) + ", plateau cells " + std::to_string(plateau) +
                  " mismatches " + std::to_string(plateau_bad) + "; ";
  }
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 linear-ODE oracle", criterion1},
      {"2 optimal rate on quadratics", criterion2},
      {"3 tuning ordering on quadratics", criterion3},
      {"4 rosenbrock comparison", criterion4},
      {"5 lyapunov decay suite", criterion5},
      {"6 rate calculus vs brute force", criterion6},
      {"7 din / g-din equivalence", criterion7},
      {"8 perturbation robustness", criterion8},
      {"9 sublinear regime", criterion9},
      {"10 saddle avoidance", criterion10},
      {"11 rate map", criterion11},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %s [%.1fs]: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), secs,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
