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

// dinlab command-line front end.
//
//   dinlab_cli simulate  [--config FILE] [--out DIR] [--<key> VALUE ...]
//   dinlab_cli fig2 | fig3 | rate-map | saddle-mc | tune   (same options)
//
// Exit codes: 0 success, 1 invalid input, 2 runtime failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dinlab/analysis.hpp"
#include "dinlab/config.hpp"
#include "dinlab/experiments.hpp"
#include "dinlab/io.hpp"
#include "dinlab/rates.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace dinlab;

namespace {

struct Command {
  CLI::App* app = nullptr;
  std::string config_path;
  std::string out_dir = ".";
  std::map<std::string, std::string> overrides;
};

void add_key_flags(Command& cmd, const std::vector<std::string>& prefixes) {
  for (const auto& k : kKeys) {
    const std::string name = k.name;
    bool match = false;
    for (const auto& p : prefixes) match = match || name.rfind(p, 0) == 0;
    if (!match) continue;
    cmd.app->add_option_function<std::string>(
        "--" + name, [&cmd, name](const std::string& v) { cmd.overrides[name] = v; },
        std::string(k.help) + " (default " + k.fallback + ")");
  }
}

Config resolve(const Command& cmd) {
  Config c = cmd.config_path.empty() ? Config{} : Config::load(cmd.config_path);
  for (const auto& [k, v] : cmd.overrides) c.set(k, v);
  return c;
}

fs::path prepare_out(const Command& cmd) {
  fs::path p(cmd.out_dir);
  fs::create_directories(p);
  return p;
}

std::string tag(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

json num_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json envelope_json(const EnvelopeReport& r) {
  json j;
  j["holds"] = r.holds;
  j["max_violation"] = num_or_null(r.max_violation);
  j["first_violation_t"] = r.first_violation_t ? json(*r.first_violation_t) : json(nullptr);
  j["n_checked"] = r.n_checked;
  return j;
}

json fit_json(const std::optional<DecayFit>& f) {
  if (!f) return nullptr;
  return {{"rate", f->rate},
          {"exponent", f->exponent},
          {"r_squared", f->r_squared},
          {"window", {f->t_lo, f->t_hi}},
          {"n_used", f->n_used},
          {"through_peaks", f->through_peaks}};
}

json record_base(const Config& c, double wall) {
  return {{"config_hash", c.hash_hex()}, {"version", kVersion}, {"wall_time_s", wall}};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

int cmd_simulate(const Command& cmd) {
  const auto t0 = std::chrono::steady_clock::now();
  const Config c = resolve(cmd);
  // Validate everything before integrating.
  const ProblemInstance prob = build_problem(c);
  const SystemKind sys = parse_system(c.str("system"));
  const FrictionParams params = build_params(c, prob);
  const PerturbationSpec pert = build_perturbation(c, prob);
  const auto [x0, v0] = build_initial_state(c, prob);
  const SolverConfig solver = build_solver(c);
  const fs::path out = prepare_out(cmd);

  const Trajectory traj = simulate(prob.obj, sys, params, x0, v0, pert, solver);
  write_text((out / "trajectory.csv").string(), trajectory_table(traj).render());

  LineChart chart{"objective gap, " + std::string(to_string(sys)) + " on " + prob.obj.name,
                  "t", "f - f*", true, {}};
  chart.series.push_back({"f_gap", traj.times, traj.f_gap, false});
  write_text((out / "trajectory.svg").string(), render_svg(chart));

  json rec = record_base(c, 0.0);
  rec["command"] = "simulate";
  rec["problem"] = prob.obj.name;
  rec["system"] = to_string(sys);
  rec["params"] = {{"alpha", params.alpha}, {"beta", params.beta}};
  rec["terminated_by"] = to_string(traj.terminated_by);
  rec["t_final"] = traj.t_last();
  rec["final_f_gap"] = num_or_null(traj.f_gap.back());
  rec["samples"] = traj.size();
  rec["steps"] = {{"accepted", traj.stats.accepted}, {"rejected", traj.stats.rejected}};

  json fits = json::object();
  try {
    fits["exponential"] = fit_json(fit_decay(traj, {0.5, 1.0}, FitMode::exponential));
  } catch (const ValidationError& e) {
    fits["exponential"] = {{"error", e.what()}};
  }
  try {
    fits["power"] = fit_json(fit_decay(traj, {0.5, 1.0}, FitMode::power));
  } catch (const ValidationError& e) {
    fits["power"] = {{"error", e.what()}};
  }
  rec["fitted_rates"] = fits;

  json env = json::object();
  const bool damped = sys == SystemKind::din || sys == SystemKind::gdin;
  if (damped && traj.terminated_by != Termination::nonfinite) {
    const double mu = prob.obj.loj.mu;
    if (prob.obj.loj.q == 2.0) {
      const std::size_t i0 = entry_index(prob.obj, traj);
      if (i0 < traj.size()) {
        const RateEnvelope e = make_envelope(prob.obj, params, mu, traj, i0);
        json j = pert.active() ? envelope_json(check_exponential_envelope(traj, e, pert, 0.05))
                               : envelope_json(check_exponential_envelope(traj, e, 0.05));
        j["R"] = e.R;
        j["C"] = e.C;
        j["M0"] = num_or_null(e.M0);
        j["t0"] = e.t0;
        j["t0_rule"] = prob.obj.loj.global ? "global PL: t0 = 0"
                                           : "first sample within 0.5 of a minimizer";
        env["exponential"] = j;
      } else {
        env["exponential"] = {{"error", "trajectory never enters the PL region"}};
      }
    } else {
      try {
        const auto r = check_sublinear_envelope(traj, prob.obj, params, pert, 0.05);
        json j = envelope_json(r);
        j["C4"] = r.C4;
        j["t0"] = r.t0;
        j["exponent"] = r.exponent;
        env["sublinear"] = j;
      } catch (const ValidationError& e) {
        env["sublinear"] = {{"error", e.what()}};
      }
    }
  }
  rec["envelope_reports"] = env;
  rec["wall_time_s"] = seconds_since(t0);
  write_text((out / "run.json").string(), rec.dump(2) + "\n");
  std::cout << "terminated_by=" << to_string(traj.terminated_by)
            << " final_f_gap=" << format_number(traj.f_gap.back()) << "\n";
  return 0;
}

int cmd_fig2(const Command& cmd) {
  const auto t0 = std::chrono::steady_clock::now();
  const Config c = resolve(cmd);
  Fig2Options base;
  base.eps = c.num("fig2.epsilon");
  base.dim = static_cast<int>(c.integer("fig2.dim"));
  base.L = c.num("fig2.L");
  base.kernel_dim = static_cast<int>(c.integer("fig2.kernel_dim"));
  base.seed = c.u64("fig2.seed");
  base.horizon = c.num("fig2.horizon");
  base.n_out = static_cast<int>(c.integer("fig2.n_out"));
  const auto mus = c.list("fig2.mu_list");
  for (double mu : mus) {
    if (!(mu > 0.0 && mu <= base.L)) throw ValidationError("config key 'fig2.mu_list': each mu must lie in (0, fig2.L]");
    if (!(base.eps > 0.0 && base.eps < std::sqrt(mu)))
      throw ValidationError("config key 'fig2.epsilon' must lie in (0, sqrt(mu))");
    QuadraticSpec{base.dim, mu, base.L, base.kernel_dim, base.seed}.validate();
  }
  if (!(base.horizon > 0.0)) throw ValidationError("config key 'fig2.horizon' must be positive");
  if (base.n_out < 10) throw ValidationError("config key 'fig2.n_out' must be at least 10");
  const fs::path out = prepare_out(cmd);

  json rec = record_base(c, 0.0);
  rec["command"] = "fig2";
  rec["runs"] = json::array();
  for (double mu : mus) {
    Fig2Options o = base;
    o.mu = mu;
    const Fig2Result r = run_fig2(o);

    CsvTable t;
    t.columns = {"t"};
    for (std::size_t k = 0; k < r.runs.size(); ++k) t.columns.push_back("f_gap_" + std::to_string(k));
    t.columns.push_back("bound_sqrt_mu_over_2");
    t.columns.push_back("bound_2sqrt_mu_minus_eps");
    t.note = "f_gap_k for tunings:";
    for (std::size_t k = 0; k < r.runs.size(); ++k)
      t.note += " " + std::to_string(k) + "=" + r.runs[k].tuning.label;
    t.note += "; bounds anchored at the common initial gap";
    const auto& ref = r.runs.front().traj;
    const double f0 = ref.f_gap.front();
    const double slow = std::sqrt(mu / 2.0), fast = 2.0 * std::sqrt(mu) - o.eps;
    std::vector<double> b1, b2;
    for (std::size_t i = 0; i < ref.size(); ++i) {
      std::vector<double> row = {ref.times[i]};
      for (const auto& run : r.runs)
        row.push_back(i < run.traj.size() ? run.traj.f_gap[i] : NAN);
      b1.push_back(f0 * std::exp(-slow * ref.times[i]));
      b2.push_back(f0 * std::exp(-fast * ref.times[i]));
      row.push_back(b1.back());
      row.push_back(b2.back());
      t.rows.push_back(std::move(row));
    }
    write_text((out / ("fig2_mu" + tag(mu) + ".csv")).string(), t.render());

    LineChart chart{"quadratic, mu = " + tag(mu) + ", d = " + std::to_string(o.dim), "t",
                    "f - f*", true, {}};
    for (const auto& run : r.runs)
      chart.series.push_back({run.tuning.label, run.traj.times, run.traj.f_gap, false});
    chart.series.push_back({"O(exp(-sqrt(mu/2) t))", ref.times, b1, true});
    chart.series.push_back({"O(exp(-(2sqrt(mu)-eps) t))", ref.times, b2, true});
    write_text((out / ("fig2_mu" + tag(mu) + ".svg")).string(), render_svg(chart));

    json jm = {{"mu", mu}, {"T", r.T}, {"best_final", r.runs[r.best_final()].tuning.label}};
    jm["tunings"] = json::array();
    for (const auto& run : r.runs)
      jm["tunings"].push_back({{"label", run.tuning.label},
                               {"alpha", run.tuning.params.alpha},
                               {"beta", run.tuning.params.beta},
                               {"terminated_by", to_string(run.traj.terminated_by)},
                               {"final_f_gap", run.traj.f_gap.back()},
                               {"R", run.envelope.R},
                               {"envelope", envelope_json(run.envelope_report)},
                               {"fit", fit_json(run.fit)}});
    rec["runs"].push_back(jm);
    std::cout << "mu=" << tag(mu) << " best=" << r.runs[r.best_final()].tuning.label << "\n";
  }
  rec["wall_time_s"] = seconds_since(t0);
  write_text((out / "fig2.json").string(), rec.dump(2) + "\n");
  return 0;
}

int cmd_fig3(const Command& cmd) {
  const auto t0 = std::chrono::steady_clock::now();
  const Config c = resolve(cmd);
  Fig3Options o;
  o.mu = c.num("fig3.mu");
  o.L = c.num("fig3.L");
  o.eps = c.num("fig3.epsilon");
  o.x0 = c.num("fig3.x0");
  o.y0 = c.num("fig3.y0");
  o.t_end = c.num("fig3.t_end");
  o.output_dt = c.num("fig3.output_dt");
  if (!(o.mu > 0.0 && o.L > o.mu)) throw ValidationError("config keys 'fig3.mu', 'fig3.L' need 0 < mu < L");
  if (!(o.eps > 0.0 && o.eps < std::sqrt(o.mu)))
    throw ValidationError("config key 'fig3.epsilon' must lie in (0, sqrt(mu))");
  if (!(o.t_end > 0.0 && o.output_dt > 0.0 && o.output_dt <= o.t_end))
    throw ValidationError("config keys 'fig3.t_end', 'fig3.output_dt' need 0 < output_dt <= t_end");
  const fs::path out = prepare_out(cmd);
  const auto runs = run_fig3(o);

  CsvTable t;
  t.columns = {"t"};
  for (std::size_t k = 0; k < runs.size(); ++k) {
    t.columns.push_back("f_gap_" + std::to_string(k));
    t.columns.push_back("x_" + std::to_string(k));
    t.columns.push_back("y_" + std::to_string(k));
  }
  t.note = "runs:";
  for (std::size_t k = 0; k < runs.size(); ++k) t.note += " " + std::to_string(k) + "=" + runs[k].tuning.label;
  t.note += "; start (" + tag(o.x0) + ", " + tag(o.y0) + "), zero velocity";
  const auto& ref = runs.front().traj;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    std::vector<double> row = {ref.times[i]};
    for (const auto& r : runs) {
      const bool ok = i < r.traj.size();
      row.push_back(ok ? r.traj.f_gap[i] : NAN);
      row.push_back(ok ? r.traj.states[i](0) : NAN);
      row.push_back(ok ? r.traj.states[i](1) : NAN);
    }
    t.rows.push_back(std::move(row));
  }
  write_text((out / "fig3.csv").string(), t.render());

  LineChart gap{"Rosenbrock, objective gap", "t", "f - f*", true, {}};
  LineChart path{"Rosenbrock, path in the plane", "x", "y", false, {}};
  for (const auto& r : runs) {
    gap.series.push_back({r.tuning.label, r.traj.times, r.traj.f_gap, false});
    std::vector<double> xs, ys;
    for (const auto& s : r.traj.states) xs.push_back(s(0)), ys.push_back(s(1));
    path.series.push_back({r.tuning.label, xs, ys, false});
  }
  write_text((out / "fig3_gap.svg").string(), render_svg(gap));
  write_text((out / "fig3_path.svg").string(), render_svg(path));

  json rec = record_base(c, 0.0);
  rec["command"] = "fig3";
  rec["runs"] = json::array();
  for (const auto& r : runs)
    rec["runs"].push_back({{"label", r.tuning.label},
                           {"system", to_string(r.tuning.system)},
                           {"alpha", r.tuning.params.alpha},
                           {"beta", r.tuning.params.beta},
                           {"terminated_by", to_string(r.traj.terminated_by)},
                           {"final_f_gap", r.traj.f_gap.back()},
                           {"final_distance", r.final_distance},
                           {"t_hit_1e-8", r.t_hit ? json(*r.t_hit) : json(nullptr)},
                           {"overshoot_x", r.overshoot}});
  rec["wall_time_s"] = seconds_since(t0);
  write_text((out / "fig3.json").string(), rec.dump(2) + "\n");
  for (const auto& r : runs)
    std::cout << r.tuning.label << " t_hit=" << (r.t_hit ? tag(*r.t_hit) : "none") << "\n";
  return 0;
}

int cmd_rate_map(const Command& cmd) {
  const auto t0 = std::chrono::steady_clock::now();
  const Config c = resolve(cmd);
  const double mu = c.num("rate_map.mu");
  const long na = c.integer("rate_map.n_alpha"), nb = c.integer("rate_map.n_beta");
  if (!(mu > 0.0)) throw ValidationError("config key 'rate_map.mu' must be positive");
  if (na < 2 || nb < 2) throw ValidationError("config keys 'rate_map.n_alpha', 'rate_map.n_beta' must be >= 2");
  const fs::path out = prepare_out(cmd);
  const double sm = std::sqrt(mu);
  const auto ag = uniform_grid(3.0 * sm, static_cast<int>(na));
  const auto bg = uniform_grid(3.0 / sm, static_cast<int>(nb));
  const Matrix M = rate_map(mu, ag, bg);

  CsvTable t;
  t.columns = {"alpha", "beta", "R"};
  t.note = "mu = " + tag(mu);
  for (std::size_t i = 0; i < ag.size(); ++i)
    for (std::size_t j = 0; j < bg.size(); ++j) t.rows.push_back({ag[i], bg[j], M(i, j)});
  write_text((out / ("rate_map_mu" + tag(mu) + ".csv")).string(), t.render());
  // Rows along alpha become the y axis; transpose so beta runs vertically.
  write_text((out / ("rate_map_mu" + tag(mu) + ".svg")).string(),
             render_heatmap_svg("R(alpha, beta), mu = " + tag(mu), "alpha", "beta", ag, bg,
                                M.transpose()));
  json rec = record_base(c, seconds_since(t0));
  rec["command"] = "rate-map";
  rec["mu"] = mu;
  rec["max_R"] = M.maxCoeff();
  rec["bound_2sqrt_mu"] = 2.0 * sm;
  write_text((out / "rate_map.json").string(), rec.dump(2) + "\n");
  std::cout << "max_R=" << format_number(M.maxCoeff()) << " bound=" << format_number(2.0 * sm) << "\n";
  return 0;
}

int cmd_saddle_mc(const Command& cmd) {
  const auto t0 = std::chrono::steady_clock::now();
  const Config c = resolve(cmd);
  const long n = c.integer("saddle.n");
  const FrictionParams p{c.num("saddle.alpha"), c.num("saddle.beta")};
  const double box = c.num("saddle.box");
  if (n < 0) throw ValidationError("config key 'saddle.n' must be nonnegative");
  if (!(p.alpha > 0.0)) throw ValidationError("config key 'saddle.alpha' must be positive");
  if (!(p.beta > 0.0)) throw ValidationError("config key 'saddle.beta' must be positive");
  if (!(box > 0.0)) throw ValidationError("config key 'saddle.box' must be positive");
  SolverConfig s;
  s.t_end = c.num("saddle.t_end");
  if (!(s.t_end > 0.0)) throw ValidationError("config key 'saddle.t_end' must be positive");
  s.output_dt = s.t_end;
  const fs::path out = prepare_out(cmd);
  const auto rep = saddle_monte_carlo(make_double_well_saddle(), p, static_cast<int>(n), box,
                                      c.u64("saddle.seed"), s);
  json rec = record_base(c, 0.0);
  rec["command"] = "saddle-mc";
  rec["n_trials"] = rep.n_trials;
  rec["n_to_saddle"] = rep.n_to_saddle;
  rec["n_to_min"] = rep.n_to_min;
  rec["n_undecided"] = rep.n_undecided;
  rec["classification_radius"] = 1e-3;
  json summary = rec;
  summary.erase("wall_time_s");
  rec["wall_time_s"] = seconds_since(t0);
  write_text((out / "saddle_mc.json").string(), rec.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_tune(const Command& cmd) {
  const Config c = resolve(cmd);
  const auto t = optimal_tuning(c.num("tune.mu"), c.num("tune.epsilon"));
  json j = {{"alpha", t.params.alpha},
            {"beta", t.params.beta},
            {"beta_interval", {t.beta_lo, t.beta_hi}},
            {"target_rate", t.target_rate},
            {"rate_R", rate_R(t.params, c.num("tune.mu"))}};
  std::cout << j.dump(2) << "\n";
  if (!cmd.out_dir.empty() && cmd.out_dir != ".") {
    const fs::path out = prepare_out(cmd);
    write_text((out / "tune.json").string(), j.dump(2) + "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dinlab: inertial dynamics with Hessian-driven damping"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  struct Entry {
    const char* name;
    const char* help;
    std::vector<std::string> prefixes;
    int (*run)(const Command&);
  };
  const std::vector<Entry> entries = {
      {"simulate", "integrate one configured run",
       {"problem.", "system", "params.", "perturbation.", "init.", "solver."}, cmd_simulate},
      {"fig2", "quadratic tuning comparison", {"fig2."}, cmd_fig2},
      {"fig3", "Rosenbrock comparison", {"fig3."}, cmd_fig3},
      {"rate-map", "R(alpha, beta) on a grid", {"rate_map."}, cmd_rate_map},
      {"saddle-mc", "saddle-avoidance Monte Carlo", {"saddle."}, cmd_saddle_mc},
      {"tune", "near-optimal friction for (mu, epsilon)", {"tune."}, cmd_tune},
  };
  std::vector<Command> cmds(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    cmds[i].app = app.add_subcommand(entries[i].name, entries[i].help);
    cmds[i].app->add_option("--config", cmds[i].config_path, "key = value configuration file");
    cmds[i].app->add_option("--out", cmds[i].out_dir, "output directory");
    add_key_flags(cmds[i], entries[i].prefixes);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    for (std::size_t i = 0; i < entries.size(); ++i)
      if (cmds[i].app->parsed()) return entries[i].run(cmds[i]);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const RegionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
