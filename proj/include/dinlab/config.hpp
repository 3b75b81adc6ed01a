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

// Flat `key = value` run configuration with dotted section names.
//
//   # comment
//   problem.kind = quadratic
//   [solver]            # optional section header, prefixes following keys
//   t_end = 60
//
// Every key has a documented default (see kKeys); unknown keys are errors.

#ifndef DINLAB_CONFIG_HPP
#define DINLAB_CONFIG_HPP

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dinlab/common.hpp"
#include "dinlab/dynamics.hpp"
#include "dinlab/experiments.hpp"
#include "dinlab/integrator.hpp"
#include "dinlab/problems.hpp"
#include "dinlab/rates.hpp"

namespace dinlab {

struct ConfigKey {
  const char* name;
  const char* fallback;
  const char* help;
};

// clang-format off
inline const std::vector<ConfigKey> kKeys = {
  {"problem.kind", "quadratic", "quadratic | rosenbrock | double_well | quartic"},
  {"problem.dim", "400", "quadratic dimension"},
  {"problem.mu", "0.2", "quadratic PL constant (smallest positive eigenvalue)"},
  {"problem.L", "20", "quadratic largest eigenvalue"},
  {"problem.kernel_dim", "40", "quadratic kernel dimension"},
  {"problem.seed", "42", "quadratic matrix seed"},
  {"system", "din", "din | gdin | hbf | gf"},
  {"params.rule", "manual", "manual | optimal (tuned from the problem's mu and params.epsilon)"},
  {"params.alpha", "1", "viscous friction"},
  {"params.beta", "1", "Hessian friction"},
  {"params.epsilon", "1e-4", "rate slack for the optimal rule"},
  {"perturbation.kind", "none", "none | exp_decay | power_decay"},
  {"perturbation.c", "0", "amplitude"},
  {"perturbation.decay", "1", "gamma (exp_decay) or p (power_decay)"},
  {"perturbation.direction", "e0", "slow (quadratic) | e<k> | comma list (normalised)"},
  {"init.x", "default", "default | range_random (quadratic) | comma list"},
  {"init.v", "zero", "zero | comma list"},
  {"init.seed", "42", "seed for range_random"},
  {"solver.abs_tol", "1e-12", "absolute tolerance"},
  {"solver.rel_tol", "1e-9", "relative tolerance"},
  {"solver.state_abs_tol", "0", "absolute tolerance relative to the state max-norm"},
  {"solver.t_end", "60", "final time"},
  {"solver.output_dt", "0.05", "output spacing"},
  {"solver.max_steps", "50000000", "step budget"},
  {"solver.grad_stop", "0", "stop when |grad| drops below (0 = off)"},
  {"fig2.mu_list", "0.2,0.04,0.02", "PL constants"},
  {"fig2.epsilon", "1e-4", "slack of the near-optimal tuning"},
  {"fig2.dim", "400", "dimension"},
  {"fig2.L", "20", "largest eigenvalue"},
  {"fig2.kernel_dim", "40", "kernel dimension"},
  {"fig2.seed", "42", "matrix and start seed"},
  {"fig2.horizon", "60", "T = horizon / sqrt(mu)"},
  {"fig2.n_out", "1000", "output samples per run"},
  {"fig3.mu", "0.4", "local PL constant"},
  {"fig3.L", "501", "local curvature"},
  {"fig3.epsilon", "1e-4", "slack of the near-optimal tuning"},
  {"fig3.x0", "-1", "start x"},
  {"fig3.y0", "1", "start y"},
  {"fig3.t_end", "1500", "final time"},
  {"fig3.output_dt", "0.05", "output spacing"},
  {"rate_map.mu", "1", "PL constant"},
  {"rate_map.n_alpha", "200", "alpha grid size on (0, 3 sqrt(mu)]"},
  {"rate_map.n_beta", "200", "beta grid size on (0, 3/sqrt(mu)]"},
  {"saddle.n", "1000", "trials"},
  {"saddle.seed", "2026", "master seed"},
  {"saddle.box", "2", "initial (x, v) drawn from [-box, box]^4"},
  {"saddle.alpha", "1", "viscous friction"},
  {"saddle.beta", "1", "Hessian friction"},
  {"saddle.t_end", "200", "final time"},
  {"tune.mu", "1", "PL constant"},
  {"tune.epsilon", "1", "rate slack"},
};
// clang-format on

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace detail

class Config {
 public:
  Config() {
    for (const auto& k : kKeys) values_[k.name] = k.fallback;
  }

  static bool known(const std::string& key) {
    for (const auto& k : kKeys)
      if (key == k.name) return true;
    return false;
  }

  void set(const std::string& key, const std::string& value) {
    if (!known(key)) throw ValidationError("unknown config key '" + key + "'");
    values_[key] = value;
    explicit_.insert(key);
  }

  bool is_set(const std::string& key) const { return explicit_.count(key) > 0; }

  static Config parse(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = detail::trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']')
          throw ValidationError("config line " + std::to_string(lineno) + ": bad section header");
        section = detail::trim(line.substr(1, line.size() - 2));
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ValidationError("config line " + std::to_string(lineno) +
                              ": expected 'key = value'");
      std::string key = detail::trim(line.substr(0, eq));
      if (!section.empty()) key = section + "." + key;
      cfg.set(key, detail::trim(line.substr(eq + 1)));
    }
    return cfg;
  }

  static Config load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
  }

  const std::string& str(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ValidationError("unknown config key '" + key + "'");
    return it->second;
  }

  double num(const std::string& key) const {
    const std::string& s = str(key);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(v))
      throw ValidationError("config key '" + key + "': '" + s + "' is not a finite number");
    return v;
  }

  long integer(const std::string& key) const {
    const std::string& s = str(key);
    char* end = nullptr;
    errno = 0;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (s.empty() || *end != '\0' || errno == ERANGE)
      throw ValidationError("config key '" + key + "': '" + s + "' is not an integer");
    return v;
  }

  std::uint64_t u64(const std::string& key) const {
    const std::string& s = str(key);
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (s.empty() || s[0] == '-' || *end != '\0' || errno == ERANGE)
      throw ValidationError("config key '" + key + "': '" + s + "' is not an unsigned integer");
    return v;
  }

  std::vector<double> list(const std::string& key) const {
    std::vector<double> out;
    std::stringstream ss(str(key));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = detail::trim(item);
      char* end = nullptr;
      const double v = std::strtod(item.c_str(), &end);
      if (item.empty() || *end != '\0' || !std::isfinite(v))
        throw ValidationError("config key '" + key + "': bad list entry '" + item + "'");
      out.push_back(v);
    }
    if (out.empty()) throw ValidationError("config key '" + key + "': empty list");
    return out;
  }

  /// key=value lines in key order; the basis of the config hash.
  std::string canonical() const {
    std::string s;
    for (const auto& [k, v] : values_) s += k + "=" + v + "\n";
    return s;
  }

  std::string hash_hex() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char c : canonical()) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }

 private:
  std::map<std::string, std::string> values_;
  std::set<std::string> explicit_;
};

// ---------------------------------------------------------------------------
// Building run inputs from a Config

struct ProblemInstance {
  Objective obj;
  std::optional<Quadratic> quadratic;
};

inline ProblemInstance build_problem(const Config& c) {
  const std::string kind = c.str("problem.kind");
  ProblemInstance p;
  if (kind == "quadratic") {
    QuadraticSpec s;
    const long dim = c.integer("problem.dim"), kd = c.integer("problem.kernel_dim");
    if (dim <= 0) throw ValidationError("config key 'problem.dim' must be positive");
    if (kd < 0 || kd >= dim)
      throw ValidationError("config key 'problem.kernel_dim' must lie in [0, problem.dim)");
    s.dim = static_cast<int>(dim);
    s.kernel_dim = static_cast<int>(kd);
    s.mu = c.num("problem.mu");
    s.L = c.num("problem.L");
    s.seed = c.u64("problem.seed");
    if (!(s.mu > 0.0)) throw ValidationError("config key 'problem.mu' must be positive");
    if (!(s.L >= s.mu)) throw ValidationError("config key 'problem.L' must be >= problem.mu");
    p.quadratic.emplace(s);
    p.obj = p.quadratic->objective();
  } else if (kind == "rosenbrock") {
    p.obj = make_rosenbrock();
  } else if (kind == "double_well") {
    p.obj = make_double_well_saddle();
  } else if (kind == "quartic") {
    p.obj = make_quartic_1d();
  } else {
    throw ValidationError("config key 'problem.kind': unknown value '" + kind + "'");
  }
  return p;
}

inline SolverConfig build_solver(const Config& c) {
  SolverConfig s;
  s.abs_tol = c.num("solver.abs_tol");
  s.rel_tol = c.num("solver.rel_tol");
  s.state_abs_tol = c.num("solver.state_abs_tol");
  s.t_end = c.num("solver.t_end");
  s.output_dt = c.num("solver.output_dt");
  s.max_steps = c.integer("solver.max_steps");
  s.grad_stop = c.num("solver.grad_stop");
  auto check = [](bool ok, const char* key, const char* what) {
    if (!ok) throw ValidationError(std::string("config key '") + key + "' " + what);
  };
  check(s.abs_tol > 0.0, "solver.abs_tol", "must be positive");
  check(s.rel_tol > 0.0, "solver.rel_tol", "must be positive");
  check(s.state_abs_tol >= 0.0, "solver.state_abs_tol", "must be nonnegative");
  check(s.t_end > 0.0, "solver.t_end", "must be positive");
  check(s.output_dt > 0.0 && s.output_dt <= s.t_end, "solver.output_dt",
        "must lie in (0, solver.t_end]");
  check(s.max_steps > 0, "solver.max_steps", "must be positive");
  check(s.grad_stop >= 0.0, "solver.grad_stop", "must be nonnegative");
  return s;
}

inline FrictionParams build_params(const Config& c, const ProblemInstance& p) {
  const std::string rule = c.str("params.rule");
  const SystemKind sys = parse_system(c.str("system"));
  FrictionParams fp;
  if (rule == "optimal") {
    const double eps = c.num("params.epsilon");
    const double mu = p.obj.loj.mu;
    if (!(eps > 0.0 && eps < 2.0 * std::sqrt(mu)))
      throw ValidationError("config key 'params.epsilon' must lie in (0, 2 sqrt(mu))");
    fp = optimal_tuning(mu, eps).params;
  } else if (rule == "manual") {
    fp.alpha = c.num("params.alpha");
    fp.beta = c.num("params.beta");
  } else {
    throw ValidationError("config key 'params.rule': unknown value '" + rule + "'");
  }
  if (sys != SystemKind::gf && !(fp.alpha > 0.0))
    throw ValidationError("config key 'params.alpha' must be positive");
  if ((sys == SystemKind::din || sys == SystemKind::gdin) && !(fp.beta > 0.0))
    throw ValidationError("config key 'params.beta' must be positive (use system = hbf for beta = 0)");
  return fp;
}

inline Vector parse_vector(const Config& c, const std::string& key, int dim) {
  const auto v = c.list(key);
  if (static_cast<int>(v.size()) != dim)
    throw ValidationError("config key '" + key + "' needs " + std::to_string(dim) + " entries");
  return Eigen::Map<const Vector>(v.data(), dim);
}

inline PerturbationSpec build_perturbation(const Config& c, const ProblemInstance& p) {
  const std::string kind = c.str("perturbation.kind");
  if (kind == "none") return {};
  PerturbationSpec s;
  if (kind == "exp_decay")
    s.kind = PerturbationSpec::Kind::exp_decay;
  else if (kind == "power_decay")
    s.kind = PerturbationSpec::Kind::power_decay;
  else
    throw ValidationError("config key 'perturbation.kind': unknown value '" + kind + "'");
  s.c = c.num("perturbation.c");
  s.gamma_or_p = c.num("perturbation.decay");
  if (!(s.c >= 0.0)) throw ValidationError("config key 'perturbation.c' must be nonnegative");
  if (!(s.gamma_or_p > 0.0))
    throw ValidationError("config key 'perturbation.decay' must be positive");
  const std::string dir = c.str("perturbation.direction");
  const int d = p.obj.dim;
  if (dir == "slow") {
    if (!p.quadratic)
      throw ValidationError("config key 'perturbation.direction': 'slow' needs a quadratic");
    s.direction = p.quadratic->slow_direction();
  } else if (dir.size() > 1 && dir[0] == 'e' && std::isdigit(static_cast<unsigned char>(dir[1]))) {
    const long k = std::strtol(dir.c_str() + 1, nullptr, 10);
    if (k < 0 || k >= d)
      throw ValidationError("config key 'perturbation.direction': axis out of range");
    s.direction = Vector::Unit(d, static_cast<int>(k));
  } else {
    Vector v = parse_vector(c, "perturbation.direction", d);
    if (!(v.norm() > 0.0))
      throw ValidationError("config key 'perturbation.direction' must be nonzero");
    s.direction = v / v.norm();
  }
  return s;
}

inline std::pair<Vector, Vector> build_initial_state(const Config& c, const ProblemInstance& p) {
  const int d = p.obj.dim;
  const std::string xs = c.str("init.x");
  Vector x0;
  if (xs == "default") {
    if (p.quadratic) {
      x0 = quadratic_start(*p.quadratic, c.u64("init.seed"));
    } else if (p.obj.name == "rosenbrock") {
      x0 = Vector(2);
      x0 << -1.0, 1.0;
    } else if (p.obj.name == "double_well") {
      x0 = Vector(2);
      x0 << 0.5, 0.5;
    } else {
      x0 = Vector::Constant(d, 0.5);
    }
  } else if (xs == "range_random") {
    if (!p.quadratic) throw ValidationError("config key 'init.x': 'range_random' needs a quadratic");
    x0 = quadratic_start(*p.quadratic, c.u64("init.seed"));
  } else {
    x0 = parse_vector(c, "init.x", d);
  }
  const std::string vs = c.str("init.v");
  Vector v0 = vs == "zero" ? Vector::Zero(d) : parse_vector(c, "init.v", d);
  return {x0, v0};
}

}  // namespace dinlab

#endif  // DINLAB_CONFIG_HPP
