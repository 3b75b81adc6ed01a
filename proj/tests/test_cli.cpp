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


// End-to-end checks that drive the built dinlab_cli binary.

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <gtest/gtest.h>
#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(DINLAB_CLI_PATH) + " " + args + " 2>&1";
  RunResult r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Csv {
  std::string schema;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t col(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    ADD_FAILURE() << "no column " << name;
    return 0;
  }
};

std::vector<std::string> split(const std::string& s, char d) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, d)) out.push_back(item);
  return out;
}

Csv read_csv(const fs::path& p) {
  Csv c;
  std::ifstream in(p);
  std::string line;
  std::getline(in, c.schema);
  std::getline(in, line);
  c.header = split(line, ',');
  while (std::getline(in, line)) {
    std::vector<double> row;
    for (const auto& f : split(line, ',')) row.push_back(std::stod(f));
    c.rows.push_back(std::move(row));
  }
  return c;
}

void expect_valid_svg(const fs::path& p) {
  ASSERT_TRUE(fs::exists(p)) << p;
  boost::property_tree::ptree tree;
  EXPECT_NO_THROW(boost::property_tree::read_xml(p.string(), tree)) << p;
  EXPECT_EQ(tree.count("svg"), 1u) << p;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("dinlab_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string out(const std::string& sub) const { return (dir_ / sub).string(); }

  fs::path dir_;
};

const char* kSmallQuadratic =
    "--problem.dim 20 --problem.kernel_dim 2 --params.rule optimal --init.x range_random";

}  // namespace

TEST_F(CliTest, HelpAndMissingSubcommand) {
  EXPECT_EQ(run_cli("--help").code, 0);
  EXPECT_EQ(run_cli("").code, 1);
  EXPECT_EQ(run_cli("--bogus").code, 1);
  EXPECT_EQ(run_cli("nosuch").code, 1);
}

TEST_F(CliTest, SimulateWritesTrajectory) {
  const auto r = run_cli(std::string("simulate ") + kSmallQuadratic + " --out " + out("a"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("terminated_by=t_end"), std::string::npos) << r.out;

  const Csv c = read_csv(dir_ / "a" / "trajectory.csv");
  EXPECT_EQ(c.schema.rfind("# schema:", 0), 0u);
  ASSERT_GE(c.header.size(), 4u);
  EXPECT_EQ(c.header[0], "t");
  EXPECT_EQ(c.header[1], "f_gap");
  EXPECT_EQ(c.header[2], "grad_norm");
  EXPECT_EQ(c.header[3], "speed_norm");
  ASSERT_GT(c.rows.size(), 10u);
  EXPECT_EQ(c.rows[0][0], 0.0);
  for (std::size_t i = 1; i < c.rows.size(); ++i) EXPECT_GT(c.rows[i][0], c.rows[i - 1][0]);
  EXPECT_NEAR(c.rows.back()[0], 60.0, 1e-12);

  // At least 12 significant digits in every field.
  std::ifstream in(dir_ / "a" / "trajectory.csv");
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  std::getline(in, line);
  for (const auto& f : split(line, ',')) {
    const auto mant = f.substr(0, f.find_first_of("eE"));
    std::size_t digits = 0;
    for (char ch : mant) digits += std::isdigit(static_cast<unsigned char>(ch)) ? 1 : 0;
    EXPECT_GE(digits, 12u) << f;
  }

  expect_valid_svg(dir_ / "a" / "trajectory.svg");
  const json j = json::parse(slurp(dir_ / "a" / "run.json"));
  EXPECT_EQ(j["command"], "simulate");
  EXPECT_EQ(j["terminated_by"], "t_end");
  EXPECT_TRUE(j.contains("config_hash"));
  EXPECT_TRUE(j.contains("version"));
}

TEST_F(CliTest, SimulateIsByteDeterministic) {
  const std::string base = std::string("simulate ") + kSmallQuadratic + " --solver.t_end 10";
  ASSERT_EQ(run_cli(base + " --out " + out("a")).code, 0);
  ASSERT_EQ(run_cli(base + " --out " + out("b")).code, 0);
  EXPECT_EQ(slurp(dir_ / "a" / "trajectory.csv"), slurp(dir_ / "b" / "trajectory.csv"));
}

TEST_F(CliTest, SimulateEnvelopeHoldsOnCsv) {
  // mu = 0.2, eps = 1e-4: certified rate 2 sqrt(mu) - eps.
  const auto r = run_cli(std::string("simulate ") + kSmallQuadratic +
                         " --solver.abs_tol 1e-300 --solver.state_abs_tol 1e-12"
                         " --solver.rel_tol 1e-10 --out " + out("a"));
  ASSERT_EQ(r.code, 0) << r.out;
  const json j = json::parse(slurp(dir_ / "a" / "run.json"));
  const auto& env = j["envelope_reports"]["exponential"];
  const double R = env["R"], M0 = env["M0"];
  EXPECT_NEAR(R, 2.0 * std::sqrt(0.2) - 1e-4, 1e-12);
  EXPECT_TRUE(env["holds"].get<bool>());

  const Csv c = read_csv(dir_ / "a" / "trajectory.csv");
  const std::size_t ti = c.col("t"), fi = c.col("f_gap");
  for (const auto& row : c.rows) EXPECT_LE(row[fi], 1.05 * M0 * std::exp(-R * row[ti])) << row[ti];
  // The gap actually decays over many orders of magnitude.
  EXPECT_LT(c.rows.back()[fi], 1e-12 * c.rows.front()[fi]);
}

TEST_F(CliTest, ConfigFileWithSectionsAndComments) {
  const fs::path cfg = dir_ / "run.cfg";
  std::ofstream(cfg) << "# small quadratic\n"
                        "[problem]\n"
                        "dim = 20\n"
                        "kernel_dim = 2   # trailing comment\n"
                        "[solver]\n"
                        "t_end = 5\n"
                        "output_dt = 0.5\n";
  auto r = run_cli("simulate --config " + cfg.string() + " --out " + out("a"));
  ASSERT_EQ(r.code, 0) << r.out;
  Csv c = read_csv(dir_ / "a" / "trajectory.csv");
  EXPECT_NEAR(c.rows.back()[0], 5.0, 1e-12);
  EXPECT_EQ(c.rows.size(), 11u);

  // Flags take precedence over the file.
  r = run_cli("simulate --config " + cfg.string() + " --solver.t_end 2 --out " + out("b"));
  ASSERT_EQ(r.code, 0) << r.out;
  c = read_csv(dir_ / "b" / "trajectory.csv");
  EXPECT_NEAR(c.rows.back()[0], 2.0, 1e-12);
}

TEST_F(CliTest, UnknownConfigKeyIsRejected) {
  const fs::path cfg = dir_ / "bad.cfg";
  std::ofstream(cfg) << "[problem]\nfoo = 3\n";
  const auto r = run_cli("simulate --config " + cfg.string() + " --out " + out("a"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("problem.foo"), std::string::npos) << r.out;
}

TEST_F(CliTest, InvalidValueNamesField) {
  auto r = run_cli("simulate --problem.dim 20 --problem.kernel_dim 2 --params.alpha -1 --out " + out("a"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("params.alpha"), std::string::npos) << r.out;

  r = run_cli("simulate --problem.dim 20 --problem.kernel_dim 40 --out " + out("b"));
  EXPECT_EQ(r.code, 1) << r.out;
}

TEST_F(CliTest, NonfiniteRunIsReportedNotFatal) {
  const auto r = run_cli("simulate --problem.kind rosenbrock --system gf --init.x 1e200,1e200 --out " +
                         out("a"));
  EXPECT_EQ(r.code, 0) << r.out;
  const json j = json::parse(slurp(dir_ / "a" / "run.json"));
  EXPECT_EQ(j["terminated_by"], "nonfinite");
}

TEST_F(CliTest, Fig2SmallRun) {
  const std::string args =
      "fig2 --fig2.mu_list 0.2,0.04 --fig2.dim 40 --fig2.kernel_dim 4 --fig2.n_out 200 --out ";
  ASSERT_EQ(run_cli(args + out("a")).code, 0);
  ASSERT_EQ(run_cli(args + out("b")).code, 0);
  for (const char* mu : {"0.2", "0.04"}) {
    const fs::path csv = dir_ / "a" / (std::string("fig2_mu") + mu + ".csv");
    EXPECT_EQ(slurp(csv), slurp(dir_ / "b" / csv.filename()));
    const Csv c = read_csv(csv);
    EXPECT_EQ(c.schema.rfind("# schema:", 0), 0u);
    ASSERT_EQ(c.header.size(), 7u);
    EXPECT_EQ(c.rows.size(), 201u);
    // The near-optimal tuning ends lowest.
    const auto& last = c.rows.back();
    for (int k = 0; k < 3; ++k) EXPECT_LT(last[c.col("f_gap_3")], last[c.col("f_gap_" + std::to_string(k))]);
    expect_valid_svg(dir_ / "a" / (std::string("fig2_mu") + mu + ".svg"));
  }
  const json j = json::parse(slurp(dir_ / "a" / "fig2.json"));
  EXPECT_EQ(j["command"], "fig2");
}

TEST_F(CliTest, Fig3Rosenbrock) {
  const auto r = run_cli("fig3 --out " + out("a"));
  ASSERT_EQ(r.code, 0) << r.out;
  const json j = json::parse(slurp(dir_ / "a" / "fig3.json"));
  const auto& runs = j["runs"];
  ASSERT_EQ(runs.size(), 4u);
  for (const auto& run : runs) {
    EXPECT_LT(run["final_distance"].get<double>(), 1e-3) << run["label"];
    EXPECT_FALSE(run["t_hit_1e-8"].is_null()) << run["label"];
  }
  // 0: din wide, 1: din near-optimal, 2: hbf kappa, 3: hbf 2 sqrt(mu) - eps.
  EXPECT_LT(runs[1]["t_hit_1e-8"].get<double>(), runs[0]["t_hit_1e-8"].get<double>());
  EXPECT_LT(runs[1]["overshoot_x"].get<double>(), runs[3]["overshoot_x"].get<double>());
  expect_valid_svg(dir_ / "a" / "fig3_gap.svg");
  expect_valid_svg(dir_ / "a" / "fig3_path.svg");
}

TEST_F(CliTest, RateMapBoundAndPlateau) {
  const double mu = 0.25;
  const auto r = run_cli("rate-map --rate_map.mu 0.25 --rate_map.n_alpha 60 --rate_map.n_beta 60 --out " +
                         out("a"));
  ASSERT_EQ(r.code, 0) << r.out;
  const Csv c = read_csv(dir_ / "a" / "rate_map_mu0.25.csv");
  ASSERT_EQ(c.rows.size(), 3600u);
  const std::size_t ai = c.col("alpha"), bi = c.col("beta"), ri = c.col("R");
  double max_R = 0.0;
  for (const auto& row : c.rows) {
    EXPECT_LE(row[ri], 2.0 * std::sqrt(mu) + 1e-9);
    max_R = std::max(max_R, row[ri]);
    // Plateau: alpha <= sqrt(mu) and alpha / mu <= beta <= 1 / alpha give 2 alpha.
    if (row[ai] <= std::sqrt(mu) && row[bi] >= row[ai] / mu && row[bi] <= 1.0 / row[ai]) {
      EXPECT_NEAR(row[ri], 2.0 * row[ai], 1e-12);
    }
  }
  EXPECT_GT(max_R, 0.9 * 2.0 * std::sqrt(mu));
  expect_valid_svg(dir_ / "a" / "rate_map_mu0.25.svg");
}

TEST_F(CliTest, SaddleMonteCarloPartitionAndDeterminism) {
  const std::string args = "saddle-mc --saddle.n 40 --saddle.seed 7 --out ";
  const auto a = run_cli(args + out("a"));
  const auto b = run_cli(args + out("b"));
  ASSERT_EQ(a.code, 0) << a.out;
  EXPECT_EQ(a.out, b.out);
  const json j = json::parse(slurp(dir_ / "a" / "saddle_mc.json"));
  EXPECT_EQ(j["n_to_min"].get<int>() + j["n_to_saddle"].get<int>() + j["n_undecided"].get<int>(),
            j["n_trials"].get<int>());
  EXPECT_EQ(j["n_trials"].get<int>(), 40);
}

TEST_F(CliTest, TunePrintsOptimalParameters) {
  auto r = run_cli("tune --tune.mu 0.04 --tune.epsilon 1e-4");
  ASSERT_EQ(r.code, 0) << r.out;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["alpha"].get<double>(), 0.19995, 1e-12);
  EXPECT_NEAR(j["rate_R"].get<double>(), 0.3999, 1e-9);
  const double lo = j["beta_interval"][0], hi = j["beta_interval"][1], beta = j["beta"];
  EXPECT_LE(lo, beta);
  EXPECT_LE(beta, hi);

  r = run_cli("tune --tune.mu 0.04 --tune.epsilon 5");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("epsilon"), std::string::npos) << r.out;
}
