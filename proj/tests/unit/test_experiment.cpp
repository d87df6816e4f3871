// Copyright 2026 The robustsel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cstdlib>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "robustsel/config.hpp"
#include "robustsel/experiment.hpp"

namespace rs = robustsel;
namespace fs = std::filesystem;

namespace {

rs::Json toy_json() {
  return rs::Json::parse(R"({
    "objective": "toy",
    "toy": {"weights": [5, 4, 3, 2, 1]},
    "solvers": [{"name": "greedy"}, {"name": "oblivious"}, {"name": "oblivious_greedy", "beta": 1}],
    "k_grid": [3],
    "tau": {"fixed": [1]},
    "seed": 3
  })");
}

rs::Json linear_json() {
  return rs::Json::parse(R"({
    "objective": "support_linear",
    "data": {"preset": "desk_linear", "n_train": 40, "n_test": 30, "d": 12, "sparsity": 4},
    "solvers": [{"name": "greedy"}, {"name": "oblivious_greedy", "beta": 2, "label": "og2"}, {"name": "omp"}],
    "k_grid": [3, 5, 13],
    "tau": {"fixed": [1, 2]},
    "adversaries": {"random_seeds": 1, "stochastic_seeds": 1},
    "repetitions": 2,
    "seed": 9
  })");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("robustsel_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ROBUSTSEL_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST(Config, ParsesDefaultsAndRoundTrips) {
  const auto c = rs::parse_experiment_config(linear_json());
  EXPECT_EQ(c.data.synth.d, 12u);
  EXPECT_EQ(c.data.synth.n_train, 40u);
  EXPECT_DOUBLE_EQ(c.data.synth.noise_var, 5.0);
  EXPECT_EQ(c.solvers[1].label, "og2");
  EXPECT_EQ(c.solvers[0].label, "greedy");
  EXPECT_EQ(c.adversaries.random_seeds, 1u);
  EXPECT_TRUE(c.adversaries.exact);
  const auto again = rs::parse_experiment_config(rs::experiment_config_to_json(c));
  EXPECT_EQ(rs::experiment_config_to_json(again), rs::experiment_config_to_json(c));
}

TEST(Config, FractionalTau) {
  rs::TauSetting t{true, 0.3};
  EXPECT_EQ(t.tau_for(10), 3u);
  EXPECT_EQ(t.tau_for(20), 6u);
  EXPECT_EQ(t.tau_for(3), 0u);
  EXPECT_EQ(t.label(), "0.3k");
  EXPECT_EQ((rs::TauSetting{false, 5}).label(), "5");
}

TEST(Config, RejectsInvalidInput) {
  auto j = toy_json();
  j["colour"] = 1;
  EXPECT_THROW(rs::parse_experiment_config(j), rs::ConfigError);
  j = toy_json();
  j["tau"] = {{"fixed", {3}}};
  EXPECT_THROW(rs::parse_experiment_config(j), rs::ConfigError);
  j = toy_json();
  j["solvers"] = rs::Json::parse(R"([{"name": "greedy"}, {"name": "greedy"}])");
  EXPECT_THROW(rs::parse_experiment_config(j), rs::ConfigError);
  j = toy_json();
  j["solvers"] = rs::Json::parse(R"([{"name": "simulated_annealing"}])");
  EXPECT_THROW(rs::parse_experiment_config(j), rs::ConfigError);
  j = toy_json();
  j["k_grid"] = "three";
  EXPECT_THROW(rs::parse_experiment_config(j), rs::ConfigError);
  j = toy_json();
  j["tau"] = {{"fixed", {1}}, {"fraction", {0.1}}};
  EXPECT_THROW(rs::parse_experiment_config(j), rs::ConfigError);
}

TEST(Config, AcceptsManifest) {
  const auto c = rs::parse_experiment_config(toy_json());
  const rs::Json manifest = {{"manifest_version", rs::kManifestVersion}, {"config", rs::experiment_config_to_json(c)}};
  EXPECT_EQ(rs::experiment_config_to_json(rs::load_experiment_config(manifest)), rs::experiment_config_to_json(c));
}

TEST(RunExperiment, ModularToyAgreesAcrossSolvers) {
  const auto result = rs::run_experiment(rs::parse_experiment_config(toy_json()));
  ASSERT_EQ(result.rows.size(), 3u);
  for (const auto& r : result.rows) {
    EXPECT_DOUBLE_EQ(r.clean_value, 12.0) << r.solver;
    EXPECT_DOUBLE_EQ(r.robust_value, 7.0) << r.solver;
    EXPECT_EQ(r.tau, 1u);
    EXPECT_FALSE(r.test_mse.has_value());
  }
  EXPECT_TRUE(result.skipped.empty());
  EXPECT_EQ(result.manifest.at("row_count"), 3);
}

TEST(RunExperiment, RowAccountingAndDeterminism) {
  const auto c = rs::parse_experiment_config(linear_json());
  const auto a = rs::run_experiment(c);
  // 2 taus x 3 solvers x 3 ks x 2 reps. k = 13 exceeds d = 12 for every solver;
  // og2 at k = 3, tau = 2 needs 4 oblivious picks.
  EXPECT_EQ(a.rows.size() + a.skipped.size(), 36u);
  EXPECT_EQ(a.skipped.size(), 14u);
  for (const auto& r : a.rows) {
    EXPECT_LE(r.robust_value, r.clean_value + 1e-9);
    EXPECT_TRUE(r.test_mse.has_value());
    EXPECT_TRUE(r.test_r2.has_value());
    EXPECT_FALSE(r.test_accuracy.has_value());
    EXPECT_FALSE(r.adversary.empty());
  }
  const auto b = rs::run_experiment(c, {2});
  std::ostringstream ca, cb;
  rs::write_results_csv(ca, a.rows);
  rs::write_results_csv(cb, b.rows);
  EXPECT_EQ(ca.str(), cb.str());
  EXPECT_EQ(a.manifest.at("repetition_seeds").size(), 2u);
}

TEST(RunExperiment, ObliviousBudgetSkip) {
  auto j = toy_json();
  j["solvers"] = rs::Json::parse(R"([{"name": "oblivious_greedy", "beta": 4}])");
  const auto result = rs::run_experiment(rs::parse_experiment_config(j));
  EXPECT_TRUE(result.rows.empty());
  ASSERT_EQ(result.skipped.size(), 1u);
  EXPECT_NE(result.skipped[0].reason.find("exceeds"), std::string::npos);
}

TEST(PlotData, Aggregation) {
  EXPECT_EQ(rs::plot_csv(rs::plot_rows({}, rs::Metric::kRobustValue)), "solver,k,mean,stddev\n");
  rs::ResultRow r;
  r.solver = "greedy";
  r.k = 4;
  r.tau_setting = "1";
  r.robust_value = 2.0;
  auto rows = rs::plot_rows({r}, rs::Metric::kRobustValue);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].stddev, 0.0);
  rs::ResultRow s = r;
  s.robust_value = 4.0;
  rows = rs::plot_rows({r, s}, rs::Metric::kRobustValue);
  EXPECT_DOUBLE_EQ(rows[0].mean, 3.0);
  EXPECT_DOUBLE_EQ(rows[0].stddev, std::sqrt(2.0));
  EXPECT_TRUE(rs::plot_rows({r, s}, rs::Metric::kTestMse).empty());
  EXPECT_TRUE(rs::plot_rows({r, s}, rs::Metric::kRobustValue, std::string("2")).empty());
}

TEST(Certify, SmallGridHolds) {
  rs::CertifyConfig c;
  c.ns = {6};
  c.ks = {4};
  c.taus = {1};
  c.betas = {1.0, 2.0};
  c.families = {rs::OracleFamily::kModular, rs::OracleFamily::kCoverage};
  c.oracles_per_cell = 2;
  const auto report = rs::certify_bounds(c);
  EXPECT_EQ(report.instances.size(), 8u);
  EXPECT_TRUE(report.passed());
  for (const auto& i : report.instances) {
    if (i.beta == 1.0) {
      EXPECT_EQ(i.factor, 0.0);
    } else if (i.family == "modular") {
      EXPECT_GT(i.margin, 0.0);
    }
  }
}

TEST(RatioReport, SupportObjectiveIncludesRegularity) {
  auto j = linear_json();
  j["data"]["d"] = 6;
  j["data"]["sparsity"] = 3;
  j["k_grid"] = {3};
  const auto report = rs::ratio_report(rs::parse_experiment_config(j));
  EXPECT_TRUE(report.at("ordering_holds").get<bool>());
  EXPECT_GE(report.at("ratios").at("gamma").get<double>(),
            report.at("regularity").at("ratio_lower_bound").get<double>() - 1e-6);
}

TEST(Cli, ExitCodesAndReproducibleOutputs) {
  const fs::path dir = scratch_dir("cli");
  {
    std::ofstream(dir / "toy.json") << toy_json().dump();
    rs::Json bad = toy_json();
    bad["unknown"] = true;
    std::ofstream(dir / "bad.json") << bad.dump();
  }
  EXPECT_EQ(run_cli("run --config " + (dir / "toy.json").string() + " --out " + (dir / "a").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "a" / "results.csv"));
  EXPECT_TRUE(fs::exists(dir / "a" / "plot_robust_value_tau1.csv"));
  EXPECT_EQ(run_cli("run --config " + (dir / "a" / "manifest.json").string() + " --out " + (dir / "b").string()), 0);
  EXPECT_EQ(slurp(dir / "a" / "results.csv"), slurp(dir / "b" / "results.csv"));
  EXPECT_EQ(run_cli("run --config " + (dir / "bad.json").string() + " --out " + (dir / "c").string()), 2);
  EXPECT_EQ(run_cli("run --config " + (dir / "missing.json").string()), 2);
  EXPECT_EQ(run_cli("run --bogus-flag"), 2);
  EXPECT_EQ(run_cli("surface --out " + (dir / "s").string()), 0);
  EXPECT_EQ(slurp(dir / "s" / "surface.csv").substr(0, 19), "gamma,theta,factor\n");
  fs::remove_all(dir);
}
