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


// Acceptance checks. Prints one [PASS]/[FAIL] line per criterion and exits
// non-zero when any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "robustsel/config.hpp"
#include "robustsel/experiment.hpp"
#include "robustsel/gp_objective.hpp"
#include "robustsel/instances.hpp"
#include "robustsel/ratios.hpp"
#include "robustsel/rng.hpp"
#include "robustsel/solvers.hpp"
#include "robustsel/support_objective.hpp"
#include "robustsel/synth_data.hpp"

namespace rs = robustsel;
namespace fs = std::filesystem;

namespace {

// Tolerances and budgets.
constexpr double kChainTolerance = 1e-9;
constexpr double kAsymptoticTarget = 0.3873;
constexpr double kAsymptoticTolerance = 0.0005;
constexpr double kEnvelopeTolerance = 1e-6;
constexpr double kFixtureTolerance = 1e-10;
constexpr double kBlockRelativeTolerance = 1e-8;
constexpr double kCertifyBudgetSeconds = 300.0;
constexpr double kRatioBudgetSeconds = 300.0;
constexpr double kExperimentBudgetSeconds = 900.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n == 0) return std::nan("");
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

rs::GpProblem random_gp_problem(std::size_t n_points, std::size_t n_targets, std::size_t dim, double noise,
                                std::uint64_t seed) {
  rs::GpProblem p;
  p.points = rs::autoregressive_matrix(n_points, dim, 1.0, seed);
  p.noise = noise;
  std::vector<rs::ItemIndex> targets, candidates;
  for (rs::ItemIndex i = 0; i < n_points; ++i) (i < n_targets ? targets : candidates).push_back(i);
  p.targets = rs::ItemSet(targets);
  p.candidates = rs::ItemSet(candidates);
  return p;
}

rs::DesignProblem random_design(std::size_t rows, std::size_t d, rs::LossKind loss, std::uint64_t seed) {
  rs::SynthSpec spec = loss == rs::LossKind::kLeastSquares ? rs::SynthSpec::desk_linear() : rs::SynthSpec::desk_logistic();
  spec.n_train = rows;
  spec.n_test = 0;
  spec.d = d;
  spec.sparsity = std::min<std::size_t>(3, d);
  spec.seed = seed;
  const rs::Dataset ds = rs::make_dataset(spec);
  return loss == rs::LossKind::kLeastSquares ? rs::least_squares_problem(ds.X_train, ds.y_train)
                                             : rs::logistic_problem(ds.X_train, ds.y_train, 1e-2);
}

bool chains_hold(const rs::RatioEstimates& r) {
  return r.nu >= r.gamma - kChainTolerance && r.gamma >= 1.0 - r.alpha_check - kChainTolerance &&
         r.theta >= r.nu_check * r.nu - kChainTolerance;
}

Outcome finite_k_certification() {
  const auto start = std::chrono::steady_clock::now();
  const rs::CertifyReport report = rs::certify_bounds(rs::CertifyConfig{});
  const double elapsed = seconds_since(start);
  const bool pass = report.instances.size() >= 200 && report.passed() && elapsed <= kCertifyBudgetSeconds;
  return {pass, fmt::format("{} instances, {} violations, min margin {:.6g}, {:.1f} s", report.instances.size(),
                            report.violations, report.min_margin, elapsed)};
}

Outcome ratio_chains() {
  const auto start = std::chrono::steady_clock::now();
  std::size_t checked = 0, failed = 0;
  std::map<std::string, std::size_t> by_kind;
  auto record = [&](const std::string& kind, const rs::RatioEstimates& r) {
    ++checked;
    ++by_kind[kind];
    if (!chains_hold(r)) ++failed;
  };
  for (std::uint64_t s = 0; s < 300; ++s) {
    const auto family = rs::kAllOracleFamilies[s % rs::kAllOracleFamilies.size()];
    const std::size_t n = 4 + s % 5;
    record("random", rs::estimate_ratios(rs::random_monotone_oracle(family, n, 7000 + s)));
  }
  for (std::uint64_t s = 0; s < 80; ++s) {
    const std::size_t d = 4 + s % 5;
    record("least_squares", rs::estimate_ratios(rs::SupportObjective(
                                random_design(30, d, rs::LossKind::kLeastSquares, 8000 + s))));
  }
  for (std::uint64_t s = 0; s < 20; ++s) {
    const std::size_t d = 4 + s % 3;
    record("logistic", rs::estimate_ratios(rs::SupportObjective(
                           random_design(40, d, rs::LossKind::kLogistic, 9000 + s))));
  }
  for (std::uint64_t s = 0; s < 100; ++s) {
    const std::size_t n_candidates = 4 + s % 5;
    record("gp", rs::estimate_ratios(rs::VarianceReductionObjective(
                     random_gp_problem(n_candidates + 3, 3, 2, 0.5, 10000 + s))));
  }
  const double elapsed = seconds_since(start);
  const bool pass = checked >= 500 && failed == 0 && elapsed <= kRatioBudgetSeconds;
  return {pass, fmt::format("{} oracles ({} random, {} least-squares, {} logistic, {} gp), {} violations, {:.1f} s",
                            checked, by_kind["random"], by_kind["least_squares"], by_kind["logistic"], by_kind["gp"],
                            failed, elapsed)};
}

Outcome submodular_factor() {
  rs::BoundInputs in;
  in.variant = rs::BoundVariant::kAsymptotic;
  const double factor = rs::bound_factor(in).factor;
  const auto surface = rs::guarantee_surface({1.0}, {1.0});
  const double corner = surface.front().factor;
  const bool pass = std::abs(factor - kAsymptoticTarget) <= kAsymptoticTolerance &&
                    std::abs(corner - kAsymptoticTarget) <= kAsymptoticTolerance;
  return {pass, fmt::format("asymptotic factor {:.6f}, surface corner {:.6f}", factor, corner)};
}

Outcome greedy_prefix() {
  std::size_t instances = 0, violations = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto family = rs::kAllOracleFamilies[s % rs::kAllOracleFamilies.size()];
    const std::size_t n = 6 + s % 3;
    const std::size_t k = 3 + (s / 3) % 3;
    const rs::TableOracle f = rs::random_monotone_oracle(family, n, 20000 + s);
    const double gamma = rs::estimate_ratios(f).gamma;
    std::vector<rs::ItemIndex> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    const double opt = rs::brute_force_opt(f, all, k).value;
    const rs::Solution sol = rs::greedy(f, k);
    rs::ItemSet prefix;
    ++instances;
    for (std::size_t l = 1; l <= k; ++l) {
      prefix.insert(sol.selected.items()[l - 1]);
      const double value = f(prefix);
      const double bound = rs::greedy_guarantee(gamma, l, k) * opt;
      worst = std::min(worst, value - bound);
      if (value < bound - 1e-12 * std::max(1.0, opt)) ++violations;
    }
  }
  return {violations == 0, fmt::format("{} instances, {} violations, min slack {:.6g}", instances, violations, worst)};
}

Outcome envelopes() {
  std::size_t support_fail = 0;
  double support_worst = std::numeric_limits<double>::infinity();
  for (std::uint64_t s = 0; s < 50; ++s) {
    const std::size_t d = 3 + s % 6;
    const rs::DesignProblem problem = random_design(25, d, rs::LossKind::kLeastSquares, 30000 + s);
    const double lb = rs::regularity_constants(problem).ratio_lb;
    const rs::RatioEstimates r = rs::estimate_ratios(rs::SupportObjective(problem));
    const double slack = std::min(r.gamma, r.gamma_check) - lb;
    support_worst = std::min(support_worst, slack);
    if (slack < -kEnvelopeTolerance) ++support_fail;
  }
  std::size_t gp_fail = 0;
  double gp_worst = -std::numeric_limits<double>::infinity();
  for (std::uint64_t s = 0; s < 50; ++s) {
    const rs::GpProblem problem = random_gp_problem(10, 3, 2, 1.0, 40000 + s);
    const double bound = rs::curvature_bound(problem);
    const rs::RatioEstimates r = rs::estimate_ratios(rs::VarianceReductionObjective(problem));
    const double excess = std::max(r.alpha, r.alpha_check) - bound;
    gp_worst = std::max(gp_worst, excess);
    if (excess > kEnvelopeTolerance) ++gp_fail;
  }
  return {support_fail == 0 && gp_fail == 0,
          fmt::format("least-squares gamma/gamma_check >= m/L: {}/50 fail (min slack {:.3g}); "
                      "gp alpha/alpha_check <= k_max/(noise+k_max): {}/50 fail (max excess {:.3g})",
                      support_fail, support_worst, gp_fail, gp_worst)};
}

Outcome counterexample() {
  double worst = 0.0;
  bool strict = true;
  const double noise = 1.0;
  for (double z : {0.1, 0.3, 0.5, 0.9}) {
    const rs::VarianceReductionObjective f(rs::nonsubmodular_fixture(z, noise));
    const double single = std::pow(z, 4) / (1.0 + noise);
    const double pair = std::pow(z, 4) * (1.0 + noise) / ((1.0 + noise) * (1.0 + noise) - (1.0 - z * z));
    const double f2 = f(rs::ItemSet{1});
    const double f12 = f(rs::ItemSet{0, 1});
    const double f1 = f(rs::ItemSet{0});
    worst = std::max({worst, std::abs(f2 - single), std::abs(f12 - pair)});
    if (!(f12 - f2 > f1) || std::abs(f1) > kFixtureTolerance) strict = false;
  }
  return {worst <= kFixtureTolerance && strict,
          fmt::format("max closed-form error {:.3g}, conditional gain strictly positive with zero singleton: {}",
                      worst, strict ? "yes" : "no")};
}

Outcome block_form() {
  double worst = 0.0;
  rs::CounterRng rng(50000);
  for (std::uint64_t s = 0; s < 200; ++s) {
    const rs::GpProblem problem = random_gp_problem(12, 3, 3, 0.1 + 0.9 * rs::uniform01(rng), 50000 + s);
    rs::ItemSet omega, base;
    for (rs::ItemIndex i = 3; i < 12; ++i) {
      const auto pick = rs::uniform_index(rng, 3);
      if (pick == 0) omega.insert(i);
      if (pick == 1) base.insert(i);
    }
    if (omega.empty()) omega.insert(3 + rs::uniform_index(rng, 9));
    for (rs::ItemIndex i : omega) base.erase(i);
    rs::ItemSet joint = base;
    for (rs::ItemIndex i : omega) joint.insert(i);
    const double direct = rs::variance_reduction(problem, joint) - rs::variance_reduction(problem, base);
    const double block = rs::variance_reduction_block(problem, omega, base);
    const double scale = std::max({std::abs(direct), std::abs(block), 1e-300});
    worst = std::max(worst, std::abs(direct - block) / scale);
  }
  return {worst <= kBlockRelativeTolerance, fmt::format("200 pairs, max relative disagreement {:.3g}", worst)};
}

rs::ExperimentConfig ordering_config() {
  return rs::parse_experiment_config(rs::Json::parse(R"({
    "objective": "support_linear",
    "data": {"preset": "desk_linear"},
    "solvers": [
      {"name": "greedy"},
      {"name": "oblivious"},
      {"name": "oblivious_greedy", "beta": 1}
    ],
    "k_grid": [10, 20, 30, 40, 50, 60],
    "tau": {"fraction": [0.15, 0.3]},
    "repetitions": 20,
    "seed": 2024,
    "output_dir": "acceptance_ordering"
  })"));
}

Outcome experiment_ordering() {
  const rs::ExperimentConfig config = ordering_config();
  const auto start = std::chrono::steady_clock::now();
  const rs::ExperimentResult result = rs::run_experiment(config);
  const double elapsed = seconds_since(start);

  // values[tau label][k][solver] -> per-repetition robust values
  std::map<std::string, std::map<std::size_t, std::map<std::string, std::map<std::size_t, double>>>> values;
  for (const rs::ResultRow& r : result.rows) values[r.tau_setting][r.k][r.solver][r.repetition] = r.robust_value;

  bool ordered = true;
  std::vector<std::string> notes;
  std::map<std::string, std::vector<double>> gaps;
  for (const auto& [tau, per_k] : values) {
    for (const auto& [k, per_solver] : per_k) {
      if (per_solver.size() < 3) continue;
      auto med = [&](const std::string& solver) {
        std::vector<double> v;
        for (const auto& [rep, value] : per_solver.at(solver)) v.push_back(value);
        return median(v);
      };
      const double og = med("oblivious_greedy");
      const double g = med("greedy");
      const double o = med("oblivious");
      if (og < g || og < o) {
        ordered = false;
        notes.push_back(fmt::format("tau={} k={}: og {:.4g} greedy {:.4g} oblivious {:.4g}", tau, k, og, g, o));
      }
      for (const auto& [rep, value] : per_solver.at("oblivious_greedy")) {
        const auto it = per_solver.at("greedy").find(rep);
        if (it != per_solver.at("greedy").end()) gaps[tau].push_back(value - it->second);
      }
    }
  }
  const double gap_low = median(gaps["0.15k"]);
  const double gap_high = median(gaps["0.3k"]);
  const bool widens = gap_high > gap_low;
  const bool pass = ordered && widens && elapsed <= kExperimentBudgetSeconds && !result.rows.empty();
  std::string detail = fmt::format("{} rows, median og-greedy gap {:.4g} at 0.15k vs {:.4g} at 0.3k, {:.1f} s",
                                   result.rows.size(), gap_low, gap_high, elapsed);
  for (const auto& n : notes) detail += "; " + n;
  return {pass, detail};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ROBUSTSEL_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome manifest_determinism() {
  const fs::path dir = fs::current_path() / "acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "config.json") << R"({
    "objective": "support_linear",
    "data": {"preset": "desk_linear", "n_train": 60, "n_test": 40, "d": 20, "sparsity": 6},
    "solvers": [
      {"name": "greedy"},
      {"name": "oblivious_greedy", "beta": 2},
      {"name": "stochastic_greedy", "epsilon": 0.1},
      {"name": "random_greedy"},
      {"name": "omp"}
    ],
    "k_grid": [4, 8],
    "tau": {"fixed": [1, 2]},
    "repetitions": 2,
    "seed": 77
  })";
  const int first = run_cli(fmt::format("run --config {} --out {}", (dir / "config.json").string(), (dir / "seed").string()));
  const fs::path manifest = dir / "seed" / "manifest.json";
  const int a = run_cli(fmt::format("run --config {} --out {}", manifest.string(), (dir / "a").string()));
  const int b = run_cli(fmt::format("run --config {} --out {}", manifest.string(), (dir / "b").string()));
  const std::string ra = slurp(dir / "a" / "results.csv");
  const std::string rb = slurp(dir / "b" / "results.csv");
  const bool pass = first == 0 && a == 0 && b == 0 && !ra.empty() && ra == rb;
  return {pass, fmt::format("exit codes {}/{}/{}, results.csv {} bytes, identical: {}", first, a, b, ra.size(),
                            ra == rb ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"AC1 finite-k robust bound certification", finite_k_certification},
      {"AC2 ratio ordering and bipartite chains", ratio_chains},
      {"AC3 submodular asymptotic factor", submodular_factor},
      {"AC4 greedy prefix guarantee", greedy_prefix},
      {"AC5 regularity and curvature envelopes", envelopes},
      {"AC6 variance-reduction counterexample", counterexample},
      {"AC7 block-form variance reduction", block_form},
      {"AC8 experiment ordering on desk-scale linear data", experiment_ordering},
      {"AC9 manifest rerun determinism", manifest_determinism},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome out;
    try {
      out = check();
    } catch (const std::exception& e) {
      out = {false, std::string("error: ") + e.what()};
    }
    if (!out.pass) ++failures;
    std::cout << (out.pass ? "[PASS] " : "[FAIL] ") << name << ": " << out.detail << std::endl;
  }
  std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
