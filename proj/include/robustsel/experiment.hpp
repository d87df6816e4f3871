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


#ifndef ROBUSTSEL_EXPERIMENT_HPP_
#define ROBUSTSEL_EXPERIMENT_HPP_

#include <Eigen/Core>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "robustsel/adversary.hpp"
#include "robustsel/config.hpp"
#include "robustsel/csv.hpp"
#include "robustsel/errors.hpp"
#include "robustsel/gp_objective.hpp"
#include "robustsel/instances.hpp"
#include "robustsel/ratios.hpp"
#include "robustsel/rng.hpp"
#include "robustsel/set_core.hpp"
#include "robustsel/solvers.hpp"
#include "robustsel/support_objective.hpp"
#include "robustsel/synth_data.hpp"

namespace robustsel {

inline constexpr std::string_view kLibraryVersion = "0.1.0";

// Seed streams derived from a repetition seed.
inline constexpr std::uint64_t kSeedData = 1;
inline constexpr std::uint64_t kSeedSplit = 2;
inline constexpr std::uint64_t kSeedOracle = 3;
inline constexpr std::uint64_t kSeedSolver = 100;
inline constexpr std::uint64_t kSeedAdversary = 200;

inline std::uint64_t repetition_seed(std::uint64_t seed, std::size_t repetition) {
  return derive_seed(seed, repetition);
}

inline std::uint64_t cell_seed(std::uint64_t rep_seed, std::uint64_t purpose, std::size_t solver_index,
                               std::size_t tau_index, std::size_t k) {
  return derive_seed(derive_seed(derive_seed(rep_seed, purpose + 1000 * solver_index), tau_index), k);
}

// A constructed objective plus whatever held-out data it can be scored on.
struct BuiltObjective {
  std::shared_ptr<const SetFunction> f;
  std::shared_ptr<const SupportObjective> support;  // support objectives only
  std::shared_ptr<const VarianceReductionObjective> gp;
  Eigen::MatrixXd X_test;
  Eigen::VectorXd y_test;
};

inline BuiltObjective build_objective(const ExperimentConfig& c, std::uint64_t rep_seed) {
  BuiltObjective out;
  switch (c.objective) {
    case ObjectiveKind::kSupportLinear:
    case ObjectiveKind::kSupportLogistic: {
      Eigen::MatrixXd X;
      Eigen::VectorXd y;
      if (c.data.source == DataConfig::Source::kCsv) {
        DenseData train = read_dense_csv(c.data.train_csv);
        X = std::move(train.X);
        y = std::move(train.y);
        if (!c.data.test_csv.empty()) {
          DenseData test = read_dense_csv(c.data.test_csv);
          if (test.X.cols() != X.cols()) throw ConfigError("data.test: column count differs from data.train");
          out.X_test = std::move(test.X);
          out.y_test = std::move(test.y);
        }
      } else {
        SynthSpec spec = c.data.synth;
        spec.seed = derive_seed(rep_seed, kSeedData);
        Dataset ds = make_dataset(spec);
        X = std::move(ds.X_train);
        y = std::move(ds.y_train);
        out.X_test = std::move(ds.X_test);
        out.y_test = std::move(ds.y_test);
      }
      const LossKind loss =
          c.objective == ObjectiveKind::kSupportLinear ? LossKind::kLeastSquares : LossKind::kLogistic;
      DesignProblem problem{std::move(X), std::move(y), loss, c.ridge_or_default()};
      try {
        problem.validate();
      } catch (const ParameterError& e) {
        throw ConfigError(std::string("data: ") + e.what());
      }
      out.support = std::make_shared<SupportObjective>(std::move(problem));
      out.f = out.support;
      break;
    }
    case ObjectiveKind::kGpVarianceReduction: {
      GpProblem problem;
      if (c.data.source == DataConfig::Source::kCsv) {
        problem.points = read_dense_csv(c.data.train_csv).X;
      } else {
        problem.points = autoregressive_matrix(c.data.synth.n_train, c.data.synth.d, c.data.synth.ar_alpha_sq,
                                               derive_seed(derive_seed(rep_seed, kSeedData), kStreamDesign));
      }
      problem.kernel.kind = c.gp.kernel;
      problem.kernel.lengthscale = c.gp.lengthscale;
      problem.kernel.output_variance = c.gp.output_variance;
      problem.noise = c.gp.noise;
      auto [targets, candidates] =
          random_half_split(static_cast<std::size_t>(problem.points.rows()), derive_seed(rep_seed, kSeedSplit));
      problem.targets = std::move(targets);
      problem.candidates = std::move(candidates);
      out.gp = std::make_shared<VarianceReductionObjective>(std::move(problem));
      out.f = out.gp;
      break;
    }
    case ObjectiveKind::kToy: {
      const std::vector<double> w = c.toy_weights;
      out.f = std::make_shared<FunctionOracle>(w.size(), [w](std::span<const ItemIndex> items) {
        double s = 0.0;
        for (ItemIndex i : items) s += w[i];
        return s;
      });
      break;
    }
    case ObjectiveKind::kRandomMonotone:
      out.f = std::make_shared<TableOracle>(
          random_monotone_oracle(c.random_family, c.random_n, derive_seed(rep_seed, kSeedOracle)));
      break;
  }
  return out;
}

struct ResultRow {
  std::string solver;
  double beta = 1.0;
  std::string tau_setting;
  std::size_t k = 0;
  std::size_t tau = 0;
  std::size_t repetition = 0;
  double robust_value = 0.0;
  double clean_value = 0.0;
  std::optional<double> test_mse;
  std::optional<double> test_r2;
  std::optional<double> test_accuracy;
  std::uint64_t oracle_evals = 0;
  std::string adversary;  // ensemble member attaining the minimum
  double wall_time = 0.0;
};

struct SkippedCell {
  std::string solver;
  std::string tau_setting;
  std::size_t k = 0;
  std::size_t tau = 0;
  std::size_t repetition = 0;
  std::string reason;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::vector<SkippedCell> skipped;
  Json manifest;
};

struct RunOptions {
  std::size_t threads = 1;
};

namespace detail {

// Runs fn(i) for i in [0, count) on up to `threads` workers; rethrows the
// exception of the lowest failing index.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn fn) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n_workers = std::max<std::size_t>(1, std::min(threads, count));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

inline std::string skip_reason(const ExperimentConfig& c, const SolverEntry& solver, const BuiltObjective& obj,
                               std::size_t k, std::size_t tau) {
  const std::size_t n = obj.f->ground_size();
  if (k > n) return fmt::format("k = {} exceeds the ground set size {}", k, n);
  if (solver.kind == SolverKind::kObliviousGreedy && oblivious_size(solver.beta, tau) > k) {
    return fmt::format("ceil(beta * tau) = {} exceeds k = {}", oblivious_size(solver.beta, tau), k);
  }
  if (solver.kind == SolverKind::kOmp && !obj.support) {
    return fmt::format("omp needs a differentiable objective ({} is not)", objective_name(c.objective));
  }
  return {};
}

inline std::string compiler_id() {
#if defined(__clang__)
  return fmt::format("clang {}.{}.{}", __clang_major__, __clang_minor__, __clang_patchlevel__);
#elif defined(__GNUC__)
  return fmt::format("gcc {}.{}.{}", __GNUC__, __GNUC_MINOR__, __GNUC_PATCHLEVEL__);
#else
  return "unknown";
#endif
}

}  // namespace detail

inline Json version_info() {
  return {{"robustsel", std::string(kLibraryVersion)},
          {"rng", std::string(kRngAlgorithm)},
          {"eigen", fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION)},
          {"nlohmann_json", fmt::format("{}.{}.{}", NLOHMANN_JSON_VERSION_MAJOR, NLOHMANN_JSON_VERSION_MINOR,
                                        NLOHMANN_JSON_VERSION_PATCH)},
          {"fmt", FMT_VERSION},
          {"compiler", detail::compiler_id()}};
}

// Every (repetition, tau, solver, k) cell: solve, attack with the adversary
// ensemble, and score. Rows come back in (tau, solver, k, repetition) order
// regardless of the thread count.
inline ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {}) {
  config.validate();
  const std::size_t reps = config.repetitions;
  std::vector<std::uint64_t> rep_seeds(reps);
  for (std::size_t r = 0; r < reps; ++r) rep_seeds[r] = repetition_seed(config.seed, r);

  std::vector<BuiltObjective> objectives(reps);
  detail::parallel_for(reps, options.threads, [&](std::size_t r) { objectives[r] = build_objective(config, rep_seeds[r]); });

  const std::size_t n_tau = config.taus.size();
  const std::size_t n_solver = config.solvers.size();
  const std::size_t n_k = config.k_grid.size();
  const std::size_t n_cells = n_tau * n_solver * n_k * reps;
  struct CellOutcome {
    std::optional<ResultRow> row;
    std::optional<SkippedCell> skip;
  };
  std::vector<CellOutcome> cells(n_cells);

  detail::parallel_for(n_cells, options.threads, [&](std::size_t cell) {
    std::size_t rest = cell;
    const std::size_t r = rest % reps;
    rest /= reps;
    const std::size_t ki = rest % n_k;
    rest /= n_k;
    const std::size_t si = rest % n_solver;
    const std::size_t ti = rest / n_solver;

    const SolverEntry& solver = config.solvers[si];
    const TauSetting& tau_setting = config.taus[ti];
    const std::size_t k = config.k_grid[ki];
    const std::size_t tau = tau_setting.tau_for(k);
    const BuiltObjective& obj = objectives[r];

    const std::string reason = detail::skip_reason(config, solver, obj, k, tau);
    if (!reason.empty()) {
      cells[cell].skip = SkippedCell{solver.label, tau_setting.label(), k, tau, r, reason};
      return;
    }
    const auto start = std::chrono::steady_clock::now();
    SolverParams params;
    params.k = k;
    params.tau = tau;
    params.beta = solver.beta;
    params.epsilon = solver.epsilon;
    params.seed = cell_seed(rep_seeds[r], kSeedSolver, si, ti, k);
    const Solution sol = run_solver(solver.kind, *obj.f, params);
    const AdversaryReport attack =
        evaluate_robust(*obj.f, sol.selected, tau,
                        config.adversaries.to_config(cell_seed(rep_seeds[r], kSeedAdversary, si, ti, k)));

    ResultRow row;
    row.solver = solver.label;
    row.beta = solver.beta;
    row.tau_setting = tau_setting.label();
    row.k = k;
    row.tau = tau;
    row.repetition = r;
    row.robust_value = attack.ensemble_min;
    row.clean_value = (*obj.f)(sol.selected);
    row.oracle_evals = sol.evals;
    row.adversary = attack.ensemble_witness;
    if (obj.support && obj.X_test.rows() > 0) {
      const ItemSet survivors = sol.selected.without(attack.witness_removed);
      const RestrictedFit fit = obj.support->fit(survivors.items());
      const TestMetrics m = evaluate_fit(obj.support->problem().loss, obj.X_test, obj.y_test, fit.x);
      if (obj.support->problem().loss == LossKind::kLeastSquares) {
        row.test_mse = m.mse;
        row.test_r2 = m.r2;
      } else {
        row.test_accuracy = m.accuracy;
      }
    }
    row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    cells[cell].row = std::move(row);
  });

  ExperimentResult result;
  for (CellOutcome& c : cells) {
    if (c.row) result.rows.push_back(std::move(*c.row));
    if (c.skip) result.skipped.push_back(std::move(*c.skip));
  }
  Json skips = Json::array();
  for (const SkippedCell& s : result.skipped) {
    skips.push_back({{"solver", s.solver},
                     {"tau_setting", s.tau_setting},
                     {"k", s.k},
                     {"tau", s.tau},
                     {"repetition", s.repetition},
                     {"reason", s.reason}});
  }
  result.manifest = {{"manifest_version", kManifestVersion},
                     {"config", experiment_config_to_json(config)},
                     {"repetition_seeds", rep_seeds},
                     {"versions", version_info()},
                     {"row_count", result.rows.size()},
                     {"skipped", skips}};
  return result;
}

namespace detail {

inline std::string optional_number(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

}  // namespace detail

inline void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << "solver,beta,tau_setting,k,tau,repetition,robust_value,clean_value,test_mse,test_r2,test_accuracy,"
        "oracle_evals,adversary\n";
  for (const ResultRow& r : rows) {
    os << r.solver << ',' << format_number(r.beta) << ',' << r.tau_setting << ',' << r.k << ',' << r.tau << ','
       << r.repetition << ',' << format_number(r.robust_value) << ',' << format_number(r.clean_value) << ','
       << detail::optional_number(r.test_mse) << ',' << detail::optional_number(r.test_r2) << ','
       << detail::optional_number(r.test_accuracy) << ',' << r.oracle_evals << ',' << r.adversary << '\n';
  }
}

inline void write_timings_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << "solver,tau_setting,k,repetition,wall_time\n";
  for (const ResultRow& r : rows) {
    os << r.solver << ',' << r.tau_setting << ',' << r.k << ',' << r.repetition << ',' << format_number(r.wall_time)
       << '\n';
  }
}

inline void write_skipped_csv(std::ostream& os, const std::vector<SkippedCell>& skipped) {
  os << "solver,tau_setting,k,tau,repetition,reason\n";
  for (const SkippedCell& s : skipped) {
    os << s.solver << ',' << s.tau_setting << ',' << s.k << ',' << s.tau << ',' << s.repetition << ",\"" << s.reason
       << "\"\n";
  }
}

enum class Metric { kRobustValue, kCleanValue, kTestMse, kTestR2, kTestAccuracy };

inline std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::kRobustValue: return "robust_value";
    case Metric::kCleanValue: return "clean_value";
    case Metric::kTestMse: return "test_mse";
    case Metric::kTestR2: return "test_r2";
    case Metric::kTestAccuracy: return "test_accuracy";
  }
  return "unknown";
}

inline std::optional<double> metric_of(const ResultRow& r, Metric m) {
  switch (m) {
    case Metric::kRobustValue: return r.robust_value;
    case Metric::kCleanValue: return r.clean_value;
    case Metric::kTestMse: return r.test_mse;
    case Metric::kTestR2: return r.test_r2;
    case Metric::kTestAccuracy: return r.test_accuracy;
  }
  return std::nullopt;
}

struct PlotRow {
  std::string solver;
  std::size_t k = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for a single value
  std::size_t count = 0;
};

// Mean and spread of one metric over repetitions, per (solver, k). Solvers keep
// their order of first appearance; k is ascending.
inline std::vector<PlotRow> plot_rows(const std::vector<ResultRow>& rows, Metric metric,
                                      const std::optional<std::string>& tau_setting = std::nullopt) {
  std::vector<std::string> solver_order;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<double>> groups;
  for (const ResultRow& r : rows) {
    if (tau_setting && r.tau_setting != *tau_setting) continue;
    const auto v = metric_of(r, metric);
    if (!v) continue;
    auto it = std::find(solver_order.begin(), solver_order.end(), r.solver);
    const auto si = static_cast<std::size_t>(it - solver_order.begin());
    if (it == solver_order.end()) solver_order.push_back(r.solver);
    groups[{si, r.k}].push_back(*v);
  }
  std::vector<PlotRow> out;
  for (const auto& [key, values] : groups) {
    PlotRow p;
    p.solver = solver_order[key.first];
    p.k = key.second;
    p.count = values.size();
    double sum = 0.0;
    for (double v : values) sum += v;
    p.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
      double ss = 0.0;
      for (double v : values) ss += (v - p.mean) * (v - p.mean);
      p.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    out.push_back(std::move(p));
  }
  return out;
}

inline std::string plot_csv(const std::vector<PlotRow>& rows) {
  std::ostringstream os;
  os << "solver,k,mean,stddev\n";
  for (const PlotRow& p : rows) {
    os << p.solver << ',' << p.k << ',' << format_number(p.mean) << ',' << format_number(p.stddev) << '\n';
  }
  return os.str();
}

// One long-format CSV per (metric, tau setting), keyed by file name.
inline std::vector<std::pair<std::string, std::string>> emit_plot_data(const std::vector<ResultRow>& rows,
                                                                       const std::vector<std::string>& tau_settings) {
  std::vector<std::pair<std::string, std::string>> files;
  for (Metric m : {Metric::kRobustValue, Metric::kCleanValue, Metric::kTestMse, Metric::kTestR2,
                   Metric::kTestAccuracy}) {
    const bool always = m == Metric::kRobustValue || m == Metric::kCleanValue;
    const bool present =
        std::any_of(rows.begin(), rows.end(), [&](const ResultRow& r) { return metric_of(r, m).has_value(); });
    if (!always && !present) continue;
    for (const std::string& t : tau_settings) {
      files.emplace_back(fmt::format("plot_{}_tau{}.csv", metric_name(m), t), plot_csv(plot_rows(rows, m, t)));
    }
  }
  return files;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("failed writing " + path.string());
}

inline std::vector<std::string> tau_labels(const ExperimentConfig& config) {
  std::vector<std::string> out;
  for (const TauSetting& t : config.taus) out.push_back(t.label());
  return out;
}

// results.csv is a pure function of the config; wall times live in timings.csv.
inline void write_experiment_outputs(const ExperimentConfig& config, const ExperimentResult& result,
                                     const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ostringstream results, timings, skipped;
  write_results_csv(results, result.rows);
  write_timings_csv(timings, result.rows);
  write_skipped_csv(skipped, result.skipped);
  write_text_file(dir / "results.csv", results.str());
  write_text_file(dir / "timings.csv", timings.str());
  write_text_file(dir / "skipped.csv", skipped.str());
  write_text_file(dir / "manifest.json", result.manifest.dump(2) + "\n");
  for (const auto& [name, content] : emit_plot_data(result.rows, tau_labels(config))) {
    write_text_file(dir / name, content);
  }
}

// ---------------------------------------------------------------------------
// Bound certification on small random instances.

struct CertifyConfig {
  std::vector<std::size_t> ns{6, 7, 8};
  std::vector<std::size_t> ks{3, 4, 5};
  std::vector<std::size_t> taus{1, 2};
  std::vector<double> betas{1.5, 2.0};
  std::vector<OracleFamily> families{kAllOracleFamilies.begin(), kAllOracleFamilies.end()};
  std::size_t oracles_per_cell = 2;  // per (family, n)
  std::uint64_t seed = 0;
  BoundVariant variant = BoundVariant::kFiniteK;
};

struct CertifyInstance {
  std::string family;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t tau = 0;
  double beta = 1.0;
  std::uint64_t oracle_seed = 0;
  RatioEstimates ratios;
  ItemSet selected;
  ItemSet removed;
  double robust_value = 0.0;
  double opt_value = 0.0;
  double factor = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  bool holds = true;
};

struct CertifyReport {
  std::vector<CertifyInstance> instances;
  std::size_t violations = 0;
  double min_margin = 0.0;
  bool passed() const { return violations == 0; }
};

inline CertifyConfig parse_certify_config(const Json& j) {
  CertifyConfig c;
  detail::reject_unknown_keys(j, {"n", "k", "tau", "beta", "families", "oracles_per_cell", "seed", "variant"},
                              "certify");
  detail::read_optional(j, "n", "certify", c.ns);
  detail::read_optional(j, "k", "certify", c.ks);
  detail::read_optional(j, "tau", "certify", c.taus);
  detail::read_optional(j, "beta", "certify", c.betas);
  detail::read_optional(j, "oracles_per_cell", "certify", c.oracles_per_cell);
  detail::read_optional(j, "seed", "certify", c.seed);
  if (j.contains("families")) {
    c.families.clear();
    for (const auto& name : detail::get_field<std::vector<std::string>>(j, "families", "certify")) {
      const auto f = parse_family(name);
      if (!f) throw ConfigError("certify.families: unknown family '" + name + "'");
      c.families.push_back(*f);
    }
  }
  if (j.contains("variant")) {
    const auto name = detail::get_field<std::string>(j, "variant", "certify");
    if (name == bound_variant_name(BoundVariant::kFiniteK)) {
      c.variant = BoundVariant::kFiniteK;
    } else if (name == bound_variant_name(BoundVariant::kSuperadditiveFiniteK)) {
      c.variant = BoundVariant::kSuperadditiveFiniteK;
    } else {
      throw ConfigError("certify.variant: expected a finite-k variant");
    }
  }
  for (std::size_t n : c.ns) {
    if (n == 0 || n > kMaxRatioItems) throw ConfigError("certify.n: values must lie in 1..12");
  }
  for (double b : c.betas) {
    if (!(b > 0.0)) throw ConfigError("certify.beta: values must be > 0");
  }
  return c;
}

// For every oracle and feasible (k, tau, beta): run Oblivious-Greedy, find the
// exact worst removal E*, brute-force the optimum of size k - tau on V \ E*,
// and compare the realized robust value with the guarantee.
inline CertifyReport certify_bounds(const CertifyConfig& config, std::size_t threads = 1) {
  struct Job {
    OracleFamily family;
    std::size_t n;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  std::uint64_t counter = 0;
  for (OracleFamily fam : config.families) {
    for (std::size_t n : config.ns) {
      for (std::size_t j = 0; j < config.oracles_per_cell; ++j) jobs.push_back({fam, n, derive_seed(config.seed, counter++)});
    }
  }
  std::vector<std::vector<CertifyInstance>> per_job(jobs.size());
  detail::parallel_for(jobs.size(), threads, [&](std::size_t ji) {
    const Job& job = jobs[ji];
    const TableOracle f = random_monotone_oracle(job.family, job.n, job.seed);
    const RatioEstimates ratios = estimate_ratios(f);
    for (std::size_t k : config.ks) {
      if (k > job.n) continue;
      for (std::size_t tau : config.taus) {
        if (tau >= k) continue;
        for (double beta : config.betas) {
          if (oblivious_size(beta, tau) > k) continue;
          CertifyInstance inst;
          inst.family = std::string(family_name(job.family));
          inst.n = job.n;
          inst.k = k;
          inst.tau = tau;
          inst.beta = beta;
          inst.oracle_seed = job.seed;
          inst.ratios = ratios;
          inst.selected = oblivious_greedy(f, {k, tau, beta, 0.01, 0}).selected;
          const Removal worst = brute_force_min(f, inst.selected, tau);
          inst.removed = worst.removed;
          inst.robust_value = worst.residual;
          std::vector<ItemIndex> pool;
          for (ItemIndex i = 0; i < job.n; ++i) {
            if (!worst.removed.contains(i)) pool.push_back(i);
          }
          inst.opt_value = brute_force_opt(f, pool, k - tau).value;
          BoundInputs in;
          in.k = k;
          in.tau = tau;
          in.beta = beta;
          in.gamma = ratios.gamma;
          in.theta = ratios.theta;
          in.nu_check = ratios.nu_check;
          in.alpha_check = ratios.alpha_check;
          in.nu = ratios.nu;
          in.variant = config.variant;
          inst.factor = bound_factor(in).factor;
          inst.bound = inst.factor * inst.opt_value;
          inst.margin = inst.robust_value - inst.bound;
          inst.holds = inst.margin >= -1e-12 * std::max(1.0, std::abs(inst.opt_value));
          per_job[ji].push_back(std::move(inst));
        }
      }
    }
  });
  CertifyReport report;
  bool first = true;
  for (auto& batch : per_job) {
    for (CertifyInstance& inst : batch) {
      if (!inst.holds) ++report.violations;
      if (first || inst.margin < report.min_margin) report.min_margin = inst.margin;
      first = false;
      report.instances.push_back(std::move(inst));
    }
  }
  return report;
}

inline Json ratios_to_json(const RatioEstimates& r) {
  return {{"gamma", r.gamma},       {"gamma_check", r.gamma_check}, {"alpha", r.alpha},
          {"alpha_check", r.alpha_check}, {"nu", r.nu},             {"nu_check", r.nu_check},
          {"theta", r.theta}};
}

inline Json certify_report_to_json(const CertifyReport& report) {
  Json instances = Json::array();
  for (const CertifyInstance& i : report.instances) {
    instances.push_back({{"family", i.family},
                         {"n", i.n},
                         {"k", i.k},
                         {"tau", i.tau},
                         {"beta", i.beta},
                         {"oracle_seed", i.oracle_seed},
                         {"ratios", ratios_to_json(i.ratios)},
                         {"selected", i.selected.sorted()},
                         {"removed", i.removed.sorted()},
                         {"robust_value", i.robust_value},
                         {"opt_value", i.opt_value},
                         {"factor", i.factor},
                         {"bound", i.bound},
                         {"margin", i.margin},
                         {"holds", i.holds}});
  }
  return {{"instances", instances},
          {"instance_count", report.instances.size()},
          {"violations", report.violations},
          {"min_margin", report.min_margin},
          {"passed", report.passed()}};
}

// Exhaustive ratio report for a small objective built from an experiment config
// (repetition 0).
inline Json ratio_report(const ExperimentConfig& config) {
  const BuiltObjective obj = build_objective(config, repetition_seed(config.seed, 0));
  if (obj.f->ground_size() > kMaxRatioItems) {
    throw ConfigError(fmt::format("ratios: ground set has {} items, at most {} are supported", obj.f->ground_size(),
                                  kMaxRatioItems));
  }
  const RatioEstimates r = estimate_ratios(*obj.f);
  Json out = {{"objective", std::string(objective_name(config.objective))},
              {"ground_size", obj.f->ground_size()},
              {"ratios", ratios_to_json(r)},
              {"pairs_checked", r.n_pairs_checked},
              {"ordering_holds", r.satisfies_ordering()},
              {"bipartite_holds", r.satisfies_bipartite()}};
  if (obj.support) {
    const RegularityConstants rc = regularity_constants(obj.support->problem());
    out["regularity"] = {{"m", rc.m}, {"L", rc.L}, {"ratio_lower_bound", rc.ratio_lb}};
  }
  if (obj.gp) {
    out["curvature_upper_bound"] = curvature_bound(obj.gp->problem());
  }
  return out;
}

}  // namespace robustsel

#endif  // ROBUSTSEL_EXPERIMENT_HPP_
