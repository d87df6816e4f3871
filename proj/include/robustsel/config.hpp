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


#ifndef ROBUSTSEL_CONFIG_HPP_
#define ROBUSTSEL_CONFIG_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "robustsel/adversary.hpp"
#include "robustsel/errors.hpp"
#include "robustsel/gp_objective.hpp"
#include "robustsel/instances.hpp"
#include "robustsel/solvers.hpp"
#include "robustsel/support_objective.hpp"
#include "robustsel/synth_data.hpp"

namespace robustsel {

using Json = nlohmann::json;

inline constexpr int kManifestVersion = 1;

enum class ObjectiveKind { kSupportLinear, kSupportLogistic, kGpVarianceReduction, kToy, kRandomMonotone };

inline std::string_view objective_name(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::kSupportLinear: return "support_linear";
    case ObjectiveKind::kSupportLogistic: return "support_logistic";
    case ObjectiveKind::kGpVarianceReduction: return "gp_variance_reduction";
    case ObjectiveKind::kToy: return "toy";
    case ObjectiveKind::kRandomMonotone: return "random_monotone";
  }
  return "unknown";
}

inline std::optional<ObjectiveKind> parse_objective(std::string_view name) {
  for (ObjectiveKind k : {ObjectiveKind::kSupportLinear, ObjectiveKind::kSupportLogistic,
                          ObjectiveKind::kGpVarianceReduction, ObjectiveKind::kToy, ObjectiveKind::kRandomMonotone}) {
    if (objective_name(k) == name) return k;
  }
  return std::nullopt;
}

struct DataConfig {
  enum class Source { kSynthetic, kCsv };
  Source source = Source::kSynthetic;
  SynthSpec synth = SynthSpec::desk_linear();  // seed is replaced per repetition
  std::string train_csv;
  std::string test_csv;  // optional

  bool operator==(const DataConfig&) const = default;
};

struct GpConfig {
  KernelKind kernel = KernelKind::kMatern32;
  double lengthscale = 1.0;
  double output_variance = 1.0;
  double noise = 1.0;

  bool operator==(const GpConfig&) const = default;
};

struct SolverEntry {
  SolverKind kind = SolverKind::kGreedy;
  double beta = 1.0;
  double epsilon = 0.01;
  std::string label;

  bool operator==(const SolverEntry&) const = default;
};

// Deletion budget per k: a fixed count, or floor(fraction * k).
struct TauSetting {
  bool is_fraction = false;
  double value = 0.0;

  std::size_t tau_for(std::size_t k) const {
    if (!is_fraction) return static_cast<std::size_t>(value);
    return static_cast<std::size_t>(std::floor(value * static_cast<double>(k) + 1e-9));
  }
  std::string label() const {
    return is_fraction ? fmt::format("{:.12g}k", value) : fmt::format("{:.12g}", value);
  }
  bool operator==(const TauSetting&) const = default;
};

struct AdversarySettings {
  bool exact = true;
  bool greedy_min = true;
  bool greedy_max = true;
  std::size_t random_seeds = 3;
  std::size_t stochastic_seeds = 3;
  double epsilon = 0.01;
  std::uint64_t max_exact_subsets = 2'000'000;

  bool operator==(const AdversarySettings&) const = default;

  AdversaryConfig to_config(std::uint64_t seed) const {
    AdversaryConfig c;
    c.use_exact = exact;
    c.use_greedy_min = greedy_min;
    c.use_greedy_max = greedy_max;
    c.random_seeds = random_seeds;
    c.stochastic_seeds = stochastic_seeds;
    c.epsilon = epsilon;
    c.exact_limits.max_subsets = max_exact_subsets;
    c.seed = seed;
    return c;
  }
};

struct ExperimentConfig {
  ObjectiveKind objective = ObjectiveKind::kSupportLinear;
  DataConfig data;
  GpConfig gp;
  std::vector<double> toy_weights;
  OracleFamily random_family = OracleFamily::kCoverage;
  std::size_t random_n = 8;
  std::optional<double> ridge;  // loss default when absent
  std::vector<SolverEntry> solvers;
  std::vector<std::size_t> k_grid;
  std::vector<TauSetting> taus;
  AdversarySettings adversaries;
  std::size_t repetitions = 1;
  std::uint64_t seed = 0;
  std::string output_dir = "out";

  bool operator==(const ExperimentConfig&) const = default;

  double ridge_or_default() const {
    if (ridge) return *ridge;
    return objective == ObjectiveKind::kSupportLogistic ? kDefaultLogisticRidge : 0.0;
  }

  void validate() const;
};

namespace detail {

inline void reject_unknown_keys(const Json& j, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
      throw ConfigError(where + ": unknown key '" + it.key() + "'");
    }
  }
}

template <typename T>
T get_field(const Json& j, const std::string& key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

template <typename T>
void read_optional(const Json& j, const std::string& key, const std::string& where, T& out) {
  if (j.contains(key)) out = get_field<T>(j, key, where);
}

inline std::string_view kernel_name(KernelKind k) {
  switch (k) {
    case KernelKind::kMatern32: return "matern32";
    case KernelKind::kSquaredExponential: return "squared_exponential";
    case KernelKind::kExplicitMatrix: return "explicit_matrix";
  }
  return "unknown";
}

inline SynthSpec synth_preset(const std::string& name) {
  if (name == "full_linear") return SynthSpec::full_linear();
  if (name == "full_logistic") return SynthSpec::full_logistic();
  if (name == "full_gp") return SynthSpec::full_gp();
  if (name == "desk_linear") return SynthSpec::desk_linear();
  if (name == "desk_logistic") return SynthSpec::desk_logistic();
  if (name == "desk_gp") return SynthSpec::desk_gp();
  throw ConfigError("data.preset: unknown preset '" + name + "'");
}

inline TaskKind task_for(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::kSupportLogistic: return TaskKind::kLogistic;
    case ObjectiveKind::kGpVarianceReduction: return TaskKind::kGp;
    default: return TaskKind::kLinear;
  }
}

}  // namespace detail

// Synthetic-data fields shared by experiment configs and `gen-data`.
inline SynthSpec parse_synth_spec(const Json& j, const std::string& where, std::optional<TaskKind> forced_task) {
  SynthSpec s;
  std::optional<TaskKind> task = forced_task;
  if (j.contains("task")) {
    const auto parsed = parse_task(detail::get_field<std::string>(j, "task", where));
    if (!parsed) throw ConfigError(where + ".task: expected linear, logistic or gp");
    if (forced_task && *parsed != *forced_task) throw ConfigError(where + ".task: does not match the objective");
    task = parsed;
  }
  if (j.contains("preset")) {
    s = detail::synth_preset(detail::get_field<std::string>(j, "preset", where));
  } else if (task == TaskKind::kLogistic) {
    s = SynthSpec::desk_logistic();
  } else if (task == TaskKind::kGp) {
    s = SynthSpec::desk_gp();
  }
  if (task) s.task = *task;
  detail::read_optional(j, "n_train", where, s.n_train);
  detail::read_optional(j, "n_test", where, s.n_test);
  detail::read_optional(j, "d", where, s.d);
  detail::read_optional(j, "ar_alpha_sq", where, s.ar_alpha_sq);
  detail::read_optional(j, "sparsity", where, s.sparsity);
  detail::read_optional(j, "noise_var", where, s.noise_var);
  detail::read_optional(j, "flip_logistic_sign", where, s.flip_logistic_sign);
  detail::read_optional(j, "seed", where, s.seed);
  try {
    s.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return s;
}

inline Json synth_spec_to_json(const SynthSpec& s, bool with_seed) {
  Json j = {{"task", std::string(task_name(s.task))}, {"n_train", s.n_train},   {"n_test", s.n_test},
            {"d", s.d},                              {"ar_alpha_sq", s.ar_alpha_sq}, {"sparsity", s.sparsity},
            {"noise_var", s.noise_var},              {"flip_logistic_sign", s.flip_logistic_sign}};
  if (with_seed) j["seed"] = s.seed;
  return j;
}

inline void ExperimentConfig::validate() const {
  if (repetitions < 1) throw ConfigError("repetitions: must be >= 1");
  if (k_grid.empty()) throw ConfigError("k_grid: must list at least one budget");
  if (solvers.empty()) throw ConfigError("solvers: must list at least one solver");
  if (taus.empty()) throw ConfigError("tau: must list at least one deletion budget");
  for (std::size_t k : k_grid) {
    if (k == 0) throw ConfigError("k_grid: budgets must be >= 1");
  }
  for (const TauSetting& t : taus) {
    if (!(t.value >= 0.0)) throw ConfigError("tau: values must be non-negative");
    if (!t.is_fraction && t.value != std::floor(t.value)) throw ConfigError("tau.fixed: values must be integers");
    for (std::size_t k : k_grid) {
      if (t.tau_for(k) >= k) {
        throw ConfigError(fmt::format("tau: deletion budget {} is not below k = {}", t.label(), k));
      }
    }
  }
  std::set<std::string> labels;
  for (const SolverEntry& s : solvers) {
    if (!labels.insert(s.label).second) throw ConfigError("solvers: duplicate label '" + s.label + "'");
    if (!(s.beta > 0.0)) throw ConfigError("solvers." + s.label + ".beta: must be > 0");
    if (!(s.epsilon > 0.0 && s.epsilon < 1.0)) throw ConfigError("solvers." + s.label + ".epsilon: must lie in (0, 1)");
  }
  if (!(adversaries.epsilon > 0.0 && adversaries.epsilon < 1.0)) {
    throw ConfigError("adversaries.epsilon: must lie in (0, 1)");
  }
  if (objective == ObjectiveKind::kToy && toy_weights.empty()) throw ConfigError("toy.weights: must be non-empty");
  for (double w : toy_weights) {
    if (!(w >= 0.0)) throw ConfigError("toy.weights: must be non-negative");
  }
  if (objective == ObjectiveKind::kRandomMonotone && (random_n == 0 || random_n > 16)) {
    throw ConfigError("random.n: must lie in 1..16");
  }
  if (ridge && !(*ridge >= 0.0)) throw ConfigError("ridge: must be non-negative");
  if (objective == ObjectiveKind::kGpVarianceReduction) {
    if (!(gp.lengthscale > 0.0)) throw ConfigError("gp.lengthscale: must be > 0");
    if (!(gp.output_variance > 0.0)) throw ConfigError("gp.output_variance: must be > 0");
    if (!(gp.noise > 0.0)) throw ConfigError("gp.noise: must be > 0");
  }
  if (output_dir.empty()) throw ConfigError("output_dir: must be non-empty");
}

inline ExperimentConfig parse_experiment_config(const Json& root) {
  const std::string where = "config";
  detail::reject_unknown_keys(root,
                              {"objective", "data", "gp", "toy", "random", "ridge", "solvers", "k_grid", "tau",
                               "adversaries", "repetitions", "seed", "output_dir"},
                              where);
  ExperimentConfig c;
  const auto objective = parse_objective(detail::get_field<std::string>(root, "objective", where));
  if (!objective) throw ConfigError("objective: unknown objective");
  c.objective = *objective;

  if (root.contains("data")) {
    const Json& d = root.at("data");
    const std::string source = d.is_object() && d.contains("source") ? detail::get_field<std::string>(d, "source", "data")
                                                                     : "synthetic";
    if (source == "synthetic") {
      detail::reject_unknown_keys(d,
                                  {"source", "preset", "task", "n_train", "n_test", "d", "ar_alpha_sq", "sparsity",
                                   "noise_var", "flip_logistic_sign"},
                                  "data");
      c.data.source = DataConfig::Source::kSynthetic;
      c.data.synth = parse_synth_spec(d, "data", detail::task_for(c.objective));
    } else if (source == "csv") {
      detail::reject_unknown_keys(d, {"source", "train", "test"}, "data");
      c.data.source = DataConfig::Source::kCsv;
      c.data.train_csv = detail::get_field<std::string>(d, "train", "data");
      detail::read_optional(d, "test", "data", c.data.test_csv);
    } else {
      throw ConfigError("data.source: expected synthetic or csv");
    }
  } else {
    c.data.synth = parse_synth_spec(Json::object(), "data", detail::task_for(c.objective));
  }

  if (root.contains("gp")) {
    const Json& g = root.at("gp");
    detail::reject_unknown_keys(g, {"kernel", "lengthscale", "output_variance", "noise"}, "gp");
    if (g.contains("kernel")) {
      const auto name = detail::get_field<std::string>(g, "kernel", "gp");
      if (name == "matern32") {
        c.gp.kernel = KernelKind::kMatern32;
      } else if (name == "squared_exponential") {
        c.gp.kernel = KernelKind::kSquaredExponential;
      } else {
        throw ConfigError("gp.kernel: expected matern32 or squared_exponential");
      }
    }
    detail::read_optional(g, "lengthscale", "gp", c.gp.lengthscale);
    detail::read_optional(g, "output_variance", "gp", c.gp.output_variance);
    detail::read_optional(g, "noise", "gp", c.gp.noise);
  }
  if (root.contains("toy")) {
    detail::reject_unknown_keys(root.at("toy"), {"weights"}, "toy");
    c.toy_weights = detail::get_field<std::vector<double>>(root.at("toy"), "weights", "toy");
  }
  if (root.contains("random")) {
    const Json& r = root.at("random");
    detail::reject_unknown_keys(r, {"family", "n"}, "random");
    if (r.contains("family")) {
      const auto fam = parse_family(detail::get_field<std::string>(r, "family", "random"));
      if (!fam) throw ConfigError("random.family: unknown family");
      c.random_family = *fam;
    }
    detail::read_optional(r, "n", "random", c.random_n);
  }
  if (root.contains("ridge")) c.ridge = detail::get_field<double>(root, "ridge", where);

  const Json& solvers = root.at("solvers");
  if (!solvers.is_array()) throw ConfigError("solvers: expected a list");
  for (const Json& s : solvers) {
    detail::reject_unknown_keys(s, {"name", "beta", "epsilon", "label"}, "solvers[]");
    SolverEntry e;
    const auto name = detail::get_field<std::string>(s, "name", "solvers[]");
    const auto kind = parse_solver(name);
    if (!kind) throw ConfigError("solvers[].name: unknown solver '" + name + "'");
    e.kind = *kind;
    detail::read_optional(s, "beta", "solvers[]", e.beta);
    detail::read_optional(s, "epsilon", "solvers[]", e.epsilon);
    e.label = name;
    detail::read_optional(s, "label", "solvers[]", e.label);
    c.solvers.push_back(std::move(e));
  }

  c.k_grid = detail::get_field<std::vector<std::size_t>>(root, "k_grid", where);

  const Json& tau = root.at("tau");
  detail::reject_unknown_keys(tau, {"fixed", "fraction"}, "tau");
  if (tau.contains("fixed") == tau.contains("fraction")) throw ConfigError("tau: give exactly one of fixed or fraction");
  if (tau.contains("fixed")) {
    for (std::size_t v : detail::get_field<std::vector<std::size_t>>(tau, "fixed", "tau")) {
      c.taus.push_back({false, static_cast<double>(v)});
    }
  } else {
    for (double v : detail::get_field<std::vector<double>>(tau, "fraction", "tau")) {
      if (!(v >= 0.0 && v < 1.0)) throw ConfigError("tau.fraction: values must lie in [0, 1)");
      c.taus.push_back({true, v});
    }
  }
  if (c.taus.size() > 1) {
    for (std::size_t i = 1; i < c.taus.size(); ++i) {
      if (c.taus[i].is_fraction != c.taus[0].is_fraction) throw ConfigError("tau: cannot mix fixed and fraction");
    }
  }

  if (root.contains("adversaries")) {
    const Json& a = root.at("adversaries");
    detail::reject_unknown_keys(a,
                                {"exact", "greedy_min", "greedy_max", "random_seeds", "stochastic_seeds", "epsilon",
                                 "max_exact_subsets"},
                                "adversaries");
    detail::read_optional(a, "exact", "adversaries", c.adversaries.exact);
    detail::read_optional(a, "greedy_min", "adversaries", c.adversaries.greedy_min);
    detail::read_optional(a, "greedy_max", "adversaries", c.adversaries.greedy_max);
    detail::read_optional(a, "random_seeds", "adversaries", c.adversaries.random_seeds);
    detail::read_optional(a, "stochastic_seeds", "adversaries", c.adversaries.stochastic_seeds);
    detail::read_optional(a, "epsilon", "adversaries", c.adversaries.epsilon);
    detail::read_optional(a, "max_exact_subsets", "adversaries", c.adversaries.max_exact_subsets);
  }
  detail::read_optional(root, "repetitions", where, c.repetitions);
  detail::read_optional(root, "seed", where, c.seed);
  detail::read_optional(root, "output_dir", where, c.output_dir);
  c.validate();
  return c;
}

// Fully explicit form: parsing it back yields an equal config.
inline Json experiment_config_to_json(const ExperimentConfig& c) {
  Json j;
  j["objective"] = std::string(objective_name(c.objective));
  if (c.data.source == DataConfig::Source::kSynthetic) {
    Json d = synth_spec_to_json(c.data.synth, false);
    d["source"] = "synthetic";
    j["data"] = d;
  } else {
    Json d = {{"source", "csv"}, {"train", c.data.train_csv}};
    if (!c.data.test_csv.empty()) d["test"] = c.data.test_csv;
    j["data"] = d;
  }
  j["gp"] = {{"kernel", std::string(detail::kernel_name(c.gp.kernel))},
             {"lengthscale", c.gp.lengthscale},
             {"output_variance", c.gp.output_variance},
             {"noise", c.gp.noise}};
  if (!c.toy_weights.empty()) j["toy"] = {{"weights", c.toy_weights}};
  j["random"] = {{"family", std::string(family_name(c.random_family))}, {"n", c.random_n}};
  if (c.ridge) j["ridge"] = *c.ridge;
  Json solvers = Json::array();
  for (const SolverEntry& s : c.solvers) {
    solvers.push_back({{"name", std::string(solver_name(s.kind))},
                       {"beta", s.beta},
                       {"epsilon", s.epsilon},
                       {"label", s.label}});
  }
  j["solvers"] = solvers;
  j["k_grid"] = c.k_grid;
  Json taus = Json::array();
  for (const TauSetting& t : c.taus) {
    if (t.is_fraction) {
      taus.push_back(t.value);
    } else {
      taus.push_back(static_cast<std::size_t>(t.value));
    }
  }
  j["tau"] = {{c.taus.empty() || !c.taus[0].is_fraction ? "fixed" : "fraction", taus}};
  j["adversaries"] = {{"exact", c.adversaries.exact},
                      {"greedy_min", c.adversaries.greedy_min},
                      {"greedy_max", c.adversaries.greedy_max},
                      {"random_seeds", c.adversaries.random_seeds},
                      {"stochastic_seeds", c.adversaries.stochastic_seeds},
                      {"epsilon", c.adversaries.epsilon},
                      {"max_exact_subsets", c.adversaries.max_exact_subsets}};
  j["repetitions"] = c.repetitions;
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  return j;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

// Accepts a plain config or an emitted manifest (which embeds one).
inline ExperimentConfig load_experiment_config(const Json& j) {
  if (j.is_object() && j.contains("manifest_version")) {
    if (!j.contains("config")) throw ConfigError("manifest has no config section");
    return parse_experiment_config(j.at("config"));
  }
  return parse_experiment_config(j);
}

}  // namespace robustsel

#endif  // ROBUSTSEL_CONFIG_HPP_
