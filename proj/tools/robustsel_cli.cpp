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


#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "robustsel/config.hpp"
#include "robustsel/csv.hpp"
#include "robustsel/errors.hpp"
#include "robustsel/experiment.hpp"
#include "robustsel/ratios.hpp"
#include "robustsel/synth_data.hpp"

namespace {

namespace fs = std::filesystem;
using robustsel::Json;

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitCertification = 3;
constexpr int kExitNumerical = 4;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::size_t threads = 1;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool config_required) {
  auto* opt = cmd->add_option("--config", flags.config, "JSON config file (or an emitted manifest for run)");
  if (config_required) opt->required();
  cmd->add_option("--seed", flags.seed, "Override the config seed");
  cmd->add_option("--out", flags.out, "Output directory");
  cmd->add_option("--threads", flags.threads, "Worker threads")->check(CLI::PositiveNumber);
}

int cmd_run(const CommonFlags& flags) {
  robustsel::ExperimentConfig config = robustsel::load_experiment_config(robustsel::read_json_file(flags.config));
  if (flags.seed) config.seed = *flags.seed;
  if (!flags.out.empty()) config.output_dir = flags.out;
  const robustsel::ExperimentResult result = robustsel::run_experiment(config, {flags.threads});
  robustsel::write_experiment_outputs(config, result, config.output_dir);
  std::cout << fmt::format("wrote {} rows ({} skipped) to {}\n", result.rows.size(), result.skipped.size(),
                           config.output_dir);
  return kExitOk;
}

int cmd_certify(const CommonFlags& flags) {
  robustsel::CertifyConfig config;
  if (!flags.config.empty()) config = robustsel::parse_certify_config(robustsel::read_json_file(flags.config));
  if (flags.seed) config.seed = *flags.seed;
  const robustsel::CertifyReport report = robustsel::certify_bounds(config, flags.threads);
  const fs::path dir = flags.out.empty() ? fs::path("certify_out") : fs::path(flags.out);
  fs::create_directories(dir);
  robustsel::write_text_file(dir / "certification.json", robustsel::certify_report_to_json(report).dump(2) + "\n");
  std::cout << fmt::format("{} instances, {} violations, min margin {:.12g}\n", report.instances.size(),
                           report.violations, report.min_margin);
  for (const robustsel::CertifyInstance& i : report.instances) {
    if (i.holds) continue;
    std::cerr << fmt::format(
        "violation: family={} n={} k={} tau={} beta={:.12g} seed={} robust={:.12g} bound={:.12g} "
        "gamma={:.12g} theta={:.12g} nu_check={:.12g} alpha_check={:.12g}\n",
        i.family, i.n, i.k, i.tau, i.beta, i.oracle_seed, i.robust_value, i.bound, i.ratios.gamma, i.ratios.theta,
        i.ratios.nu_check, i.ratios.alpha_check);
  }
  return report.passed() ? kExitOk : kExitCertification;
}

int cmd_ratios(const CommonFlags& flags) {
  robustsel::ExperimentConfig config = robustsel::load_experiment_config(robustsel::read_json_file(flags.config));
  if (flags.seed) config.seed = *flags.seed;
  const std::string text = robustsel::ratio_report(config).dump(2) + "\n";
  if (flags.out.empty()) {
    std::cout << text;
  } else {
    fs::create_directories(flags.out);
    robustsel::write_text_file(fs::path(flags.out) / "ratios.json", text);
  }
  return kExitOk;
}

int cmd_gen_data(const CommonFlags& flags) {
  Json j = robustsel::read_json_file(flags.config);
  robustsel::detail::reject_unknown_keys(j,
                                         {"preset", "task", "n_train", "n_test", "d", "ar_alpha_sq", "sparsity",
                                          "noise_var", "flip_logistic_sign", "seed"},
                                         "gen-data");
  robustsel::SynthSpec spec = robustsel::parse_synth_spec(j, "gen-data", std::nullopt);
  if (flags.seed) spec.seed = *flags.seed;
  const robustsel::Dataset ds = robustsel::make_dataset(spec);
  const fs::path dir = flags.out.empty() ? fs::path("data_out") : fs::path(flags.out);
  fs::create_directories(dir);
  std::ostringstream train, test;
  robustsel::write_dense_csv(train, ds.X_train, ds.y_train);
  robustsel::write_dense_csv(test, ds.X_test, ds.y_test);
  robustsel::write_text_file(dir / "train.csv", train.str());
  robustsel::write_text_file(dir / "test.csv", test.str());
  Json sidecar = {{"spec", robustsel::synth_spec_to_json(spec, true)},
                  {"rng", std::string(robustsel::kRngAlgorithm)},
                  {"versions", robustsel::version_info()}};
  if (ds.omega.size() > 0) sidecar["omega"] = std::vector<double>(ds.omega.data(), ds.omega.data() + ds.omega.size());
  robustsel::write_text_file(dir / "dataset.json", sidecar.dump(2) + "\n");
  std::cout << fmt::format("wrote {} train and {} test rows to {}\n", ds.X_train.rows(), ds.X_test.rows(),
                           dir.string());
  return kExitOk;
}

int cmd_surface(const CommonFlags& flags) {
  std::size_t steps = 20;
  if (!flags.config.empty()) {
    Json j = robustsel::read_json_file(flags.config);
    robustsel::detail::reject_unknown_keys(j, {"steps"}, "surface");
    robustsel::detail::read_optional(j, "steps", "surface", steps);
    if (steps < 1) throw robustsel::ConfigError("surface.steps: must be >= 1");
  }
  const auto grid = robustsel::unit_grid(steps);
  std::ostringstream os;
  robustsel::write_surface_csv(os, robustsel::guarantee_surface(grid, grid));
  const fs::path dir = flags.out.empty() ? fs::path("surface_out") : fs::path(flags.out);
  fs::create_directories(dir);
  robustsel::write_text_file(dir / "surface.csv", os.str());
  std::cout << fmt::format("wrote {}x{} surface to {}\n", grid.size(), grid.size(), (dir / "surface.csv").string());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deletion-robust subset selection experiments"};
  app.require_subcommand(1);
  CommonFlags run_flags, certify_flags, ratios_flags, gen_flags, surface_flags;
  add_common(app.add_subcommand("run", "Run an experiment grid and write results"), run_flags, true);
  add_common(app.add_subcommand("certify", "Check the robust guarantee on small random instances"), certify_flags,
             false);
  add_common(app.add_subcommand("ratios", "Exhaustive ratio estimates for a small objective"), ratios_flags, true);
  add_common(app.add_subcommand("gen-data", "Write a synthetic dataset as CSV"), gen_flags, true);
  add_common(app.add_subcommand("surface", "Write the guarantee surface over (gamma, theta)"), surface_flags, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (app.got_subcommand("run")) return cmd_run(run_flags);
    if (app.got_subcommand("certify")) return cmd_certify(certify_flags);
    if (app.got_subcommand("ratios")) return cmd_ratios(ratios_flags);
    if (app.got_subcommand("gen-data")) return cmd_gen_data(gen_flags);
    if (app.got_subcommand("surface")) return cmd_surface(surface_flags);
  } catch (const robustsel::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const robustsel::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }
  return kExitOther;
}
