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


#ifndef ROBUSTSEL_SYNTH_DATA_HPP_
#define ROBUSTSEL_SYNTH_DATA_HPP_

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string_view>
#include <vector>

#include "robustsel/errors.hpp"
#include "robustsel/gp_objective.hpp"
#include "robustsel/rng.hpp"

namespace robustsel {

enum class TaskKind { kLinear, kLogistic, kGp };

inline std::string_view task_name(TaskKind t) {
  switch (t) {
    case TaskKind::kLinear: return "linear";
    case TaskKind::kLogistic: return "logistic";
    case TaskKind::kGp: return "gp";
  }
  return "unknown";
}

inline std::optional<TaskKind> parse_task(std::string_view name) {
  for (TaskKind t : {TaskKind::kLinear, TaskKind::kLogistic, TaskKind::kGp}) {
    if (task_name(t) == name) return t;
  }
  return std::nullopt;
}

struct SynthSpec {
  std::size_t n_train = 800;
  std::size_t n_test = 2400;
  std::size_t d = 1000;
  double ar_alpha_sq = 0.5;
  std::size_t sparsity = 100;
  double noise_var = 5.0;
  TaskKind task = TaskKind::kLinear;
  std::uint64_t seed = 0;
  // Logistic labels use 1/(1 + exp(x.w)) > 1/2 unless flipped to exp(-x.w).
  bool flip_logistic_sign = false;

  void validate() const {
    if (n_train == 0 || d == 0) throw ParameterError("synthetic data needs n_train >= 1 and d >= 1");
    if (!(ar_alpha_sq > 0.0 && ar_alpha_sq <= 1.0)) throw ParameterError("ar_alpha_sq must lie in (0, 1]");
    if (task != TaskKind::kGp && sparsity > d) throw ParameterError("sparsity cannot exceed d");
    if (!(noise_var >= 0.0)) throw ParameterError("noise variance must be non-negative");
  }

  // Full-size protocols.
  static SynthSpec full_linear() { return {800, 2400, 1000, 0.5, 100, 5.0, TaskKind::kLinear, 0, false}; }
  static SynthSpec full_logistic() { return {600, 1800, 200, 0.09, 100, 0.0, TaskKind::kLogistic, 0, false}; }
  static SynthSpec full_gp() { return {600, 0, 20, 0.5, 0, 1.0, TaskKind::kGp, 0, false}; }
  // Desk-scale versions.
  static SynthSpec desk_linear() { return {200, 600, 100, 0.5, 50, 5.0, TaskKind::kLinear, 0, false}; }
  static SynthSpec desk_logistic() { return {150, 450, 50, 0.09, 25, 0.0, TaskKind::kLogistic, 0, false}; }
  static SynthSpec desk_gp() { return {120, 0, 5, 0.5, 0, 1.0, TaskKind::kGp, 0, false}; }
};

// Substream identifiers, fixed so datasets stay reproducible across versions.
inline constexpr std::uint64_t kStreamDesign = 1;
inline constexpr std::uint64_t kStreamWeights = 2;
inline constexpr std::uint64_t kStreamNoise = 3;
inline constexpr std::uint64_t kStreamGp = 4;

// Rows follow X[t+1] = sqrt(1 - a^2) X[t] + a eps[t] along the columns with
// X[0] ~ N(0, 1), which keeps every entry at unit variance.
inline Eigen::MatrixXd autoregressive_matrix(std::size_t rows, std::size_t cols, double alpha_sq, std::uint64_t seed) {
  if (!(alpha_sq > 0.0 && alpha_sq <= 1.0)) throw ParameterError("alpha_sq must lie in (0, 1]");
  CounterRng rng(seed);
  const double keep = std::sqrt(1.0 - alpha_sq);
  const double alpha = std::sqrt(alpha_sq);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (cols == 0) continue;
    x(i, 0) = standard_normal(rng);
    for (Eigen::Index t = 1; t < x.cols(); ++t) x(i, t) = keep * x(i, t - 1) + alpha * standard_normal(rng);
  }
  return x;
}

struct SparseTarget {
  Eigen::VectorXd omega;
  Eigen::VectorXd y;
};

namespace detail {

inline std::vector<std::size_t> random_support(CounterRng& rng, std::size_t d, std::size_t sparsity) {
  std::vector<std::size_t> all(d);
  std::iota(all.begin(), all.end(), std::size_t{0});
  return sample_without_replacement<std::size_t>(rng, all, sparsity);
}

}  // namespace detail

// omega_s = (-1)^Bern(1/2) (5 sqrt(log d / n) + delta_s), delta_s ~ N(0, 1), on
// `sparsity` random coordinates; y = X omega + z with z ~ N(0, noise_var).
// `scale_rows` is the n in the amplitude term (defaults to X.rows()).
inline SparseTarget sparse_linear_target(const Eigen::MatrixXd& X, std::size_t sparsity, std::uint64_t seed,
                                         double noise_var = 5.0, std::optional<std::size_t> scale_rows = std::nullopt) {
  const auto d = static_cast<std::size_t>(X.cols());
  if (sparsity > d) throw ParameterError("sparsity cannot exceed the number of columns");
  const double n = static_cast<double>(scale_rows.value_or(static_cast<std::size_t>(X.rows())));
  CounterRng weights(derive_seed(seed, kStreamWeights));
  SparseTarget out;
  out.omega = Eigen::VectorXd::Zero(X.cols());
  const double amplitude = 5.0 * std::sqrt(std::log(static_cast<double>(d)) / n);
  for (std::size_t j : detail::random_support(weights, d, sparsity)) {
    const double sign = bernoulli_half(weights) ? -1.0 : 1.0;
    out.omega[static_cast<Eigen::Index>(j)] = sign * (amplitude + standard_normal(weights));
  }
  CounterRng noise(derive_seed(seed, kStreamNoise));
  const double sd = std::sqrt(noise_var);
  out.y = X * out.omega;
  for (Eigen::Index i = 0; i < out.y.size(); ++i) out.y[i] += sd * standard_normal(noise);
  return out;
}

// omega_s = (-1)^Bern(1/2) delta_s with delta_s ~ Unif[-1, 1]; label 1 iff
// 1 / (1 + exp(x.omega)) > 1/2 (exp(-x.omega) when flipped).
inline SparseTarget sparse_logistic_target(const Eigen::MatrixXd& X, std::size_t sparsity, std::uint64_t seed,
                                           bool flip_sign = false) {
  const auto d = static_cast<std::size_t>(X.cols());
  if (sparsity > d) throw ParameterError("sparsity cannot exceed the number of columns");
  CounterRng weights(derive_seed(seed, kStreamWeights));
  SparseTarget out;
  out.omega = Eigen::VectorXd::Zero(X.cols());
  for (std::size_t j : detail::random_support(weights, d, sparsity)) {
    const double sign = bernoulli_half(weights) ? -1.0 : 1.0;
    out.omega[static_cast<Eigen::Index>(j)] = sign * uniform_real(weights, -1.0, 1.0);
  }
  const Eigen::VectorXd z = X * out.omega;
  out.y.resize(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double arg = flip_sign ? -z[i] : z[i];
    out.y[i] = 1.0 / (1.0 + std::exp(arg)) > 0.5 ? 1.0 : 0.0;
  }
  return out;
}

inline constexpr double kGpSampleJitter = 1e-10;

struct GpSample {
  Eigen::VectorXd latent;    // f(x_i)
  Eigen::VectorXd observed;  // f(x_i) + N(0, noise_var)
};

// Draw from GP(0, k) at the given points plus observation noise.
inline GpSample gp_sample(const Eigen::MatrixXd& points, const KernelSpec& kernel, double noise_var,
                          std::uint64_t seed) {
  if (!(noise_var >= 0.0)) throw ParameterError("noise variance must be non-negative");
  Eigen::MatrixXd gram = gram_matrix(kernel, points);
  gram.diagonal().array() += kGpSampleJitter;
  const Eigen::Index n = gram.rows();
  Eigen::MatrixXd root;
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() == Eigen::Success) {
    root = llt.matrixL();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    root = eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  }
  CounterRng rng(derive_seed(seed, kStreamGp));
  Eigen::VectorXd u(n);
  for (Eigen::Index i = 0; i < n; ++i) u[i] = standard_normal(rng);
  GpSample out;
  out.latent = root * u;
  CounterRng noise(derive_seed(seed, kStreamNoise));
  out.observed = out.latent;
  const double sd = std::sqrt(noise_var);
  for (Eigen::Index i = 0; i < n; ++i) out.observed[i] += sd * standard_normal(noise);
  return out;
}

struct Dataset {
  SynthSpec spec;
  Eigen::MatrixXd X_train;
  Eigen::VectorXd y_train;
  Eigen::MatrixXd X_test;
  Eigen::VectorXd y_test;
  Eigen::VectorXd omega;  // empty for GP tasks
};

// Generates n_train + n_test rows together and splits them in order, so the
// two parts are disjoint and share one ground-truth model.
inline Dataset make_dataset(const SynthSpec& spec, const KernelSpec& gp_kernel = {}) {
  spec.validate();
  Dataset out;
  out.spec = spec;
  const std::size_t rows = spec.n_train + spec.n_test;
  const Eigen::MatrixXd x = autoregressive_matrix(rows, spec.d, spec.ar_alpha_sq, derive_seed(spec.seed, kStreamDesign));
  Eigen::VectorXd y;
  switch (spec.task) {
    case TaskKind::kLinear: {
      SparseTarget t = sparse_linear_target(x, spec.sparsity, spec.seed, spec.noise_var, spec.n_train);
      out.omega = std::move(t.omega);
      y = std::move(t.y);
      break;
    }
    case TaskKind::kLogistic: {
      SparseTarget t = sparse_logistic_target(x, spec.sparsity, spec.seed, spec.flip_logistic_sign);
      out.omega = std::move(t.omega);
      y = std::move(t.y);
      break;
    }
    case TaskKind::kGp:
      y = gp_sample(x, gp_kernel, spec.noise_var, spec.seed).observed;
      break;
  }
  const auto n_train = static_cast<Eigen::Index>(spec.n_train);
  const auto n_test = static_cast<Eigen::Index>(spec.n_test);
  out.X_train = x.topRows(n_train);
  out.y_train = y.head(n_train);
  out.X_test = x.bottomRows(n_test);
  out.y_test = y.tail(n_test);
  return out;
}

}  // namespace robustsel

#endif  // ROBUSTSEL_SYNTH_DATA_HPP_
