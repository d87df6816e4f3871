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


#ifndef ROBUSTSEL_GP_OBJECTIVE_HPP_
#define ROBUSTSEL_GP_OBJECTIVE_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "robustsel/errors.hpp"
#include "robustsel/rng.hpp"
#include "robustsel/set_core.hpp"

namespace robustsel {

enum class KernelKind { kMatern32, kSquaredExponential, kExplicitMatrix };

struct KernelSpec {
  KernelKind kind = KernelKind::kMatern32;
  double lengthscale = 1.0;
  double output_variance = 1.0;
  Eigen::MatrixXd matrix;  // explicit_matrix only

  void validate() const {
    if (kind == KernelKind::kExplicitMatrix) {
      if (matrix.rows() < 1 || matrix.rows() != matrix.cols()) {
        throw ParameterError("explicit kernel matrix must be square and non-empty");
      }
      if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
        throw ParameterError("explicit kernel matrix must be symmetric");
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(matrix, Eigen::EigenvaluesOnly);
      if (eig.eigenvalues().minCoeff() < -1e-8) throw ParameterError("explicit kernel matrix is not PSD");
      return;
    }
    if (!(lengthscale > 0.0) || !std::isfinite(lengthscale)) throw ParameterError("kernel lengthscale must be > 0");
    if (!(output_variance > 0.0)) throw ParameterError("kernel output variance must be > 0");
  }

  // k(r) for the parametric kinds, r the Euclidean distance.
  double of_distance(double r) const {
    if (kind == KernelKind::kMatern32) {
      const double a = std::sqrt(3.0) * r / lengthscale;
      return output_variance * (1.0 + a) * std::exp(-a);
    }
    return output_variance * std::exp(-0.5 * (r * r) / (lengthscale * lengthscale));
  }
};

// Full Gram matrix of `points` (rows) under `kernel`.
inline Eigen::MatrixXd gram_matrix(const KernelSpec& kernel, const Eigen::MatrixXd& points) {
  kernel.validate();
  if (kernel.kind == KernelKind::kExplicitMatrix) return kernel.matrix;
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = kernel.of_distance(0.0);
    for (Eigen::Index j = 0; j < i; ++j) {
      k(i, j) = k(j, i) = kernel.of_distance((points.row(i) - points.row(j)).norm());
    }
  }
  return k;
}

struct GpProblem {
  Eigen::MatrixXd points;  // unused for explicit_matrix kernels
  KernelSpec kernel;
  double noise = 1.0;      // observation noise variance sigma^2
  ItemSet targets;         // M
  ItemSet candidates;      // points available for selection

  std::size_t num_points() const {
    return static_cast<std::size_t>(kernel.kind == KernelKind::kExplicitMatrix ? kernel.matrix.rows()
                                                                               : points.rows());
  }

  void validate() const {
    kernel.validate();
    if (!(noise > 0.0)) throw ParameterError("noise variance must be > 0");
    if (targets.empty()) throw ParameterError("target set M must be non-empty");
    const std::size_t n = num_points();
    if (n == 0) throw ParameterError("GP problem has no points");
    for (ItemIndex i : targets) {
      if (i >= n) throw InvalidIndexError("target index out of range");
    }
    for (ItemIndex i : candidates) {
      if (i >= n) throw InvalidIndexError("candidate index out of range");
    }
  }
};

namespace detail {

// Cholesky of K_SS + sigma^2 I; throws NumericalError on failure.
inline Eigen::LLT<Eigen::MatrixXd> regularized_factor(const Eigen::MatrixXd& gram, const std::vector<Eigen::Index>& s,
                                                      double noise) {
  Eigen::MatrixXd a = gram(s, s);
  a.diagonal().array() += noise;
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const auto& sv = svd.singularValues();
    const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
    throw NumericalError("Cholesky factorization of the regularized Gram matrix failed; condition estimate " +
                         std::to_string(cond));
  }
  return llt;
}

inline std::vector<Eigen::Index> sorted_indices(const ItemSet& s) {
  std::vector<Eigen::Index> out(s.begin(), s.end());
  std::sort(out.begin(), out.end());
  return out;
}

// Sum over targets of k(x,S) A^{-1} k(S,x), A = K_SS + sigma^2 I.
inline double explained_variance(const Eigen::MatrixXd& gram, const std::vector<Eigen::Index>& s,
                                 const std::vector<Eigen::Index>& targets, double noise) {
  if (s.empty()) return 0.0;
  const auto llt = regularized_factor(gram, s, noise);
  const Eigen::MatrixXd v = llt.matrixL().solve(Eigen::MatrixXd(gram(s, targets)));
  return v.squaredNorm();
}

}  // namespace detail

// sigma^2_{x|S} = k(x,x) - k(x,X_S)(K_SS + sigma^2 I)^{-1} k(X_S,x). s holds
// point indices.
inline double posterior_variance(const GpProblem& problem, ItemIndex x, const ItemSet& s) {
  problem.validate();
  if (x >= problem.num_points()) throw InvalidIndexError("point index out of range");
  const Eigen::MatrixXd gram = gram_matrix(problem.kernel, problem.points);
  const double prior = gram(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x));
  const double reduction =
      detail::explained_variance(gram, detail::sorted_indices(s), {static_cast<Eigen::Index>(x)}, problem.noise);
  return std::max(0.0, prior - reduction);
}

// F_M(S) = sum_{x in M} sigma^2_x - sigma^2_{x|S}; s holds point indices.
inline double variance_reduction(const GpProblem& problem, const ItemSet& s) {
  problem.validate();
  const Eigen::MatrixXd gram = gram_matrix(problem.kernel, problem.points);
  return detail::explained_variance(gram, detail::sorted_indices(s), detail::sorted_indices(problem.targets),
                                    problem.noise);
}

// F(Omega | S) through the Schur-complement form a B^{-1} a^T, summed over M:
//   a = k(x, X_O) - k(x, X_S) A^{-1} K_SO
//   B = sigma^2 I + K_OO - K_OS A^{-1} K_SO,  A = K_SS + sigma^2 I.
inline double variance_reduction_block(const GpProblem& problem, const ItemSet& omega, const ItemSet& s) {
  problem.validate();
  for (ItemIndex i : omega) {
    if (s.contains(i)) throw ParameterError("omega and s must be disjoint");
  }
  if (omega.empty()) return 0.0;
  const Eigen::MatrixXd gram = gram_matrix(problem.kernel, problem.points);
  const auto o = detail::sorted_indices(omega);
  const auto sv = detail::sorted_indices(s);
  const auto m = detail::sorted_indices(problem.targets);

  Eigen::MatrixXd a = gram(m, o);  // one row per target
  Eigen::MatrixXd b = gram(o, o);
  b.diagonal().array() += problem.noise;
  if (!sv.empty()) {
    const auto llt = detail::regularized_factor(gram, sv, problem.noise);
    const Eigen::MatrixXd ainv_kso = llt.solve(Eigen::MatrixXd(gram(sv, o)));
    a -= gram(m, sv) * ainv_kso;
    b -= gram(o, sv) * ainv_kso;
  }
  Eigen::LLT<Eigen::MatrixXd> b_llt(b);
  if (b_llt.info() != Eigen::Success) throw NumericalError("block matrix B is not positive definite");
  const Eigen::MatrixXd w = b_llt.matrixL().solve(Eigen::MatrixXd(a.transpose()));
  return w.squaredNorm();
}

// Upper bound k_max / (sigma^2 + k_max) claimed for the curvature and inverse
// curvature of F_M; k_max is the largest prior variance over all points.
inline double curvature_bound(const GpProblem& problem) {
  problem.validate();
  const Eigen::MatrixXd gram = gram_matrix(problem.kernel, problem.points);
  const double k_max = gram.diagonal().maxCoeff();
  return k_max / (problem.noise + k_max);
}

// F_M as a set function over the candidate list: item j is candidates[j].
class VarianceReductionObjective final : public SetFunction {
 public:
  explicit VarianceReductionObjective(GpProblem problem) : problem_(std::move(problem)) {
    problem_.validate();
    if (problem_.candidates.empty()) throw ParameterError("GP problem has no candidate points");
    gram_ = gram_matrix(problem_.kernel, problem_.points);
    targets_ = detail::sorted_indices(problem_.targets);
  }

  const GpProblem& problem() const noexcept { return problem_; }
  const Eigen::MatrixXd& gram() const noexcept { return gram_; }
  std::size_t ground_size() const override { return problem_.candidates.size(); }

  ItemIndex point_of(ItemIndex item) const { return problem_.candidates[item]; }

  double evaluate(std::span<const ItemIndex> items) const override {
    if (items.empty()) return 0.0;
    std::vector<Eigen::Index> s;
    s.reserve(items.size());
    for (ItemIndex i : items) s.push_back(static_cast<Eigen::Index>(point_of(i)));
    std::sort(s.begin(), s.end());
    return detail::explained_variance(gram_, s, targets_, problem_.noise);
  }

 private:
  GpProblem problem_;
  Eigen::MatrixXd gram_;
  std::vector<Eigen::Index> targets_;
};

// Variance reduction maintained under point insertions by extending the
// Cholesky factor one row at a time; O(|S|^2 + |S||M|) per insertion.
class IncrementalPosterior {
 public:
  explicit IncrementalPosterior(const GpProblem& problem)
      : noise_(problem.noise), gram_(gram_matrix(problem.kernel, problem.points)) {
    problem.validate();
    targets_ = detail::sorted_indices(problem.targets);
    proj_.resize(0, static_cast<Eigen::Index>(targets_.size()));
  }

  void add(ItemIndex point) {
    const auto p = static_cast<Eigen::Index>(point);
    if (p < 0 || p >= gram_.rows()) throw InvalidIndexError("point index out of range");
    if (std::find(selected_.begin(), selected_.end(), p) != selected_.end()) return;
    const Eigen::Index s = static_cast<Eigen::Index>(selected_.size());
    Eigen::VectorXd cross(s);
    for (Eigen::Index j = 0; j < s; ++j) cross[j] = gram_(selected_[j], p);
    const Eigen::VectorXd l = s > 0 ? Eigen::VectorXd(factor_.topLeftCorner(s, s).triangularView<Eigen::Lower>().solve(cross))
                                    : Eigen::VectorXd();
    const double pivot_sq = gram_(p, p) + noise_ - l.squaredNorm();
    if (!(pivot_sq > 0.0)) throw NumericalError("rank-one Cholesky update lost positive definiteness");
    const double pivot = std::sqrt(pivot_sq);

    factor_.conservativeResize(s + 1, s + 1);
    factor_.row(s).setZero();
    factor_.col(s).setZero();
    if (s > 0) factor_.row(s).head(s) = l.transpose();
    factor_(s, s) = pivot;

    Eigen::RowVectorXd row(static_cast<Eigen::Index>(targets_.size()));
    for (std::size_t t = 0; t < targets_.size(); ++t) row[static_cast<Eigen::Index>(t)] = gram_(p, targets_[t]);
    if (s > 0) row -= l.transpose() * proj_;
    row /= pivot;
    proj_.conservativeResize(s + 1, Eigen::NoChange);
    proj_.row(s) = row;
    selected_.push_back(p);
  }

  double variance_reduction() const { return proj_.squaredNorm(); }

  double posterior_variance_of_target(std::size_t target_pos) const {
    const Eigen::Index t = static_cast<Eigen::Index>(target_pos);
    return std::max(0.0, gram_(targets_[target_pos], targets_[target_pos]) - proj_.col(t).squaredNorm());
  }

 private:
  double noise_;
  Eigen::MatrixXd gram_;
  std::vector<Eigen::Index> targets_;
  std::vector<Eigen::Index> selected_;
  Eigen::MatrixXd factor_;
  Eigen::MatrixXd proj_;  // L^{-1} K_{S,M}
};

// Three-point kernel showing that F_M is not submodular: with M = {2} and
// candidates {0, 1}, F({0} | {1}) > F({0}) = 0 for z in (0, 1).
inline GpProblem nonsubmodular_fixture(double z, double noise = 1.0) {
  if (!(z > 0.0 && z < 1.0)) throw ParameterError("fixture parameter z must lie in (0, 1)");
  GpProblem p;
  p.kernel.kind = KernelKind::kExplicitMatrix;
  const double c = std::sqrt(1.0 - z * z);
  p.kernel.matrix.resize(3, 3);
  p.kernel.matrix << 1.0, c, 0.0,
                     c, 1.0, z * z,
                     0.0, z * z, 1.0;
  p.noise = noise;
  p.targets = ItemSet{2};
  p.candidates = ItemSet{0, 1};
  p.validate();
  return p;
}

// Seeded half/half split of point indices into targets M and candidates.
inline std::pair<ItemSet, ItemSet> random_half_split(std::size_t n, std::uint64_t seed) {
  std::vector<ItemIndex> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  CounterRng rng(seed);
  std::vector<ItemIndex> shuffled = sample_without_replacement<ItemIndex>(rng, all, n);
  const std::size_t half = n / 2;
  std::vector<ItemIndex> targets(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(half));
  std::vector<ItemIndex> candidates(shuffled.begin() + static_cast<std::ptrdiff_t>(half), shuffled.end());
  std::sort(targets.begin(), targets.end());
  std::sort(candidates.begin(), candidates.end());
  return {ItemSet(targets), ItemSet(candidates)};
}

}  // namespace robustsel

#endif  // ROBUSTSEL_GP_OBJECTIVE_HPP_
