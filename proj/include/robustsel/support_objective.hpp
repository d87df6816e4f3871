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


#ifndef ROBUSTSEL_SUPPORT_OBJECTIVE_HPP_
#define ROBUSTSEL_SUPPORT_OBJECTIVE_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "robustsel/errors.hpp"
#include "robustsel/set_core.hpp"

namespace robustsel {

enum class LossKind { kLeastSquares, kLogistic };

inline constexpr double kDefaultLogisticRidge = 1e-6;

// Rows of X are samples, columns are the candidate features (items).
struct DesignProblem {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  LossKind loss = LossKind::kLeastSquares;
  double ridge = 0.0;

  void validate() const {
    if (X.rows() < 1 || X.cols() < 1) throw ParameterError("design matrix must be non-empty");
    if (y.size() != X.rows()) throw ParameterError("target length must equal the number of rows of X");
    if (!(ridge >= 0.0)) throw ParameterError("ridge weight must be non-negative");
    if (loss == LossKind::kLogistic) {
      for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (y[i] != 0.0 && y[i] != 1.0) throw ParameterError("logistic targets must be 0 or 1");
      }
    }
  }
};

inline DesignProblem least_squares_problem(Eigen::MatrixXd X, Eigen::VectorXd y, double ridge = 0.0) {
  DesignProblem p{std::move(X), std::move(y), LossKind::kLeastSquares, ridge};
  p.validate();
  return p;
}

inline DesignProblem logistic_problem(Eigen::MatrixXd X, Eigen::VectorXd y, double ridge = kDefaultLogisticRidge) {
  DesignProblem p{std::move(X), std::move(y), LossKind::kLogistic, ridge};
  p.validate();
  return p;
}

struct RegularityConstants {
  double m = 0.0;
  double L = 0.0;
  double ratio_lb = 0.0;  // m / L
};

// Strong-concavity and smoothness constants of the utility.
inline RegularityConstants regularity_constants(const DesignProblem& problem) {
  problem.validate();
  const Eigen::MatrixXd gram = problem.X.transpose() * problem.X;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double lo = std::max(0.0, eig.eigenvalues().minCoeff());
  const double hi = eig.eigenvalues().maxCoeff();
  RegularityConstants c;
  if (problem.loss == LossKind::kLeastSquares) {
    c.m = problem.ridge + lo;
    c.L = problem.ridge + hi;
    if (c.m <= 1e-12 * std::max(1.0, c.L)) {
      throw NotStronglyConcaveError(
          "least-squares utility is not strongly concave (rank-deficient X); use ridge > 0");
    }
  } else {
    c.m = problem.ridge;
    c.L = problem.ridge + 0.25 * hi;
    if (c.m <= 0.0) throw NotStronglyConcaveError("logistic utility needs ridge > 0 to be strongly concave");
  }
  c.ratio_lb = c.m / c.L;
  return c;
}

// Result of maximizing the utility over vectors supported on a set.
struct RestrictedFit {
  Eigen::VectorXd x;  // full length d, zero off the support
  double gain = 0.0;  // l(x) - l(0)
};

namespace detail {

inline double softplus(double t) { return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }
inline double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace detail

// f(S) = max_{supp(x) in S} l(x) - l(0) for least squares
//   l(x) = -1/2 |y - Xx|^2 - ridge/2 |x|^2
// or ridge-regularized binary logistic log-likelihood.
class SupportObjective final : public DifferentiableSetFunction {
 public:
  static constexpr int kMaxNewtonIterations = 100;
  static constexpr int kMaxBacktracks = 50;
  static constexpr double kGradientTolerance = 1e-8;
  // Accepted when the iteration budget runs out or the line search stalls.
  static constexpr double kStalledTolerance = 1e-6;
  static constexpr double kSingularThreshold = 1e-10;

  explicit SupportObjective(DesignProblem problem) : problem_(std::move(problem)) {
    problem_.validate();
    gram_ = problem_.X.transpose() * problem_.X;
    xty_ = problem_.X.transpose() * problem_.y;
  }

  const DesignProblem& problem() const noexcept { return problem_; }
  std::size_t ground_size() const override { return static_cast<std::size_t>(problem_.X.cols()); }

  double evaluate(std::span<const ItemIndex> items) const override {
    if (items.empty()) return 0.0;
    return fit(items).gain;
  }

  std::vector<double> gradient_at(const ItemSet& support) const override {
    check_items(support.items());
    const Eigen::VectorXd g = gradient(fit(support.items()).x);
    return {g.data(), g.data() + g.size()};
  }

  RestrictedFit fit(std::span<const ItemIndex> items) const {
    std::vector<Eigen::Index> idx(items.begin(), items.end());
    std::sort(idx.begin(), idx.end());
    RestrictedFit out;
    out.x = Eigen::VectorXd::Zero(problem_.X.cols());
    if (idx.empty()) return out;
    const Eigen::VectorXd xs =
        problem_.loss == LossKind::kLeastSquares ? solve_least_squares(idx) : solve_logistic(idx);
    for (std::size_t j = 0; j < idx.size(); ++j) out.x[idx[j]] = xs[static_cast<Eigen::Index>(j)];
    if (problem_.loss == LossKind::kLeastSquares) {
      const Eigen::VectorXd b = xty_(idx);
      const Eigen::MatrixXd g = gram_(idx, idx);
      out.gain = b.dot(xs) - 0.5 * xs.dot(g * xs) - 0.5 * problem_.ridge * xs.squaredNorm();
    } else {
      out.gain = utility(out.x) - utility(Eigen::VectorXd::Zero(problem_.X.cols()));
    }
    // Round-off can push the optimum of a near-zero gain slightly negative.
    out.gain = std::max(0.0, out.gain);
    return out;
  }

  double utility(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd z = problem_.X * x;
    const double penalty = 0.5 * problem_.ridge * x.squaredNorm();
    if (problem_.loss == LossKind::kLeastSquares) return -0.5 * (problem_.y - z).squaredNorm() - penalty;
    double ll = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      ll -= problem_.y[i] * detail::softplus(-z[i]) + (1.0 - problem_.y[i]) * detail::softplus(z[i]);
    }
    return ll - penalty;
  }

  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const {
    if (problem_.loss == LossKind::kLeastSquares) return xty_ - gram_ * x - problem_.ridge * x;
    const Eigen::VectorXd z = problem_.X * x;
    Eigen::VectorXd resid(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) resid[i] = problem_.y[i] - detail::sigmoid(z[i]);
    return problem_.X.transpose() * resid - problem_.ridge * x;
  }

 private:
  Eigen::VectorXd solve_least_squares(const std::vector<Eigen::Index>& idx) const {
    const auto s = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd g = gram_(idx, idx);
    g.diagonal().array() += problem_.ridge;
    const Eigen::VectorXd b = xty_(idx);
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() == Eigen::Success && llt.rcond() > 1e-12) return llt.solve(b);

    // Rank-deficient (or nearly so): minimum-norm solution of the stacked
    // system [X_S; sqrt(ridge) I] x = [y; 0] with a relative SVD cutoff.
    Eigen::MatrixXd a(problem_.X.rows() + s, s);
    a.topRows(problem_.X.rows()) = problem_.X(Eigen::all, idx);
    a.bottomRows(s) = std::sqrt(problem_.ridge) * Eigen::MatrixXd::Identity(s, s);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(a.rows());
    rhs.head(problem_.X.rows()) = problem_.y;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(kSingularThreshold);
    return svd.solve(rhs);
  }

  // Damped Newton ascent on the coordinates in idx.
  Eigen::VectorXd solve_logistic(const std::vector<Eigen::Index>& idx) const {
    const auto s = static_cast<Eigen::Index>(idx.size());
    const Eigen::MatrixXd xs_cols = problem_.X(Eigen::all, idx);
    const double ridge = problem_.ridge;
    auto value_at = [&](const Eigen::VectorXd& w) {
      const Eigen::VectorXd z = xs_cols * w;
      double ll = 0.0;
      for (Eigen::Index i = 0; i < z.size(); ++i) {
        ll -= problem_.y[i] * detail::softplus(-z[i]) + (1.0 - problem_.y[i]) * detail::softplus(z[i]);
      }
      return ll - 0.5 * ridge * w.squaredNorm();
    };

    Eigen::VectorXd w = Eigen::VectorXd::Zero(s);
    double value = value_at(w);
    double grad_norm = 0.0;
    for (int iter = 0; iter < kMaxNewtonIterations; ++iter) {
      const Eigen::VectorXd z = xs_cols * w;
      Eigen::VectorXd resid(z.size());
      Eigen::VectorXd weight(z.size());
      for (Eigen::Index i = 0; i < z.size(); ++i) {
        const double p = detail::sigmoid(z[i]);
        resid[i] = problem_.y[i] - p;
        weight[i] = p * (1.0 - p);
      }
      const Eigen::VectorXd g = xs_cols.transpose() * resid - ridge * w;
      grad_norm = g.norm();
      if (grad_norm <= kGradientTolerance) return w;

      Eigen::MatrixXd h = xs_cols.transpose() * weight.asDiagonal() * xs_cols;
      h.diagonal().array() += ridge;
      Eigen::VectorXd step = h.ldlt().solve(g);
      if (!step.allFinite()) step = g;
      const double slope = g.dot(step);

      // Once the predicted increase is below the resolution of l, take the
      // full Newton step; the line search can no longer discriminate.
      if (slope <= 1e-12 * (1.0 + std::abs(value))) {
        w += step;
        value = value_at(w);
        continue;
      }
      double t = 1.0;
      Eigen::VectorXd trial = w + step;
      double trial_value = value_at(trial);
      int backtracks = 0;
      while (!(trial_value >= value + 1e-4 * t * slope) && backtracks < kMaxBacktracks) {
        t *= 0.5;
        trial = w + t * step;
        trial_value = value_at(trial);
        ++backtracks;
      }
      if (trial_value < value) break;
      w = trial;
      value = trial_value;
    }
    const Eigen::VectorXd z = xs_cols * w;
    Eigen::VectorXd resid(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) resid[i] = problem_.y[i] - detail::sigmoid(z[i]);
    grad_norm = (xs_cols.transpose() * resid - ridge * w).norm();
    if (grad_norm <= kStalledTolerance) return w;
    throw ConvergenceError("logistic Newton solver did not converge; gradient norm " + std::to_string(grad_norm),
                           grad_norm);
  }

  DesignProblem problem_;
  Eigen::MatrixXd gram_;
  Eigen::VectorXd xty_;
};

inline double support_value(const DesignProblem& problem, const ItemSet& s) {
  return SupportObjective(problem)(s);
}

inline std::vector<double> support_gradient(const DesignProblem& problem, const ItemSet& s) {
  return SupportObjective(problem).gradient_at(s);
}

// Held-out metrics of a fitted coefficient vector.
struct TestMetrics {
  double mse = 0.0;
  double r2 = 0.0;
  double accuracy = 0.0;
};

inline TestMetrics evaluate_fit(LossKind loss, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                const Eigen::VectorXd& x) {
  TestMetrics m;
  if (y.size() == 0) return m;
  const Eigen::VectorXd z = X * x;
  if (loss == LossKind::kLeastSquares) {
    const double sse = (y - z).squaredNorm();
    const double sst = (y.array() - y.mean()).matrix().squaredNorm();
    m.mse = sse / static_cast<double>(y.size());
    m.r2 = sst > 0.0 ? 1.0 - sse / sst : 0.0;
  } else {
    Eigen::Index correct = 0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double predicted = detail::sigmoid(z[i]) > 0.5 ? 1.0 : 0.0;
      if (predicted == y[i]) ++correct;
    }
    m.accuracy = static_cast<double>(correct) / static_cast<double>(y.size());
  }
  return m;
}

}  // namespace robustsel

#endif  // ROBUSTSEL_SUPPORT_OBJECTIVE_HPP_
