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

#include <cmath>
#include <sstream>

#include "robustsel/csv.hpp"
#include "robustsel/errors.hpp"
#include "robustsel/synth_data.hpp"

namespace rs = robustsel;

namespace {

double column_correlation(const Eigen::MatrixXd& x, Eigen::Index a, Eigen::Index b) {
  const Eigen::VectorXd u = x.col(a).array() - x.col(a).mean();
  const Eigen::VectorXd v = x.col(b).array() - x.col(b).mean();
  return u.dot(v) / std::sqrt(u.squaredNorm() * v.squaredNorm());
}

}  // namespace

TEST(Autoregressive, UnitVarianceAndLagCorrelation) {
  const auto x = rs::autoregressive_matrix(20000, 4, 0.5, 7);
  for (Eigen::Index j = 0; j < 4; ++j) {
    const double mean = x.col(j).mean();
    const double var = (x.col(j).array() - mean).square().sum() / (x.rows() - 1);
    EXPECT_NEAR(mean, 0.0, 0.03);
    EXPECT_NEAR(var, 1.0, 0.04);
  }
  EXPECT_NEAR(column_correlation(x, 0, 1), std::sqrt(0.5), 0.02);
  EXPECT_NEAR(column_correlation(x, 0, 2), 0.5, 0.02);
}

TEST(Autoregressive, FullInnovationIsIndependent) {
  const auto x = rs::autoregressive_matrix(20000, 3, 1.0, 8);
  EXPECT_NEAR(column_correlation(x, 0, 1), 0.0, 0.03);
  EXPECT_NEAR(column_correlation(x, 1, 2), 0.0, 0.03);
}

TEST(Autoregressive, SeedDeterminism) {
  EXPECT_EQ(rs::autoregressive_matrix(5, 6, 0.3, 1), rs::autoregressive_matrix(5, 6, 0.3, 1));
  EXPECT_NE(rs::autoregressive_matrix(5, 6, 0.3, 1), rs::autoregressive_matrix(5, 6, 0.3, 2));
  EXPECT_THROW(rs::autoregressive_matrix(2, 2, 0.0, 1), rs::ParameterError);
}

TEST(SparseLinear, SupportAndNoiselessTarget) {
  const auto x = rs::autoregressive_matrix(40, 30, 0.5, 3);
  const auto t = rs::sparse_linear_target(x, 7, 11, 0.0);
  EXPECT_EQ((t.omega.array() != 0.0).count(), 7);
  EXPECT_LT((t.y - x * t.omega).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(rs::sparse_linear_target(x, 31, 11), rs::ParameterError);
}

TEST(SparseLinear, ZeroSparsityIsPureNoise) {
  const auto x = rs::autoregressive_matrix(20000, 3, 0.5, 3);
  const auto t = rs::sparse_linear_target(x, 0, 4, 5.0);
  EXPECT_EQ(t.omega.squaredNorm(), 0.0);
  const double var = (t.y.array() - t.y.mean()).square().sum() / (t.y.size() - 1);
  EXPECT_NEAR(var, 5.0, 0.2);
}

TEST(SparseLogistic, ZeroWeightsGiveNegativeLabels) {
  const auto x = rs::autoregressive_matrix(50, 5, 0.5, 3);
  const auto t = rs::sparse_logistic_target(x, 0, 4);
  EXPECT_EQ(t.y.sum(), 0.0);
}

TEST(SparseLogistic, SingleFeatureHandCheck) {
  Eigen::MatrixXd x(2, 1);
  x << 1.0, -1.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto t = rs::sparse_logistic_target(x, 1, seed);
    const double w = t.omega[0];
    ASSERT_LE(std::abs(w), 1.0);
    EXPECT_EQ(t.y[0], w < 0.0 ? 1.0 : 0.0);
    EXPECT_EQ(t.y[1], w > 0.0 ? 1.0 : 0.0);
    const auto flipped = rs::sparse_logistic_target(x, 1, seed, true);
    EXPECT_EQ(flipped.y[0], w > 0.0 ? 1.0 : 0.0);
  }
}

TEST(GpSample, CovarianceMatchesKernel) {
  Eigen::MatrixXd pts(3, 1);
  pts << 0.0, 0.5, 2.0;
  const rs::KernelSpec kernel;
  const Eigen::MatrixXd k = rs::gram_matrix(kernel, pts);
  const int draws = 5000;
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(3, 3);
  for (int s = 0; s < draws; ++s) {
    const auto g = rs::gp_sample(pts, kernel, 0.0, static_cast<std::uint64_t>(s));
    acc += g.latent * g.latent.transpose();
  }
  acc /= draws;
  EXPECT_LT((acc - k).cwiseAbs().maxCoeff(), 0.05 * k.cwiseAbs().maxCoeff() + 0.02);
}

TEST(GpSample, RejectsBadKernel) {
  Eigen::MatrixXd pts(2, 1);
  pts << 0.0, 1.0;
  rs::KernelSpec kernel;
  kernel.lengthscale = 0.0;
  EXPECT_THROW(rs::gp_sample(pts, kernel, 0.1, 1), rs::ParameterError);
}

TEST(MakeDataset, SplitSizesAndDeterminism) {
  auto spec = rs::SynthSpec::desk_linear();
  spec.seed = 5;
  const auto a = rs::make_dataset(spec);
  EXPECT_EQ(a.X_train.rows(), 200);
  EXPECT_EQ(a.X_test.rows(), 600);
  EXPECT_EQ(a.X_train.cols(), 100);
  EXPECT_EQ((a.omega.array() != 0.0).count(), 50);
  const auto b = rs::make_dataset(spec);
  EXPECT_EQ(a.X_train, b.X_train);
  EXPECT_EQ(a.y_test, b.y_test);

  auto gp = rs::SynthSpec::desk_gp();
  gp.seed = 2;
  const auto g = rs::make_dataset(gp);
  EXPECT_EQ(g.X_train.rows(), 120);
  EXPECT_EQ(g.X_test.rows(), 0);
  EXPECT_EQ(g.omega.size(), 0);

  spec.sparsity = 101;
  EXPECT_THROW(rs::make_dataset(spec), rs::ParameterError);
}

TEST(DenseCsv, RoundTrip) {
  auto spec = rs::SynthSpec::desk_logistic();
  spec.n_train = 6;
  spec.n_test = 1;
  spec.d = 3;
  spec.sparsity = 2;
  const auto ds = rs::make_dataset(spec);
  std::stringstream ss;
  rs::write_dense_csv(ss, ds.X_train, ds.y_train);
  const auto back = rs::parse_dense_csv(ss);
  EXPECT_EQ(back.header, (std::vector<std::string>{"x0", "x1", "x2", "target"}));
  EXPECT_LT((back.X - ds.X_train).cwiseAbs().maxCoeff(), 1e-11);
  EXPECT_EQ(back.y, ds.y_train);
}

TEST(DenseCsv, HeaderOptionalAndErrors) {
  std::istringstream plain("1,2,3\n4,5,6\n");
  const auto d = rs::parse_dense_csv(plain);
  EXPECT_EQ(d.X.rows(), 2);
  EXPECT_EQ(d.X.cols(), 2);
  EXPECT_EQ(d.y[1], 6.0);
  std::istringstream ragged("1,2,3\n4,5\n");
  EXPECT_THROW(rs::parse_dense_csv(ragged), rs::ConfigError);
  std::istringstream text("a,b\n1,x\n");
  EXPECT_THROW(rs::parse_dense_csv(text), rs::ConfigError);
  std::istringstream empty("a,b\n");
  EXPECT_THROW(rs::parse_dense_csv(empty), rs::ConfigError);
}
