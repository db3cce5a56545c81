// Copyright 2026 The dpmac Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpmac/dp_pca.h"

#include <random>

#include <Eigen/SVD>

#include "dpmac/errors.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dpmac {
namespace {

using ::dpmac::testing::RandomMatrix;

TEST(DpPcaTest, ExactRankRecoversSubspace) {
  std::mt19937_64 rng(70);
  const Matrix basis = RandomMatrix(6, 3, 1.0, rng).householderQr().householderQ() *
                       Matrix::Identity(6, 3);
  Matrix x = RandomMatrix(200, 3, 1.0, rng) * basis.transpose();
  for (int i = 0; i < x.rows(); ++i) x.row(i) /= 1.01 * x.row(i).norm();
  const DpPcaResult r = DpPca(x, 3, 0.0, rng);
  // Principal angles: singular values of basis^T P are all 1.
  const Eigen::JacobiSVD<Matrix> svd(basis.transpose() * r.projection);
  EXPECT_LT((svd.singularValues() - Vector::Ones(3)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_GE(r.eigenvalues(0), r.eigenvalues(1));
}

TEST(DpPcaTest, OrthonormalColumnsWithNoise) {
  std::mt19937_64 rng(71);
  Matrix x = RandomMatrix(100, 8, 0.2, rng);
  for (int i = 0; i < x.rows(); ++i) {
    if (x.row(i).norm() > 1.0) x.row(i).normalize();
  }
  for (double sigma : {4.0, 8.0, 16.0}) {
    const DpPcaResult r = DpPca(x, 5, sigma, rng);
    EXPECT_LT((r.projection.transpose() * r.projection - Matrix::Identity(5, 5))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-10);
  }
}

TEST(DpPcaTest, RejectsTooManyComponents) {
  std::mt19937_64 rng(72);
  EXPECT_THROW(DpPca(Matrix::Zero(3, 4), 5, 0.0, rng), DimensionError);
  EXPECT_THROW(DpPca(Matrix::Zero(3, 4), 0, 0.0, rng), DimensionError);
}

TEST(DpPcaTest, RejectsRowsOutsideUnitBall) {
  std::mt19937_64 rng(73);
  EXPECT_THROW(DpPca(Matrix::Constant(2, 2, 1.0), 1, 0.0, rng), DataError);
}

}  // namespace
}  // namespace dpmac
