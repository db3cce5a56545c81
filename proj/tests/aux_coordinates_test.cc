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

#include "dpmac/aux_coordinates.h"

#include <cmath>
#include <random>

#include "dpmac/errors.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dpmac {
namespace {

using ::dpmac::testing::NumericGradient;
using ::dpmac::testing::RandomMatrix;
using ::dpmac::testing::RelativeError;

AuxCoordinates ExactForward(const WeightStack& w, const Matrix& x,
                            const Architecture& arch) {
  std::vector<Matrix> acts = ForwardBatch(w, x, arch);
  acts.pop_back();
  return AuxCoordinates{acts};
}

TEST(InitAuxTest, ZeroWeightsGiveLogTwoRows) {
  const std::vector<int> sizes = {3, 4, 2};
  const WeightStack w = WeightStack::Zeros(sizes);
  const Matrix x = Matrix::Ones(5, 3);
  const AuxCoordinates big = InitAuxCoordinates(w, x, Architecture{}, 10.0);
  EXPECT_TRUE(big.z[0].isApprox(Matrix::Constant(5, 4, std::log(2.0))));
  // ||(ln 2) 1_4|| = 2 ln 2 > 1, so rows are scaled onto the unit sphere.
  const AuxCoordinates unit = InitAuxCoordinates(w, x, Architecture{}, 1.0);
  EXPECT_TRUE(unit.z[0].isApprox(Matrix::Constant(5, 4, 0.5)));
}

TEST(InitAuxTest, IdentityNetworkCopiesInputs) {
  const WeightStack w({Matrix::Identity(3, 3), Matrix::Identity(3, 3)});
  const Architecture arch{Activation::kIdentity, OutputLoss::kMse};
  std::mt19937_64 rng(20);
  const Matrix x = RandomMatrix(4, 3, 0.1, rng);
  EXPECT_EQ(InitAuxCoordinates(w, x, arch, 1.0).z[0], x);
}

TEST(InitAuxTest, MatchesForwardBeforeProjection) {
  std::mt19937_64 rng(21);
  const std::vector<int> sizes = {4, 5, 3, 2};
  const WeightStack w = WeightStack::RandomNormal(sizes, 0.5, rng);
  const Matrix x = RandomMatrix(6, 4, 1.0, rng);
  const AuxCoordinates z = InitAuxCoordinates(w, x, Architecture{}, 1e9);
  const AuxCoordinates expected = ExactForward(w, x, Architecture{});
  for (size_t k = 0; k < z.z.size(); ++k) EXPECT_EQ(z.z[k], expected.z[k]);
}

TEST(ExpandedObjectiveTest, PinnedCoordinatesGiveNestedObjective) {
  std::mt19937_64 rng(22);
  const std::vector<int> sizes = {4, 6, 5, 3};
  const WeightStack w = WeightStack::RandomNormal(sizes, 0.6, rng);
  const Matrix x = RandomMatrix(8, 4, 1.0, rng);
  const Matrix y = RandomMatrix(8, 3, 1.0, rng);
  const Architecture arch;
  const double e = ExpandedObjective(w, ExactForward(w, x, arch), x, y, arch,
                                     {1.0, 8.0});
  EXPECT_NEAR(e, NestedMse(w, x, y, arch), 1e-14);
  const Architecture bce{Activation::kSoftplus, OutputLoss::kBce};
  const Matrix labels = y.unaryExpr([](double v) { return v > 0 ? 1.0 : 0.0; });
  EXPECT_NEAR(ExpandedObjective(w, ExactForward(w, x, bce), x, labels, bce,
                                {1.0, 8.0}),
              TaskObjective(w, x, labels, bce), 1e-14);
}

TEST(ExpandedObjectiveTest, SingleLayerIsOutputLossOnly) {
  std::mt19937_64 rng(23);
  const WeightStack w({RandomMatrix(3, 2, 1.0, rng)});
  const Matrix x = RandomMatrix(5, 3, 1.0, rng);
  const Matrix y = RandomMatrix(5, 2, 1.0, rng);
  EXPECT_NEAR(ExpandedObjective(w, AuxCoordinates{}, x, y, Architecture{},
                                {2.0, 5.0}),
              NestedMse(w, x, y, Architecture{}), 1e-15);
}

TEST(ExpandedObjectiveTest, MatchesNaiveLoops) {
  std::mt19937_64 rng(24);
  const std::vector<int> sizes = {3, 4, 2};
  const WeightStack w = WeightStack::RandomNormal(sizes, 0.8, rng);
  const Matrix x = RandomMatrix(6, 3, 1.0, rng);
  const Matrix y = RandomMatrix(6, 2, 1.0, rng);
  const AuxCoordinates z{{RandomMatrix(6, 4, 1.0, rng)}};
  const double mu = 1.7;
  const double n = 6.0;
  double hidden = 0.0;
  double out = 0.0;
  for (int i = 0; i < 6; ++i) {
    for (int h = 0; h < 4; ++h) {
      double u = 0.0;
      for (int d = 0; d < 3; ++d) u += w.layer(0)(d, h) * x(i, d);
      const double r = z.z[0](i, h) - Softplus(u);
      hidden += r * r;
    }
    for (int h = 0; h < 2; ++h) {
      double u = 0.0;
      for (int d = 0; d < 4; ++d) u += w.layer(1)(d, h) * z.z[0](i, d);
      out += (y(i, h) - u) * (y(i, h) - u);
    }
  }
  const double naive = out / (2 * n) + mu * hidden / (2 * n);
  EXPECT_NEAR(ExpandedObjective(w, z, x, y, Architecture{}, {mu, n}), naive,
              1e-12);
}

TEST(ExpandedObjectiveTest, GradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(25);
  for (OutputLoss loss : {OutputLoss::kMse, OutputLoss::kBce}) {
    const Architecture arch{Activation::kSoftplus, loss};
    const std::vector<int> sizes = {3, 5, 4, 2};
    const WeightStack w = WeightStack::RandomNormal(sizes, 0.7, rng);
    const Matrix x = RandomMatrix(5, 3, 1.0, rng);
    Matrix y = RandomMatrix(5, 2, 1.0, rng);
    if (loss == OutputLoss::kBce) {
      y = y.unaryExpr([](double v) { return v > 0 ? 1.0 : 0.0; });
    }
    const AuxCoordinates z{{RandomMatrix(5, 5, 0.5, rng),
                            RandomMatrix(5, 4, 0.5, rng)}};
    const ExpandedObjectiveParams params{1.3, 5.0};
    const std::vector<Matrix> gz = ExpandedObjectiveGradZ(w, z, x, y, arch, params);
    for (size_t k = 0; k < z.z.size(); ++k) {
      auto f = [&](const Matrix& m) {
        AuxCoordinates v = z;
        v.z[k] = m;
        return ExpandedObjective(w, v, x, y, arch, params);
      };
      EXPECT_LT(RelativeError(gz[k], NumericGradient(f, z.z[k])), 1e-6);
    }
    const std::vector<Matrix> gw = ExpandedObjectiveGradW(w, z, x, y, arch, params);
    for (int k = 0; k < w.num_layers(); ++k) {
      auto f = [&](const Matrix& m) {
        WeightStack v = w;
        v.mutable_layer(k) = m;
        return ExpandedObjective(v, z, x, y, arch, params);
      };
      EXPECT_LT(RelativeError(gw[k], NumericGradient(f, w.layer(k))), 1e-6);
    }
  }
}

TEST(ExpandedObjectiveTest, ShapeMismatchThrows) {
  const std::vector<int> sizes = {3, 4, 2};
  const WeightStack w = WeightStack::Zeros(sizes);
  const Matrix x = Matrix::Zero(5, 3);
  const Matrix y = Matrix::Zero(5, 2);
  EXPECT_THROW(ExpandedObjective(w, AuxCoordinates{}, x, y, Architecture{}, {}),
               DimensionError);
  EXPECT_THROW(ExpandedObjective(w, AuxCoordinates{{Matrix::Zero(4, 4)}}, x, y,
                                 Architecture{}, {}),
               DimensionError);
}

TEST(ZUpdateTest, StationaryPointIsUnchanged) {
  // Identity activation, y equal to the network output: every residual is 0.
  std::mt19937_64 rng(26);
  const Architecture arch{Activation::kIdentity, OutputLoss::kMse};
  const WeightStack w({RandomMatrix(3, 3, 0.3, rng), RandomMatrix(3, 2, 0.3, rng)});
  const Matrix x = RandomMatrix(4, 3, 0.2, rng);
  const AuxCoordinates z0 = ExactForward(w, x, arch);
  const Matrix y = ForwardBatch(w, x, arch).back();
  ZUpdateOptions opts;
  opts.steps = 25;
  opts.learning_rate = 0.1;
  opts.norm_bound = 100.0;
  const AuxCoordinates z = ZUpdate(w, z0, x, y, arch, opts);
  EXPECT_LT((z.z[0] - z0.z[0]).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ZUpdateTest, ConvergesToLeastSquaresSolution) {
  // One scalar z between x = 1 and y: E = (z - a)^2 mu / 2 + (y - b z)^2 / 2.
  const double a = 0.4;
  const double b = 1.5;
  const double y = 0.9;
  const double mu = 1.0;
  const WeightStack w({Matrix::Constant(1, 1, a), Matrix::Constant(1, 1, b)});
  const Architecture arch{Activation::kIdentity, OutputLoss::kMse};
  const Matrix x = Matrix::Ones(1, 1);
  const Matrix ym = Matrix::Constant(1, 1, y);
  const double optimum = (mu * a + b * y) / (mu + b * b);
  ZUpdateOptions opts;
  opts.optimizer = OptimizerKind::kSgd;
  opts.learning_rate = 0.2;
  opts.norm_bound = 10.0;
  opts.steps = 1;
  opts.objective = {mu, 1.0};
  AuxCoordinates z{{Matrix::Constant(1, 1, -1.0)}};
  double previous = ExpandedObjective(w, z, x, ym, arch, opts.objective);
  for (int i = 0; i < 200; ++i) {
    z = ZUpdate(w, z, x, ym, arch, opts);
    const double e = ExpandedObjective(w, z, x, ym, arch, opts.objective);
    EXPECT_LE(e, previous + 1e-15);
    previous = e;
  }
  EXPECT_NEAR(z.z[0](0, 0), optimum, 1e-10);
}

TEST(ZUpdateTest, RowsStayInBall) {
  std::mt19937_64 rng(27);
  const std::vector<int> sizes = {3, 6, 4, 2};
  const WeightStack w = WeightStack::RandomNormal(sizes, 2.0, rng);
  const Matrix x = RandomMatrix(10, 3, 1.0, rng);
  const Matrix y = RandomMatrix(10, 2, 5.0, rng);
  ZUpdateOptions opts;
  opts.steps = 10;
  opts.learning_rate = 0.5;
  opts.norm_bound = 0.7;
  const AuxCoordinates z =
      ZUpdate(w, InitAuxCoordinates(w, x, Architecture{}, 0.7), x, y,
              Architecture{}, opts);
  for (const Matrix& m : z.z) {
    EXPECT_LE(m.rowwise().norm().maxCoeff(), 0.7 + 1e-12);
  }
}

}  // namespace
}  // namespace dpmac
