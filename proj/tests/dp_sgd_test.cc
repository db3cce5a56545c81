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

#include "dpmac/dp_sgd.h"

#include <cmath>
#include <random>

#include "dpmac/errors.h"
#include "dpmac/synthetic.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dpmac {
namespace {

using ::dpmac::testing::NumericGradient;
using ::dpmac::testing::RandomBallRows;
using ::dpmac::testing::RandomMatrix;
using ::dpmac::testing::RelativeError;

const std::vector<int> kSizes = {4, 5, 3, 2};

double ExampleLoss(const WeightStack& w, const Matrix& x, const Matrix& y,
                   const Architecture& arch, int n) {
  return TaskObjective(w, x.row(n), y.row(n), arch);
}

class PerExampleGradientTest : public ::testing::TestWithParam<OutputLoss> {};

TEST_P(PerExampleGradientTest, MatchesFiniteDifferences) {
  std::mt19937_64 rng(90);
  const Architecture arch{Activation::kSoftplus, GetParam()};
  const WeightStack w = WeightStack::RandomNormal(kSizes, 0.8, rng);
  const Matrix x = RandomBallRows(6, 4, 1.0, rng, false);
  const Matrix y = (RandomMatrix(6, 2, 1.0, rng).array().abs().min(1.0)).matrix();
  const auto grads = PerExampleGradients(w, x, y, arch);
  ASSERT_EQ(grads.size(), 6u);
  for (int n = 0; n < 6; ++n) {
    for (int k = 0; k < w.num_layers(); ++k) {
      const Matrix numeric = NumericGradient(
          [&](const Matrix& wk) {
            WeightStack probe = w;
            probe.mutable_layer(k) = wk;
            return ExampleLoss(probe, x, y, arch, n);
          },
          w.layer(k));
      EXPECT_LT(RelativeError(grads[n][k], numeric), 1e-6)
          << "example " << n << " layer " << k;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(BothLosses, PerExampleGradientTest,
                         ::testing::Values(OutputLoss::kMse, OutputLoss::kBce));

TEST(PerExampleGradientTest, ZeroResidualGivesZeroGradient) {
  std::mt19937_64 rng(91);
  const Architecture arch;
  const WeightStack w = WeightStack::RandomNormal(kSizes, 1.0, rng);
  const Matrix x = RandomBallRows(5, 4, 1.0, rng, false);
  const Matrix y = ForwardBatch(w, x, arch).back();
  for (const auto& per_example : PerExampleGradients(w, x, y, arch)) {
    for (const Matrix& g : per_example) EXPECT_LT(g.cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(ClippedGradientSumTest, UnclippedSumIsFullBatchGradient) {
  std::mt19937_64 rng(92);
  const Architecture arch;
  const WeightStack w = WeightStack::RandomNormal(kSizes, 1.0, rng);
  const Matrix x = RandomBallRows(7, 4, 1.0, rng, false);
  const Matrix y = RandomMatrix(7, 2, 1.0, rng);
  const auto sums = ClippedGradientSum(w, x, y, arch, std::nullopt, false);
  for (int k = 0; k < w.num_layers(); ++k) {
    const Matrix numeric = NumericGradient(
        [&](const Matrix& wk) {
          WeightStack probe = w;
          probe.mutable_layer(k) = wk;
          return NestedMse(probe, x, y, arch);
        },
        w.layer(k));
    EXPECT_LT(RelativeError(sums[k] / 7.0, numeric), 1e-6);
  }
}

TEST(ClippedGradientSumTest, MatchesExplicitClipping) {
  std::mt19937_64 rng(93);
  const Architecture arch;
  const WeightStack w = WeightStack::RandomNormal(kSizes, 1.5, rng);
  const Matrix x = RandomBallRows(9, 4, 1.0, rng, true);
  const Matrix y = RandomMatrix(9, 2, 2.0, rng);
  const auto per = PerExampleGradients(w, x, y, arch);
  for (bool per_layer : {false, true}) {
    const double theta = 0.05;
    const auto sums = ClippedGradientSum(w, x, y, arch, theta, per_layer);
    for (int k = 0; k < w.num_layers(); ++k) {
      Matrix expected = Matrix::Zero(w.layer(k).rows(), w.layer(k).cols());
      for (const auto& g : per) {
        double norm = 0.0;
        if (per_layer) {
          norm = g[k].norm();
        } else {
          for (const Matrix& m : g) norm += m.squaredNorm();
          norm = std::sqrt(norm);
        }
        const double bound = per_layer ? theta / std::sqrt(3.0) : theta;
        expected += g[k] * std::min(1.0, bound / norm);
      }
      EXPECT_LT(RelativeError(sums[k], expected), 1e-12);
    }
  }
}

TEST(DpSgdStepTest, ZeroNoiseUnclippedIsPlainSgd) {
  std::mt19937_64 rng(94);
  const Architecture arch;
  WeightStack w = WeightStack::RandomNormal(kSizes, 1.0, rng);
  const Matrix x = RandomBallRows(10, 4, 1.0, rng, false);
  const Matrix y = RandomMatrix(10, 2, 1.0, rng);
  SgdConfig cfg;
  cfg.batch_size = 10;
  WeightStack expected = w;
  const auto sums = ClippedGradientSum(w, x, y, arch, std::nullopt, false);
  for (int k = 0; k < w.num_layers(); ++k) {
    expected.mutable_layer(k) -= 0.3 * sums[k] / 10.0;
  }
  MomentsLedger ledger;
  DpSgdStep(w, x, y, arch, cfg, 0.3, 0.0, 1.0, rng, ledger);
  for (int k = 0; k < w.num_layers(); ++k) {
    EXPECT_LT((w.layer(k) - expected.layer(k)).cwiseAbs().maxCoeff(), 1e-14);
  }
  EXPECT_EQ(ledger.steps_recorded(), 1);
}

TEST(DpSgdStepTest, NoiseStdIsThresholdTimesSigmaOverBatch) {
  std::mt19937_64 rng(95);
  const Architecture arch;
  const std::vector<int> sizes = {50, 40, 50};
  const WeightStack w0 = WeightStack::Zeros(sizes);
  const Matrix x = Matrix::Zero(1, 50);
  const Matrix y = Matrix::Zero(1, 50);
  SgdConfig cfg;
  cfg.clip_bound = 0.5;
  cfg.batch_size = 20;
  const double expected = 0.5 * 3.0 / 20.0;
  double sq = 0.0;
  long count = 0;
  MomentsLedger ledger;
  for (int rep = 0; rep < 250; ++rep) {
    WeightStack w = w0;
    DpSgdStep(w, x, y, arch, cfg, 1.0, 3.0, 0.1, rng, ledger);
    for (const Matrix& m : w.layers()) {
      sq += m.squaredNorm();
      count += m.size();
    }
  }
  EXPECT_GT(count, 900000);
  EXPECT_NEAR(std::sqrt(sq / count) / expected, 1.0, 0.01);
  EXPECT_EQ(ledger.steps_recorded(), 250);
}

TEST(DpSgdStepTest, NoiseRequiresClipBound) {
  std::mt19937_64 rng(96);
  WeightStack w = WeightStack::Zeros(std::vector<int>{2, 2});
  MomentsLedger ledger;
  EXPECT_THROW(DpSgdStep(w, Matrix::Zero(1, 2), Matrix::Zero(1, 2), {}, {}, 0.1,
                         1.0, 0.5, rng, ledger),
               ConfigError);
}

Dataset BlobData(int n, std::mt19937_64& rng) {
  LabelledData blobs = MakeBlobs(n, 6, 3, 1.0, 0.2, rng);
  return Dataset::Create(blobs.features, OneHot(blobs.labels, 3), 1.0);
}

TEST(TrainDpSgdTest, FixedSeedIsDeterministic) {
  std::mt19937_64 data_rng(97);
  const Dataset data = BlobData(200, data_rng);
  SgdConfig cfg;
  cfg.clip_bound = 1.0;
  cfg.batch_size = 20;
  cfg.epochs = 2;
  const Architecture arch{Activation::kSoftplus, OutputLoss::kBce};
  std::mt19937_64 a(5);
  std::mt19937_64 b(5);
  const TrainResult ra = TrainDpSgd(data, nullptr, {6, 8, 3}, arch, cfg, {1.0}, a);
  const TrainResult rb = TrainDpSgd(data, nullptr, {6, 8, 3}, arch, cfg, {1.0}, b);
  for (int k = 0; k < 2; ++k) EXPECT_EQ(ra.weights.layer(k), rb.weights.layer(k));
  EXPECT_EQ(ra.privacy.epsilon, rb.privacy.epsilon);
  EXPECT_EQ(ra.privacy.steps, 20);
  EXPECT_EQ(ra.privacy.events, 20);
}

TEST(TrainDpSgdTest, NonPrivateTrainingReducesLoss) {
  std::mt19937_64 data_rng(98);
  const Dataset data = BlobData(300, data_rng);
  SgdConfig cfg;
  cfg.batch_size = 30;
  cfg.epochs = 20;
  cfg.lr = 0.5;
  cfg.init_scale = 0.3;
  const Architecture arch{Activation::kSoftplus, OutputLoss::kBce};
  std::mt19937_64 rng(6);
  const TrainResult r = TrainDpSgd(data, &data, {6, 8, 3}, arch, cfg, {0.0}, rng);
  const auto& log = r.metrics.records;
  EXPECT_LT(log.back().train_objective, 0.7 * log.front().train_objective);
  EXPECT_GT(log.back().test_accuracy, 0.9);
  EXPECT_TRUE(std::isinf(r.privacy.epsilon));
}

TEST(TrainDpSgdTest, PrivateTrainingSpendsBudget) {
  std::mt19937_64 data_rng(99);
  const Dataset data = BlobData(400, data_rng);
  SgdConfig cfg;
  cfg.clip_bound = 1.0;
  cfg.batch_size = 40;
  cfg.epochs = 3;
  const Architecture arch{Activation::kSoftplus, OutputLoss::kBce};
  std::mt19937_64 rng(7);
  const TrainResult r = TrainDpSgd(data, nullptr, {6, 3}, arch, cfg, {2.0}, rng);
  MomentsLedger ledger;
  ledger.Compose(0.1, 2.0, 30);
  EXPECT_DOUBLE_EQ(r.privacy.epsilon, EpsilonForDelta(ledger, 1e-5).epsilon);
  EXPECT_EQ(r.privacy.q, 0.1);
  double previous = -1.0;
  for (const MetricRecord& m : r.metrics.records) {
    EXPECT_GE(m.epsilon, previous);
    previous = m.epsilon;
  }
}

TEST(SgdConfigTest, RejectsBadFields) {
  SgdConfig cfg;
  cfg.lr = 0.0;
  EXPECT_THROW(cfg.Validate(100), ConfigError);
  cfg = SgdConfig();
  cfg.batch_size = 200;
  EXPECT_THROW(cfg.Validate(100), ConfigError);
  cfg = SgdConfig();
  cfg.clip_bound = -1.0;
  EXPECT_THROW(cfg.Validate(100), ConfigError);
}

}  // namespace
}  // namespace dpmac
