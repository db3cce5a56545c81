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

#include "dpmac/clipping.h"

#include <random>

#include "dpmac/errors.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dpmac {
namespace {

TEST(ClipRowsTest, LargeTermScaledToThreshold) {
  const std::vector<Matrix> out = ClipRows({Matrix::Constant(1, 1, 2.0)}, 0.5);
  EXPECT_DOUBLE_EQ(out[0](0, 0), 0.5);
  EXPECT_DOUBLE_EQ(ClipFactor(2.0, 0.5), 0.25);
}

TEST(ClipRowsTest, SmallTermUnchanged) {
  const std::vector<Matrix> out = ClipRows({Matrix::Constant(1, 1, 0.3)}, 0.5);
  EXPECT_EQ(out[0](0, 0), 0.3);
}

TEST(ClipRowsTest, RandomStackBoundedAndDirectionPreserved) {
  std::mt19937_64 rng(50);
  std::vector<Matrix> terms;
  for (int i = 0; i < 200; ++i) {
    terms.push_back(::dpmac::testing::RandomMatrix(3, 4, 0.1 + i * 0.01, rng));
  }
  const std::vector<Matrix> out = ClipRows(terms, 0.8);
  for (size_t i = 0; i < terms.size(); ++i) {
    EXPECT_LE(out[i].norm(), 0.8 + 1e-12);
    const double cosine =
        (out[i].array() * terms[i].array()).sum() / (out[i].norm() * terms[i].norm());
    EXPECT_NEAR(cosine, 1.0, 1e-12);
  }
}

TEST(ClipRowsTest, NonPositiveThresholdThrows) {
  EXPECT_THROW(ClipRows({Matrix::Ones(1, 1)}, 0.0), ConfigError);
  EXPECT_THROW(ClipFactor(1.0, -1.0), ConfigError);
}

TEST(ClipRowsTest, ZeroTermStaysZero) {
  EXPECT_TRUE(ClipRows({Matrix::Zero(2, 2)}, 1.0)[0].isZero());
}

}  // namespace
}  // namespace dpmac
