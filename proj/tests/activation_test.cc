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

#include "dpmac/activation.h"

#include <cmath>

#include "dpmac/errors.h"
#include "gtest/gtest.h"

namespace dpmac {
namespace {

TEST(ActivationTest, SoftplusAtZero) {
  const ActivationValue v = EvalActivation(Activation::kSoftplus, 0.0);
  EXPECT_DOUBLE_EQ(v.f, std::log(2.0));
  EXPECT_DOUBLE_EQ(v.f1, 0.5);
  EXPECT_DOUBLE_EQ(v.f2, 0.25);
}

TEST(ActivationTest, SoftplusIsStableAtExtremes) {
  EXPECT_DOUBLE_EQ(Softplus(800.0), 800.0);
  EXPECT_GT(Softplus(-800.0), -1.0);
  EXPECT_LT(Softplus(-800.0), 1e-300);
  EXPECT_DOUBLE_EQ(Sigmoid(800.0), 1.0);
  EXPECT_GE(Sigmoid(-800.0), 0.0);
  for (double x : {-40.0, -31.0, -29.0, 29.0, 31.0, 40.0}) {
    EXPECT_NEAR(Softplus(x), std::log1p(std::exp(x)),
                1e-15 * std::max(1.0, std::abs(x)));
  }
}

TEST(ActivationTest, DerivativesMatchFiniteDifferences) {
  const double h = 1e-5;
  for (Activation act : {Activation::kSoftplus, Activation::kIdentity}) {
    for (double x : {-3.0, -0.7, 0.0, 0.4, 2.5}) {
      const ActivationValue v = EvalActivation(act, x);
      const double d1 =
          (EvalActivation(act, x + h).f - EvalActivation(act, x - h).f) / (2 * h);
      const double d2 =
          (EvalActivation(act, x + h).f1 - EvalActivation(act, x - h).f1) /
          (2 * h);
      EXPECT_NEAR(v.f1, d1, 1e-9);
      EXPECT_NEAR(v.f2, d2, 1e-9);
    }
  }
}

TEST(ActivationTest, ReluPiecewise) {
  const ActivationValue pos = EvalActivation(Activation::kRelu, 2.0);
  EXPECT_EQ(pos.f, 2.0);
  EXPECT_EQ(pos.f1, 1.0);
  EXPECT_EQ(pos.f2, 0.0);
  const ActivationValue neg = EvalActivation(Activation::kRelu, -2.0);
  EXPECT_EQ(neg.f, 0.0);
  EXPECT_EQ(neg.f1, 0.0);
}

TEST(ActivationTest, SoftplusSecondDerivativeBoundedByQuarter) {
  for (double x = -10.0; x <= 10.0; x += 0.01) {
    const ActivationValue v = EvalActivation(Activation::kSoftplus, x);
    EXPECT_LE(v.f2, 0.25 + 1e-15);
    EXPECT_GT(v.f1, 0.0);
    EXPECT_LT(v.f1, 1.0);
  }
}

TEST(ActivationTest, ParseRoundTrip) {
  for (Activation act :
       {Activation::kSoftplus, Activation::kRelu, Activation::kIdentity}) {
    EXPECT_EQ(ParseActivation(ToString(act)), act);
  }
  EXPECT_THROW(ParseActivation("tanh"), ConfigError);
}

}  // namespace
}  // namespace dpmac
