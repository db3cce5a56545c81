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

namespace dpmac {

double Softplus(double x) {
  if (x > 30.0) return x + std::log1p(std::exp(-x));
  if (x < -30.0) return std::exp(x);  // log1p(e^x) with e^x < 1e-13
  return std::log1p(std::exp(x));
}

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

ActivationValue EvalActivation(Activation kind, double x) {
  switch (kind) {
    case Activation::kSoftplus: {
      const double s = Sigmoid(x);
      // s * (1 - s) loses all precision once s rounds to 1, so use the
      // symmetric form e^{-|x|} / (1 + e^{-|x|})^2.
      const double e = std::exp(-std::abs(x));
      const double f2 = e / ((1.0 + e) * (1.0 + e));
      return {Softplus(x), s, f2};
    }
    case Activation::kRelu:
      if (x > 0.0) return {x, 1.0, 0.0};
      return {0.0, 0.0, 0.0};
    case Activation::kIdentity:
      return {x, 1.0, 0.0};
  }
  return {};
}

std::string ToString(Activation kind) {
  switch (kind) {
    case Activation::kSoftplus:
      return "softplus";
    case Activation::kRelu:
      return "relu";
    case Activation::kIdentity:
      return "identity";
  }
  return "unknown";
}

Activation ParseActivation(std::string_view name) {
  if (name == "softplus") return Activation::kSoftplus;
  if (name == "relu") return Activation::kRelu;
  if (name == "identity") return Activation::kIdentity;
  throw ConfigError("unknown activation '" + std::string(name) + "'");
}

}  // namespace dpmac
