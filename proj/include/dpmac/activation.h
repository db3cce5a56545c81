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

#ifndef DPMAC_ACTIVATION_H_
#define DPMAC_ACTIVATION_H_

#include <string>
#include <string_view>

namespace dpmac {

enum class Activation { kSoftplus, kRelu, kIdentity };

// Value and the first two derivatives of an activation at one point.
struct ActivationValue {
  double f = 0.0;
  double f1 = 0.0;
  double f2 = 0.0;
};

// Overflow-safe softplus log(1 + e^x).
double Softplus(double x);

// Logistic sigmoid, the derivative of softplus.
double Sigmoid(double x);

// ReLU uses f'(0) = 0 and f'' = 0 everywhere.
ActivationValue EvalActivation(Activation kind, double x);

inline double ActivationOf(Activation kind, double x) {
  return EvalActivation(kind, x).f;
}

std::string ToString(Activation kind);
// Throws ConfigError on an unknown name.
Activation ParseActivation(std::string_view name);

}  // namespace dpmac

#endif  // DPMAC_ACTIVATION_H_
