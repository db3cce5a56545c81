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

#ifndef DPMAC_OPTIMIZER_H_
#define DPMAC_OPTIMIZER_H_

#include <string>
#include <string_view>

#include "dpmac/network.h"

namespace dpmac {

enum class OptimizerKind { kAdam, kSgd };

std::string ToString(OptimizerKind kind);
OptimizerKind ParseOptimizer(std::string_view name);

// First-order optimizer over a single matrix parameter. State is lazily
// sized on the first step.
class MatrixOptimizer {
 public:
  explicit MatrixOptimizer(OptimizerKind kind = OptimizerKind::kAdam,
                           double beta1 = 0.9, double beta2 = 0.999,
                           double epsilon = 1e-8)
      : kind_(kind), beta1_(beta1), beta2_(beta2), epsilon_(epsilon) {}

  void Step(Matrix& param, const Matrix& grad, double learning_rate);
  void Reset();

  OptimizerKind kind() const { return kind_; }
  long steps() const { return t_; }

 private:
  OptimizerKind kind_;
  double beta1_;
  double beta2_;
  double epsilon_;
  long t_ = 0;
  Matrix m_;
  Matrix v_;
};

}  // namespace dpmac

#endif  // DPMAC_OPTIMIZER_H_
