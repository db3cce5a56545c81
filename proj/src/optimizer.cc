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

#include "dpmac/optimizer.h"

#include <cmath>

#include "dpmac/errors.h"

namespace dpmac {

std::string ToString(OptimizerKind kind) {
  return kind == OptimizerKind::kAdam ? "adam" : "sgd";
}

OptimizerKind ParseOptimizer(std::string_view name) {
  if (name == "adam") return OptimizerKind::kAdam;
  if (name == "sgd") return OptimizerKind::kSgd;
  throw ConfigError("unknown optimizer '" + std::string(name) + "'");
}

void MatrixOptimizer::Step(Matrix& param, const Matrix& grad,
                           double learning_rate) {
  if (grad.rows() != param.rows() || grad.cols() != param.cols()) {
    throw DimensionError("gradient shape does not match parameter");
  }
  ++t_;
  if (kind_ == OptimizerKind::kSgd) {
    param -= learning_rate * grad;
    return;
  }
  if (m_.rows() != param.rows() || m_.cols() != param.cols()) {
    m_ = Matrix::Zero(param.rows(), param.cols());
    v_ = Matrix::Zero(param.rows(), param.cols());
  }
  m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
  v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  param.array() -= learning_rate * (m_.array() / c1) /
                   ((v_.array() / c2).sqrt() + epsilon_);
}

void MatrixOptimizer::Reset() {
  t_ = 0;
  m_.resize(0, 0);
  v_.resize(0, 0);
}

}  // namespace dpmac
