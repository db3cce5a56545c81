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

#include "dpmac/network.h"

#include <cmath>
#include <string>
#include <utility>

#include "dpmac/errors.h"

namespace dpmac {

WeightStack::WeightStack(std::vector<Matrix> layers)
    : layers_(std::move(layers)) {
  if (layers_.empty()) throw DimensionError("weight stack has no layers");
  for (size_t k = 0; k + 1 < layers_.size(); ++k) {
    if (layers_[k].cols() != layers_[k + 1].rows()) {
      throw DimensionError("layer " + std::to_string(k + 1) + " outputs " +
                           std::to_string(layers_[k].cols()) +
                           " units but layer " + std::to_string(k + 2) +
                           " expects " + std::to_string(layers_[k + 1].rows()));
    }
  }
  if (!AllFinite()) throw DimensionError("weight stack has non-finite entries");
}

WeightStack WeightStack::Zeros(std::span<const int> sizes) {
  if (sizes.size() < 2) throw DimensionError("need at least two layer sizes");
  std::vector<Matrix> layers;
  for (size_t k = 0; k + 1 < sizes.size(); ++k) {
    layers.push_back(Matrix::Zero(sizes[k], sizes[k + 1]));
  }
  return WeightStack(std::move(layers));
}

WeightStack WeightStack::RandomNormal(std::span<const int> sizes, double scale,
                                      std::mt19937_64& rng) {
  WeightStack w = Zeros(sizes);
  std::normal_distribution<double> normal(0.0, scale);
  for (Matrix& m : w.layers_) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = normal(rng);
    }
  }
  return w;
}

int WeightStack::input_dim() const {
  return layers_.empty() ? 0 : static_cast<int>(layers_.front().rows());
}

int WeightStack::output_dim() const {
  return layers_.empty() ? 0 : static_cast<int>(layers_.back().cols());
}

std::vector<int> WeightStack::sizes() const {
  std::vector<int> out;
  if (layers_.empty()) return out;
  out.push_back(input_dim());
  for (const Matrix& m : layers_) out.push_back(static_cast<int>(m.cols()));
  return out;
}

bool WeightStack::AllFinite() const {
  for (const Matrix& m : layers_) {
    if (!m.allFinite()) return false;
  }
  return true;
}

Matrix Activate(Activation kind, const Matrix& pre) {
  if (kind == Activation::kIdentity) return pre;
  return pre.unaryExpr([kind](double x) { return ActivationOf(kind, x); });
}

ActivatedMatrix ActivateWithDerivatives(Activation kind, const Matrix& pre) {
  ActivatedMatrix out{Matrix(pre.rows(), pre.cols()),
                      Matrix(pre.rows(), pre.cols()),
                      Matrix(pre.rows(), pre.cols())};
  for (Eigen::Index j = 0; j < pre.cols(); ++j) {
    for (Eigen::Index i = 0; i < pre.rows(); ++i) {
      const ActivationValue v = EvalActivation(kind, pre(i, j));
      out.f(i, j) = v.f;
      out.f1(i, j) = v.f1;
      out.f2(i, j) = v.f2;
    }
  }
  return out;
}

Matrix ApplyOutput(OutputLoss loss, const Matrix& pre) {
  if (loss == OutputLoss::kMse) return pre;
  return pre.unaryExpr([](double x) { return Sigmoid(x); });
}

std::vector<Vector> Forward(const WeightStack& w, const Vector& x,
                            const Architecture& arch) {
  if (x.size() != w.input_dim()) {
    throw DimensionError("input has dimension " + std::to_string(x.size()) +
                         ", network expects " + std::to_string(w.input_dim()));
  }
  Matrix row = x.transpose();
  std::vector<Matrix> batch = ForwardBatch(w, row, arch);
  std::vector<Vector> out;
  out.reserve(batch.size());
  for (const Matrix& m : batch) out.push_back(m.row(0).transpose());
  return out;
}

std::vector<Matrix> ForwardBatch(const WeightStack& w, const Matrix& x,
                                 const Architecture& arch) {
  if (x.cols() != w.input_dim()) {
    throw DimensionError("input has dimension " + std::to_string(x.cols()) +
                         ", network expects " + std::to_string(w.input_dim()));
  }
  std::vector<Matrix> out;
  out.reserve(w.num_layers());
  const Matrix* prev = &x;
  for (int k = 0; k < w.num_layers(); ++k) {
    Matrix pre = (*prev) * w.layer(k);
    if (k + 1 < w.num_layers()) {
      out.push_back(Activate(arch.hidden, pre));
    } else {
      out.push_back(ApplyOutput(arch.output, pre));
    }
    prev = &out.back();
  }
  return out;
}

namespace {

double ResolveNormalization(std::optional<double> normalization,
                            Eigen::Index rows) {
  if (normalization) {
    if (!(*normalization > 0.0)) {
      throw DimensionError("normalization constant must be positive");
    }
    return *normalization;
  }
  if (rows == 0) throw DimensionError("empty dataset");
  return static_cast<double>(rows);
}

void CheckLabels(const Matrix& y) {
  if ((y.array() < 0.0).any() || (y.array() > 1.0).any()) {
    throw DimensionError("binary cross-entropy labels must lie in [0, 1]");
  }
}

}  // namespace

double NestedMse(const WeightStack& w, const Matrix& x, const Matrix& y,
                 const Architecture& arch,
                 std::optional<double> normalization) {
  if (x.rows() == 0) throw DimensionError("empty dataset");
  if (y.rows() != x.rows() || y.cols() != w.output_dim()) {
    throw DimensionError("targets do not match inputs / output layer");
  }
  const double n = ResolveNormalization(normalization, x.rows());
  const std::vector<Matrix> z = ForwardBatch(w, x, arch);
  return (y - z.back()).squaredNorm() / (2.0 * n);
}

double BceOutputLoss(const Matrix& w_out, const Matrix& z_k, const Matrix& y,
                     std::optional<double> normalization) {
  if (z_k.cols() != w_out.rows() || y.cols() != w_out.cols() ||
      y.rows() != z_k.rows()) {
    throw DimensionError("BCE loss shape mismatch");
  }
  CheckLabels(y);
  const double n = ResolveNormalization(normalization, z_k.rows());
  const Matrix pre = z_k * w_out;
  double total = 0.0;
  for (Eigen::Index j = 0; j < pre.cols(); ++j) {
    for (Eigen::Index i = 0; i < pre.rows(); ++i) {
      total += Softplus(pre(i, j)) - y(i, j) * pre(i, j);
    }
  }
  return total / n;
}

Matrix BceOutputLossGrad(const Matrix& w_out, const Matrix& z_k,
                         const Matrix& y,
                         std::optional<double> normalization) {
  if (z_k.cols() != w_out.rows() || y.cols() != w_out.cols() ||
      y.rows() != z_k.rows()) {
    throw DimensionError("BCE loss shape mismatch");
  }
  CheckLabels(y);
  const double n = ResolveNormalization(normalization, z_k.rows());
  const Matrix residual = ApplyOutput(OutputLoss::kBce, z_k * w_out) - y;
  return z_k.transpose() * residual / n;
}

double TaskObjective(const WeightStack& w, const Matrix& x, const Matrix& y,
                     const Architecture& arch) {
  if (arch.output == OutputLoss::kMse) return NestedMse(w, x, y, arch);
  if (w.num_layers() == 1) return BceOutputLoss(w.layer(0), x, y);
  const std::vector<Matrix> z = ForwardBatch(w, x, arch);
  return BceOutputLoss(w.layer(w.num_layers() - 1), z[z.size() - 2], y);
}

double Accuracy(const WeightStack& w, const Matrix& x, const Matrix& y,
                const Architecture& arch) {
  if (x.rows() == 0) throw DimensionError("empty dataset");
  const Matrix out = ForwardBatch(w, x, arch).back();
  int correct = 0;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    Eigen::Index predicted = 0;
    Eigen::Index truth = 0;
    out.row(i).maxCoeff(&predicted);
    y.row(i).maxCoeff(&truth);
    if (predicted == truth) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(out.rows());
}

}  // namespace dpmac
