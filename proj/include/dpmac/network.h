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

#ifndef DPMAC_NETWORK_H_
#define DPMAC_NETWORK_H_

#include <optional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dpmac/activation.h"

namespace dpmac {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Output-layer objective. Squared error uses an identity output unit,
// binary cross-entropy a sigmoid unit parameterised through softplus.
enum class OutputLoss { kMse, kBce };

// Dense bias-free feed-forward weights W_1..W_{K+1}. Layer k maps
// D_in^k -> D_out^k through W_k^T, so W_k has shape D_in^k x D_out^k and
// column h holds the fan-in weights of unit h.
class WeightStack {
 public:
  WeightStack() = default;
  // Throws DimensionError if shapes do not chain or an entry is not finite.
  explicit WeightStack(std::vector<Matrix> layers);

  // sizes = {D_in^1, D_out^1, ..., D_out^{K+1}}.
  static WeightStack Zeros(std::span<const int> sizes);
  static WeightStack RandomNormal(std::span<const int> sizes, double scale,
                                  std::mt19937_64& rng);

  int num_layers() const { return static_cast<int>(layers_.size()); }
  int input_dim() const;
  int output_dim() const;
  std::vector<int> sizes() const;

  const Matrix& layer(int k) const { return layers_.at(k); }
  Matrix& mutable_layer(int k) { return layers_.at(k); }
  const std::vector<Matrix>& layers() const { return layers_; }

  bool AllFinite() const;

 private:
  std::vector<Matrix> layers_;
};

struct Architecture {
  Activation hidden = Activation::kSoftplus;
  OutputLoss output = OutputLoss::kMse;
};

// Elementwise activation of a matrix of pre-activations.
Matrix Activate(Activation kind, const Matrix& pre);

// Elementwise value, first and second derivative.
struct ActivatedMatrix {
  Matrix f;
  Matrix f1;
  Matrix f2;
};
ActivatedMatrix ActivateWithDerivatives(Activation kind, const Matrix& pre);

// Output nonlinearity applied to pre-activations of the last layer.
Matrix ApplyOutput(OutputLoss loss, const Matrix& pre);

// Activations z_1..z_{K+1} for one input vector; z_0 = x is not included.
std::vector<Vector> Forward(const WeightStack& w, const Vector& x,
                            const Architecture& arch);

// Row-wise batch version: X is N x D_in, element k is N x D_out^k.
std::vector<Matrix> ForwardBatch(const WeightStack& w, const Matrix& x,
                                 const Architecture& arch);

// (1 / 2n) sum_n ||y_n - f(x_n; W)||^2 with the network's output unit.
// `normalization` replaces n when given (e.g. a minibatch or dataset size).
double NestedMse(const WeightStack& w, const Matrix& x, const Matrix& y,
                 const Architecture& arch,
                 std::optional<double> normalization = std::nullopt);

// (1 / n) sum_n sum_h [softplus(w_h^T z_n) - y_nh w_h^T z_n]. Z_K is
// N x D_in, Y is N x D_out with entries in [0, 1].
double BceOutputLoss(const Matrix& w_out, const Matrix& z_k, const Matrix& y,
                     std::optional<double> normalization = std::nullopt);

// Gradient of BceOutputLoss with respect to w_out.
Matrix BceOutputLossGrad(const Matrix& w_out, const Matrix& z_k,
                         const Matrix& y,
                         std::optional<double> normalization = std::nullopt);

// Task objective of the whole network: NestedMse for kMse, BceOutputLoss on
// the last hidden layer for kBce.
double TaskObjective(const WeightStack& w, const Matrix& x, const Matrix& y,
                     const Architecture& arch);

// Fraction of rows where argmax of the network output matches argmax of y.
double Accuracy(const WeightStack& w, const Matrix& x, const Matrix& y,
                const Architecture& arch);

}  // namespace dpmac

#endif  // DPMAC_NETWORK_H_
