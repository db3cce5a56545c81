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

#ifndef DPMAC_TAYLOR_H_
#define DPMAC_TAYLOR_H_

#include <optional>
#include <vector>

#include "dpmac/network.h"

namespace dpmac {

// Per-sample, per-unit term T_n(w) of a decoupled layer objective.
//   kSquaredResidual: T = (t - f(w^T z))^2, used for hidden layers and the
//                     squared-error output layer (f = identity there).
//   kLogistic:        T = 2 [softplus(w^T z) - y w^T z], so that
//                     (1 / 2N) sum T equals the cross-entropy output loss.
enum class LayerTerm { kSquaredResidual, kLogistic };

struct LayerObjective {
  LayerTerm term = LayerTerm::kSquaredResidual;
  Activation activation = Activation::kSoftplus;
  // mu for hidden layers, 1 for the output layer.
  double weight = 1.0;
};

// The layer objective used for layer `layer` (0-based) of a network.
LayerObjective LayerObjectiveFor(const Architecture& arch, int layer,
                                 int num_layers, double mu);

// Elementwise terms of T over a batch: for pre-activation u = w_h^T z_n,
// dT/dw_h = g z_n, d2T/dw_h^2 = s z_n z_n^T and target_grad = dT/dtarget.
struct LayerUnitTerms {
  Matrix value;
  Matrix g;
  Matrix s;
  Matrix target_grad;
};
LayerUnitTerms EvalLayerUnits(const LayerObjective& obj, const Matrix& pre,
                              const Matrix& targets);

// Value, gradient and Hessian of T at w_hat for a single sample and unit.
struct TaylorTerms {
  double value = 0.0;
  Vector grad;
  Matrix hess;
};

TaylorTerms ComputeTaylorTerms(const Vector& w_hat, const Vector& z_prev,
                               double target, Activation act);
TaylorTerms ComputeLogisticTaylorTerms(const Vector& w_hat,
                                       const Vector& z_prev, double label);
TaylorTerms ComputeTaylorTerms(const Vector& w_hat, const Vector& z_prev,
                               double target, const LayerObjective& obj);

// Coefficients of one layer objective expanded around w_hat:
//   sum_n sum_h T_n(w_h) ~= a + sum_h w_h^T b_h + sum_h w_h^T C_h w_h.
// The 1 / 2N normalization and the layer weight are not included.
// First order keeps b_h = sum_n dT and leaves `c` empty.
struct TaylorCoefficients {
  int layer = 0;
  int order = 1;
  double a = 0.0;
  Matrix b;               // D_in x D_out, column h is b_h
  std::vector<Matrix> c;  // D_out symmetric D_in x D_in matrices
  Matrix expansion_point;
};

// Per-sample norm caps applied before summation.
//   grad:  ||dT_n||_F over the D_in x D_out matrix of unit gradients
//   hess:  Frobenius norm of the stack of unit Hessians
//   value: |sum_h T_n(w_hat_h)|, only needed when `a` is released
struct ClipThresholds {
  std::optional<double> grad;
  std::optional<double> hess;
  std::optional<double> value;
};

// z_prev is S x D_in (layer inputs), targets is S x D_out (auxiliary
// coordinates of this layer, or labels for the output layer).
TaylorCoefficients AssembleCoefficients(const Matrix& w_hat,
                                        const Matrix& z_prev,
                                        const Matrix& targets, int layer,
                                        int order, const LayerObjective& obj,
                                        const ClipThresholds& clip = {});

// Gradient of (weight / 2n) [a + sum w^T b + sum w^T C w] at w.
Matrix ApproxObjectiveGrad(const Matrix& w, const TaylorCoefficients& coeffs,
                           double normalization, double weight = 1.0);

// Value of the reconstructed quadratic (or linear) objective at w.
double ApproxObjectiveValue(const Matrix& w, const TaylorCoefficients& coeffs,
                            double normalization, double weight = 1.0);

// Exact layer objective (weight / 2n) sum_n sum_h T_n(w_h) and its gradient
// with respect to the layer weights.
double LayerObjectiveValue(const Matrix& w, const Matrix& z_prev,
                           const Matrix& targets, const LayerObjective& obj,
                           double normalization);
Matrix LayerObjectiveGrad(const Matrix& w, const Matrix& z_prev,
                          const Matrix& targets, const LayerObjective& obj,
                          double normalization);

}  // namespace dpmac

#endif  // DPMAC_TAYLOR_H_
