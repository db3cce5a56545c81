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

#include "dpmac/taylor.h"

#include <cmath>
#include <string>

#include "dpmac/clipping.h"
#include "dpmac/errors.h"

namespace dpmac {

LayerObjective LayerObjectiveFor(const Architecture& arch, int layer,
                                 int num_layers, double mu) {
  if (layer < 0 || layer >= num_layers) {
    throw DimensionError("layer index " + std::to_string(layer) +
                         " out of range");
  }
  if (layer + 1 < num_layers) {
    return {LayerTerm::kSquaredResidual, arch.hidden, mu};
  }
  if (arch.output == OutputLoss::kBce) {
    return {LayerTerm::kLogistic, Activation::kSoftplus, 1.0};
  }
  return {LayerTerm::kSquaredResidual, Activation::kIdentity, 1.0};
}

namespace {

// Per-unit scalars of T at pre-activation u: T itself, g with dT = g z and
// s with d2T = s z z^T.
struct UnitScalars {
  double value;
  double g;
  double s;
};

UnitScalars EvalUnit(const LayerObjective& obj, double u, double target) {
  if (obj.term == LayerTerm::kLogistic) {
    const ActivationValue v = EvalActivation(Activation::kSoftplus, u);
    return {2.0 * (v.f - target * u), 2.0 * (v.f1 - target), 2.0 * v.f2};
  }
  const ActivationValue v = EvalActivation(obj.activation, u);
  const double r = v.f - target;
  return {r * r, 2.0 * r * v.f1, 2.0 * r * v.f2 + 2.0 * v.f1 * v.f1};
}

void CheckLayerShapes(const Matrix& w, const Matrix& z_prev,
                      const Matrix& targets) {
  if (z_prev.cols() != w.rows() || targets.cols() != w.cols() ||
      targets.rows() != z_prev.rows()) {
    throw DimensionError("layer inputs " + std::to_string(z_prev.rows()) +
                         "x" + std::to_string(z_prev.cols()) + ", targets " +
                         std::to_string(targets.rows()) + "x" +
                         std::to_string(targets.cols()) +
                         " do not fit weights " + std::to_string(w.rows()) +
                         "x" + std::to_string(w.cols()));
  }
}

}  // namespace

LayerUnitTerms EvalLayerUnits(const LayerObjective& obj, const Matrix& pre,
                              const Matrix& targets) {
  LayerUnitTerms out{Matrix(pre.rows(), pre.cols()),
                     Matrix(pre.rows(), pre.cols()),
                     Matrix(pre.rows(), pre.cols()),
                     Matrix(pre.rows(), pre.cols())};
  for (Eigen::Index j = 0; j < pre.cols(); ++j) {
    for (Eigen::Index i = 0; i < pre.rows(); ++i) {
      const double u = pre(i, j);
      const double t = targets(i, j);
      const UnitScalars v = EvalUnit(obj, u, t);
      out.value(i, j) = v.value;
      out.g(i, j) = v.g;
      out.s(i, j) = v.s;
      if (obj.term == LayerTerm::kLogistic) {
        out.target_grad(i, j) = -2.0 * u;
      } else {
        out.target_grad(i, j) = -2.0 * (ActivationOf(obj.activation, u) - t);
      }
    }
  }
  return out;
}

TaylorTerms ComputeTaylorTerms(const Vector& w_hat, const Vector& z_prev,
                               double target, const LayerObjective& obj) {
  if (w_hat.size() != z_prev.size()) {
    throw DimensionError("weight and input dimensions differ");
  }
  const UnitScalars u = EvalUnit(obj, w_hat.dot(z_prev), target);
  return {u.value, u.g * z_prev, u.s * z_prev * z_prev.transpose()};
}

TaylorTerms ComputeTaylorTerms(const Vector& w_hat, const Vector& z_prev,
                               double target, Activation act) {
  return ComputeTaylorTerms(w_hat, z_prev, target,
                            {LayerTerm::kSquaredResidual, act, 1.0});
}

TaylorTerms ComputeLogisticTaylorTerms(const Vector& w_hat,
                                       const Vector& z_prev, double label) {
  return ComputeTaylorTerms(
      w_hat, z_prev, label,
      {LayerTerm::kLogistic, Activation::kSoftplus, 1.0});
}

TaylorCoefficients AssembleCoefficients(const Matrix& w_hat,
                                        const Matrix& z_prev,
                                        const Matrix& targets, int layer,
                                        int order, const LayerObjective& obj,
                                        const ClipThresholds& clip) {
  if (order != 1 && order != 2) {
    throw ConfigError("Taylor order must be 1 or 2");
  }
  if (layer < 0) throw DimensionError("negative layer index");
  CheckLayerShapes(w_hat, z_prev, targets);

  const Eigen::Index n = z_prev.rows();
  const Eigen::Index d_in = w_hat.rows();
  const Eigen::Index d_out = w_hat.cols();

  TaylorCoefficients out;
  out.layer = layer;
  out.order = order;
  out.expansion_point = w_hat;
  out.b = Matrix::Zero(d_in, d_out);
  if (order == 2) out.c.assign(d_out, Matrix::Zero(d_in, d_in));
  if (n == 0) return out;

  const Matrix pre = z_prev * w_hat;
  const LayerUnitTerms units = EvalLayerUnits(obj, pre, targets);

  // Per-sample clip factors. dT_n = z_n g_n^T has norm ||z_n|| ||g_n||, the
  // Hessian stack {s_nh z_n z_n^T}_h has norm ||z_n||^2 ||s_n||.
  Vector c_value = Vector::Ones(n);
  Vector c_grad = Vector::Ones(n);
  Vector c_hess = Vector::Ones(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double zn = z_prev.row(i).squaredNorm();
    if (clip.value) {
      c_value(i) = ClipFactor(std::abs(units.value.row(i).sum()), *clip.value);
    }
    if (clip.grad) {
      c_grad(i) = ClipFactor(std::sqrt(zn) * units.g.row(i).norm(), *clip.grad);
    }
    if (clip.hess && order == 2) {
      c_hess(i) = ClipFactor(zn * units.s.row(i).norm(), *clip.hess);
    }
  }

  const Matrix g = c_grad.asDiagonal() * units.g;
  double a = (c_value.asDiagonal() * units.value).sum() -
             g.cwiseProduct(pre).sum();
  if (order == 1) {
    out.b = z_prev.transpose() * g;
  } else {
    const Matrix s = c_hess.asDiagonal() * units.s;
    const Matrix su = s.cwiseProduct(pre);
    a += 0.5 * su.cwiseProduct(pre).sum();
    out.b = z_prev.transpose() * (g - su);
    for (Eigen::Index h = 0; h < d_out; ++h) {
      Matrix ch = 0.5 * z_prev.transpose() * s.col(h).asDiagonal() * z_prev;
      // Exact symmetry; the product above can differ in the last bit.
      out.c[h] = 0.5 * (ch + ch.transpose());
    }
  }
  out.a = a;
  return out;
}

Matrix ApproxObjectiveGrad(const Matrix& w, const TaylorCoefficients& coeffs,
                           double normalization, double weight) {
  if (w.rows() != coeffs.b.rows() || w.cols() != coeffs.b.cols()) {
    throw DimensionError("weights do not match coefficient shapes");
  }
  const double scale = weight / (2.0 * normalization);
  Matrix grad = coeffs.b;
  if (coeffs.order == 2) {
    for (Eigen::Index h = 0; h < w.cols(); ++h) {
      const Matrix& ch = coeffs.c[h];
      grad.col(h) += ch * w.col(h) + ch.transpose() * w.col(h);
    }
  }
  return scale * grad;
}

double ApproxObjectiveValue(const Matrix& w, const TaylorCoefficients& coeffs,
                            double normalization, double weight) {
  if (w.rows() != coeffs.b.rows() || w.cols() != coeffs.b.cols()) {
    throw DimensionError("weights do not match coefficient shapes");
  }
  double total = coeffs.a + w.cwiseProduct(coeffs.b).sum();
  if (coeffs.order == 2) {
    for (Eigen::Index h = 0; h < w.cols(); ++h) {
      total += w.col(h).dot(coeffs.c[h] * w.col(h));
    }
  }
  return weight / (2.0 * normalization) * total;
}

double LayerObjectiveValue(const Matrix& w, const Matrix& z_prev,
                           const Matrix& targets, const LayerObjective& obj,
                           double normalization) {
  CheckLayerShapes(w, z_prev, targets);
  const LayerUnitTerms units = EvalLayerUnits(obj, z_prev * w, targets);
  return obj.weight / (2.0 * normalization) * units.value.sum();
}

Matrix LayerObjectiveGrad(const Matrix& w, const Matrix& z_prev,
                          const Matrix& targets, const LayerObjective& obj,
                          double normalization) {
  CheckLayerShapes(w, z_prev, targets);
  const LayerUnitTerms units = EvalLayerUnits(obj, z_prev * w, targets);
  return obj.weight / (2.0 * normalization) * (z_prev.transpose() * units.g);
}

}  // namespace dpmac
