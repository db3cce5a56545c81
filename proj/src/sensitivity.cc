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

#include "dpmac/sensitivity.h"

#include <algorithm>
#include <cmath>

#include "dpmac/errors.h"

namespace dpmac {

std::string ToString(SensitivityMode mode) {
  return mode == SensitivityMode::kAnalytic ? "analytic" : "clipped";
}

SensitivityMode ParseSensitivityMode(std::string_view name) {
  if (name == "analytic") return SensitivityMode::kAnalytic;
  if (name == "clipped") return SensitivityMode::kClipped;
  throw ConfigError("unknown sensitivity mode '" + std::string(name) + "'");
}

namespace {

struct UnitBounds {
  Vector norms;  // ||w_h||
  Vector alpha;
  Vector beta;
};

UnitBounds ComputeUnitBounds(const Matrix& w_hat, double t_z, Activation act) {
  if (act != Activation::kSoftplus && act != Activation::kIdentity) {
    throw ConfigError("analytic sensitivity does not support activation '" +
                      ToString(act) + "'");
  }
  UnitBounds u{w_hat.colwise().norm().transpose(), Vector(w_hat.cols()),
               Vector(w_hat.cols())};
  for (Eigen::Index h = 0; h < w_hat.cols(); ++h) {
    const double x = u.norms(h) * t_z;
    if (act == Activation::kSoftplus) {
      const ActivationValue v = EvalActivation(act, x);
      u.alpha(h) = v.f;
      u.beta(h) = v.f1;
    } else {
      u.alpha(h) = x;
      u.beta(h) = 1.0;
    }
  }
  return u;
}

}  // namespace

HiddenBoundTerms DisplayedHiddenBoundTerms(const Matrix& w_hat, double t_z,
                                           Activation act) {
  const UnitBounds u = ComputeUnitBounds(w_hat, t_z, act);
  const Vector& r = u.norms;
  const Vector& al = u.alpha;
  const Vector& be = u.beta;
  const double d_out = static_cast<double>(w_hat.cols());
  const Vector r2 = r.cwiseProduct(r);
  const Vector be2 = be.cwiseProduct(be);
  const Vector mix = 4.0 * be2 + al;  // 4 beta^2 + alpha
  const double t2 = t_z * t_z;

  HiddenBoundTerms t;
  t.a1 = t2 + 2.0 * t_z * al.norm() + be2.sum();
  t.a2 = 2.0 * t_z *
         (t_z * std::sqrt(be2.cwiseProduct(r2).sum()) +
          al.cwiseProduct(be).cwiseProduct(r).sum());
  t.a3 = t2 / 4.0 *
         (t_z * std::sqrt(r2.cwiseProduct(r2).sum()) + mix.cwiseProduct(r2).sum());
  const double max_ab2 = w_hat.cols() > 0 ? al.cwiseProduct(be2).maxCoeff() : 0.0;
  t.b1 = 2.0 * t2 *
         (al.cwiseProduct(be).squaredNorm() +
          2.0 * t_z * std::min(al.sum(), std::sqrt(d_out) * max_ab2) + t2);
  t.b2 = t2 * t2 / 8.0 *
         (t2 * w_hat.squaredNorm() + mix.cwiseProduct(mix).cwiseProduct(r2).sum());
  t.c = t2 / 2.0 * std::sqrt(t2 + mix.squaredNorm());
  return t;
}

LayerSensitivity DisplayedHiddenSensitivity(const Matrix& w_hat, double t_z,
                                            Activation act) {
  const HiddenBoundTerms t = DisplayedHiddenBoundTerms(w_hat, t_z, act);
  return {t.a1 + t.a2 + t.a3, std::sqrt(t.b1 + t.b2), t.c};
}

LayerSensitivity AnalyticSensitivityHidden(const Matrix& w_hat, double t_z,
                                           Activation act, int order) {
  if (order != 1 && order != 2) throw ConfigError("Taylor order must be 1 or 2");
  const HiddenBoundTerms t = DisplayedHiddenBoundTerms(w_hat, t_z, act);
  const UnitBounds u = ComputeUnitBounds(w_hat, t_z, act);
  // sum_h f^2 <= ||alpha||^2, not ||beta||^2.
  const double a1 = t.a1 - u.beta.squaredNorm() + u.alpha.squaredNorm();
  // ||2 (f - z) f' z_prev||^2 carries 4 T_z^2, twice the factor in b1; the
  // Hessian part carries 8 (x^2 + y^2), four times b2; the two parts of b
  // combine by the triangle inequality.
  const double grad_part = std::sqrt(2.0 * t.b1);
  const double hess_part = 2.0 * std::sqrt(t.b2);
  LayerSensitivity s;
  if (order == 1) {
    s.delta_a = a1 + t.a2;
    s.delta_b = grad_part;
  } else {
    s.delta_a = a1 + t.a2 + t.a3;
    s.delta_b = grad_part + hess_part;
    s.delta_c = t.c;
  }
  return s;
}

LayerSensitivity AnalyticSensitivityOutput(const Matrix& w_hat_out,
                                           double t_z, double s) {
  if (!(s > 0.0)) throw ConfigError("output sensitivity needs S > 0");
  const UnitBounds u = ComputeUnitBounds(w_hat_out, t_z, Activation::kSoftplus);
  const double d_out = static_cast<double>(w_hat_out.cols());
  const double frob2 = w_hat_out.squaredNorm();
  const double t2 = t_z * t_z;
  LayerSensitivity out;
  out.delta_a = (u.alpha.sum() + t_z * u.norms.cwiseProduct(u.beta).sum() +
                 t2 / 8.0 * frob2) /
                (2.0 * s);
  out.delta_b = t_z / (2.0 * s) *
                std::sqrt(d_out + 2.0 * t_z * u.beta.cwiseProduct(u.norms).sum() +
                          t2 / 16.0 * frob2);
  out.delta_c = std::sqrt(d_out) * t2 / (16.0 * s);
  return out;
}

LayerSensitivity ClippedSensitivity(const ClipThresholds& thresholds,
                                    const Matrix& w_hat, int order) {
  if (order != 1 && order != 2) throw ConfigError("Taylor order must be 1 or 2");
  if (!thresholds.grad || !(*thresholds.grad > 0.0)) {
    throw ConfigError("clipped mode needs a positive gradient threshold");
  }
  if (order == 2 && (!thresholds.hess || !(*thresholds.hess >= 0.0))) {
    throw ConfigError("second order clipping needs a Hessian threshold");
  }
  const double frob = w_hat.norm();
  const double max_col =
      w_hat.cols() > 0 ? w_hat.colwise().norm().maxCoeff() : 0.0;
  LayerSensitivity s;
  if (order == 1) {
    s.delta_b = *thresholds.grad;
  } else {
    s.delta_b = *thresholds.grad + *thresholds.hess * max_col;
    s.delta_c = 0.5 * *thresholds.hess;
  }
  if (thresholds.value) {
    s.delta_a = *thresholds.value + frob * *thresholds.grad;
    if (order == 2) s.delta_a += 0.5 * frob * frob * *thresholds.hess;
  }
  return s;
}

SensitivityBundle BuildSensitivityBundle(SensitivityMode mode,
                                         const WeightStack& w_hat,
                                         const Architecture& arch,
                                         double norm_bound, int order,
                                         const ClipThresholds& thresholds,
                                         bool release_a) {
  SensitivityBundle bundle;
  bundle.mode = mode;
  bundle.thresholds = thresholds;
  bundle.norm_bound = norm_bound;
  bundle.coefficients_per_layer = order == 2 ? 3 : 1;
  const int layers = w_hat.num_layers();
  for (int k = 0; k < layers; ++k) {
    const Matrix& w = w_hat.layer(k);
    LayerSensitivity s;
    if (mode == SensitivityMode::kClipped) {
      s = ClippedSensitivity(thresholds, w, order);
    } else if (k + 1 < layers) {
      s = AnalyticSensitivityHidden(w, norm_bound, arch.hidden, order);
    } else if (arch.output == OutputLoss::kMse) {
      s = AnalyticSensitivityHidden(w, norm_bound, Activation::kIdentity,
                                    order);
    } else {
      // The bounds hold for (1 / 2S) times the per-sample coefficients of L;
      // our coefficients are those of 2 L without the prefactor.
      constexpr double kS = 1.0;
      const LayerSensitivity o = AnalyticSensitivityOutput(w, norm_bound, kS);
      const double d_out = static_cast<double>(w.cols());
      if (order == 1) {
        // b = sum 2 (f'(u) - y) z with |f' - y| <= 1.
        s.delta_b = 2.0 * std::sqrt(d_out) * norm_bound;
        // a = sum 2 (f(u) - f'(u) u), the tangent intercept, in (0, log 2].
        s.delta_a = 2.0 * d_out * std::log(2.0);
      } else {
        s.delta_a = 4.0 * kS * o.delta_a;
        s.delta_b = 4.0 * kS * o.delta_b;
        s.delta_c = 4.0 * kS * o.delta_c;
      }
    }
    if (!release_a) s.delta_a = std::numeric_limits<double>::quiet_NaN();
    bundle.layers.push_back(s);
  }
  return bundle;
}

}  // namespace dpmac
