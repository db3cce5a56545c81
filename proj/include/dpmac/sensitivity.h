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

#ifndef DPMAC_SENSITIVITY_H_
#define DPMAC_SENSITIVITY_H_

#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "dpmac/network.h"
#include "dpmac/taylor.h"

namespace dpmac {

// Remove-one sensitivities of one layer's Taylor coefficients, measured on
// the unnormalized sums (no 1 / 2N factor). NaN marks a coefficient whose
// sensitivity is not available; it cannot be released.
struct LayerSensitivity {
  double delta_a = std::numeric_limits<double>::quiet_NaN();
  double delta_b = std::numeric_limits<double>::quiet_NaN();
  double delta_c = std::numeric_limits<double>::quiet_NaN();
};

enum class SensitivityMode { kAnalytic, kClipped };

std::string ToString(SensitivityMode mode);
SensitivityMode ParseSensitivityMode(std::string_view name);

struct SensitivityBundle {
  SensitivityMode mode = SensitivityMode::kClipped;
  std::vector<LayerSensitivity> layers;
  ClipThresholds thresholds;  // clipped mode only
  double norm_bound = 1.0;
  // Partitions per layer in the concatenated release: 1 (b only) or 3.
  int coefficients_per_layer = 1;

  int num_layers() const { return static_cast<int>(layers.size()); }
};

// The individual closed-form pieces for a hidden layer with
// alpha_h = f(||w_h|| T_z), beta_h = f'(||w_h|| T_z), transcribed literally:
//   a1 = T_z^2 + 2 T_z ||alpha|| + ||beta||^2
//   a2 = 2 T_z (T_z (sum beta^2 ||w||^2)^1/2 + sum alpha beta ||w||)
//   a3 = T_z^2 / 4 (T_z (sum ||w||^4)^1/2 + sum (4 beta^2 + alpha) ||w||^2)
//   b1 = 2 T_z^2 (||alpha . beta||^2
//                 + 2 T_z min(sum alpha, sqrt(D) max alpha beta^2) + T_z^2)
//   b2 = T_z^4 / 8 (T_z^2 ||W||_F^2 + sum ||(4 beta^2 + alpha) w||^2)
//   c  = T_z^2 / 2 (T_z^2 + ||4 beta^2 + alpha||^2)^1/2
struct HiddenBoundTerms {
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  double c = 0.0;
};

// Softplus, or identity with alpha = ||w|| T_z and beta = 1. Any other
// activation throws ConfigError (unsupported activation).
HiddenBoundTerms DisplayedHiddenBoundTerms(const Matrix& w_hat, double t_z,
                                           Activation act);

// Literal totals: delta_a = a1 + a2 + a3, delta_b = sqrt(b1 + b2),
// delta_c = c. These are NOT sound bounds in general and are not used by the
// mechanism; see AnalyticSensitivityHidden.
LayerSensitivity DisplayedHiddenSensitivity(const Matrix& w_hat, double t_z,
                                            Activation act);

// Sound analytic bounds for a squared-residual layer with inputs and
// targets in the T_z ball. Same structure as the displayed forms with the
// constants repaired:
//   a1 uses ||alpha||^2 for sum_h f^2,
//   delta_b = sqrt(2 b1) + 2 sqrt(b2) for order 2 (b = sum dT - d2T w),
//   delta_b = sqrt(2 b1) for order 1 (b = sum dT),
//   order 1 drops a3 from delta_a.
LayerSensitivity AnalyticSensitivityHidden(const Matrix& w_hat, double t_z,
                                           Activation act, int order = 2);

// Cross-entropy output layer bounds including the 1 / 2S prefactor:
//   delta_a = (||alpha||_1 + T_z sum ||w_h beta_h|| + T_z^2 / 8 ||W||_F^2) / 2S
//   delta_b = T_z / 2S (D_out + 2 T_z sum beta_h ||w_h||
//                       + T_z^2 / 16 ||W||_F^2)^1/2
//   delta_c = sqrt(D_out) T_z^2 / 16S
// Throws ConfigError when s <= 0.
LayerSensitivity AnalyticSensitivityOutput(const Matrix& w_hat_out,
                                           double t_z, double s);

// Bounds implied by per-sample clipping (remove-one neighbours):
//   delta_b = theta_grad + theta_hess max_h ||w_h||  (order 2)
//   delta_b = theta_grad                             (order 1)
//   delta_c = theta_hess / 2
//   delta_a = theta_value + ||W||_F theta_grad [+ ||W||_F^2 theta_hess / 2]
// delta_a is NaN when no value threshold is set.
LayerSensitivity ClippedSensitivity(const ClipThresholds& thresholds,
                                    const Matrix& w_hat, int order);

// Per-layer sensitivities for a whole network at expansion point w_hat.
// In analytic mode hidden layers use AnalyticSensitivityHidden; the output
// layer uses the hidden machinery with identity activation for squared error
// and AnalyticSensitivityOutput (rescaled to the unnormalized coefficients of
// T = 2 L, i.e. times 4S) for cross-entropy.
SensitivityBundle BuildSensitivityBundle(SensitivityMode mode,
                                         const WeightStack& w_hat,
                                         const Architecture& arch,
                                         double norm_bound, int order,
                                         const ClipThresholds& thresholds,
                                         bool release_a);

}  // namespace dpmac

#endif  // DPMAC_SENSITIVITY_H_
