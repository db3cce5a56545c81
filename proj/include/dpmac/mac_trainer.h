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

#ifndef DPMAC_MAC_TRAINER_H_
#define DPMAC_MAC_TRAINER_H_

#include <optional>
#include <random>
#include <vector>

#include "dpmac/aux_coordinates.h"
#include "dpmac/dataset.h"
#include "dpmac/moments_accountant.h"
#include "dpmac/network.h"
#include "dpmac/optimizer.h"
#include "dpmac/sensitivity.h"
#include "dpmac/taylor.h"
#include "dpmac/training.h"

namespace dpmac {

struct MacConfig {
  double mu = 1.0;
  int taylor_order = 2;
  int z_steps = 1;
  int w_steps = 1;
  double z_lr = 1e-3;
  double w_lr = 1e-3;
  double w_lr_decay = 1.0;  // multiplicative, once per epoch
  OptimizerKind w_optimizer = OptimizerKind::kAdam;
  OptimizerKind z_optimizer = OptimizerKind::kAdam;
  int batch_size = 100;
  int epochs = 1;
  bool persist_z = false;
  SensitivityMode sensitivity = SensitivityMode::kClipped;
  ClipThresholds thresholds;
  // Divides the coefficient sums; defaults to the expected batch size.
  std::optional<double> normalization;
  // Also release a (second order only). Gradient-based optimizers ignore it.
  bool perturb_a = false;
  // W_0 ~ N(0, init_scale^2), which is also the first expansion point.
  double init_scale = 1.0;

  // Throws ConfigError naming the offending field.
  void Validate(int dataset_size) const;
};

// One MAC iteration on a given minibatch: Z init/update, coefficient
// assembly around the current W, optional clipping and perturbation, then
// w_steps optimizer steps on the reconstructed objectives. When z_inout is
// given it seeds Z instead of a forward pass and receives the updated Z.
struct MacStepState {
  WeightStack w;
  std::vector<MatrixOptimizer> w_optimizers;
};
void MacStep(MacStepState& state, const Matrix& x, const Matrix& y,
             const Architecture& arch, const MacConfig& cfg, double norm_bound,
             double w_lr, const std::optional<PrivacyParams>& privacy,
             std::mt19937_64& rng, AuxCoordinates* z_inout = nullptr);

// DP-MAC training. `prior` carries events already spent on the same data
// (e.g. DP-PCA). sigma == 0 runs exactly the non-private algorithm.
// layer_sizes = {D_in, hidden..., D_out} must match the data.
TrainResult TrainDpMac(const Dataset& train, const Dataset* test,
                       const std::vector<int>& layer_sizes,
                       const Architecture& arch, const MacConfig& cfg,
                       const PrivacyParams& privacy, std::mt19937_64& rng,
                       MomentsLedger prior = MomentsLedger());

// Plain MAC with the same sampling and optimizer schedule but no clipping,
// sensitivity analysis, noise or accounting.
TrainResult TrainMac(const Dataset& train, const Dataset* test,
                     const std::vector<int>& layer_sizes,
                     const Architecture& arch, const MacConfig& cfg,
                     std::mt19937_64& rng);

}  // namespace dpmac

#endif  // DPMAC_MAC_TRAINER_H_
