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

#ifndef DPMAC_DP_SGD_H_
#define DPMAC_DP_SGD_H_

#include <optional>
#include <random>
#include <vector>

#include "dpmac/dataset.h"
#include "dpmac/moments_accountant.h"
#include "dpmac/network.h"
#include "dpmac/training.h"

namespace dpmac {

struct SgdConfig {
  // Global per-example norm bound on the concatenated gradient. Unset means
  // no clipping (only meaningful with sigma == 0).
  std::optional<double> clip_bound;
  // Clip each layer's gradient to clip_bound / sqrt(K) instead of globally.
  bool per_layer_clip = false;
  double lr = 0.1;
  // The learning rate halves every lr_decay epochs; 0 disables decay.
  int lr_decay = 0;
  int batch_size = 100;
  int epochs = 1;
  // W_k ~ N(0, init_scale^2 / D_in^k).
  double init_scale = 1.0;

  void Validate(int dataset_size) const;
};

// Gradient of the per-example loss
//   squared error: 1/2 ||y - f(x; W)||^2
//   cross-entropy: sum_h softplus(u_h) - y_h u_h on the output pre-activation
// for every row of x: result[n][k] has the shape of W_k.
std::vector<std::vector<Matrix>> PerExampleGradients(const WeightStack& w,
                                                     const Matrix& x,
                                                     const Matrix& y,
                                                     const Architecture& arch);

// Sum over examples of the clipped per-example gradients, computed without
// materializing them. `threshold` unset disables clipping.
std::vector<Matrix> ClippedGradientSum(const WeightStack& w, const Matrix& x,
                                       const Matrix& y,
                                       const Architecture& arch,
                                       std::optional<double> threshold,
                                       bool per_layer);

// One DP-SGD step on a sampled batch: clip, sum, divide by the expected batch
// size S, add N(0, clip^2 sigma^2 / S^2), take an SGD step and record one
// (q, sigma) event in the ledger.
void DpSgdStep(WeightStack& w, const Matrix& x, const Matrix& y,
               const Architecture& arch, const SgdConfig& cfg, double lr,
               double sigma, double q, std::mt19937_64& rng,
               MomentsLedger& ledger);

TrainResult TrainDpSgd(const Dataset& train, const Dataset* test,
                       const std::vector<int>& layer_sizes,
                       const Architecture& arch, const SgdConfig& cfg,
                       const PrivacyParams& privacy, std::mt19937_64& rng,
                       MomentsLedger prior = MomentsLedger());

}  // namespace dpmac

#endif  // DPMAC_DP_SGD_H_
