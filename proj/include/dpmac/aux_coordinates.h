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

#ifndef DPMAC_AUX_COORDINATES_H_
#define DPMAC_AUX_COORDINATES_H_

#include <vector>

#include "dpmac/network.h"
#include "dpmac/optimizer.h"

namespace dpmac {

// Per-sample hidden-layer coordinates z_{k,n}: z[k] is S x D_out^{k+1} for
// the k-th hidden layer (the output layer has none).
struct AuxCoordinates {
  std::vector<Matrix> z;
};

// Shared parameters of the expanded objective
//   E(W, Z) = E_o + sum_k (mu / 2n) sum_n ||z_k,n - f(W_k^T z_k-1,n)||^2.
struct ExpandedObjectiveParams {
  double mu = 1.0;
  double normalization = 1.0;
};

// Forward activations of the hidden layers, rows projected to the ball of
// radius norm_bound.
AuxCoordinates InitAuxCoordinates(const WeightStack& w, const Matrix& x,
                                  const Architecture& arch,
                                  double norm_bound);

double ExpandedObjective(const WeightStack& w, const AuxCoordinates& z,
                         const Matrix& x, const Matrix& y,
                         const Architecture& arch,
                         const ExpandedObjectiveParams& params);

// dE/dz_k. Each z_k appears in exactly two terms: its own layer residual and
// the input side of layer k+1.
std::vector<Matrix> ExpandedObjectiveGradZ(const WeightStack& w,
                                           const AuxCoordinates& z,
                                           const Matrix& x, const Matrix& y,
                                           const Architecture& arch,
                                           const ExpandedObjectiveParams& params);

// dE/dW_k for every layer with Z held fixed.
std::vector<Matrix> ExpandedObjectiveGradW(const WeightStack& w,
                                           const AuxCoordinates& z,
                                           const Matrix& x, const Matrix& y,
                                           const Architecture& arch,
                                           const ExpandedObjectiveParams& params);

struct ZUpdateOptions {
  int steps = 1;
  double learning_rate = 1e-3;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  double norm_bound = 1.0;
  ExpandedObjectiveParams objective;
};

// Runs `steps` optimizer steps on Z with W fixed, projecting rows onto the
// norm ball after each step. Touches no privacy budget.
AuxCoordinates ZUpdate(const WeightStack& w, AuxCoordinates z, const Matrix& x,
                       const Matrix& y, const Architecture& arch,
                       const ZUpdateOptions& options);

}  // namespace dpmac

#endif  // DPMAC_AUX_COORDINATES_H_
