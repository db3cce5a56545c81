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

#ifndef DPMAC_DP_PCA_H_
#define DPMAC_DP_PCA_H_

#include <random>

#include "dpmac/network.h"

namespace dpmac {

struct DpPcaResult {
  Matrix projection;  // D_in x out_dim, orthonormal columns
  Vector eigenvalues; // of the noisy covariance, descending
};

// Rows of x must have norm <= 1. Adds symmetric Gaussian noise with entry
// std `sigma` to sum_n x_n x_n^T (sensitivity 1) and keeps the top out_dim
// eigenvectors. sigma == 0 gives plain PCA.
DpPcaResult DpPca(const Matrix& x, int out_dim, double sigma,
                  std::mt19937_64& rng);

}  // namespace dpmac

#endif  // DPMAC_DP_PCA_H_
