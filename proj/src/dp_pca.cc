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

#include "dpmac/dp_pca.h"

#include <Eigen/Eigenvalues>

#include <string>

#include "dpmac/errors.h"

namespace dpmac {

DpPcaResult DpPca(const Matrix& x, int out_dim, double sigma,
                  std::mt19937_64& rng) {
  const int d = static_cast<int>(x.cols());
  if (out_dim <= 0 || out_dim > d) {
    throw DimensionError("PCA output dimension " + std::to_string(out_dim) +
                         " not in [1, " + std::to_string(d) + "]");
  }
  if (!(sigma >= 0.0)) throw ConfigError("PCA noise must be >= 0");
  if (x.rows() > 0 && x.rowwise().norm().maxCoeff() > 1.0 + 1e-9) {
    throw DataError("PCA input rows must have norm <= 1");
  }
  Matrix cov = x.transpose() * x;
  if (sigma > 0.0) {
    std::normal_distribution<double> normal(0.0, sigma);
    for (int j = 0; j < d; ++j) {
      for (int i = 0; i <= j; ++i) {
        const double e = normal(rng);
        cov(i, j) += e;
        if (i != j) cov(j, i) += e;
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw NumericError("eigendecomposition failed");
  }
  // Eigen sorts ascending.
  DpPcaResult r;
  r.projection = solver.eigenvectors().rightCols(out_dim).rowwise().reverse();
  r.eigenvalues = solver.eigenvalues().tail(out_dim).reverse();
  return r;
}

}  // namespace dpmac
