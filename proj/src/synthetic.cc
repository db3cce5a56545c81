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

#include "dpmac/synthetic.h"

#include <cmath>

#include "dpmac/errors.h"

namespace dpmac {

namespace {

Matrix Gaussian(int rows, int cols, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, scale);
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = normal(rng);
  }
  return m;
}

}  // namespace

LabelledData MakeBlobs(int n, int dim, int classes, double separation,
                       double spread, std::mt19937_64& rng) {
  if (n < 1 || dim < 1 || classes < 2) {
    throw ConfigError("blobs need n >= 1, dim >= 1, classes >= 2");
  }
  Matrix centres = Gaussian(classes, dim, 1.0, rng);
  for (int c = 0; c < classes; ++c) {
    centres.row(c) *= separation / centres.row(c).norm();
  }
  LabelledData out;
  out.features = Gaussian(n, dim, spread, rng);
  out.labels.resize(n);
  for (int i = 0; i < n; ++i) {
    out.labels[i] = i % classes;
    out.features.row(i) += centres.row(out.labels[i]);
  }
  return out;
}

Matrix MakeLowRank(int n, int dim, int rank, double noise,
                   std::mt19937_64& rng) {
  if (n < 1 || dim < 1 || rank < 1 || rank > dim) {
    throw ConfigError("low-rank data needs 1 <= rank <= dim and n >= 1");
  }
  const Matrix basis = Gaussian(rank, dim, 1.0 / std::sqrt(rank), rng);
  const Matrix codes = Gaussian(n, rank, 1.0, rng);
  return codes * basis + Gaussian(n, dim, noise, rng);
}

}  // namespace dpmac
