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

#include "dpmac/perturbation.h"

#include <cmath>
#include <string>

#include "dpmac/errors.h"

namespace dpmac {

namespace {

void AddNoise(Matrix& m, double stddev, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, stddev);
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) += normal(rng);
  }
}

double Required(double delta, const char* what, int layer) {
  if (!std::isfinite(delta) || delta < 0.0) {
    throw ConfigError(std::string("missing sensitivity for ") + what +
                      " of layer " + std::to_string(layer + 1));
  }
  return delta;
}

}  // namespace

double PartitionNoiseStd(double delta, double sigma, int per_layer,
                         int num_layers) {
  return std::sqrt(static_cast<double>(per_layer) * num_layers) * delta *
         sigma;
}

std::vector<TaylorCoefficients> PerturbStack(
    std::vector<TaylorCoefficients> coeffs, const SensitivityBundle& bundle,
    double sigma, bool perturb_a, std::mt19937_64& rng) {
  if (!(sigma >= 0.0)) throw ConfigError("noise multiplier must be >= 0");
  if (bundle.num_layers() != static_cast<int>(coeffs.size())) {
    throw ConfigError("sensitivity bundle covers " +
                      std::to_string(bundle.num_layers()) + " layers, need " +
                      std::to_string(coeffs.size()));
  }
  if (perturb_a && bundle.coefficients_per_layer != 3) {
    throw ConfigError("releasing a requires second order coefficients");
  }
  const int k_layers = static_cast<int>(coeffs.size());
  const int m = bundle.coefficients_per_layer;
  for (int k = 0; k < k_layers; ++k) {
    const LayerSensitivity& s = bundle.layers[k];
    const double db = Required(s.delta_b, "b", k);
    const double dc = coeffs[k].order == 2 ? Required(s.delta_c, "C", k) : 0.0;
    const double da = perturb_a ? Required(s.delta_a, "a", k) : 0.0;
    if (sigma == 0.0) continue;
    AddNoise(coeffs[k].b, PartitionNoiseStd(db, sigma, m, k_layers), rng);
    if (coeffs[k].order == 2) {
      const double std_c = PartitionNoiseStd(dc, sigma, m, k_layers);
      for (Matrix& c : coeffs[k].c) AddNoise(c, std_c, rng);
    }
    if (perturb_a) {
      std::normal_distribution<double> normal(
          0.0, PartitionNoiseStd(da, sigma, m, k_layers));
      coeffs[k].a += normal(rng);
    }
  }
  return coeffs;
}

Vector GaussianMechanism(const Vector& v, double sensitivity, double sigma,
                         std::mt19937_64& rng) {
  if (!(sigma >= 0.0) || !(sensitivity >= 0.0)) {
    throw ConfigError("Gaussian mechanism needs sigma >= 0, sensitivity >= 0");
  }
  Matrix out = v;
  if (sigma > 0.0) AddNoise(out, sensitivity * sigma, rng);
  return out;
}

double ClassicalGaussianSigma(double epsilon, double delta) {
  if (!(epsilon > 0.0) || !(delta > 0.0 && delta < 1.0)) {
    throw ConfigError("need epsilon > 0 and 0 < delta < 1");
  }
  return std::sqrt(2.0 * std::log(1.25 / delta)) / epsilon;
}

}  // namespace dpmac
