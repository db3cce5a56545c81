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

#ifndef DPMAC_PERTURBATION_H_
#define DPMAC_PERTURBATION_H_

#include <random>
#include <vector>

#include "dpmac/network.h"
#include "dpmac/sensitivity.h"
#include "dpmac/taylor.h"

namespace dpmac {

// Standard deviation of the Gaussian noise added to every released
// coefficient partition: sqrt(M K) * delta * sigma.
double PartitionNoiseStd(double delta, double sigma, int per_layer,
                         int num_layers);

// Adds N(0, (sqrt(M K) delta sigma)^2) independently to every entry of b
// (and of every C_h for second order, and of a when perturb_a is set), with
// per-layer deltas taken from the bundle. Draws fresh noise on every call.
// sigma == 0 returns the input unchanged without touching the generator.
// Throws ConfigError when a required sensitivity is missing.
std::vector<TaylorCoefficients> PerturbStack(
    std::vector<TaylorCoefficients> coeffs, const SensitivityBundle& bundle,
    double sigma, bool perturb_a, std::mt19937_64& rng);

// Plain Gaussian mechanism: v + N(0, (sensitivity sigma)^2 I).
Vector GaussianMechanism(const Vector& v, double sensitivity, double sigma,
                         std::mt19937_64& rng);

// Classical single-release calibration sqrt(2 log(1.25 / delta)) / epsilon.
double ClassicalGaussianSigma(double epsilon, double delta);

}  // namespace dpmac

#endif  // DPMAC_PERTURBATION_H_
