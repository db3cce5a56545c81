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

#include "dpmac/aux_coordinates.h"

#include <string>
#include <utility>

#include "dpmac/dataset.h"
#include "dpmac/errors.h"
#include "dpmac/taylor.h"

namespace dpmac {

namespace {

void CheckShapes(const WeightStack& w, const AuxCoordinates& z,
                 const Matrix& x, const Matrix& y) {
  const int hidden = w.num_layers() - 1;
  if (static_cast<int>(z.z.size()) != hidden) {
    throw DimensionError("expected " + std::to_string(hidden) +
                         " auxiliary layers, got " +
                         std::to_string(z.z.size()));
  }
  if (x.cols() != w.input_dim() || y.cols() != w.output_dim() ||
      y.rows() != x.rows()) {
    throw DimensionError("batch does not match the network");
  }
  for (int k = 0; k < hidden; ++k) {
    if (z.z[k].rows() != x.rows() || z.z[k].cols() != w.layer(k).cols()) {
      throw DimensionError("auxiliary layer " + std::to_string(k + 1) +
                           " has the wrong shape");
    }
  }
}

const Matrix& LayerInput(const AuxCoordinates& z, const Matrix& x, int k) {
  return k == 0 ? x : z.z[k - 1];
}

const Matrix& LayerTarget(const AuxCoordinates& z, const Matrix& y, int k) {
  return k < static_cast<int>(z.z.size()) ? z.z[k] : y;
}

}  // namespace

AuxCoordinates InitAuxCoordinates(const WeightStack& w, const Matrix& x,
                                  const Architecture& arch,
                                  double norm_bound) {
  std::vector<Matrix> acts = ForwardBatch(w, x, arch);
  acts.pop_back();
  for (Matrix& m : acts) ProjectRowsToBall(m, norm_bound);
  return AuxCoordinates{std::move(acts)};
}

double ExpandedObjective(const WeightStack& w, const AuxCoordinates& z,
                         const Matrix& x, const Matrix& y,
                         const Architecture& arch,
                         const ExpandedObjectiveParams& params) {
  CheckShapes(w, z, x, y);
  double total = 0.0;
  for (int k = 0; k < w.num_layers(); ++k) {
    const LayerObjective obj =
        LayerObjectiveFor(arch, k, w.num_layers(), params.mu);
    total += LayerObjectiveValue(w.layer(k), LayerInput(z, x, k),
                                 LayerTarget(z, y, k), obj,
                                 params.normalization);
  }
  return total;
}

std::vector<Matrix> ExpandedObjectiveGradZ(
    const WeightStack& w, const AuxCoordinates& z, const Matrix& x,
    const Matrix& y, const Architecture& arch,
    const ExpandedObjectiveParams& params) {
  CheckShapes(w, z, x, y);
  const int hidden = w.num_layers() - 1;
  std::vector<Matrix> grads(hidden);
  for (int k = 0; k < w.num_layers(); ++k) {
    const LayerObjective obj =
        LayerObjectiveFor(arch, k, w.num_layers(), params.mu);
    const Matrix& input = LayerInput(z, x, k);
    const LayerUnitTerms units =
        EvalLayerUnits(obj, input * w.layer(k), LayerTarget(z, y, k));
    const double scale = obj.weight / (2.0 * params.normalization);
    if (k < hidden) grads[k] = scale * units.target_grad;
    if (k > 0) grads[k - 1] += scale * units.g * w.layer(k).transpose();
  }
  return grads;
}

std::vector<Matrix> ExpandedObjectiveGradW(
    const WeightStack& w, const AuxCoordinates& z, const Matrix& x,
    const Matrix& y, const Architecture& arch,
    const ExpandedObjectiveParams& params) {
  CheckShapes(w, z, x, y);
  std::vector<Matrix> grads;
  grads.reserve(w.num_layers());
  for (int k = 0; k < w.num_layers(); ++k) {
    const LayerObjective obj =
        LayerObjectiveFor(arch, k, w.num_layers(), params.mu);
    grads.push_back(LayerObjectiveGrad(w.layer(k), LayerInput(z, x, k),
                                       LayerTarget(z, y, k), obj,
                                       params.normalization));
  }
  return grads;
}

AuxCoordinates ZUpdate(const WeightStack& w, AuxCoordinates z, const Matrix& x,
                       const Matrix& y, const Architecture& arch,
                       const ZUpdateOptions& options) {
  CheckShapes(w, z, x, y);
  if (options.steps < 0) throw ConfigError("z_steps must be non-negative");
  if (z.z.empty() || x.rows() == 0) return z;
  std::vector<MatrixOptimizer> optimizers(z.z.size(),
                                          MatrixOptimizer(options.optimizer));
  for (int step = 0; step < options.steps; ++step) {
    const std::vector<Matrix> grads =
        ExpandedObjectiveGradZ(w, z, x, y, arch, options.objective);
    for (size_t k = 0; k < z.z.size(); ++k) {
      optimizers[k].Step(z.z[k], grads[k], options.learning_rate);
      ProjectRowsToBall(z.z[k], options.norm_bound);
    }
  }
  return z;
}

}  // namespace dpmac
