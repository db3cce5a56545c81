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

#include "dpmac/dataset.h"

#include <string>
#include <utility>

#include "dpmac/errors.h"

namespace dpmac {

Dataset Dataset::Create(Matrix inputs, Matrix targets, double norm_bound) {
  if (inputs.rows() < 1) throw DataError("dataset is empty");
  if (targets.rows() != inputs.rows()) {
    throw DataError("dataset has " + std::to_string(inputs.rows()) +
                    " inputs but " + std::to_string(targets.rows()) +
                    " targets");
  }
  if (!(norm_bound > 0.0)) throw DataError("norm bound must be positive");
  if (!inputs.allFinite() || !targets.allFinite()) {
    throw DataError("dataset contains non-finite values");
  }
  ProjectRowsToBall(inputs, norm_bound);
  Dataset d;
  d.inputs = std::move(inputs);
  d.targets = std::move(targets);
  d.norm_bound = norm_bound;
  return d;
}

Dataset Dataset::Subset(const std::vector<int>& rows) const {
  Dataset d;
  d.norm_bound = norm_bound;
  d.inputs.resize(static_cast<Eigen::Index>(rows.size()), inputs.cols());
  d.targets.resize(static_cast<Eigen::Index>(rows.size()), targets.cols());
  for (size_t i = 0; i < rows.size(); ++i) {
    d.inputs.row(i) = inputs.row(rows[i]);
    d.targets.row(i) = targets.row(rows[i]);
  }
  return d;
}

void ProjectRowsToBall(Matrix& m, double radius) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double norm = m.row(i).norm();
    if (norm > radius) m.row(i) *= radius / norm;
  }
}

Matrix OneHot(const std::vector<int>& labels, int num_classes) {
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(labels.size()),
                            num_classes);
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= num_classes) {
      throw DataError("label " + std::to_string(labels[i]) +
                      " out of range at row " + std::to_string(i));
    }
    out(static_cast<Eigen::Index>(i), labels[i]) = 1.0;
  }
  return out;
}

}  // namespace dpmac
