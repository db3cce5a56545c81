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

#ifndef DPMAC_DATASET_H_
#define DPMAC_DATASET_H_

#include <vector>

#include "dpmac/network.h"

namespace dpmac {

// Supervised data with every input row inside the L2 ball of radius
// norm_bound. Classifier targets are one-hot rows; autoencoder targets are
// copies of the inputs.
struct Dataset {
  Matrix inputs;
  Matrix targets;
  double norm_bound = 1.0;

  // Validates N >= 1, matching row counts and the norm bound (rows are
  // projected, not rejected). Throws DataError.
  static Dataset Create(Matrix inputs, Matrix targets, double norm_bound);

  int size() const { return static_cast<int>(inputs.rows()); }
  int input_dim() const { return static_cast<int>(inputs.cols()); }
  int target_dim() const { return static_cast<int>(targets.cols()); }

  // Rows picked by index, in the order given.
  Dataset Subset(const std::vector<int>& rows) const;
};

// Rescales every row whose L2 norm exceeds `radius` onto the sphere of that
// radius. Rows already inside the ball are left untouched.
void ProjectRowsToBall(Matrix& m, double radius);

// One-hot encodes integer labels into an N x num_classes matrix.
Matrix OneHot(const std::vector<int>& labels, int num_classes);

}  // namespace dpmac

#endif  // DPMAC_DATASET_H_
