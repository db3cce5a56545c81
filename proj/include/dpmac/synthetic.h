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

#ifndef DPMAC_SYNTHETIC_H_
#define DPMAC_SYNTHETIC_H_

#include <random>
#include <vector>

#include "dpmac/network.h"

namespace dpmac {

// Isotropic Gaussian blobs around random unit-norm centres scaled by
// `separation`; labels cycle through the classes.
struct LabelledData {
  Matrix features;
  std::vector<int> labels;
};
LabelledData MakeBlobs(int n, int dim, int classes, double separation,
                       double spread, std::mt19937_64& rng);

// Points on a random rank-`rank` subspace plus isotropic noise, for
// reconstruction tasks.
Matrix MakeLowRank(int n, int dim, int rank, double noise, std::mt19937_64& rng);

}  // namespace dpmac

#endif  // DPMAC_SYNTHETIC_H_
