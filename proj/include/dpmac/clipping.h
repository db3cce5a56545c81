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

#ifndef DPMAC_CLIPPING_H_
#define DPMAC_CLIPPING_H_

#include <vector>

#include "dpmac/network.h"

namespace dpmac {

// Scale that brings a term of the given norm inside the threshold:
// min(1, threshold / norm). Throws ConfigError when threshold <= 0.
double ClipFactor(double norm, double threshold);

// Rescales every per-sample term whose Frobenius norm exceeds `threshold`
// to norm exactly `threshold`; other terms are returned unchanged.
std::vector<Matrix> ClipRows(std::vector<Matrix> terms, double threshold);

}  // namespace dpmac

#endif  // DPMAC_CLIPPING_H_
