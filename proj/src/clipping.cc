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

#include "dpmac/clipping.h"

#include <string>

#include "dpmac/errors.h"

namespace dpmac {

double ClipFactor(double norm, double threshold) {
  if (!(threshold > 0.0)) {
    throw ConfigError("clipping threshold must be positive, got " +
                      std::to_string(threshold));
  }
  return norm > threshold ? threshold / norm : 1.0;
}

std::vector<Matrix> ClipRows(std::vector<Matrix> terms, double threshold) {
  for (Matrix& t : terms) {
    const double factor = ClipFactor(t.norm(), threshold);
    if (factor < 1.0) t *= factor;
  }
  return terms;
}

}  // namespace dpmac
