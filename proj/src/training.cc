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

#include "dpmac/training.h"

#include <cmath>

#include "dpmac/errors.h"

namespace dpmac {

std::vector<int> PoissonSample(int n, double q, std::mt19937_64& rng) {
  if (!(q > 0.0 && q <= 1.0)) throw ConfigError("sampling rate must be in (0, 1]");
  std::vector<int> rows;
  if (q == 1.0) {
    rows.resize(n);
    for (int i = 0; i < n; ++i) rows[i] = i;
    return rows;
  }
  std::bernoulli_distribution keep(q);
  for (int i = 0; i < n; ++i) {
    if (keep(rng)) rows.push_back(i);
  }
  return rows;
}

long IterationsPerEpoch(int n, int batch) {
  if (batch <= 0) throw ConfigError("batch_size must be positive");
  return std::max(1L, std::lround(static_cast<double>(n) / batch));
}

PrivacySpend SpendOrInfinite(const MomentsLedger& ledger, double delta) {
  if (ledger.steps_recorded() == 0) return {0.0, delta, 0};
  if (!ledger.AnyUsable()) {
    return {std::numeric_limits<double>::infinity(), delta, 0};
  }
  return EpsilonForDelta(ledger, delta);
}

MetricRecord Evaluate(const WeightStack& w, const Architecture& arch,
                      const Dataset& train, const Dataset* test) {
  MetricRecord r;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  r.train_objective = TaskObjective(w, train.inputs, train.targets, arch);
  r.test_objective = nan;
  r.test_accuracy = nan;
  if (test != nullptr && test->size() > 0) {
    r.test_objective = TaskObjective(w, test->inputs, test->targets, arch);
    if (arch.output == OutputLoss::kBce && test->target_dim() > 1) {
      r.test_accuracy = Accuracy(w, test->inputs, test->targets, arch);
    }
  }
  return r;
}

}  // namespace dpmac
