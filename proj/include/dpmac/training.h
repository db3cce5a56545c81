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

#ifndef DPMAC_TRAINING_H_
#define DPMAC_TRAINING_H_

#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "dpmac/dataset.h"
#include "dpmac/metrics.h"
#include "dpmac/moments_accountant.h"
#include "dpmac/network.h"

namespace dpmac {

// Noise multiplier and target delta. The sampling rate is batch / N and is
// derived from the loaded data.
struct PrivacyParams {
  double sigma = 0.0;
  double delta = 1e-5;
};

struct PrivacyReport {
  double epsilon = std::numeric_limits<double>::infinity();
  double delta = 1e-5;
  double sigma = 0.0;
  double q = 0.0;
  long steps = 0;   // noised training steps
  int lambda = 0;   // argmin of the conversion, 0 when epsilon is infinite
  long events = 0;  // all ledger events, including preprocessing
};

struct TrainResult {
  WeightStack weights;
  PrivacyReport privacy;
  MetricsLog metrics;
};

// Each row is kept independently with probability q.
std::vector<int> PoissonSample(int n, double q, std::mt19937_64& rng);

// Steps per epoch for expected batch size `batch`: max(1, round(N / batch)).
long IterationsPerEpoch(int n, int batch);

// 0 for an empty ledger (nothing released yet), +inf when nothing usable is
// left (e.g. sigma == 0).
PrivacySpend SpendOrInfinite(const MomentsLedger& ledger, double delta);

// Train/test objective and accuracy (NaN unless the output is cross-entropy
// with more than one unit, i.e. a one-hot classifier).
MetricRecord Evaluate(const WeightStack& w, const Architecture& arch,
                      const Dataset& train, const Dataset* test);

}  // namespace dpmac

#endif  // DPMAC_TRAINING_H_
