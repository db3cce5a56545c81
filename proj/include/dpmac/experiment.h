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

#ifndef DPMAC_EXPERIMENT_H_
#define DPMAC_EXPERIMENT_H_

#include <optional>
#include <string>
#include <vector>

#include "dpmac/config.h"
#include "dpmac/dataset.h"
#include "dpmac/moments_accountant.h"
#include "dpmac/training.h"

namespace dpmac {

struct ExperimentData {
  Dataset train;
  std::optional<Dataset> test;
};

// Reads the configured files, divides by data.scale, projects rows into the
// data.norm_bound ball and builds targets (one-hot labels for classifiers,
// the projected inputs for autoencoders).
ExperimentData LoadExperimentData(const ExperimentConfig& cfg);

// Builds datasets from raw (unscaled) features in the same way.
ExperimentData MakeExperimentData(const ExperimentConfig& cfg,
                                  const Matrix& train_features,
                                  const std::vector<int>& train_labels,
                                  const Matrix* test_features,
                                  const std::vector<int>* test_labels);

struct ExperimentResult {
  TrainResult train;
  std::vector<int> layer_sizes;  // including the input width
  int pca_dim = 0;
  double pca_sigma = 0.0;
};

// DP-PCA (when configured, composed into the ledger as one q = 1 event),
// then the configured trainer.
ExperimentResult RunExperimentOnData(const ExperimentConfig& cfg,
                                     ExperimentData data);

// LoadExperimentData + RunExperimentOnData + artifacts in cfg.output_dir:
// metrics.csv, timing.csv, privacy.json, weights.txt and config.txt.
ExperimentResult RunExperiment(const ExperimentConfig& cfg);

std::string PrivacyJson(const ExperimentConfig& cfg,
                        const ExperimentResult& result);

// Recomputes epsilon from the fields of a privacy.json document.
double RecomputeEpsilonFromJson(const std::string& json);

// Plain text: layer count, then per layer "rows cols" and the values
// row-major with round-trip precision.
std::string FormatWeights(const WeightStack& w);
WeightStack ParseWeights(const std::string& text);

}  // namespace dpmac

#endif  // DPMAC_EXPERIMENT_H_
