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

#ifndef DPMAC_CONFIG_H_
#define DPMAC_CONFIG_H_

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dpmac/dp_sgd.h"
#include "dpmac/mac_trainer.h"
#include "dpmac/network.h"
#include "dpmac/training.h"

namespace dpmac {

enum class Task { kClassifier, kAutoencoder };
enum class TrainerKind { kMac, kDpSgd };
enum class DataFormat { kIdx, kCsv };

struct DataConfig {
  DataFormat format = DataFormat::kCsv;
  std::string train_path;         // IDX images or CSV rows
  std::string train_labels_path;  // IDX labels (classifier only)
  std::string test_path;
  std::string test_labels_path;
  bool csv_has_label = true;  // first CSV column is an integer label
  double scale = 255.0;       // raw values are divided by this
  double norm_bound = 1.0;    // T_z; every row is projected into this ball
  int num_classes = 10;
  int train_limit = 0;  // 0 keeps everything
  int test_limit = 0;
};

struct PcaConfig {
  int out_dim = 0;  // 0 disables DP-PCA
  double sigma = 0.0;
};

struct ExperimentConfig {
  Task task = Task::kClassifier;
  TrainerKind trainer = TrainerKind::kMac;
  DataConfig data;
  // Output widths of every layer; the input width comes from the data.
  std::vector<int> layer_sizes;
  Activation activation = Activation::kSoftplus;
  std::optional<OutputLoss> output;  // default: bce for classifier, mse else
  PcaConfig pca;
  PrivacyParams privacy;
  MacConfig mac;
  SgdConfig sgd;
  std::uint64_t seed = 0;
  std::string output_dir = "out";

  // Keys explicitly given in the file or on the command line.
  std::set<std::string> explicit_keys;

  Architecture architecture() const;
};

// `key = value` lines, `#` starts a comment. Unknown keys, malformed values
// and duplicates throw ConfigError with the source and line.
ExperimentConfig ParseConfig(std::string_view text, const std::string& source);
ExperimentConfig LoadConfigFile(const std::string& path);

// Sets one key; throws ConfigError naming the key on bad input.
void SetConfigValue(ExperimentConfig& cfg, const std::string& key,
                    const std::string& value);

// Every effective value of the config (only the active trainer's section),
// in a form ParseConfig reads back to an equal config.
std::string SerializeConfig(const ExperimentConfig& cfg);

// All recognised keys.
std::vector<std::string> ConfigKeys();

// Cross-field checks that do not need the data. Errors name the field path.
void ValidateConfig(const ExperimentConfig& cfg);

std::string ToString(Task task);
std::string ToString(TrainerKind kind);
std::string ToString(DataFormat format);
std::string ToString(OutputLoss loss);

}  // namespace dpmac

#endif  // DPMAC_CONFIG_H_
