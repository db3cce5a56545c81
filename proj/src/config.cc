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

#include "dpmac/config.h"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "dpmac/errors.h"
#include "dpmac/metrics.h"

namespace dpmac {

std::string ToString(Task task) {
  return task == Task::kClassifier ? "classifier" : "autoencoder";
}
std::string ToString(TrainerKind kind) {
  return kind == TrainerKind::kMac ? "mac" : "dpsgd";
}
std::string ToString(DataFormat format) {
  return format == DataFormat::kIdx ? "idx" : "csv";
}
std::string ToString(OutputLoss loss) {
  return loss == OutputLoss::kMse ? "mse" : "bce";
}

Architecture ExperimentConfig::architecture() const {
  Architecture arch;
  arch.hidden = activation;
  arch.output = output.value_or(task == Task::kClassifier ? OutputLoss::kBce
                                                          : OutputLoss::kMse);
  return arch;
}

namespace {

std::string Trim(std::string_view s) {
  const size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double ToDouble(const std::string& key, const std::string& v) {
  if (v == "inf") return std::numeric_limits<double>::infinity();
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
  return out;
}

long long ToInt(const std::string& key, const std::string& v) {
  long long out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
  return out;
}

bool ToBool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::optional<double> ToOptionalDouble(const std::string& key,
                                       const std::string& v) {
  if (v.empty() || v == "none") return std::nullopt;
  return ToDouble(key, v);
}

std::string FromOptional(const std::optional<double>& v) {
  return v ? FormatDouble(*v) : "none";
}

std::string FromBool(bool b) { return b ? "true" : "false"; }

std::vector<int> ToIntList(const std::string& key, const std::string& v) {
  std::vector<int> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(static_cast<int>(ToInt(key, Trim(item))));
  }
  return out;
}

std::string FromIntList(const std::vector<int>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ",";
    out += std::to_string(v[i]);
  }
  return out;
}

// Which sections a key belongs to, for serialization of the active trainer.
enum class Section { kCommon, kMac, kSgd };

struct Field {
  std::string key;
  Section section;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define DPMAC_DOUBLE(K, S, M)                                              \
  Field{K, S,                                                              \
        [](ExperimentConfig& c, const std::string& v) { c.M = ToDouble(K, v); }, \
        [](const ExperimentConfig& c) { return FormatDouble(c.M); }}
#define DPMAC_INT(K, S, M)                                                 \
  Field{K, S,                                                              \
        [](ExperimentConfig& c, const std::string& v) {                    \
          c.M = static_cast<int>(ToInt(K, v));                             \
        },                                                                 \
        [](const ExperimentConfig& c) { return std::to_string(c.M); }}
#define DPMAC_BOOL(K, S, M)                                                \
  Field{K, S,                                                              \
        [](ExperimentConfig& c, const std::string& v) { c.M = ToBool(K, v); }, \
        [](const ExperimentConfig& c) { return FromBool(c.M); }}
#define DPMAC_STRING(K, S, M)                                              \
  Field{K, S, [](ExperimentConfig& c, const std::string& v) { c.M = v; },   \
        [](const ExperimentConfig& c) { return c.M; }}
#define DPMAC_OPTIONAL(K, S, M)                                            \
  Field{K, S,                                                              \
        [](ExperimentConfig& c, const std::string& v) {                    \
          c.M = ToOptionalDouble(K, v);                                    \
        },                                                                 \
        [](const ExperimentConfig& c) { return FromOptional(c.M); }}

const std::vector<Field>& Fields() {
  static const std::vector<Field> fields = {
      Field{"task", Section::kCommon,
            [](ExperimentConfig& c, const std::string& v) {
              if (v == "classifier") c.task = Task::kClassifier;
              else if (v == "autoencoder") c.task = Task::kAutoencoder;
              else throw ConfigError("task: expected classifier or autoencoder");
            },
            [](const ExperimentConfig& c) { return ToString(c.task); }},
      Field{"trainer", Section::kCommon,
            [](ExperimentConfig& c, const std::string& v) {
              if (v == "mac") c.trainer = TrainerKind::kMac;
              else if (v == "dpsgd") c.trainer = TrainerKind::kDpSgd;
              else throw ConfigError("trainer: expected mac or dpsgd");
            },
            [](const ExperimentConfig& c) { return ToString(c.trainer); }},
      Field{"seed", Section::kCommon,
            [](ExperimentConfig& c, const std::string& v) {
              const long long s = ToInt("seed", v);
              if (s < 0) throw ConfigError("seed: must be >= 0");
              c.seed = static_cast<std::uint64_t>(s);
            },
            [](const ExperimentConfig& c) { return std::to_string(c.seed); }},
      DPMAC_STRING("output_dir", Section::kCommon, output_dir),
      Field{"data.format", Section::kCommon,
            [](ExperimentConfig& c, const std::string& v) {
              if (v == "idx") c.data.format = DataFormat::kIdx;
              else if (v == "csv") c.data.format = DataFormat::kCsv;
              else throw ConfigError("data.format: expected idx or csv");
            },
            [](const ExperimentConfig& c) { return ToString(c.data.format); }},
      DPMAC_STRING("data.train_path", Section::kCommon, data.train_path),
      DPMAC_STRING("data.train_labels_path", Section::kCommon,
                   data.train_labels_path),
      DPMAC_STRING("data.test_path", Section::kCommon, data.test_path),
      DPMAC_STRING("data.test_labels_path", Section::kCommon,
                   data.test_labels_path),
      DPMAC_BOOL("data.csv_has_label", Section::kCommon, data.csv_has_label),
      DPMAC_DOUBLE("data.scale", Section::kCommon, data.scale),
      DPMAC_DOUBLE("data.norm_bound", Section::kCommon, data.norm_bound),
      DPMAC_INT("data.num_classes", Section::kCommon, data.num_classes),
      DPMAC_INT("data.train_limit", Section::kCommon, data.train_limit),
      DPMAC_INT("data.test_limit", Section::kCommon, data.test_limit),
      Field{"model.layer_sizes", Section::kCommon,
            [](ExperimentConfig& c, const std::string& v) {
              c.layer_sizes = ToIntList("model.layer_sizes", v);
            },
            [](const ExperimentConfig& c) { return FromIntList(c.layer_sizes); }},
      Field{"model.activation", Section::kCommon,
            [](ExperimentConfig& c, const std::string& v) {
              c.activation = ParseActivation(v);
            },
            [](const ExperimentConfig& c) { return ToString(c.activation); }},
      Field{"model.output", Section::kCommon,
            [](ExperimentConfig& c, const std::string& v) {
              if (v == "mse") c.output = OutputLoss::kMse;
              else if (v == "bce") c.output = OutputLoss::kBce;
              else if (v == "auto") c.output.reset();
              else throw ConfigError("model.output: expected mse, bce or auto");
            },
            [](const ExperimentConfig& c) {
              return c.output ? ToString(*c.output) : std::string("auto");
            }},
      DPMAC_INT("pca.out_dim", Section::kCommon, pca.out_dim),
      DPMAC_DOUBLE("pca.sigma", Section::kCommon, pca.sigma),
      DPMAC_DOUBLE("privacy.sigma", Section::kCommon, privacy.sigma),
      DPMAC_DOUBLE("privacy.delta", Section::kCommon, privacy.delta),
      DPMAC_DOUBLE("mac.mu", Section::kMac, mac.mu),
      DPMAC_INT("mac.taylor_order", Section::kMac, mac.taylor_order),
      DPMAC_INT("mac.z_steps", Section::kMac, mac.z_steps),
      DPMAC_INT("mac.w_steps", Section::kMac, mac.w_steps),
      DPMAC_DOUBLE("mac.z_lr", Section::kMac, mac.z_lr),
      DPMAC_DOUBLE("mac.w_lr", Section::kMac, mac.w_lr),
      DPMAC_DOUBLE("mac.w_lr_decay", Section::kMac, mac.w_lr_decay),
      Field{"mac.w_optimizer", Section::kMac,
            [](ExperimentConfig& c, const std::string& v) {
              c.mac.w_optimizer = ParseOptimizer(v);
            },
            [](const ExperimentConfig& c) { return ToString(c.mac.w_optimizer); }},
      Field{"mac.z_optimizer", Section::kMac,
            [](ExperimentConfig& c, const std::string& v) {
              c.mac.z_optimizer = ParseOptimizer(v);
            },
            [](const ExperimentConfig& c) { return ToString(c.mac.z_optimizer); }},
      DPMAC_INT("mac.batch_size", Section::kMac, mac.batch_size),
      DPMAC_INT("mac.epochs", Section::kMac, mac.epochs),
      DPMAC_BOOL("mac.persist_z", Section::kMac, mac.persist_z),
      Field{"mac.sensitivity", Section::kMac,
            [](ExperimentConfig& c, const std::string& v) {
              c.mac.sensitivity = ParseSensitivityMode(v);
            },
            [](const ExperimentConfig& c) { return ToString(c.mac.sensitivity); }},
      DPMAC_OPTIONAL("mac.clip_grad", Section::kMac, mac.thresholds.grad),
      DPMAC_OPTIONAL("mac.clip_hess", Section::kMac, mac.thresholds.hess),
      DPMAC_OPTIONAL("mac.clip_value", Section::kMac, mac.thresholds.value),
      DPMAC_OPTIONAL("mac.normalization", Section::kMac, mac.normalization),
      DPMAC_BOOL("mac.perturb_a", Section::kMac, mac.perturb_a),
      DPMAC_DOUBLE("mac.init_scale", Section::kMac, mac.init_scale),
      DPMAC_OPTIONAL("sgd.clip_bound", Section::kSgd, sgd.clip_bound),
      DPMAC_BOOL("sgd.per_layer_clip", Section::kSgd, sgd.per_layer_clip),
      DPMAC_DOUBLE("sgd.lr", Section::kSgd, sgd.lr),
      DPMAC_INT("sgd.lr_decay", Section::kSgd, sgd.lr_decay),
      DPMAC_INT("sgd.batch_size", Section::kSgd, sgd.batch_size),
      DPMAC_INT("sgd.epochs", Section::kSgd, sgd.epochs),
      DPMAC_DOUBLE("sgd.init_scale", Section::kSgd, sgd.init_scale),
  };
  return fields;
}

#undef DPMAC_DOUBLE
#undef DPMAC_INT
#undef DPMAC_BOOL
#undef DPMAC_STRING
#undef DPMAC_OPTIONAL

const Field& FindField(const std::string& key) {
  for (const Field& f : Fields()) {
    if (f.key == key) return f;
  }
  throw ConfigError("unknown key '" + key + "'");
}

}  // namespace

void SetConfigValue(ExperimentConfig& cfg, const std::string& key,
                    const std::string& value) {
  FindField(key).set(cfg, Trim(value));
  cfg.explicit_keys.insert(key);
}

ExperimentConfig ParseConfig(std::string_view text, const std::string& source) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string trimmed = Trim(line);
    if (trimmed.empty()) continue;
    const size_t eq = trimmed.find('=');
    const std::string where = source + ":" + std::to_string(line_no) + ": ";
    if (eq == std::string::npos) {
      throw ConfigError(where + "expected 'key = value'");
    }
    const std::string key = Trim(trimmed.substr(0, eq));
    if (!seen.insert(key).second) {
      throw ConfigError(where + "duplicate key '" + key + "'");
    }
    try {
      SetConfigValue(cfg, key, trimmed.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  return cfg;
}

ExperimentConfig LoadConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseConfig(buf.str(), path);
}

std::string SerializeConfig(const ExperimentConfig& cfg) {
  const Section skip =
      cfg.trainer == TrainerKind::kMac ? Section::kSgd : Section::kMac;
  std::string out;
  for (const Field& f : Fields()) {
    if (f.section == skip) continue;
    out += f.key + " = " + f.get(cfg) + "\n";
  }
  return out;
}

std::vector<std::string> ConfigKeys() {
  std::vector<std::string> keys;
  for (const Field& f : Fields()) keys.push_back(f.key);
  return keys;
}

void ValidateConfig(const ExperimentConfig& cfg) {
  const std::string other = cfg.trainer == TrainerKind::kMac ? "sgd." : "mac.";
  for (const std::string& key : cfg.explicit_keys) {
    if (key.rfind(other, 0) == 0) {
      throw ConfigError(key + ": not used by trainer '" +
                        ToString(cfg.trainer) + "'");
    }
  }
  if (cfg.data.train_path.empty()) throw ConfigError("data.train_path: required");
  if (cfg.task == Task::kClassifier && cfg.data.format == DataFormat::kIdx &&
      cfg.data.train_labels_path.empty()) {
    throw ConfigError("data.train_labels_path: required for IDX classifiers");
  }
  if (cfg.task == Task::kClassifier && cfg.data.format == DataFormat::kCsv &&
      !cfg.data.csv_has_label) {
    throw ConfigError("data.csv_has_label: classifiers need labels");
  }
  if (!(cfg.data.scale > 0.0)) throw ConfigError("data.scale: must be > 0");
  if (!(cfg.data.norm_bound > 0.0)) throw ConfigError("data.norm_bound: must be > 0");
  if (cfg.data.num_classes < 2) throw ConfigError("data.num_classes: must be >= 2");
  if (cfg.data.train_limit < 0 || cfg.data.test_limit < 0) {
    throw ConfigError("data.train_limit: must be >= 0");
  }
  if (cfg.layer_sizes.empty()) throw ConfigError("model.layer_sizes: required");
  for (int s : cfg.layer_sizes) {
    if (s < 1) throw ConfigError("model.layer_sizes: entries must be >= 1");
  }
  if (cfg.pca.out_dim < 0) throw ConfigError("pca.out_dim: must be >= 0");
  if (!(cfg.pca.sigma >= 0.0)) throw ConfigError("pca.sigma: must be >= 0");
  if (cfg.pca.out_dim > 0 && cfg.task == Task::kAutoencoder) {
    throw ConfigError("pca.out_dim: DP-PCA applies to classifiers only");
  }
  if (!(cfg.privacy.sigma >= 0.0)) throw ConfigError("privacy.sigma: must be >= 0");
  if (!(cfg.privacy.delta > 0.0 && cfg.privacy.delta < 1.0)) {
    throw ConfigError("privacy.delta: must be in (0, 1)");
  }
  if (cfg.trainer == TrainerKind::kMac) {
    if (cfg.privacy.sigma > 0.0 &&
        cfg.mac.sensitivity == SensitivityMode::kClipped &&
        !cfg.mac.thresholds.grad) {
      throw ConfigError("mac.clip_grad: required for clipped sensitivity");
    }
    if (cfg.privacy.sigma > 0.0 && cfg.mac.taylor_order == 2 &&
        cfg.mac.sensitivity == SensitivityMode::kClipped &&
        !cfg.mac.thresholds.hess) {
      throw ConfigError("mac.clip_hess: required for second order clipping");
    }
    if (cfg.privacy.sigma > 0.0 && cfg.mac.perturb_a &&
        cfg.mac.sensitivity == SensitivityMode::kClipped &&
        !cfg.mac.thresholds.value) {
      throw ConfigError("mac.clip_value: required when mac.perturb_a is set");
    }
  } else if (cfg.privacy.sigma > 0.0 && !cfg.sgd.clip_bound) {
    throw ConfigError("sgd.clip_bound: required when privacy.sigma > 0");
  }
}

}  // namespace dpmac
