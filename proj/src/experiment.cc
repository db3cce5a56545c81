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

#include "dpmac/experiment.h"

#include <filesystem>
#include <random>
#include <sstream>

#include "json.hpp"

#include "dpmac/data_io.h"
#include "dpmac/dp_pca.h"
#include "dpmac/dp_sgd.h"
#include "dpmac/errors.h"
#include "dpmac/mac_trainer.h"
#include "dpmac/metrics.h"

namespace dpmac {

namespace {

Matrix Head(const Matrix& m, int limit) {
  if (limit <= 0 || limit >= m.rows()) return m;
  return m.topRows(limit);
}

std::vector<int> Head(const std::vector<int>& v, int limit) {
  if (limit <= 0 || limit >= static_cast<int>(v.size())) return v;
  return std::vector<int>(v.begin(), v.begin() + limit);
}

Dataset BuildDataset(const ExperimentConfig& cfg, Matrix features,
                     const std::vector<int>& labels) {
  features /= cfg.data.scale;
  if (cfg.task == Task::kClassifier) {
    if (static_cast<Eigen::Index>(labels.size()) != features.rows()) {
      throw DataError("got " + std::to_string(features.rows()) + " rows but " +
                      std::to_string(labels.size()) + " labels");
    }
    Matrix targets = OneHot(labels, cfg.data.num_classes);
    return Dataset::Create(std::move(features), std::move(targets),
                           cfg.data.norm_bound);
  }
  Dataset d = Dataset::Create(features, features, cfg.data.norm_bound);
  d.targets = d.inputs;
  return d;
}

struct RawSplit {
  Matrix features;
  std::vector<int> labels;
};

RawSplit LoadSplit(const ExperimentConfig& cfg, const std::string& path,
                   const std::string& labels_path) {
  RawSplit raw;
  if (cfg.data.format == DataFormat::kIdx) {
    raw.features = LoadIdxImages(path);
    if (!labels_path.empty()) raw.labels = LoadIdxLabels(labels_path);
  } else {
    CsvData csv = LoadCsv(path, cfg.data.csv_has_label);
    raw.features = std::move(csv.features);
    raw.labels = std::move(csv.labels);
  }
  return raw;
}

}  // namespace

ExperimentData MakeExperimentData(const ExperimentConfig& cfg,
                                  const Matrix& train_features,
                                  const std::vector<int>& train_labels,
                                  const Matrix* test_features,
                                  const std::vector<int>* test_labels) {
  ExperimentData data{
      BuildDataset(cfg, Head(train_features, cfg.data.train_limit),
                   Head(train_labels, cfg.data.train_limit)),
      std::nullopt};
  if (test_features != nullptr) {
    static const std::vector<int> kNone;
    data.test = BuildDataset(cfg, Head(*test_features, cfg.data.test_limit),
                             Head(test_labels ? *test_labels : kNone,
                                  cfg.data.test_limit));
    if (data.test->input_dim() != data.train.input_dim()) {
      throw DataError("test inputs have " +
                      std::to_string(data.test->input_dim()) +
                      " features, training inputs " +
                      std::to_string(data.train.input_dim()));
    }
  }
  return data;
}

ExperimentData LoadExperimentData(const ExperimentConfig& cfg) {
  const RawSplit train =
      LoadSplit(cfg, cfg.data.train_path, cfg.data.train_labels_path);
  if (cfg.data.test_path.empty()) {
    return MakeExperimentData(cfg, train.features, train.labels, nullptr,
                              nullptr);
  }
  const RawSplit test =
      LoadSplit(cfg, cfg.data.test_path, cfg.data.test_labels_path);
  return MakeExperimentData(cfg, train.features, train.labels, &test.features,
                            &test.labels);
}

ExperimentResult RunExperimentOnData(const ExperimentConfig& cfg,
                                     ExperimentData data) {
  ValidateConfig(cfg);
  std::mt19937_64 rng(cfg.seed);
  MomentsLedger ledger;
  ExperimentResult result;
  if (cfg.pca.out_dim > 0) {
    // The mechanism needs unit-norm rows; T_z > 1 is scaled down first.
    const double t_z = cfg.data.norm_bound;
    const double shrink = t_z > 1.0 ? 1.0 / t_z : 1.0;
    const DpPcaResult pca =
        DpPca(data.train.inputs * shrink, cfg.pca.out_dim, cfg.pca.sigma, rng);
    data.train.inputs = data.train.inputs * pca.projection;
    ProjectRowsToBall(data.train.inputs, t_z);
    if (data.test) {
      data.test->inputs = data.test->inputs * pca.projection;
      ProjectRowsToBall(data.test->inputs, t_z);
    }
    ledger.Compose(1.0, cfg.pca.sigma, 1);
    result.pca_dim = cfg.pca.out_dim;
    result.pca_sigma = cfg.pca.sigma;
  }
  result.layer_sizes = {data.train.input_dim()};
  result.layer_sizes.insert(result.layer_sizes.end(), cfg.layer_sizes.begin(),
                            cfg.layer_sizes.end());
  const Dataset* test = data.test ? &*data.test : nullptr;
  if (cfg.trainer == TrainerKind::kMac) {
    result.train = TrainDpMac(data.train, test, result.layer_sizes,
                              cfg.architecture(), cfg.mac, cfg.privacy, rng,
                              std::move(ledger));
  } else {
    result.train = TrainDpSgd(data.train, test, result.layer_sizes,
                              cfg.architecture(), cfg.sgd, cfg.privacy, rng,
                              std::move(ledger));
  }
  return result;
}

std::string PrivacyJson(const ExperimentConfig& cfg,
                        const ExperimentResult& result) {
  const PrivacyReport& p = result.train.privacy;
  nlohmann::json j;
  j["epsilon"] = std::isfinite(p.epsilon) ? nlohmann::json(p.epsilon)
                                          : nlohmann::json(nullptr);
  j["delta"] = p.delta;
  j["sigma"] = p.sigma;
  j["q"] = p.q;
  j["T"] = p.steps;
  j["lambda"] = p.lambda;
  j["events"] = p.events;
  j["lambda_max"] = DefaultLambdaGrid().back();
  j["trainer"] = ToString(cfg.trainer);
  if (result.pca_dim > 0) {
    j["pca"] = {{"out_dim", result.pca_dim}, {"sigma", result.pca_sigma}};
  } else {
    j["pca"] = nullptr;
  }
  return j.dump(2) + "\n";
}

double RecomputeEpsilonFromJson(const std::string& json) {
  const nlohmann::json j = nlohmann::json::parse(json);
  MomentsLedger ledger;
  if (!j["pca"].is_null()) {
    ledger.Compose(1.0, j["pca"]["sigma"].get<double>(), 1);
  }
  ledger.Compose(j["q"].get<double>(), j["sigma"].get<double>(),
                 j["T"].get<long>());
  return SpendOrInfinite(ledger, j["delta"].get<double>()).epsilon;
}

std::string FormatWeights(const WeightStack& w) {
  std::ostringstream out;
  out << w.num_layers() << "\n";
  for (const Matrix& m : w.layers()) {
    out << m.rows() << " " << m.cols() << "\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (j > 0) out << " ";
        out << FormatDouble(m(i, j));
      }
      out << "\n";
    }
  }
  return out.str();
}

WeightStack ParseWeights(const std::string& text) {
  std::istringstream in(text);
  int layers = 0;
  if (!(in >> layers) || layers < 1) throw DataError("weights: bad layer count");
  std::vector<Matrix> mats;
  for (int k = 0; k < layers; ++k) {
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    if (!(in >> rows >> cols) || rows < 1 || cols < 1) {
      throw DataError("weights: bad shape for layer " + std::to_string(k + 1));
    }
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) {
        std::string tok;
        if (!(in >> tok)) throw DataError("weights: truncated");
        m(i, j) = std::stod(tok);
      }
    }
    mats.push_back(std::move(m));
  }
  return WeightStack(std::move(mats));
}

ExperimentResult RunExperiment(const ExperimentConfig& cfg) {
  ValidateConfig(cfg);
  ExperimentResult result = RunExperimentOnData(cfg, LoadExperimentData(cfg));
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) {
    throw DataError("cannot create output directory '" + cfg.output_dir +
                    "': " + ec.message());
  }
  const std::filesystem::path dir(cfg.output_dir);
  std::ostringstream metrics;
  WriteMetricsCsv(result.train.metrics, metrics);
  std::ostringstream timing;
  WriteTimingCsv(result.train.metrics, timing);
  WriteFileAtomically((dir / "metrics.csv").string(), metrics.str());
  WriteFileAtomically((dir / "timing.csv").string(), timing.str());
  WriteFileAtomically((dir / "privacy.json").string(), PrivacyJson(cfg, result));
  WriteFileAtomically((dir / "weights.txt").string(),
                      FormatWeights(result.train.weights));
  WriteFileAtomically((dir / "config.txt").string(), SerializeConfig(cfg));
  return result;
}

}  // namespace dpmac
