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

#include "dpmac/dp_sgd.h"

#include <chrono>
#include <cmath>
#include <string>

#include "dpmac/errors.h"

namespace dpmac {

void SgdConfig::Validate(int dataset_size) const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw ConfigError("sgd." + field + ": " + why);
  };
  if (clip_bound && !(*clip_bound > 0.0)) fail("clip_bound", "must be > 0");
  if (!(lr > 0.0)) fail("lr", "must be > 0");
  if (lr_decay < 0) fail("lr_decay", "must be >= 0");
  if (batch_size < 1) fail("batch_size", "must be >= 1");
  if (batch_size > dataset_size) fail("batch_size", "exceeds the dataset size");
  if (epochs < 0) fail("epochs", "must be >= 0");
  if (!(init_scale >= 0.0)) fail("init_scale", "must be >= 0");
}

namespace {

// Layer inputs z_0..z_K and output-side errors delta_1..delta_{K+1} (rows
// are examples); the gradient of example n for layer k is
// z_{k-1,n} delta_{k,n}^T.
struct Backprop {
  std::vector<Matrix> inputs;
  std::vector<Matrix> deltas;
};

Backprop RunBackprop(const WeightStack& w, const Matrix& x, const Matrix& y,
                     const Architecture& arch) {
  if (x.cols() != w.input_dim() || y.cols() != w.output_dim() ||
      x.rows() != y.rows()) {
    throw DimensionError("batch does not match the network");
  }
  const int layers = w.num_layers();
  Backprop bp;
  bp.inputs.reserve(layers);
  std::vector<Matrix> derivs;
  Matrix z = x;
  Matrix out;
  for (int k = 0; k < layers; ++k) {
    bp.inputs.push_back(z);
    const Matrix pre = z * w.layer(k);
    if (k + 1 < layers) {
      ActivatedMatrix a = ActivateWithDerivatives(arch.hidden, pre);
      derivs.push_back(std::move(a.f1));
      z = std::move(a.f);
    } else {
      out = ApplyOutput(arch.output, pre);
    }
  }
  // Both losses give d loss / d pre_out = output - y.
  bp.deltas.resize(layers);
  bp.deltas[layers - 1] = out - y;
  for (int k = layers - 2; k >= 0; --k) {
    bp.deltas[k] = (bp.deltas[k + 1] * w.layer(k + 1).transpose())
                       .cwiseProduct(derivs[k]);
  }
  return bp;
}

}  // namespace

std::vector<std::vector<Matrix>> PerExampleGradients(
    const WeightStack& w, const Matrix& x, const Matrix& y,
    const Architecture& arch) {
  const Backprop bp = RunBackprop(w, x, y, arch);
  std::vector<std::vector<Matrix>> grads(x.rows());
  for (Eigen::Index n = 0; n < x.rows(); ++n) {
    for (int k = 0; k < w.num_layers(); ++k) {
      grads[n].push_back(bp.inputs[k].row(n).transpose() * bp.deltas[k].row(n));
    }
  }
  return grads;
}

std::vector<Matrix> ClippedGradientSum(const WeightStack& w, const Matrix& x,
                                       const Matrix& y,
                                       const Architecture& arch,
                                       std::optional<double> threshold,
                                       bool per_layer) {
  const Backprop bp = RunBackprop(w, x, y, arch);
  const int layers = w.num_layers();
  // ||z delta^T||_F = ||z|| ||delta||.
  std::vector<Vector> layer_norms(layers);
  for (int k = 0; k < layers; ++k) {
    layer_norms[k] = bp.inputs[k].rowwise().norm().cwiseProduct(
        bp.deltas[k].rowwise().norm());
  }
  std::vector<Matrix> sums(layers);
  Vector global = Vector::Zero(x.rows());
  for (int k = 0; k < layers; ++k) global += layer_norms[k].cwiseAbs2();
  global = global.cwiseSqrt();
  for (int k = 0; k < layers; ++k) {
    Vector factor = Vector::Ones(x.rows());
    if (threshold) {
      const double bound =
          per_layer ? *threshold / std::sqrt(static_cast<double>(layers))
                    : *threshold;
      const Vector& norms = per_layer ? layer_norms[k] : global;
      for (Eigen::Index n = 0; n < x.rows(); ++n) {
        factor(n) = norms(n) > bound ? bound / norms(n) : 1.0;
      }
    }
    sums[k] = bp.inputs[k].transpose() * factor.asDiagonal() * bp.deltas[k];
  }
  return sums;
}

void DpSgdStep(WeightStack& w, const Matrix& x, const Matrix& y,
               const Architecture& arch, const SgdConfig& cfg, double lr,
               double sigma, double q, std::mt19937_64& rng,
               MomentsLedger& ledger) {
  if (!(sigma >= 0.0)) throw ConfigError("privacy.sigma: must be >= 0");
  if (sigma > 0.0 && !cfg.clip_bound) {
    throw ConfigError("sgd.clip_bound: required when sigma > 0");
  }
  const double s = cfg.batch_size;
  std::vector<Matrix> grads =
      ClippedGradientSum(w, x, y, arch, cfg.clip_bound, cfg.per_layer_clip);
  const double stddev = sigma > 0.0 ? *cfg.clip_bound * sigma / s : 0.0;
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int k = 0; k < w.num_layers(); ++k) {
    Matrix g = grads[k] / s;
    if (stddev > 0.0) {
      for (Eigen::Index j = 0; j < g.cols(); ++j) {
        for (Eigen::Index i = 0; i < g.rows(); ++i) {
          g(i, j) += stddev * normal(rng);
        }
      }
    }
    w.mutable_layer(k) -= lr * g;
  }
  ledger.Compose(q, sigma, 1);
}

TrainResult TrainDpSgd(const Dataset& train, const Dataset* test,
                       const std::vector<int>& layer_sizes,
                       const Architecture& arch, const SgdConfig& cfg,
                       const PrivacyParams& privacy, std::mt19937_64& rng,
                       MomentsLedger ledger) {
  cfg.Validate(train.size());
  if (layer_sizes.size() < 2 || layer_sizes.front() != train.input_dim() ||
      layer_sizes.back() != train.target_dim()) {
    throw ConfigError("model.layer_sizes: does not match the data");
  }
  const auto start = std::chrono::steady_clock::now();
  const int n = train.size();
  const double q = static_cast<double>(cfg.batch_size) / n;
  const long per_epoch = IterationsPerEpoch(n, cfg.batch_size);
  WeightStack w = WeightStack::RandomNormal(layer_sizes, cfg.init_scale, rng);
  for (int k = 0; k < w.num_layers(); ++k) {
    w.mutable_layer(k) /= std::sqrt(static_cast<double>(w.layer(k).rows()));
  }

  TrainResult result;
  long iteration = 0;
  auto record = [&](int epoch) {
    MetricRecord r = Evaluate(w, arch, train, test);
    r.iteration = iteration;
    r.epoch = epoch;
    r.epsilon = SpendOrInfinite(ledger, privacy.delta).epsilon;
    r.wall_seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    result.metrics.records.push_back(r);
  };
  record(0);
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const int halvings = cfg.lr_decay > 0 ? (epoch - 1) / cfg.lr_decay : 0;
    const double lr = cfg.lr * std::pow(0.5, halvings);
    for (long it = 0; it < per_epoch; ++it) {
      const Dataset batch = train.Subset(PoissonSample(n, q, rng));
      DpSgdStep(w, batch.inputs, batch.targets, arch, cfg, lr, privacy.sigma,
                q, rng, ledger);
      ++iteration;
    }
    if (!w.AllFinite()) {
      throw NumericError("weights diverged in epoch " + std::to_string(epoch));
    }
    record(epoch);
  }
  result.weights = std::move(w);
  PrivacyReport& p = result.privacy;
  const PrivacySpend spend = SpendOrInfinite(ledger, privacy.delta);
  p.epsilon = spend.epsilon;
  p.lambda = spend.lambda;
  p.delta = privacy.delta;
  p.sigma = privacy.sigma;
  p.q = q;
  p.steps = iteration;
  p.events = ledger.steps_recorded();
  return result;
}

}  // namespace dpmac
