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

#include "dpmac/mac_trainer.h"

#include <chrono>
#include <cmath>
#include <string>
#include <utility>

#include "dpmac/aux_coordinates.h"
#include "dpmac/errors.h"
#include "dpmac/perturbation.h"

namespace dpmac {

void MacConfig::Validate(int dataset_size) const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw ConfigError("mac." + field + ": " + why);
  };
  if (!(mu > 0.0)) fail("mu", "must be > 0");
  if (taylor_order != 1 && taylor_order != 2) fail("taylor_order", "must be 1 or 2");
  if (z_steps < 1) fail("z_steps", "must be >= 1");
  if (w_steps < 1) fail("w_steps", "must be >= 1");
  if (!(z_lr > 0.0)) fail("z_lr", "must be > 0");
  if (!(w_lr > 0.0)) fail("w_lr", "must be > 0");
  if (!(w_lr_decay > 0.0 && w_lr_decay <= 1.0)) fail("w_lr_decay", "must be in (0, 1]");
  if (batch_size < 1) fail("batch_size", "must be >= 1");
  if (batch_size > dataset_size) fail("batch_size", "exceeds the dataset size");
  if (epochs < 0) fail("epochs", "must be >= 0");
  if (normalization && !(*normalization > 0.0)) fail("normalization", "must be > 0");
  if (perturb_a && taylor_order != 2) fail("perturb_a", "requires taylor_order = 2");
  if (!(init_scale >= 0.0)) fail("init_scale", "must be >= 0");
}

namespace {

const Matrix& InputOf(const AuxCoordinates& z, const Matrix& x, int k) {
  return k == 0 ? x : z.z[k - 1];
}

const Matrix& TargetOf(const AuxCoordinates& z, const Matrix& y, int k) {
  return k < static_cast<int>(z.z.size()) ? z.z[k] : y;
}

void CheckSizes(const std::vector<int>& sizes, const Dataset& train,
                const Dataset* test) {
  if (sizes.size() < 2) throw ConfigError("model.layer_sizes: need >= 2 entries");
  for (int s : sizes) {
    if (s < 1) throw ConfigError("model.layer_sizes: entries must be >= 1");
  }
  if (sizes.front() != train.input_dim() || sizes.back() != train.target_dim()) {
    throw ConfigError("model.layer_sizes: " + std::to_string(sizes.front()) +
                      " -> " + std::to_string(sizes.back()) +
                      " does not match data " +
                      std::to_string(train.input_dim()) + " -> " +
                      std::to_string(train.target_dim()));
  }
  if (test != nullptr && test->size() > 0 &&
      (test->input_dim() != train.input_dim() ||
       test->target_dim() != train.target_dim())) {
    throw DataError("test data dimensions differ from training data");
  }
}

struct LoopInputs {
  const Dataset& train;
  const Dataset* test;
  const std::vector<int>& sizes;
  const Architecture& arch;
  const MacConfig& cfg;
  std::optional<PrivacyParams> privacy;
};

TrainResult RunLoop(const LoopInputs& in, std::mt19937_64& rng,
                    MomentsLedger ledger) {
  const MacConfig& cfg = in.cfg;
  cfg.Validate(in.train.size());
  CheckSizes(in.sizes, in.train, in.test);
  if (in.privacy && !(in.privacy->sigma >= 0.0)) {
    throw ConfigError("privacy.sigma: must be >= 0");
  }
  const auto start = std::chrono::steady_clock::now();
  const int n = in.train.size();
  const double q = static_cast<double>(cfg.batch_size) / n;
  const long per_epoch = IterationsPerEpoch(n, cfg.batch_size);
  const double delta = in.privacy ? in.privacy->delta : 1e-5;
  const double t_z = in.train.norm_bound;

  MacStepState state;
  state.w = WeightStack::RandomNormal(in.sizes, cfg.init_scale, rng);
  state.w_optimizers.assign(state.w.num_layers(),
                            MatrixOptimizer(cfg.w_optimizer));

  std::optional<AuxCoordinates> stored_z;
  if (cfg.persist_z) {
    stored_z = InitAuxCoordinates(state.w, in.train.inputs, in.arch, t_z);
  }

  TrainResult result;
  long iteration = 0;
  long noised_steps = 0;
  auto record = [&](int epoch) {
    MetricRecord r = Evaluate(state.w, in.arch, in.train, in.test);
    r.iteration = iteration;
    r.epoch = epoch;
    // Plain MAC has released nothing before its first step.
    r.epsilon = in.privacy     ? SpendOrInfinite(ledger, delta).epsilon
                : iteration == 0 ? 0.0
                                 : std::numeric_limits<double>::infinity();
    r.wall_seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    result.metrics.records.push_back(r);
  };
  record(0);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const double lr = cfg.w_lr * std::pow(cfg.w_lr_decay, epoch - 1);
    for (long it = 0; it < per_epoch; ++it) {
      const std::vector<int> rows = PoissonSample(n, q, rng);
      const Dataset batch = in.train.Subset(rows);
      std::optional<AuxCoordinates> z_batch;
      if (stored_z) {
        AuxCoordinates z;
        for (const Matrix& m : stored_z->z) {
          Matrix sub(rows.size(), m.cols());
          for (size_t i = 0; i < rows.size(); ++i) sub.row(i) = m.row(rows[i]);
          z.z.push_back(std::move(sub));
        }
        z_batch = std::move(z);
      }
      MacStep(state, batch.inputs, batch.targets, in.arch, cfg, t_z, lr,
              in.privacy, rng, z_batch ? &*z_batch : nullptr);
      if (stored_z) {
        // MacStep leaves the updated coordinates in z_batch.
        for (size_t k = 0; k < stored_z->z.size(); ++k) {
          for (size_t i = 0; i < rows.size(); ++i) {
            stored_z->z[k].row(rows[i]) = z_batch->z[k].row(i);
          }
        }
      }
      if (in.privacy) {
        ledger.Compose(q, in.privacy->sigma, 1);
        ++noised_steps;
      }
      ++iteration;
    }
    if (!state.w.AllFinite()) {
      throw NumericError("weights diverged in epoch " + std::to_string(epoch));
    }
    record(epoch);
  }

  result.weights = std::move(state.w);
  PrivacyReport& p = result.privacy;
  p.delta = delta;
  p.q = q;
  p.steps = noised_steps;
  p.events = ledger.steps_recorded();
  if (in.privacy) {
    p.sigma = in.privacy->sigma;
    const PrivacySpend spend = SpendOrInfinite(ledger, delta);
    p.epsilon = spend.epsilon;
    p.lambda = spend.lambda;
  }
  return result;
}

}  // namespace

void MacStep(MacStepState& state, const Matrix& x, const Matrix& y,
             const Architecture& arch, const MacConfig& cfg, double norm_bound,
             double w_lr, const std::optional<PrivacyParams>& privacy,
             std::mt19937_64& rng, AuxCoordinates* z_inout) {
  WeightStack& w = state.w;
  const int layers = w.num_layers();
  if (static_cast<int>(state.w_optimizers.size()) != layers) {
    state.w_optimizers.assign(layers, MatrixOptimizer(cfg.w_optimizer));
  }
  const double norm = cfg.normalization.value_or(cfg.batch_size);
  const ExpandedObjectiveParams objective{cfg.mu, norm};

  AuxCoordinates z = z_inout != nullptr
                         ? std::move(*z_inout)
                         : InitAuxCoordinates(w, x, arch, norm_bound);
  ZUpdateOptions z_opts;
  z_opts.steps = cfg.z_steps;
  z_opts.learning_rate = cfg.z_lr;
  z_opts.optimizer = cfg.z_optimizer;
  z_opts.norm_bound = norm_bound;
  z_opts.objective = objective;
  z = ZUpdate(w, std::move(z), x, y, arch, z_opts);

  // Clipping only serves the sensitivity analysis; sigma == 0 is the
  // non-private algorithm.
  const bool noised = privacy && privacy->sigma > 0.0;
  const bool clip = noised && cfg.sensitivity == SensitivityMode::kClipped;
  const ClipThresholds none;

  std::vector<TaylorCoefficients> coeffs;
  coeffs.reserve(layers);
  for (int k = 0; k < layers; ++k) {
    const LayerObjective obj = LayerObjectiveFor(arch, k, layers, cfg.mu);
    coeffs.push_back(AssembleCoefficients(w.layer(k), InputOf(z, x, k),
                                          TargetOf(z, y, k), k,
                                          cfg.taylor_order, obj,
                                          clip ? cfg.thresholds : none));
  }
  if (noised) {
    const SensitivityBundle bundle = BuildSensitivityBundle(
        cfg.sensitivity, w, arch, norm_bound, cfg.taylor_order, cfg.thresholds,
        cfg.perturb_a);
    coeffs = PerturbStack(std::move(coeffs), bundle, privacy->sigma,
                          cfg.perturb_a, rng);
  }
  if (z_inout != nullptr) *z_inout = std::move(z);

  for (int k = 0; k < layers; ++k) {
    const double weight = LayerObjectiveFor(arch, k, layers, cfg.mu).weight;
    Matrix& wk = w.mutable_layer(k);
    for (int s = 0; s < cfg.w_steps; ++s) {
      state.w_optimizers[k].Step(
          wk, ApproxObjectiveGrad(wk, coeffs[k], norm, weight), w_lr);
    }
  }
}

TrainResult TrainDpMac(const Dataset& train, const Dataset* test,
                       const std::vector<int>& layer_sizes,
                       const Architecture& arch, const MacConfig& cfg,
                       const PrivacyParams& privacy, std::mt19937_64& rng,
                       MomentsLedger prior) {
  return RunLoop({train, test, layer_sizes, arch, cfg, privacy}, rng,
                 std::move(prior));
}

TrainResult TrainMac(const Dataset& train, const Dataset* test,
                     const std::vector<int>& layer_sizes,
                     const Architecture& arch, const MacConfig& cfg,
                     std::mt19937_64& rng) {
  return RunLoop({train, test, layer_sizes, arch, cfg, std::nullopt}, rng,
                 MomentsLedger());
}

}  // namespace dpmac
