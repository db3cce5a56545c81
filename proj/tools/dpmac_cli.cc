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

// Command line front end: training runs, the standalone accountant, curve
// aggregation and synthetic data generation.

#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dpmac/config.h"
#include "dpmac/data_io.h"
#include "dpmac/errors.h"
#include "dpmac/experiment.h"
#include "dpmac/metrics.h"
#include "dpmac/moments_accountant.h"
#include "dpmac/synthetic.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

struct TrainArgs {
  std::string config_path;
  bool print_config = false;
  std::map<std::string, std::string> overrides;
};

void AddTrainOptions(CLI::App* cmd, TrainArgs& args) {
  cmd->add_option("--config", args.config_path, "key = value config file");
  cmd->add_flag("--print-config", args.print_config,
                "print the effective config and exit");
  for (const std::string& key : dpmac::ConfigKeys()) {
    if (key == "trainer") continue;
    cmd->add_option_function<std::string>(
        "--" + key,
        [&args, key](const std::string& v) { args.overrides[key] = v; },
        "overrides " + key);
  }
}

int RunTrain(const TrainArgs& args, dpmac::TrainerKind kind) {
  dpmac::ExperimentConfig cfg = args.config_path.empty()
                                    ? dpmac::ExperimentConfig()
                                    : dpmac::LoadConfigFile(args.config_path);
  if (cfg.explicit_keys.count("trainer") && cfg.trainer != kind) {
    throw dpmac::ConfigError("trainer: config says '" +
                             dpmac::ToString(cfg.trainer) +
                             "' but the subcommand runs '" +
                             dpmac::ToString(kind) + "'");
  }
  cfg.trainer = kind;
  for (const auto& [key, value] : args.overrides) {
    dpmac::SetConfigValue(cfg, key, value);
  }
  dpmac::ValidateConfig(cfg);
  if (args.print_config) {
    std::cout << dpmac::SerializeConfig(cfg);
    return 0;
  }
  const dpmac::ExperimentResult result = dpmac::RunExperiment(cfg);
  const dpmac::MetricRecord& last = result.train.metrics.records.back();
  std::cout << "train_objective = " << dpmac::FormatDouble(last.train_objective)
            << "\ntest_objective = " << dpmac::FormatDouble(last.test_objective)
            << "\ntest_accuracy = " << dpmac::FormatDouble(last.test_accuracy)
            << "\nepsilon = " << dpmac::FormatDouble(result.train.privacy.epsilon)
            << "\ndelta = " << dpmac::FormatDouble(result.train.privacy.delta)
            << "\noutput_dir = " << cfg.output_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private training with auxiliary coordinates"};
  app.require_subcommand(1);

  TrainArgs mac_args;
  CLI::App* mac = app.add_subcommand("train-mac", "train with DP-MAC");
  AddTrainOptions(mac, mac_args);

  TrainArgs sgd_args;
  CLI::App* sgd = app.add_subcommand("train-dpsgd", "train with DP-SGD");
  AddTrainOptions(sgd, sgd_args);

  double q = 0.0;
  double sigma = 0.0;
  long steps = 0;
  double delta = 1e-5;
  int max_lambda = 64;
  CLI::App* acc = app.add_subcommand(
      "accountant", "epsilon of repeated subsampled Gaussian steps");
  acc->add_option("--q", q, "sampling rate")->required();
  acc->add_option("--sigma", sigma, "noise multiplier")->required();
  acc->add_option("--steps", steps, "number of steps")->required();
  acc->add_option("--delta", delta, "target delta");
  acc->add_option("--max-lambda", max_lambda, "largest moment order");

  std::vector<std::string> curve_inputs;
  std::string curve_out;
  CLI::App* curves = app.add_subcommand(
      "emit-curves", "mean and stdev of metrics.csv files by iteration");
  curves->add_option("inputs", curve_inputs, "metrics.csv files")->required();
  curves->add_option("--out", curve_out, "output file (default stdout)");

  std::string kind = "blobs";
  int n = 1000;
  int dim = 10;
  int classes = 2;
  int rank = 3;
  double separation = 3.0;
  double spread = 1.0;
  double noise = 0.05;
  std::uint64_t seed = 0;
  std::string synth_out;
  CLI::App* synth =
      app.add_subcommand("gen-synthetic", "write a synthetic CSV dataset");
  synth->add_option("--kind", kind, "blobs (labelled) or lowrank")
      ->check(CLI::IsMember({"blobs", "lowrank"}));
  synth->add_option("--n", n, "rows");
  synth->add_option("--dim", dim, "features");
  synth->add_option("--classes", classes, "blob classes");
  synth->add_option("--rank", rank, "low-rank dimension");
  synth->add_option("--separation", separation, "blob centre norm");
  synth->add_option("--spread", spread, "blob standard deviation");
  synth->add_option("--noise", noise, "low-rank noise standard deviation");
  synth->add_option("--seed", seed, "random seed");
  synth->add_option("--out", synth_out, "output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (mac->parsed()) return RunTrain(mac_args, dpmac::TrainerKind::kMac);
    if (sgd->parsed()) return RunTrain(sgd_args, dpmac::TrainerKind::kDpSgd);
    if (acc->parsed()) {
      if (max_lambda < 1) throw dpmac::ConfigError("--max-lambda must be >= 1");
      std::vector<int> grid(max_lambda);
      for (int i = 0; i < max_lambda; ++i) grid[i] = i + 1;
      dpmac::MomentsLedger ledger(grid);
      ledger.Compose(q, sigma, steps);
      const dpmac::PrivacySpend spend = dpmac::SpendOrInfinite(ledger, delta);
      std::cout << "epsilon = " << dpmac::FormatDouble(spend.epsilon) << "\n"
                << "lambda = " << spend.lambda << "\n"
                << "lambda,alpha\n";
      for (size_t i = 0; i < grid.size(); ++i) {
        std::cout << grid[i] << ","
                  << dpmac::FormatDouble(ledger.log_moments()[i]) << "\n";
      }
      return 0;
    }
    if (curves->parsed()) {
      std::vector<dpmac::MetricsLog> runs;
      for (const std::string& path : curve_inputs) {
        std::ifstream in(path);
        if (!in) throw dpmac::DataError("cannot open '" + path + "'");
        runs.push_back(dpmac::ReadMetricsCsv(in, path));
      }
      std::ostringstream out;
      dpmac::WriteCurvesCsv(dpmac::AggregateCurves(runs), out);
      if (curve_out.empty()) {
        std::cout << out.str();
      } else {
        dpmac::WriteFileAtomically(curve_out, out.str());
      }
      return 0;
    }
    if (synth->parsed()) {
      std::mt19937_64 rng(seed);
      std::ostringstream out;
      if (kind == "blobs") {
        const dpmac::LabelledData d =
            dpmac::MakeBlobs(n, dim, classes, separation, spread, rng);
        dpmac::WriteCsv(d.features, &d.labels, out);
      } else {
        dpmac::WriteCsv(dpmac::MakeLowRank(n, dim, rank, noise, rng), nullptr,
                        out);
      }
      dpmac::WriteFileAtomically(synth_out, out.str());
      return 0;
    }
  } catch (const dpmac::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const dpmac::DimensionError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const dpmac::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const dpmac::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return 0;
}
