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

#ifndef DPMAC_MOMENTS_ACCOUNTANT_H_
#define DPMAC_MOMENTS_ACCOUNTANT_H_

#include <map>
#include <utility>
#include <vector>

namespace dpmac {

// Log-moments of the privacy loss of one subsampled Gaussian step with
// mu_0 = N(0, sigma^2) and mu = (1 - q) N(0, sigma^2) + q N(1, sigma^2):
//   log_e1 = log E_{z~mu}[(mu / mu_0)^lambda]
//   log_e2 = log E_{z~mu_0}[(mu_0 / mu)^lambda]
// The multivariate mixture with mean vector along a fixed unit direction
// reduces to this one-dimensional pair.
struct LogMomentComponents {
  double log_e1 = 0.0;
  double log_e2 = 0.0;
};

// Adaptive Gauss-Kronrod on the integrands rescaled by their peak. Throws
// ConfigError on bad arguments and NumericError if the quadrature does not
// converge.
LogMomentComponents LogMomentComponentsFor(double q, double sigma, int lambda);

// alpha(lambda) = log max(E_1, E_2), clamped at 0 against rounding.
double LogMomentStep(double q, double sigma, int lambda);

std::vector<int> DefaultLambdaGrid();  // 1..64

class MomentsLedger {
 public:
  explicit MomentsLedger(std::vector<int> lambdas = DefaultLambdaGrid());

  // Adds n_steps * alpha_step(lambda) on the grid. Grid points whose step
  // moment is not finite (e.g. sigma == 0 with q > 0) become unusable.
  void Compose(double q, double sigma, long n_steps);

  const std::vector<int>& lambdas() const { return lambdas_; }
  const std::vector<double>& log_moments() const { return log_moments_; }
  const std::vector<bool>& usable() const { return usable_; }
  long steps_recorded() const { return steps_; }
  bool AnyUsable() const;

 private:
  const std::vector<double>& StepMoments(double q, double sigma);

  std::vector<int> lambdas_;
  std::vector<double> log_moments_;
  std::vector<bool> usable_;
  long steps_ = 0;
  std::map<std::pair<double, double>, std::vector<double>> cache_;
};

struct PrivacySpend {
  double epsilon = 0.0;
  double delta = 0.0;
  int lambda = 0;  // argmin of the conversion
};

// min over usable lambda of (alpha(lambda) + log(1 / delta)) / lambda.
// Throws ConfigError on an empty ledger and NumericError when no grid point
// is usable.
PrivacySpend EpsilonForDelta(const MomentsLedger& ledger, double delta);

// Smallest sigma (to 1%) whose T-step epsilon is within [0.99, 1] of the
// target. Throws NumericError after 200 iterations without a bracket.
double CalibrateSigma(double target_epsilon, double delta, double q,
                      long steps,
                      const std::vector<int>& lambdas = DefaultLambdaGrid());

}  // namespace dpmac

#endif  // DPMAC_MOMENTS_ACCOUNTANT_H_
