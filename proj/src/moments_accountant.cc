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

#include "dpmac/moments_accountant.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dpmac/errors.h"

namespace dpmac {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kQuadTolerance = 1e-12;
constexpr int kScanPoints = 4000;

// log((1 - q) + q exp(x)) without overflow.
double LogMix(double q, double x) {
  if (q >= 1.0) return x;
  const double a = std::log1p(-q);
  const double b = std::log(q) + x;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

double LogNormal0(double z, double sigma) {
  return -0.5 * z * z / (sigma * sigma) - std::log(sigma) -
         0.5 * std::log(2.0 * M_PI);
}

// log of integral of exp(log_f) over [lo, hi]. The range is split around
// the scanned peak so narrow integrands (small sigma) are resolved.
template <typename F>
double LogIntegrate(F log_f, double lo, double hi, double width) {
  double peak = -kInf;
  double peak_z = lo;
  for (int i = 0; i <= kScanPoints; ++i) {
    const double z = lo + (hi - lo) * i / kScanPoints;
    const double v = log_f(z);
    if (v > peak) {
      peak = v;
      peak_z = z;
    }
  }
  if (!std::isfinite(peak)) throw NumericError("log-moment integrand overflow");
  auto scaled = [&](double z) { return std::exp(log_f(z) - peak); };
  const double step = (hi - lo) / kScanPoints;
  const double breaks[] = {lo, std::max(lo, peak_z - 10.0 * width - step),
                           std::min(hi, peak_z + 10.0 * width + step), hi};
  double value = 0.0;
  double error = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    double piece_error = 0.0;
    value += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        scaled, breaks[i], breaks[i + 1], 20, kQuadTolerance, &piece_error);
    error += piece_error;
  }
  if (!std::isfinite(value) || value <= 0.0 ||
      error > 1e3 * kQuadTolerance * value) {
    throw NumericError("log-moment quadrature did not converge (estimate " +
                       std::to_string(value) + ", error " +
                       std::to_string(error) + ")");
  }
  return peak + std::log(value);
}

}  // namespace

LogMomentComponents LogMomentComponentsFor(double q, double sigma,
                                           int lambda) {
  if (!(q >= 0.0 && q <= 1.0)) throw ConfigError("q must lie in [0, 1]");
  if (!(sigma > 0.0)) throw ConfigError("sigma must be > 0");
  if (lambda < 1) throw ConfigError("lambda must be >= 1");
  if (q == 0.0) return {0.0, 0.0};
  const double s2 = sigma * sigma;
  const double lam = lambda;
  // log(mu / mu_0)(z) = log(1 - q + q exp((2z - 1) / 2 sigma^2)).
  auto log_ratio = [&](double z) { return LogMix(q, (2.0 * z - 1.0) / (2.0 * s2)); };
  auto log_f1 = [&](double z) {
    return LogNormal0(z, sigma) + (lam + 1.0) * log_ratio(z);
  };
  auto log_f2 = [&](double z) {
    return LogNormal0(z, sigma) - lam * log_ratio(z);
  };
  // All mass sits between the two component means shifted by at most
  // lambda + 1; beyond 40 sigma the integrands are below exp(-800).
  const double lo = -lam - 2.0 - 40.0 * sigma;
  const double hi = lam + 2.0 + 40.0 * sigma;
  return {LogIntegrate(log_f1, lo, hi, sigma),
          LogIntegrate(log_f2, lo, hi, sigma)};
}

double LogMomentStep(double q, double sigma, int lambda) {
  const LogMomentComponents c = LogMomentComponentsFor(q, sigma, lambda);
  return std::max(0.0, std::max(c.log_e1, c.log_e2));
}

std::vector<int> DefaultLambdaGrid() {
  std::vector<int> grid(64);
  for (int i = 0; i < 64; ++i) grid[i] = i + 1;
  return grid;
}

MomentsLedger::MomentsLedger(std::vector<int> lambdas)
    : lambdas_(std::move(lambdas)),
      log_moments_(lambdas_.size(), 0.0),
      usable_(lambdas_.size(), true) {
  if (lambdas_.empty()) throw ConfigError("lambda grid is empty");
  for (int l : lambdas_) {
    if (l < 1) throw ConfigError("lambda grid entries must be >= 1");
  }
}

const std::vector<double>& MomentsLedger::StepMoments(double q, double sigma) {
  const auto key = std::make_pair(q, sigma);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  std::vector<double> step(lambdas_.size(), 0.0);
  for (size_t i = 0; i < lambdas_.size(); ++i) {
    if (q == 0.0) {
      step[i] = 0.0;
    } else if (sigma == 0.0) {
      step[i] = kInf;
    } else {
      step[i] = LogMomentStep(q, sigma, lambdas_[i]);
    }
  }
  return cache_.emplace(key, std::move(step)).first->second;
}

void MomentsLedger::Compose(double q, double sigma, long n_steps) {
  if (n_steps < 0) throw ConfigError("n_steps must be >= 0");
  if (!(q >= 0.0 && q <= 1.0)) throw ConfigError("q must lie in [0, 1]");
  if (!(sigma >= 0.0)) throw ConfigError("sigma must be >= 0");
  if (n_steps == 0) return;
  const std::vector<double>& step = StepMoments(q, sigma);
  for (size_t i = 0; i < lambdas_.size(); ++i) {
    const double total = log_moments_[i] + static_cast<double>(n_steps) * step[i];
    if (std::isfinite(total)) {
      log_moments_[i] = total;
    } else {
      usable_[i] = false;
      log_moments_[i] = kInf;
    }
  }
  steps_ += n_steps;
}

bool MomentsLedger::AnyUsable() const {
  return std::find(usable_.begin(), usable_.end(), true) != usable_.end();
}

PrivacySpend EpsilonForDelta(const MomentsLedger& ledger, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
  if (ledger.steps_recorded() == 0) throw ConfigError("the ledger has no events");
  PrivacySpend best{kInf, delta, 0};
  for (size_t i = 0; i < ledger.lambdas().size(); ++i) {
    if (!ledger.usable()[i]) continue;
    const double lam = ledger.lambdas()[i];
    const double eps = (ledger.log_moments()[i] - std::log(delta)) / lam;
    if (eps < best.epsilon) best = {eps, delta, ledger.lambdas()[i]};
  }
  if (best.lambda == 0) throw NumericError("no usable lambda in the ledger");
  return best;
}

double CalibrateSigma(double target_epsilon, double delta, double q,
                      long steps, const std::vector<int>& lambdas) {
  if (!(target_epsilon > 0.0)) throw ConfigError("target epsilon must be > 0");
  if (steps < 1) throw ConfigError("calibration needs at least one step");
  // Moments that cannot be evaluated (sigma well below 0.5) count as an
  // unbounded spend.
  auto eps_at = [&](double sigma) {
    try {
      MomentsLedger ledger(lambdas);
      ledger.Compose(q, sigma, steps);
      return EpsilonForDelta(ledger, delta).epsilon;
    } catch (const NumericError&) {
      return kInf;
    }
  };
  constexpr int kMaxIterations = 200;
  int iterations = 0;
  double lo = 0.5;
  double hi = 1.0;
  double eps_lo = eps_at(lo);
  double eps_hi = eps_at(hi);
  while (eps_hi > target_epsilon) {
    if (++iterations > kMaxIterations) {
      throw NumericError("sigma calibration: no upper bracket");
    }
    lo = hi;
    eps_lo = eps_hi;
    hi *= 2.0;
    eps_hi = eps_at(hi);
  }
  while (eps_lo <= target_epsilon && lo > 1e-6) {
    if (++iterations > kMaxIterations) {
      throw NumericError("sigma calibration: no lower bracket");
    }
    lo *= 0.5;
    eps_lo = eps_at(lo);
  }
  if (eps_lo < eps_hi) {
    throw NumericError("epsilon is not monotone in sigma");
  }
  if (eps_hi >= 0.99 * target_epsilon) return hi;
  while (++iterations <= kMaxIterations) {
    const double mid = 0.5 * (lo + hi);
    const double eps_mid = eps_at(mid);
    if (eps_mid > target_epsilon) {
      lo = mid;
    } else {
      hi = mid;
      if (eps_mid >= 0.99 * target_epsilon) return hi;
    }
  }
  throw NumericError("sigma calibration did not converge in 200 iterations");
}

}  // namespace dpmac
