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

#ifndef DPMAC_TESTS_SOUNDNESS_H_
#define DPMAC_TESTS_SOUNDNESS_H_

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "dpmac/sensitivity.h"
#include "dpmac/taylor.h"
#include "test_util.h"

namespace dpmac::testing {

// Which coefficient family and bound a soundness run exercises.
enum class BoundCase {
  kHiddenSoftplus,  // AnalyticSensitivityHidden, softplus
  kOutputMse,       // identity output layer through the bundle
  kOutputBce,       // cross-entropy output layer through the bundle
  kOutputBceRaw,    // AnalyticSensitivityOutput on 1 / 2S scaled coefficients
  kClipped,         // ClippedSensitivity with random thresholds
};

inline std::string ToString(BoundCase c) {
  switch (c) {
    case BoundCase::kHiddenSoftplus: return "hidden-softplus";
    case BoundCase::kOutputMse: return "output-mse";
    case BoundCase::kOutputBce: return "output-bce";
    case BoundCase::kOutputBceRaw: return "output-bce-1/2S";
    default: return "clipped";
  }
}

struct SoundnessReport {
  long trials = 0;
  long violations = 0;
  double worst_a = 0.0;  // largest realized / bound ratios
  double worst_b = 0.0;
  double worst_c = 0.0;
};

namespace internal {

inline Vector RandomUnit(int d, std::mt19937_64& rng) {
  Vector v = RandomMatrix(d, 1, 1.0, rng);
  const double n = v.norm();
  return n > 0 ? Vector(v / n) : Vector::Unit(d, 0);
}

// A point of norm <= t_z. Mixes interior points, sphere points and points
// aligned with a weight column, which drive the bounds hardest.
inline Vector AdversarialPoint(const Matrix& w, double t_z,
                               std::mt19937_64& rng) {
  const int d = static_cast<int>(w.rows());
  std::uniform_int_distribution<int> pick(0, 3);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  switch (pick(rng)) {
    case 0:
      return RandomUnit(d, rng) * t_z * std::pow(unif(rng), 1.0 / d);
    case 1:
      return RandomUnit(d, rng) * t_z;
    default: {
      std::uniform_int_distribution<int> col(0, static_cast<int>(w.cols()) - 1);
      Vector v = w.col(col(rng));
      if (v.norm() == 0.0) v = RandomUnit(d, rng);
      const double sign = unif(rng) < 0.5 ? -1.0 : 1.0;
      return sign * t_z * v / v.norm();
    }
  }
}

inline Vector AdversarialTarget(int d, double t_z, bool labels,
                                std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vector t(d);
  if (labels) {
    const bool hard = unif(rng) < 0.7;
    for (int i = 0; i < d; ++i) {
      t(i) = hard ? (unif(rng) < 0.5 ? 0.0 : 1.0) : unif(rng);
    }
    return t;
  }
  switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0:  // negative corner: maximizes the residual against f >= 0
      return -Vector::Ones(d) * t_z / std::sqrt(static_cast<double>(d));
    case 1:
      return -RandomUnit(d, rng).cwiseAbs() * t_z;
    default:
      return RandomUnit(d, rng) * t_z * unif(rng);
  }
}

}  // namespace internal

// Remove-one neighbour trials: the coefficients of D and D minus one record
// are assembled independently and their difference compared against the
// claimed bound. dims <= 5, ||z|| <= T_z throughout.
inline SoundnessReport CheckSoundness(BoundCase bound_case, int order,
                                      long trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dim(1, 5);
  std::uniform_int_distribution<int> extra(0, 3);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  SoundnessReport report;
  for (long trial = 0; trial < trials; ++trial) {
    const int d_in = dim(rng);
    const int d_out = dim(rng);
    const double t_z = 0.05 + 3.0 * unif(rng);
    const double w_scale = std::exp(std::log(0.05) + unif(rng) * std::log(60.0));
    Matrix w = RandomMatrix(d_in, d_out, w_scale, rng);
    if (unif(rng) < 0.05) w.setZero();

    const bool labels = bound_case == BoundCase::kOutputBce ||
                        bound_case == BoundCase::kOutputBceRaw;
    LayerObjective obj;
    if (bound_case == BoundCase::kOutputMse) {
      obj = {LayerTerm::kSquaredResidual, Activation::kIdentity, 1.0};
    } else if (labels) {
      obj = {LayerTerm::kLogistic, Activation::kSoftplus, 1.0};
    } else {
      obj = {LayerTerm::kSquaredResidual, Activation::kSoftplus, 1.0};
    }

    ClipThresholds clip;
    if (bound_case == BoundCase::kClipped) {
      clip.grad = 0.01 + unif(rng);
      clip.hess = 0.01 + unif(rng);
      clip.value = 0.01 + unif(rng);
    }

    const int n = 1 + extra(rng);  // size of D
    Matrix z(n, d_in);
    Matrix t(n, d_out);
    for (int i = 0; i < n; ++i) {
      z.row(i) = internal::AdversarialPoint(w, t_z, rng).transpose();
      t.row(i) = internal::AdversarialTarget(d_out, t_z, labels, rng).transpose();
    }
    const int removed = std::uniform_int_distribution<int>(0, n - 1)(rng);
    Matrix z2(n - 1, d_in);
    Matrix t2(n - 1, d_out);
    for (int i = 0, j = 0; i < n; ++i) {
      if (i == removed) continue;
      z2.row(j) = z.row(i);
      t2.row(j) = t.row(i);
      ++j;
    }
    const TaylorCoefficients full = AssembleCoefficients(w, z, t, 0, order, obj, clip);
    const TaylorCoefficients less = AssembleCoefficients(w, z2, t2, 0, order, obj, clip);
    double da = std::abs(full.a - less.a);
    double db = (full.b - less.b).norm();
    double dc2 = 0.0;
    for (size_t h = 0; h < full.c.size(); ++h) {
      dc2 += (full.c[h] - less.c[h]).squaredNorm();
    }
    double dc = std::sqrt(dc2);

    LayerSensitivity bound;
    switch (bound_case) {
      case BoundCase::kHiddenSoftplus:
        bound = AnalyticSensitivityHidden(w, t_z, Activation::kSoftplus, order);
        break;
      case BoundCase::kOutputMse:
      case BoundCase::kOutputBce: {
        const Architecture arch{Activation::kSoftplus,
                                bound_case == BoundCase::kOutputMse
                                    ? OutputLoss::kMse
                                    : OutputLoss::kBce};
        bound = BuildSensitivityBundle(SensitivityMode::kAnalytic,
                                       WeightStack({w}), arch, t_z, order, {},
                                       true)
                    .layers[0];
        break;
      }
      case BoundCase::kOutputBceRaw: {
        // Coefficients of L = T / 2 with the 1 / 2S prefactor.
        const double s = n;
        bound = AnalyticSensitivityOutput(w, t_z, s);
        da /= 4.0 * s;
        db /= 4.0 * s;
        dc /= 4.0 * s;
        break;
      }
      case BoundCase::kClipped:
        bound = ClippedSensitivity(clip, w, order);
        break;
    }
    auto ratio = [](double realized, double claimed) {
      if (realized == 0.0) return 0.0;
      return claimed > 0.0 ? realized / claimed
                           : std::numeric_limits<double>::infinity();
    };
    // The first order b bound is attained exactly; allow rounding only.
    constexpr double kSlack = 1.0 + 1e-9;
    bool violated = false;
    const double ra = ratio(da, bound.delta_a);
    const double rb = ratio(db, bound.delta_b);
    report.worst_a = std::max(report.worst_a, ra);
    report.worst_b = std::max(report.worst_b, rb);
    violated |= ra > kSlack || rb > kSlack;
    if (order == 2) {
      const double rc = ratio(dc, bound.delta_c);
      report.worst_c = std::max(report.worst_c, rc);
      violated |= rc > kSlack;
    }
    ++report.trials;
    if (violated) ++report.violations;
  }
  return report;
}

}  // namespace dpmac::testing

#endif  // DPMAC_TESTS_SOUNDNESS_H_
