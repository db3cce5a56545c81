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

#ifndef DPMAC_METRICS_H_
#define DPMAC_METRICS_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace dpmac {

// One evaluation of a training run. test_accuracy is NaN for regression
// tasks and epsilon is +inf for non-private runs.
struct MetricRecord {
  long iteration = 0;
  int epoch = 0;
  double train_objective = 0.0;
  double test_objective = 0.0;
  double test_accuracy = 0.0;
  double epsilon = 0.0;
  double wall_seconds = 0.0;
};

struct MetricsLog {
  std::vector<MetricRecord> records;
};

inline constexpr char kMetricsHeader[] =
    "iteration,epoch,train_objective,test_objective,test_accuracy,epsilon";

// Fixed header, one row per record, doubles printed round-trip exact. Wall
// time is kept out so that identical runs produce identical files.
void WriteMetricsCsv(const MetricsLog& log, std::ostream& out);
void WriteTimingCsv(const MetricsLog& log, std::ostream& out);
MetricsLog ReadMetricsCsv(std::istream& in, const std::string& source);

// Mean and sample standard deviation over runs of every metric column,
// aligned by iteration. Throws DataError when the runs do not share the same
// iteration grid.
struct CurvePoint {
  long iteration = 0;
  int epoch = 0;
  std::vector<double> mean;    // train_objective, test_objective,
  std::vector<double> stddev;  // test_accuracy, epsilon
};
std::vector<CurvePoint> AggregateCurves(const std::vector<MetricsLog>& runs);
void WriteCurvesCsv(const std::vector<CurvePoint>& curves, std::ostream& out);

std::string FormatDouble(double v);

}  // namespace dpmac

#endif  // DPMAC_METRICS_H_
