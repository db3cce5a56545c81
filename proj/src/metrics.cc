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

#include "dpmac/metrics.h"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "dpmac/errors.h"

namespace dpmac {

namespace {

constexpr int kColumns = 4;
const char* const kColumnNames[kColumns] = {"train_objective", "test_objective",
                                            "test_accuracy", "epsilon"};

double Column(const MetricRecord& r, int c) {
  switch (c) {
    case 0: return r.train_objective;
    case 1: return r.test_objective;
    case 2: return r.test_accuracy;
    default: return r.epsilon;
  }
}

double ParseField(const std::string& field, const std::string& source,
                  int line) {
  if (field == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (field == "inf") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw DataError(source + ":" + std::to_string(line) + ": bad number '" +
                    field + "'");
  }
  return v;
}

}  // namespace

std::string FormatDouble(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void WriteMetricsCsv(const MetricsLog& log, std::ostream& out) {
  out << kMetricsHeader << "\n";
  for (const MetricRecord& r : log.records) {
    out << r.iteration << "," << r.epoch << "," << FormatDouble(r.train_objective)
        << "," << FormatDouble(r.test_objective) << ","
        << FormatDouble(r.test_accuracy) << "," << FormatDouble(r.epsilon)
        << "\n";
  }
}

void WriteTimingCsv(const MetricsLog& log, std::ostream& out) {
  out << "iteration,epoch,wall_seconds\n";
  for (const MetricRecord& r : log.records) {
    out << r.iteration << "," << r.epoch << "," << FormatDouble(r.wall_seconds)
        << "\n";
  }
}

MetricsLog ReadMetricsCsv(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line) || line != kMetricsHeader) {
    throw DataError(source + ": missing or unexpected metrics header");
  }
  MetricsLog log;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 6) {
      throw DataError(source + ":" + std::to_string(line_no) +
                      ": expected 6 fields");
    }
    MetricRecord r;
    r.iteration = static_cast<long>(ParseField(fields[0], source, line_no));
    r.epoch = static_cast<int>(ParseField(fields[1], source, line_no));
    r.train_objective = ParseField(fields[2], source, line_no);
    r.test_objective = ParseField(fields[3], source, line_no);
    r.test_accuracy = ParseField(fields[4], source, line_no);
    r.epsilon = ParseField(fields[5], source, line_no);
    log.records.push_back(r);
  }
  return log;
}

std::vector<CurvePoint> AggregateCurves(const std::vector<MetricsLog>& runs) {
  if (runs.empty()) throw ConfigError("need at least one metrics file");
  const size_t n = runs.front().records.size();
  for (size_t r = 1; r < runs.size(); ++r) {
    bool aligned = runs[r].records.size() == n;
    for (size_t i = 0; aligned && i < n; ++i) {
      aligned = runs[r].records[i].iteration == runs[0].records[i].iteration;
    }
    if (!aligned) {
      throw DataError("run " + std::to_string(r + 1) +
                      " is not aligned with run 1 by iteration");
    }
  }
  const double count = static_cast<double>(runs.size());
  std::vector<CurvePoint> out;
  for (size_t i = 0; i < n; ++i) {
    CurvePoint p;
    p.iteration = runs[0].records[i].iteration;
    p.epoch = runs[0].records[i].epoch;
    for (int c = 0; c < kColumns; ++c) {
      double sum = 0.0;
      for (const MetricsLog& run : runs) sum += Column(run.records[i], c);
      const double mean = sum / count;
      double sq = 0.0;
      for (const MetricsLog& run : runs) {
        const double d = Column(run.records[i], c) - mean;
        sq += d * d;
      }
      p.mean.push_back(mean);
      p.stddev.push_back(runs.size() > 1 ? std::sqrt(sq / (count - 1.0)) : 0.0);
    }
    out.push_back(std::move(p));
  }
  return out;
}

void WriteCurvesCsv(const std::vector<CurvePoint>& curves, std::ostream& out) {
  out << "iteration,epoch";
  for (const char* name : kColumnNames) {
    out << "," << name << "_mean," << name << "_stdev";
  }
  out << "\n";
  for (const CurvePoint& p : curves) {
    out << p.iteration << "," << p.epoch;
    for (int c = 0; c < kColumns; ++c) {
      out << "," << FormatDouble(p.mean[c]) << "," << FormatDouble(p.stddev[c]);
    }
    out << "\n";
  }
}

}  // namespace dpmac
