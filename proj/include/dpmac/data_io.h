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

#ifndef DPMAC_DATA_IO_H_
#define DPMAC_DATA_IO_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dpmac/network.h"

namespace dpmac {

// Unsigned-byte IDX tensors. Images (magic 0x00000803) are returned as
// N x (rows * cols) doubles in [0, 255]; labels (0x00000801) as integers.
// Parse errors throw DataError naming the byte offset.
Matrix ParseIdxImages(std::istream& in, const std::string& source);
std::vector<int> ParseIdxLabels(std::istream& in, const std::string& source);
Matrix LoadIdxImages(const std::string& path);
std::vector<int> LoadIdxLabels(const std::string& path);

void WriteIdxImages(const Matrix& images, int rows, int cols, std::ostream& out);
void WriteIdxLabels(const std::vector<int>& labels, std::ostream& out);

// Comma separated rows, no header. With has_label the first column is an
// integer label. Every row must have the same number of columns.
struct CsvData {
  Matrix features;
  std::vector<int> labels;
};
CsvData ParseCsv(std::istream& in, bool has_label, const std::string& source);
CsvData LoadCsv(const std::string& path, bool has_label);
void WriteCsv(const Matrix& features, const std::vector<int>* labels,
              std::ostream& out);

// Write to path + ".tmp" and rename over path.
void WriteFileAtomically(const std::string& path, const std::string& contents);

}  // namespace dpmac

#endif  // DPMAC_DATA_IO_H_
