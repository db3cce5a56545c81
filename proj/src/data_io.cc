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

#include "dpmac/data_io.h"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "dpmac/errors.h"
#include "dpmac/metrics.h"

namespace dpmac {

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::string Hex(std::uint32_t v) {
  std::ostringstream s;
  s << "0x" << std::hex << v;
  return s.str();
}

std::uint32_t ReadBigEndian(std::istream& in, const std::string& source,
                            std::streamoff offset) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) {
    throw DataError(source + ": truncated header at byte offset " +
                    std::to_string(offset));
  }
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) |
         (std::uint32_t{b[2]} << 8) | std::uint32_t{b[3]};
}

std::vector<std::uint32_t> ReadHeader(std::istream& in, std::uint32_t magic,
                                      int dims, const std::string& source) {
  const std::uint32_t got = ReadBigEndian(in, source, 0);
  if (got != magic) {
    throw DataError(source + ": bad magic " + Hex(got) + " at byte offset 0, expected " +
                    Hex(magic));
  }
  std::vector<std::uint32_t> sizes;
  for (int d = 0; d < dims; ++d) {
    sizes.push_back(ReadBigEndian(in, source, 4 + 4 * d));
  }
  return sizes;
}

std::vector<unsigned char> ReadPayload(std::istream& in, std::size_t count,
                                       std::streamoff header,
                                       const std::string& source) {
  std::vector<unsigned char> bytes(count);
  in.read(reinterpret_cast<char*>(bytes.data()),
          static_cast<std::streamsize>(count));
  const std::streamsize got = in.gcount();
  if (static_cast<std::size_t>(got) != count) {
    throw DataError(source + ": payload truncated at byte offset " +
                    std::to_string(header + got) + ", expected " +
                    std::to_string(header + static_cast<std::streamoff>(count)));
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw DataError(source + ": trailing bytes at byte offset " +
                    std::to_string(header + static_cast<std::streamoff>(count)));
  }
  return bytes;
}

void WriteBigEndian(std::uint32_t v, std::ostream& out) {
  const char b[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                     static_cast<char>(v >> 8), static_cast<char>(v)};
  out.write(b, 4);
}

std::ifstream OpenBinary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  return in;
}

}  // namespace

Matrix ParseIdxImages(std::istream& in, const std::string& source) {
  const std::vector<std::uint32_t> dims = ReadHeader(in, kImageMagic, 3, source);
  const std::size_t n = dims[0];
  const std::size_t d = static_cast<std::size_t>(dims[1]) * dims[2];
  const std::vector<unsigned char> bytes = ReadPayload(in, n * d, 16, source);
  Matrix m(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) m(i, j) = bytes[i * d + j];
  }
  return m;
}

std::vector<int> ParseIdxLabels(std::istream& in, const std::string& source) {
  const std::vector<std::uint32_t> dims = ReadHeader(in, kLabelMagic, 1, source);
  const std::vector<unsigned char> bytes = ReadPayload(in, dims[0], 8, source);
  return std::vector<int>(bytes.begin(), bytes.end());
}

Matrix LoadIdxImages(const std::string& path) {
  std::ifstream in = OpenBinary(path);
  return ParseIdxImages(in, path);
}

std::vector<int> LoadIdxLabels(const std::string& path) {
  std::ifstream in = OpenBinary(path);
  return ParseIdxLabels(in, path);
}

void WriteIdxImages(const Matrix& images, int rows, int cols,
                    std::ostream& out) {
  if (images.cols() != static_cast<Eigen::Index>(rows) * cols) {
    throw DimensionError("image width does not match rows * cols");
  }
  WriteBigEndian(kImageMagic, out);
  WriteBigEndian(static_cast<std::uint32_t>(images.rows()), out);
  WriteBigEndian(static_cast<std::uint32_t>(rows), out);
  WriteBigEndian(static_cast<std::uint32_t>(cols), out);
  for (Eigen::Index i = 0; i < images.rows(); ++i) {
    for (Eigen::Index j = 0; j < images.cols(); ++j) {
      const double v = std::clamp(images(i, j), 0.0, 255.0);
      out.put(static_cast<char>(static_cast<unsigned char>(v + 0.5)));
    }
  }
}

void WriteIdxLabels(const std::vector<int>& labels, std::ostream& out) {
  WriteBigEndian(kLabelMagic, out);
  WriteBigEndian(static_cast<std::uint32_t>(labels.size()), out);
  for (int l : labels) out.put(static_cast<char>(static_cast<unsigned char>(l)));
}

CsvData ParseCsv(std::istream& in, bool has_label, const std::string& source) {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::string line;
  std::streamoff offset = 0;
  std::size_t width = 0;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::streamoff line_start = offset;
    offset += static_cast<std::streamoff>(line.size()) + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      std::size_t end = line.find(',', pos);
      if (end == std::string::npos) end = line.size();
      double v = 0.0;
      const char* first = line.data() + pos;
      const char* last = line.data() + end;
      while (first < last && *first == ' ') ++first;
      while (last > first && last[-1] == ' ') --last;
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || ptr != last || first == last) {
        throw DataError(source + ":" + std::to_string(line_no) +
                        ": bad value at byte offset " +
                        std::to_string(line_start + static_cast<std::streamoff>(pos)));
      }
      values.push_back(v);
      pos = end + 1;
    }
    if (has_label) {
      const double l = values.front();
      if (l != static_cast<int>(l) || l < 0) {
        throw DataError(source + ":" + std::to_string(line_no) +
                        ": label is not a non-negative integer at byte offset " +
                        std::to_string(line_start));
      }
      labels.push_back(static_cast<int>(l));
      values.erase(values.begin());
    }
    if (rows.empty()) {
      width = values.size();
    } else if (values.size() != width) {
      throw DataError(source + ":" + std::to_string(line_no) + ": row has " +
                      std::to_string(values.size()) + " features, expected " +
                      std::to_string(width) + " (byte offset " +
                      std::to_string(line_start) + ")");
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty() || width == 0) throw DataError(source + ": no data rows");
  CsvData data;
  data.features.resize(rows.size(), width);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < width; ++j) data.features(i, j) = rows[i][j];
  }
  data.labels = std::move(labels);
  return data;
}

CsvData LoadCsv(const std::string& path, bool has_label) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return ParseCsv(in, has_label, path);
}

void WriteCsv(const Matrix& features, const std::vector<int>* labels,
              std::ostream& out) {
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    if (labels != nullptr) out << (*labels)[i] << ",";
    for (Eigen::Index j = 0; j < features.cols(); ++j) {
      if (j > 0) out << ",";
      out << FormatDouble(features(i, j));
    }
    out << "\n";
  }
}

void WriteFileAtomically(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp + "'");
    out << contents;
    out.flush();
    if (!out) throw DataError("write to '" + tmp + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw DataError("cannot rename '" + tmp + "': " + ec.message());
}

}  // namespace dpmac
