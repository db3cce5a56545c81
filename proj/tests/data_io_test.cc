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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dpmac/errors.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace dpmac {
namespace {

using ::testing::HasSubstr;

template <typename F>
std::string DataErrorMessage(F f) {
  try {
    f();
  } catch (const DataError& e) {
    return e.what();
  }
  return "<no DataError>";
}

std::string IdxBytes(const Matrix& images, int rows, int cols) {
  std::ostringstream out;
  WriteIdxImages(images, rows, cols, out);
  return out.str();
}

TEST(IdxTest, ImagesRoundTrip) {
  Matrix images(3, 4);
  images << 0, 1, 2, 255, 10, 20, 30, 40, 7, 8, 9, 100;
  std::istringstream in(IdxBytes(images, 2, 2));
  EXPECT_EQ(ParseIdxImages(in, "mem"), images);
}

TEST(IdxTest, LabelsRoundTrip) {
  const std::vector<int> labels = {3, 1, 4, 1, 5, 9};
  std::ostringstream out;
  WriteIdxLabels(labels, out);
  std::istringstream in(out.str());
  EXPECT_EQ(ParseIdxLabels(in, "mem"), labels);
}

TEST(IdxTest, HeaderLayout) {
  const std::string bytes = IdxBytes(Matrix::Zero(2, 6), 2, 3);
  ASSERT_EQ(bytes.size(), 16u + 12u);
  EXPECT_EQ(static_cast<unsigned char>(bytes[2]), 0x08);
  EXPECT_EQ(static_cast<unsigned char>(bytes[3]), 0x03);
  EXPECT_EQ(static_cast<unsigned char>(bytes[7]), 2);
}

TEST(IdxTest, BadMagicReportsOffset) {
  std::string bytes = IdxBytes(Matrix::Zero(1, 4), 2, 2);
  bytes[3] = 0x01;
  std::istringstream in(bytes);
  const std::string msg = DataErrorMessage([&] { ParseIdxImages(in, "img"); });
  EXPECT_THAT(msg, HasSubstr("bad magic"));
  EXPECT_THAT(msg, HasSubstr("byte offset 0"));
}

TEST(IdxTest, TruncatedPayloadReportsOffset) {
  std::string bytes = IdxBytes(Matrix::Zero(2, 4), 2, 2);
  bytes.resize(bytes.size() - 3);
  std::istringstream in(bytes);
  EXPECT_THAT(DataErrorMessage([&] { ParseIdxImages(in, "img"); }),
              HasSubstr("truncated at byte offset 21"));
}

TEST(IdxTest, TruncatedHeaderReportsOffset) {
  std::istringstream in(IdxBytes(Matrix::Zero(1, 4), 2, 2).substr(0, 10));
  EXPECT_THAT(DataErrorMessage([&] { ParseIdxImages(in, "img"); }),
              HasSubstr("byte offset 8"));
}

TEST(IdxTest, TrailingBytesRejected) {
  std::istringstream in(IdxBytes(Matrix::Zero(1, 4), 2, 2) + "x");
  EXPECT_THAT(DataErrorMessage([&] { ParseIdxImages(in, "img"); }),
              HasSubstr("trailing bytes at byte offset 20"));
}

TEST(CsvTest, ParsesLabelsAndFeatures) {
  std::istringstream in("2, 0.5, 1\n0,3,4\n");
  const CsvData d = ParseCsv(in, true, "mem");
  EXPECT_EQ(d.labels, (std::vector<int>{2, 0}));
  Matrix expected(2, 2);
  expected << 0.5, 1, 3, 4;
  EXPECT_EQ(d.features, expected);
}

TEST(CsvTest, WriteThenParseIsExact) {
  Matrix m(2, 3);
  m << 0.1, 1.0 / 3.0, -2e-17, 1e300, 5, 6;
  const std::vector<int> labels = {7, 8};
  std::ostringstream out;
  WriteCsv(m, &labels, out);
  std::istringstream in(out.str());
  const CsvData d = ParseCsv(in, true, "mem");
  EXPECT_EQ(d.features, m);
  EXPECT_EQ(d.labels, labels);
}

TEST(CsvTest, BadValueReportsLineAndOffset) {
  std::istringstream in("1,2\n3,x\n");
  const std::string msg = DataErrorMessage([&] { ParseCsv(in, false, "d.csv"); });
  EXPECT_THAT(msg, HasSubstr("d.csv:2"));
  EXPECT_THAT(msg, HasSubstr("byte offset 6"));
}

TEST(CsvTest, RaggedRowsRejected) {
  std::istringstream in("1,2\n3,4,5\n");
  EXPECT_THAT(DataErrorMessage([&] { ParseCsv(in, false, "d.csv"); }),
              HasSubstr("expected 2"));
}

TEST(CsvTest, NonIntegerLabelRejected) {
  std::istringstream in("1.5,2\n");
  EXPECT_THROW(ParseCsv(in, true, "d.csv"), DataError);
}

TEST(CsvTest, EmptyInputRejected) {
  std::istringstream in("\n");
  EXPECT_THROW(ParseCsv(in, false, "d.csv"), DataError);
}

TEST(FileTest, MissingFileIsDataError) {
  EXPECT_THROW(LoadCsv("/nonexistent/x.csv", false), DataError);
  EXPECT_THROW(LoadIdxImages("/nonexistent/x.idx"), DataError);
}

TEST(FileTest, AtomicWriteReplacesContents) {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "dpmac_data_io_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "f.txt").string();
  WriteFileAtomically(path, "first");
  WriteFileAtomically(path, "second");
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(buf.str(), "second");
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace dpmac
