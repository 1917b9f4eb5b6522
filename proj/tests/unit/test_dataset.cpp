/*
 * Copyright 2026 The ksdiff Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "dataset.hpp"
#include "error.hpp"

using ksdiff::Dataset;
using ksdiff::Error;
using ksdiff::ErrorKind;

namespace {

ErrorKind KindOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an ksdiff::Error");
  return ErrorKind::kInvalidArgument;
}

std::string MessageOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("dataset shape and column access") {
  Dataset ds = Dataset::FromRows({{1, 2}, {3, 4}, {5, 6}});
  CHECK(ds.rows() == 3);
  CHECK(ds.cols() == 2);
  CHECK(ds.at(2, 1) == 6);
  CHECK(ds.column(0)[1] == 3);
  CHECK(ds.names() == std::vector<std::string>{"x1", "x2"});
}

TEST_CASE("dataset rejects non-finite values with row and column") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto msg = MessageOf([&] { Dataset::FromRows({{1, 2}, {3, nan}}); });
  CHECK(msg.find("row 1") != std::string::npos);
  CHECK(msg.find("column 1") != std::string::npos);
  CHECK_THROWS_AS(Dataset::FromRows({{std::numeric_limits<double>::infinity()}}), Error);
}

TEST_CASE("dataset needs at least one row and one column") {
  CHECK_THROWS_AS(Dataset(0, 1, {}, {"a"}), Error);
  CHECK_THROWS_AS(Dataset(1, 0, {}, {}), Error);
}

TEST_CASE("csv parse happy path, BOM and CRLF") {
  std::istringstream in("\xEF\xBB\xBF" "a,b\r\n1,2\r\n3.5,-4e2\r\n");
  Dataset ds = ksdiff::ParseCsv(in);
  CHECK(ds.names() == std::vector<std::string>{"a", "b"});
  CHECK(ds.at(1, 0) == 3.5);
  CHECK(ds.at(1, 1) == -400.0);
}

TEST_CASE("csv parse errors carry line numbers") {
  std::istringstream ragged("a,b\n1,2\n3\n");
  auto msg = MessageOf([&] { ksdiff::ParseCsv(ragged, "in.csv"); });
  CHECK(msg.find("in.csv:3") != std::string::npos);

  std::istringstream bad("a,b\n1,2\n3,zz\n");
  CHECK(KindOf([&] { ksdiff::ParseCsv(bad); }) == ErrorKind::kParse);

  std::istringstream nan_field("a\nnan\n");
  CHECK(KindOf([&] { ksdiff::ParseCsv(nan_field); }) == ErrorKind::kParse);

  std::istringstream empty("");
  CHECK(KindOf([&] { ksdiff::ParseCsv(empty); }) == ErrorKind::kParse);

  std::istringstream header_only("a,b\n");
  CHECK(KindOf([&] { ksdiff::ParseCsv(header_only); }) == ErrorKind::kParse);

  std::istringstream dup("a,a\n1,2\n");
  CHECK(KindOf([&] { ksdiff::ParseCsv(dup); }) == ErrorKind::kParse);

  // A numeric first line means the mandatory header is missing.
  std::istringstream no_header("1,2\n3,4\n");
  CHECK(KindOf([&] { ksdiff::ParseCsv(no_header); }) == ErrorKind::kParse);
}

TEST_CASE("csv round trip is exact") {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> z;
  std::vector<std::vector<double>> rows(40, std::vector<double>(3));
  for (auto& r : rows) {
    for (double& v : r) v = z(gen) * std::pow(10.0, static_cast<int>(gen() % 20) - 10);
  }
  rows[0][0] = 0.1;
  rows[1][1] = -0.0;
  rows[2][2] = 5e-324;
  Dataset ds = Dataset::FromRows(rows, {"alpha", "beta", "gamma"});
  std::stringstream buf;
  ksdiff::WriteCsv(ds, buf);
  Dataset back = ksdiff::ParseCsv(buf);
  CHECK(back == ds);
}

TEST_CASE("schema check") {
  Dataset a = Dataset::FromRows({{1, 2}}, {"u", "v"});
  Dataset b = Dataset::FromRows({{1, 2}}, {"u", "w"});
  Dataset c = Dataset::FromRows({{1}}, {"u"});
  CHECK_NOTHROW(ksdiff::RequireSameSchema(a, a));
  CHECK_THROWS_AS(ksdiff::RequireSameSchema(a, b), Error);
  CHECK_THROWS_AS(ksdiff::RequireSameSchema(a, c), Error);
}

TEST_CASE("ParseDouble takes the whole field") {
  double v = 0;
  CHECK(ksdiff::ParseDouble("1.25", v));
  CHECK(v == 1.25);
  CHECK_FALSE(ksdiff::ParseDouble("1.25x", v));
  CHECK_FALSE(ksdiff::ParseDouble("", v));
  CHECK(ksdiff::FormatDouble(0.1) == "0.1");
}
