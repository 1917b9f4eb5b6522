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

#include "dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>
#include <utility>

#include "error.hpp"

namespace ksdiff {

namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::string Unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    s = s.substr(1, s.size() - 2);
  }
  return std::string(s);
}

}  // namespace

Dataset::Dataset(std::size_t rows, std::size_t cols, std::vector<double> column_major,
                 std::vector<std::string> names)
    : rows_(rows), cols_(cols), data_(std::move(column_major)), names_(std::move(names)) {
  Require(rows_ >= 1, "dataset needs at least one row");
  Require(cols_ >= 1, "dataset needs at least one column");
  Require(data_.size() == rows_ * cols_, "dataset storage does not match its shape");
  if (names_.empty()) names_ = DefaultFeatureNames(cols_);
  Require(names_.size() == cols_, "dataset has " + std::to_string(cols_) +
                                      " columns but " + std::to_string(names_.size()) +
                                      " names");
  for (std::size_t c = 0; c < cols_; ++c) {
    for (std::size_t r = 0; r < rows_; ++r) {
      if (!std::isfinite(data_[c * rows_ + r])) {
        Fail(ErrorKind::kInvalidArgument, "non-finite value at row " + std::to_string(r) +
                                              ", column " + std::to_string(c) + " ('" +
                                              names_[c] + "')");
      }
    }
  }
}

Dataset Dataset::FromRows(const std::vector<std::vector<double>>& rows,
                          std::vector<std::string> names) {
  Require(!rows.empty(), "dataset needs at least one row");
  const std::size_t cols = rows.front().size();
  std::vector<double> data(rows.size() * cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    Require(rows[r].size() == cols, "ragged rows");
    for (std::size_t c = 0; c < cols; ++c) data[c * rows.size() + r] = rows[r][c];
  }
  return Dataset(rows.size(), cols, std::move(data), std::move(names));
}

std::span<const double> Dataset::column(std::size_t col) const {
  Require(col < cols_, "column index " + std::to_string(col) + " out of range");
  return {data_.data() + col * rows_, rows_};
}

std::span<double> Dataset::mutable_column(std::size_t col) {
  Require(col < cols_, "column index " + std::to_string(col) + " out of range");
  return {data_.data() + col * rows_, rows_};
}

std::vector<std::string> DefaultFeatureNames(std::size_t cols) {
  std::vector<std::string> names;
  names.reserve(cols);
  for (std::size_t c = 0; c < cols; ++c) names.push_back("x" + std::to_string(c + 1));
  return names;
}

void RequireSameSchema(const Dataset& p, const Dataset& q) {
  if (p.cols() != q.cols()) {
    Fail(ErrorKind::kInvalidArgument, "feature count mismatch: " + std::to_string(p.cols()) +
                                          " vs " + std::to_string(q.cols()));
  }
  for (std::size_t c = 0; c < p.cols(); ++c) {
    if (p.name(c) != q.name(c)) {
      Fail(ErrorKind::kInvalidArgument, "feature name mismatch at column " + std::to_string(c) +
                                            ": '" + p.name(c) + "' vs '" + q.name(c) + "'");
    }
  }
}

std::vector<std::string_view> SplitCsvLine(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(Trim(line.substr(start)));
      return fields;
    }
    fields.push_back(Trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

bool ParseDouble(std::string_view text, double& value) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size();
}

std::string FormatDouble(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) Fail(ErrorKind::kNumeric, "failed to format a double");
  return std::string(buffer, ptr);
}

Dataset ParseCsv(std::istream& in, std::string_view source) {
  const std::string where(source);
  std::string line;
  std::size_t line_no = 0;

  std::vector<std::string> names;
  while (std::getline(in, line)) {
    ++line_no;
    if (!Trim(line).empty()) break;
  }
  if (Trim(line).empty()) Fail(ErrorKind::kParse, where + ": missing header row");
  if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
    line.erase(0, 3);
  }
  std::unordered_set<std::string> seen;
  for (std::string_view field : SplitCsvLine(line)) {
    std::string name = Unquote(field);
    if (name.empty()) {
      Fail(ErrorKind::kParse, where + ":" + std::to_string(line_no) + ": empty feature name");
    }
    double probe = 0.0;
    if (ParseDouble(name, probe)) {
      Fail(ErrorKind::kParse, where + ":" + std::to_string(line_no) +
                                  ": header row is mandatory (found numeric field '" + name +
                                  "')");
    }
    if (!seen.insert(name).second) {
      Fail(ErrorKind::kParse,
           where + ":" + std::to_string(line_no) + ": duplicate feature name '" + name + "'");
    }
    names.push_back(std::move(name));
  }
  const std::size_t cols = names.size();

  std::vector<std::vector<double>> columns(cols);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto fields = SplitCsvLine(line);
    if (fields.size() != cols) {
      Fail(ErrorKind::kParse, where + ":" + std::to_string(line_no) + ": expected " +
                                  std::to_string(cols) + " fields, found " +
                                  std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      double value = 0.0;
      if (!ParseDouble(fields[c], value)) {
        Fail(ErrorKind::kParse, where + ":" + std::to_string(line_no) + ": column " +
                                    std::to_string(c + 1) + " ('" + names[c] +
                                    "'): cannot parse '" + std::string(fields[c]) + "'");
      }
      if (!std::isfinite(value)) {
        Fail(ErrorKind::kParse, where + ":" + std::to_string(line_no) + ": column " +
                                    std::to_string(c + 1) + " ('" + names[c] +
                                    "'): non-finite value '" + std::string(fields[c]) + "'");
      }
      columns[c].push_back(value);
    }
    ++rows;
  }
  if (rows == 0) Fail(ErrorKind::kParse, where + ": no data rows");

  std::vector<double> data;
  data.reserve(rows * cols);
  for (auto& column : columns) data.insert(data.end(), column.begin(), column.end());
  return Dataset(rows, cols, std::move(data), std::move(names));
}

Dataset ReadCsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot open '" + path + "' for reading");
  return ParseCsv(in, path);
}

void WriteCsv(const Dataset& ds, std::ostream& out) {
  for (std::size_t c = 0; c < ds.cols(); ++c) {
    if (c) out << ',';
    out << ds.name(c);
  }
  out << '\n';
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    for (std::size_t c = 0; c < ds.cols(); ++c) {
      if (c) out << ',';
      out << FormatDouble(ds.at(r, c));
    }
    out << '\n';
  }
}

void WriteCsv(const Dataset& ds, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorKind::kIo, "cannot open '" + path + "' for writing");
  WriteCsv(ds, out);
  if (!out) Fail(ErrorKind::kIo, "write to '" + path + "' failed");
}

}  // namespace ksdiff
