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

#ifndef KSDIFF_DATASET_HPP_
#define KSDIFF_DATASET_HPP_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ksdiff {

// An N x D table of finite reals with named feature columns. Storage is
// column-major because every consumer works one feature (or pair) at a time.
class Dataset {
 public:
  Dataset(std::size_t rows, std::size_t cols, std::vector<double> column_major,
          std::vector<std::string> names);

  // Row-major convenience constructor; names default to x1..xD.
  static Dataset FromRows(const std::vector<std::vector<double>>& rows,
                          std::vector<std::string> names = {});

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double at(std::size_t row, std::size_t col) const { return data_[col * rows_ + row]; }
  std::span<const double> column(std::size_t col) const;
  std::span<double> mutable_column(std::size_t col);

  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(std::size_t col) const { return names_.at(col); }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
  std::vector<std::string> names_;
};

std::vector<std::string> DefaultFeatureNames(std::size_t cols);

// Throws unless both datasets have the same feature names in the same order.
void RequireSameSchema(const Dataset& p, const Dataset& q);

// CSV dialect: comma separated, '.' decimal point, mandatory header row.
// Errors carry the 1-based line number of the offending record.
Dataset ParseCsv(std::istream& in, std::string_view source = "<stream>");
Dataset ReadCsv(const std::string& path);
void WriteCsv(const Dataset& ds, std::ostream& out);
void WriteCsv(const Dataset& ds, const std::string& path);

// Shortest decimal representation that parses back to the same double.
std::string FormatDouble(double value);
// Parses a complete field as a double; returns false on any trailing junk.
bool ParseDouble(std::string_view text, double& value);

std::vector<std::string_view> SplitCsvLine(std::string_view line);

}  // namespace ksdiff

#endif  // KSDIFF_DATASET_HPP_
