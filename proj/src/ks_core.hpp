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

#ifndef KSDIFF_KS_CORE_HPP_
#define KSDIFF_KS_CORE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dataset.hpp"

namespace ksdiff {

// A one-dimensional sample of finite reals. Duplicates are allowed. When
// sorted() is true the values are guaranteed nondecreasing.
class Sample1D {
 public:
  explicit Sample1D(std::vector<double> values, bool sorted = false);

  // Sorts the values and sets the sorted flag.
  static Sample1D Sorted(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  bool sorted() const noexcept { return sorted_; }

 private:
  std::vector<double> values_;
  bool sorted_;
};

Sample1D ColumnSample(const Dataset& ds, std::size_t col);

// Right-continuous empirical distribution function: #{v <= x} / |s|.
double EdfEval(const Sample1D& s, double x);

// Two-sample Kolmogorov-Smirnov statistic sup_x |P_hat(x) - Q_hat(x)|.
double KsEmpirical(const Sample1D& p, const Sample1D& q);
double KsStatistic(std::span<const double> p, std::span<const double> q);

// Merge scan over two nondecreasing sequences. At every distinct value x the
// scan advances both cursors past all entries <= x before measuring the gap,
// so ties inside and across samples are counted as the EDF requires, and the
// scan continues until both sequences are exhausted.
double KsSorted(std::span<const double> p, std::span<const double> q) noexcept;

// r = x_i cos(theta) + x_j sin(theta) for every row.
std::vector<double> ProjectPair(const Dataset& ds, std::size_t i, std::size_t j, double theta);
void ProjectPairInto(const Dataset& ds, std::size_t i, std::size_t j, double cos_theta,
                     double sin_theta, std::span<double> out);

// L projection angles drawn uniformly from [0, pi).
class ProjectionAngleSet {
 public:
  using PairId = std::pair<std::size_t, std::size_t>;

  // Explicit angles; each must lie in [0, pi).
  explicit ProjectionAngleSet(std::vector<double> angles, std::uint64_t seed = 0,
                              std::optional<PairId> pair_id = std::nullopt);

  // Regenerating with the same (count, seed, pair_id) yields the identical
  // sequence. The stream is DeriveSeed(seed, {i, j}) for a tagged pair and
  // DeriveSeed(seed, {kSharedStreamTag}) otherwise.
  static ProjectionAngleSet Generate(std::size_t count, std::uint64_t seed,
                                     std::optional<PairId> pair_id = std::nullopt);

  static constexpr std::uint64_t kSharedStreamTag = 0xa11a4b1e5ULL;

  std::span<const double> angles() const noexcept { return angles_; }
  std::size_t size() const noexcept { return angles_.size(); }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::optional<PairId>& pair_id() const noexcept { return pair_id_; }

 private:
  std::vector<double> angles_;
  std::uint64_t seed_;
  std::optional<PairId> pair_id_;
};

// Sampled projected KS distance: (1/L) sum_l KS(P_ij,theta_l, Q_ij,theta_l).
double GHatL(const Dataset& p, const Dataset& q, std::size_t i, std::size_t j,
             const ProjectionAngleSet& angles);

// KS statistic of the theta-projection of columns (i, j); scratch buffers are
// resized as needed so callers can reuse them across angles.
double ProjectedKs(const Dataset& p, const Dataset& q, std::size_t i, std::size_t j,
                   double theta, std::vector<double>& scratch_p, std::vector<double>& scratch_q);

}  // namespace ksdiff

#endif  // KSDIFF_KS_CORE_HPP_
