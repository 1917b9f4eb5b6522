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

#include "ks_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "error.hpp"
#include "rng.hpp"

namespace ksdiff {

namespace {

void RequireNonEmpty(std::span<const double> s) {
  if (s.empty()) Fail(ErrorKind::kInvalidArgument, "empty sample");
}

void RequireFeaturePair(const Dataset& ds, std::size_t i, std::size_t j) {
  if (i == j) Fail(ErrorKind::kInvalidArgument, "projection requires distinct features");
  Require(i < ds.cols() && j < ds.cols(),
          "feature index out of range for a dataset with " + std::to_string(ds.cols()) +
              " columns");
}

}  // namespace

Sample1D::Sample1D(std::vector<double> values, bool sorted)
    : values_(std::move(values)), sorted_(sorted) {
  for (std::size_t n = 0; n < values_.size(); ++n) {
    if (!std::isfinite(values_[n])) {
      Fail(ErrorKind::kInvalidArgument, "non-finite value at sample index " + std::to_string(n));
    }
  }
  if (sorted_ && !std::is_sorted(values_.begin(), values_.end())) {
    Fail(ErrorKind::kInvalidArgument, "sample flagged as sorted is not in nondecreasing order");
  }
}

Sample1D Sample1D::Sorted(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return Sample1D(std::move(values), true);
}

Sample1D ColumnSample(const Dataset& ds, std::size_t col) {
  const auto column = ds.column(col);
  return Sample1D(std::vector<double>(column.begin(), column.end()));
}

double EdfEval(const Sample1D& s, double x) {
  RequireNonEmpty(s.values());
  Require(std::isfinite(x), "EDF evaluation point must be finite");
  const auto v = s.values();
  std::size_t count = 0;
  if (s.sorted()) {
    count = static_cast<std::size_t>(std::upper_bound(v.begin(), v.end(), x) - v.begin());
  } else {
    count = static_cast<std::size_t>(std::count_if(v.begin(), v.end(),
                                                   [x](double y) { return y <= x; }));
  }
  return static_cast<double>(count) / static_cast<double>(v.size());
}

double KsSorted(std::span<const double> p, std::span<const double> q) noexcept {
  const std::size_t n = p.size();
  const std::size_t m = q.size();
  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  std::size_t i = 0;
  std::size_t j = 0;
  double h = 0.0;
  while (i < n || j < m) {
    double x;
    if (j >= m) {
      x = p[i];
    } else if (i >= n) {
      x = q[j];
    } else {
      x = std::min(p[i], q[j]);
    }
    while (i < n && p[i] <= x) ++i;
    while (j < m && q[j] <= x) ++j;
    h = std::max(h, std::fabs(static_cast<double>(i) / dn - static_cast<double>(j) / dm));
  }
  return h;
}

double KsStatistic(std::span<const double> p, std::span<const double> q) {
  RequireNonEmpty(p);
  RequireNonEmpty(q);
  std::vector<double> sp(p.begin(), p.end());
  std::vector<double> sq(q.begin(), q.end());
  std::sort(sp.begin(), sp.end());
  std::sort(sq.begin(), sq.end());
  return KsSorted(sp, sq);
}

double KsEmpirical(const Sample1D& p, const Sample1D& q) {
  RequireNonEmpty(p.values());
  RequireNonEmpty(q.values());
  if (p.sorted() && q.sorted()) return KsSorted(p.values(), q.values());
  return KsStatistic(p.values(), q.values());
}

void ProjectPairInto(const Dataset& ds, std::size_t i, std::size_t j, double cos_theta,
                     double sin_theta, std::span<double> out) {
  const auto xi = ds.column(i);
  const auto xj = ds.column(j);
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = xi[n] * cos_theta + xj[n] * sin_theta;
}

std::vector<double> ProjectPair(const Dataset& ds, std::size_t i, std::size_t j, double theta) {
  RequireFeaturePair(ds, i, j);
  Require(std::isfinite(theta) && theta >= 0.0 && theta < std::numbers::pi,
          "projection angle must lie in [0, pi)");
  std::vector<double> out(ds.rows());
  ProjectPairInto(ds, i, j, std::cos(theta), std::sin(theta), out);
  return out;
}

ProjectionAngleSet::ProjectionAngleSet(std::vector<double> angles, std::uint64_t seed,
                                       std::optional<PairId> pair_id)
    : angles_(std::move(angles)), seed_(seed), pair_id_(pair_id) {
  Require(!angles_.empty(), "angle set needs at least one angle");
  for (double a : angles_) {
    Require(std::isfinite(a) && a >= 0.0 && a < std::numbers::pi,
            "projection angle must lie in [0, pi)");
  }
}

ProjectionAngleSet ProjectionAngleSet::Generate(std::size_t count, std::uint64_t seed,
                                                std::optional<PairId> pair_id) {
  Require(count >= 1, "number of projections L must be at least 1");
  const std::uint64_t stream =
      pair_id ? DeriveSeed(seed, {pair_id->first, pair_id->second})
              : DeriveSeed(seed, {kSharedStreamTag});
  SplitMix64 rng(stream);
  constexpr double kBelowPi = 3.1415926535897927;  // nextafter(pi, 0)
  std::vector<double> angles(count);
  for (double& a : angles) a = std::min(rng.Uniform01() * std::numbers::pi, kBelowPi);
  return ProjectionAngleSet(std::move(angles), seed, pair_id);
}

double ProjectedKs(const Dataset& p, const Dataset& q, std::size_t i, std::size_t j,
                   double theta, std::vector<double>& scratch_p, std::vector<double>& scratch_q) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  scratch_p.resize(p.rows());
  scratch_q.resize(q.rows());
  ProjectPairInto(p, i, j, c, s, scratch_p);
  ProjectPairInto(q, i, j, c, s, scratch_q);
  std::sort(scratch_p.begin(), scratch_p.end());
  std::sort(scratch_q.begin(), scratch_q.end());
  return KsSorted(scratch_p, scratch_q);
}

double GHatL(const Dataset& p, const Dataset& q, std::size_t i, std::size_t j,
             const ProjectionAngleSet& angles) {
  RequireFeaturePair(p, i, j);
  RequireFeaturePair(q, i, j);
  std::vector<double> sp;
  std::vector<double> sq;
  double sum = 0.0;
  for (double theta : angles.angles()) sum += ProjectedKs(p, q, i, j, theta, sp, sq);
  return sum / static_cast<double>(angles.size());
}

}  // namespace ksdiff
