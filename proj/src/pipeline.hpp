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

#ifndef KSDIFF_PIPELINE_HPP_
#define KSDIFF_PIPELINE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "baselines.hpp"
#include "dataset.hpp"
#include "ks_matrix.hpp"
#include "solvers.hpp"

namespace ksdiff {

enum class MethodId { kProposed, kMt, kIde09, kHara15 };

std::string_view MethodName(MethodId method);
MethodId ParseMethod(std::string_view name);

inline constexpr std::size_t kDefaultProjections = 10;

struct SelectionConfig {
  MethodId method = MethodId::kProposed;
  SolverMethod solver = SolverMethod::kGreedyScore;
  std::optional<std::size_t> k;  // required for greedy-k and exact
  std::size_t projections = kDefaultProjections;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::optional<double> threshold;
  Hara15Mode hara15_mode = Hara15Mode::kCovariance;
  AnglePolicy angle_policy = AnglePolicy::kPerPair;
  std::size_t exact_limit = kDefaultExactLimit;
};

// Throws unless k is given exactly when the solver needs it, L >= 1, and the
// method/solver pair is supported (MT and Ide'09 only produce scores).
void ValidateSelectionConfig(const SelectionConfig& config);

struct RankedFeature {
  std::size_t index = 0;
  std::string name;
  double score = 0.0;
  std::size_t rank = 0;  // 1-based; ties broken by feature index
};

struct SelectionReport {
  MethodId method = MethodId::kProposed;
  SolverMethod solver = SolverMethod::kGreedyScore;
  std::vector<std::string> names;
  // Greedy scoring (and MT / Ide'09): the method's scores. Greedy-k and
  // exact: 1 for features in the selected set, 0 otherwise.
  std::vector<double> scores;
  std::vector<std::size_t> selected;  // solver output, in solver order
  std::optional<double> objective;    // f at the final set for greedy-k / exact
  std::vector<RankedFeature> ranking;
  std::optional<double> threshold;
  std::vector<std::size_t> above_threshold;  // {d | score_d > t}
  std::optional<EmpiricalKsMatrix> matrix;   // proposed method only
};

SelectionReport RunSelection(const Dataset& p, const Dataset& q, const SelectionConfig& config);

// Score vector of a method under greedy scoring; used by the experiment runner.
std::vector<double> MethodScores(MethodId method, const Dataset& p, const Dataset& q,
                                 std::size_t projections, std::uint64_t seed, unsigned jobs = 1);

// Ranked report with the run parameters. JSON carries the full record; CSV has
// one row per feature (name,score,rank[,above_threshold]) in rank order.
std::string SelectionReportJson(const SelectionReport& report, const SelectionConfig& config);
std::string SelectionReportCsv(const SelectionReport& report);

std::vector<RankedFeature> RankFeatures(const std::vector<std::string>& names,
                                        const std::vector<double>& scores);

}  // namespace ksdiff

#endif  // KSDIFF_PIPELINE_HPP_
