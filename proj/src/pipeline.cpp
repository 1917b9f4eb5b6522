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

#include "pipeline.hpp"

#include <algorithm>
#include <json.hpp>
#include <numeric>
#include <sstream>

#include "error.hpp"

namespace ksdiff {

std::string_view MethodName(MethodId method) {
  switch (method) {
    case MethodId::kProposed:
      return "proposed";
    case MethodId::kMt:
      return "mt";
    case MethodId::kIde09:
      return "ide09";
    case MethodId::kHara15:
      return "hara15";
  }
  return "unknown";
}

MethodId ParseMethod(std::string_view name) {
  for (auto m : {MethodId::kProposed, MethodId::kMt, MethodId::kIde09, MethodId::kHara15}) {
    if (name == MethodName(m)) return m;
  }
  Fail(ErrorKind::kInvalidArgument, "unknown method '" + std::string(name) + "'");
}

void ValidateSelectionConfig(const SelectionConfig& config) {
  const bool needs_k =
      config.solver == SolverMethod::kGreedyK || config.solver == SolverMethod::kExact;
  if (needs_k && !config.k) {
    Fail(ErrorKind::kInvalidArgument,
         "solver " + std::string(SolverMethodName(config.solver)) + " requires k");
  }
  if (!needs_k && config.k) {
    Fail(ErrorKind::kInvalidArgument, "k is only meaningful for the greedy-k and exact solvers");
  }
  Require(config.projections >= 1, "number of projections L must be at least 1");
  const bool matrix_method =
      config.method == MethodId::kProposed || config.method == MethodId::kHara15;
  if (!matrix_method && config.solver != SolverMethod::kGreedyScore) {
    Fail(ErrorKind::kInvalidArgument,
         std::string(MethodName(config.method)) + " supports only the greedy-score solver");
  }
}

std::vector<RankedFeature> RankFeatures(const std::vector<std::string>& names,
                                        const std::vector<double>& scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<RankedFeature> ranking;
  for (std::size_t r = 0; r < order.size(); ++r) {
    ranking.push_back({order[r], names[order[r]], scores[order[r]], r + 1});
  }
  return ranking;
}

std::vector<double> MethodScores(MethodId method, const Dataset& p, const Dataset& q,
                                 std::size_t projections, std::uint64_t seed, unsigned jobs) {
  switch (method) {
    case MethodId::kProposed:
      return GreedyScore(BuildKsMatrix(p, q, projections, seed, AnglePolicy::kPerPair, jobs).entries)
          .scores;
    case MethodId::kMt:
      return MtScore(p, q, seed);
    case MethodId::kIde09:
      return Ide09Score(p, q, seed);
    case MethodId::kHara15:
      return Hara15Score(p, q, Hara15Mode::kCovariance, seed);
  }
  Fail(ErrorKind::kInvalidArgument, "unknown method");
}

SelectionReport RunSelection(const Dataset& p, const Dataset& q, const SelectionConfig& config) {
  ValidateSelectionConfig(config);
  RequireSameSchema(p, q);

  SelectionReport report;
  report.method = config.method;
  report.solver = config.solver;
  report.names = p.names();
  report.threshold = config.threshold;
  const std::size_t dim = p.cols();

  std::optional<Eigen::MatrixXd> h;
  switch (config.method) {
    case MethodId::kProposed:
      report.matrix = BuildKsMatrix(p, q, config.projections, config.seed, config.angle_policy,
                                    config.jobs);
      h = report.matrix->entries;
      break;
    case MethodId::kHara15:
      h = Hara15Matrix(p, q, config.hara15_mode, config.seed);
      break;
    case MethodId::kMt:
      report.scores = MtScore(p, q, config.seed);
      break;
    case MethodId::kIde09:
      report.scores = Ide09Score(p, q, config.seed);
      break;
  }

  if (h) {
    SolverResult result;
    switch (config.solver) {
      case SolverMethod::kGreedyScore:
        result = GreedyScore(*h);
        report.scores = result.scores;
        break;
      case SolverMethod::kGreedyK:
        result = GreedyK(*h, *config.k);
        break;
      case SolverMethod::kExact:
        result = ExactMin(*h, *config.k, config.exact_limit);
        break;
    }
    report.selected = result.selected;
    if (config.solver != SolverMethod::kGreedyScore) {
      report.objective = result.objective;
      report.scores.assign(dim, 0.0);
      for (std::size_t d : result.selected) report.scores[d] = 1.0;
    }
  }

  report.ranking = RankFeatures(report.names, report.scores);
  if (config.threshold) {
    for (std::size_t d = 0; d < dim; ++d) {
      if (report.scores[d] > *config.threshold) report.above_threshold.push_back(d);
    }
  }
  return report;
}

std::string SelectionReportJson(const SelectionReport& report, const SelectionConfig& config) {
  nlohmann::ordered_json j;
  j["method"] = MethodName(report.method);
  j["solver"] = SolverMethodName(report.solver);
  j["seed"] = config.seed;
  if (report.method == MethodId::kProposed) {
    j["L"] = config.projections;
    j["angle_policy"] = AnglePolicyName(config.angle_policy);
  }
  if (report.method == MethodId::kHara15) j["hara15_mode"] = Hara15ModeName(config.hara15_mode);
  j["k"] = config.k ? nlohmann::ordered_json(*config.k) : nlohmann::ordered_json(nullptr);
  j["objective"] =
      report.objective ? nlohmann::ordered_json(*report.objective) : nlohmann::ordered_json(nullptr);
  auto& features = j["features"] = nlohmann::ordered_json::array();
  for (const auto& f : report.ranking) {
    features.push_back({{"name", f.name}, {"index", f.index}, {"score", f.score}, {"rank", f.rank}});
  }
  auto& selected = j["selected"] = nlohmann::ordered_json::array();
  for (std::size_t d : report.selected) selected.push_back(report.names[d]);
  if (report.threshold) {
    j["threshold"] = *report.threshold;
    auto& above = j["above_threshold"] = nlohmann::ordered_json::array();
    for (std::size_t d : report.above_threshold) above.push_back(report.names[d]);
  }
  return j.dump(2) + "\n";
}

std::string SelectionReportCsv(const SelectionReport& report) {
  std::ostringstream out;
  out << "name,score,rank";
  if (report.threshold) out << ",above_threshold";
  out << '\n';
  for (const auto& f : report.ranking) {
    out << f.name << ',' << FormatDouble(f.score) << ',' << f.rank;
    if (report.threshold) out << ',' << (f.score > *report.threshold ? 1 : 0);
    out << '\n';
  }
  return out.str();
}

}  // namespace ksdiff
