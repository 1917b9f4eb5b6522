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

#ifndef KSDIFF_SOLVERS_HPP_
#define KSDIFF_SOLVERS_HPP_

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace ksdiff {

// Sparsest k-subgraph objective f(S) = sum_{i,j in S^c} H_ij over a symmetric
// nonnegative matrix H. S is the set of features flagged as changed; S^c the
// k features kept.

enum class SolverMethod { kGreedyK, kGreedyScore, kExact };

std::string_view SolverMethodName(SolverMethod method);
SolverMethod ParseSolverMethod(std::string_view name);

struct SolverResult {
  SolverMethod method = SolverMethod::kGreedyScore;
  std::size_t dim = 0;
  // Greedy methods: features in the order they were added to S. Exact: S in
  // ascending order.
  std::vector<std::size_t> selected;
  // Greedy scoring only: normalized decrement of f when d was added.
  std::vector<double> scores;
  // f evaluated directly at the final selection.
  double objective = 0.0;

  // S^c in ascending order.
  std::vector<std::size_t> Complement() const;
};

inline constexpr std::size_t kDefaultExactLimit = 25;

// Throws unless H is square, finite, exactly symmetric and nonnegative.
void ValidateSubgraphMatrix(const Eigen::MatrixXd& h);

// sum_{i,j in complement} H_ij, accumulated in ascending (i, j) order.
double SubgraphObjective(const Eigen::MatrixXd& h, std::span<const std::size_t> complement);

// Greedy method with bookkeeping a_d = sum_{i in S^c} H_di. Runs D - k
// iterations in O(D) each; ties go to the smallest feature index.
SolverResult GreedyK(const Eigen::MatrixXd& h, std::size_t k);

// k-free greedy scoring: D iterations; the feature added at iteration i
// (1-based) scores (f(S) - f(S + d)) / (D - i + 1).
SolverResult GreedyScore(const Eigen::MatrixXd& h);

// Global minimizer of f over |S^c| = k by depth-first enumeration of S^c in
// lexicographic order with a lower-bound prune. Returns the lexicographically
// smallest optimal S^c.
SolverResult ExactMin(const Eigen::MatrixXd& h, std::size_t k,
                      std::size_t limit = kDefaultExactLimit);

// min over |S^c| = k, S^c != S*^c of f(S^c) - f(S*^c), with k = D - |S*|.
// +infinity when S*^c is the only candidate.
double EtaMargin(const Eigen::MatrixXd& h, std::span<const std::size_t> s_star,
                 std::size_t limit = kDefaultExactLimit);

// Greedy scoring over an arbitrary set function. `objective` receives an
// in-S membership mask. Scores are the raw normalized differences and may be
// negative when the objective is not monotone.
struct GreedyTrace {
  std::vector<std::size_t> order;
  std::vector<double> scores;
};
GreedyTrace GreedyScoreFunction(std::size_t dim,
                                const std::function<double(const std::vector<bool>&)>& objective);

}  // namespace ksdiff

#endif  // KSDIFF_SOLVERS_HPP_
