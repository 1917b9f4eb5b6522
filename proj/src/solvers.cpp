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

#include "solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "error.hpp"

namespace ksdiff {

namespace {

using Index = Eigen::Index;

Index Idx(std::size_t v) { return static_cast<Index>(v); }

std::vector<std::size_t> ComplementOf(std::size_t dim, const std::vector<bool>& in_set) {
  std::vector<std::size_t> out;
  for (std::size_t d = 0; d < dim; ++d) {
    if (!in_set[d]) out.push_back(d);
  }
  return out;
}

// Shared greedy loop; runs `iterations` steps and returns the decrement of f
// at every step alongside the order.
struct GreedySteps {
  std::vector<std::size_t> order;
  std::vector<double> decrements;
};

GreedySteps RunGreedy(const Eigen::MatrixXd& h, std::size_t iterations) {
  const std::size_t dim = static_cast<std::size_t>(h.rows());
  std::vector<double> a(dim);
  for (std::size_t d = 0; d < dim; ++d) a[d] = h.row(Idx(d)).sum();
  std::vector<bool> in_s(dim, false);

  GreedySteps steps;
  for (std::size_t it = 0; it < iterations; ++it) {
    std::size_t best = dim;
    double best_decrement = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      if (in_s[d]) continue;
      // f(S) - f(S + d) = 2 a_d - H_dd; maximizing it minimizes f(S + d).
      const double decrement = 2.0 * a[d] - h(Idx(d), Idx(d));
      if (best == dim || decrement > best_decrement) {
        best = d;
        best_decrement = decrement;
      }
    }
    in_s[best] = true;
    for (std::size_t d = 0; d < dim; ++d) a[d] -= h(Idx(d), Idx(best));
    steps.order.push_back(best);
    steps.decrements.push_back(std::max(0.0, best_decrement));
  }
  return steps;
}

}  // namespace

std::string_view SolverMethodName(SolverMethod method) {
  switch (method) {
    case SolverMethod::kGreedyK:
      return "greedy-k";
    case SolverMethod::kGreedyScore:
      return "greedy-score";
    case SolverMethod::kExact:
      return "exact";
  }
  return "unknown";
}

SolverMethod ParseSolverMethod(std::string_view name) {
  if (name == "greedy-k") return SolverMethod::kGreedyK;
  if (name == "greedy-score") return SolverMethod::kGreedyScore;
  if (name == "exact") return SolverMethod::kExact;
  Fail(ErrorKind::kInvalidArgument, "unknown solver '" + std::string(name) + "'");
}

std::vector<std::size_t> SolverResult::Complement() const {
  std::vector<bool> in_s(dim, false);
  for (std::size_t d : selected) in_s[d] = true;
  return ComplementOf(dim, in_s);
}

void ValidateSubgraphMatrix(const Eigen::MatrixXd& h) {
  Require(h.rows() >= 1 && h.rows() == h.cols(), "matrix must be square and nonempty");
  for (Index i = 0; i < h.rows(); ++i) {
    for (Index j = 0; j < h.cols(); ++j) {
      const double v = h(i, j);
      if (!std::isfinite(v) || v < 0.0) {
        Fail(ErrorKind::kInvalidArgument, "matrix entry (" + std::to_string(i) + "," +
                                              std::to_string(j) +
                                              ") must be finite and nonnegative");
      }
      if (v != h(j, i)) {
        Fail(ErrorKind::kInvalidArgument, "matrix is not symmetric at (" + std::to_string(i) +
                                              "," + std::to_string(j) + ")");
      }
    }
  }
}

double SubgraphObjective(const Eigen::MatrixXd& h, std::span<const std::size_t> complement) {
  double sum = 0.0;
  for (std::size_t i : complement) {
    for (std::size_t j : complement) sum += h(Idx(i), Idx(j));
  }
  return sum;
}

SolverResult GreedyK(const Eigen::MatrixXd& h, std::size_t k) {
  ValidateSubgraphMatrix(h);
  const std::size_t dim = static_cast<std::size_t>(h.rows());
  if (k > dim) {
    Fail(ErrorKind::kInvalidArgument,
         "k = " + std::to_string(k) + " out of range [0, " + std::to_string(dim) + "]");
  }
  SolverResult result;
  result.method = SolverMethod::kGreedyK;
  result.dim = dim;
  result.selected = RunGreedy(h, dim - k).order;
  result.objective = SubgraphObjective(h, result.Complement());
  return result;
}

SolverResult GreedyScore(const Eigen::MatrixXd& h) {
  ValidateSubgraphMatrix(h);
  const std::size_t dim = static_cast<std::size_t>(h.rows());
  GreedySteps steps = RunGreedy(h, dim);
  SolverResult result;
  result.method = SolverMethod::kGreedyScore;
  result.dim = dim;
  result.scores.assign(dim, 0.0);
  for (std::size_t it = 0; it < dim; ++it) {
    result.scores[steps.order[it]] = steps.decrements[it] / static_cast<double>(dim - it);
  }
  result.selected = std::move(steps.order);
  result.objective = 0.0;
  return result;
}

namespace {

class BranchAndBound {
 public:
  BranchAndBound(const Eigen::MatrixXd& h, std::size_t k)
      : h_(h), dim_(static_cast<std::size_t>(h.rows())), k_(k) {
    chosen_.reserve(k);
    gain_.assign(dim_, 0.0);
    for (std::size_t d = 0; d < dim_; ++d) gain_[d] = h_(Idx(d), Idx(d));
  }

  std::vector<std::size_t> Solve() {
    Descend(0, 0.0);
    return best_;
  }

  double best_value() const { return best_value_; }

 private:
  // gain_[e] = H_ee + 2 sum_{c in chosen} H_ce: the increase of the partial
  // sum when e joins. Every later addition only adds nonnegative cross terms,
  // so partial + (sum of the r smallest gains) bounds any completion.
  double LowerBound(std::size_t start, double partial) {
    const std::size_t remaining = k_ - chosen_.size();
    if (remaining == 0) return partial;
    scratch_.assign(gain_.begin() + static_cast<std::ptrdiff_t>(start), gain_.end());
    std::nth_element(scratch_.begin(), scratch_.begin() + static_cast<std::ptrdiff_t>(remaining - 1),
                     scratch_.end());
    double bound = partial;
    for (std::size_t r = 0; r < remaining; ++r) bound += scratch_[r];
    return bound;
  }

  bool Prunable(double bound) const {
    if (!found_) return false;
    const double slack = 1e-12 * std::max(1.0, std::fabs(best_value_));
    return bound > best_value_ + slack;
  }

  void Descend(std::size_t start, double partial) {
    if (chosen_.size() == k_) {
      const double value = SubgraphObjective(h_, chosen_);
      if (!found_ || value < best_value_) {
        found_ = true;
        best_value_ = value;
        best_ = chosen_;
      }
      return;
    }
    const std::size_t remaining = k_ - chosen_.size();
    if (dim_ - start < remaining) return;
    if (Prunable(LowerBound(start, partial))) return;

    for (std::size_t e = start; e + remaining <= dim_; ++e) {
      const double next_partial = partial + gain_[e];
      chosen_.push_back(e);
      for (std::size_t d = 0; d < dim_; ++d) gain_[d] += 2.0 * h_(Idx(d), Idx(e));
      Descend(e + 1, next_partial);
      for (std::size_t d = 0; d < dim_; ++d) gain_[d] -= 2.0 * h_(Idx(d), Idx(e));
      chosen_.pop_back();
    }
  }

  const Eigen::MatrixXd& h_;
  std::size_t dim_;
  std::size_t k_;
  std::vector<std::size_t> chosen_;
  std::vector<double> gain_;
  std::vector<double> scratch_;
  std::vector<std::size_t> best_;
  double best_value_ = 0.0;
  bool found_ = false;
};

void RequireExactLimit(std::size_t dim, std::size_t limit) {
  if (dim > limit) {
    Fail(ErrorKind::kLimit, "exact solver size limit: D = " + std::to_string(dim) + " exceeds " +
                                std::to_string(limit));
  }
}

// Calls visit(complement) for every size-k subset of [0, dim) in
// lexicographic order.
template <typename Visit>
void ForEachSubset(std::size_t dim, std::size_t k, Visit&& visit) {
  std::vector<std::size_t> idx(k);
  for (std::size_t r = 0; r < k; ++r) idx[r] = r;
  for (;;) {
    visit(std::span<const std::size_t>(idx));
    if (k == 0) return;
    std::size_t r = k;
    while (r > 0 && idx[r - 1] == dim - k + (r - 1)) --r;
    if (r == 0) return;
    ++idx[r - 1];
    for (std::size_t s = r; s < k; ++s) idx[s] = idx[s - 1] + 1;
  }
}

}  // namespace

SolverResult ExactMin(const Eigen::MatrixXd& h, std::size_t k, std::size_t limit) {
  ValidateSubgraphMatrix(h);
  const std::size_t dim = static_cast<std::size_t>(h.rows());
  RequireExactLimit(dim, limit);
  if (k > dim) {
    Fail(ErrorKind::kInvalidArgument,
         "k = " + std::to_string(k) + " out of range [0, " + std::to_string(dim) + "]");
  }
  BranchAndBound search(h, k);
  const std::vector<std::size_t> complement = search.Solve();

  SolverResult result;
  result.method = SolverMethod::kExact;
  result.dim = dim;
  std::vector<bool> in_complement(dim, false);
  for (std::size_t d : complement) in_complement[d] = true;
  for (std::size_t d = 0; d < dim; ++d) {
    if (!in_complement[d]) result.selected.push_back(d);
  }
  result.objective = SubgraphObjective(h, complement);
  return result;
}

double EtaMargin(const Eigen::MatrixXd& h, std::span<const std::size_t> s_star,
                 std::size_t limit) {
  ValidateSubgraphMatrix(h);
  const std::size_t dim = static_cast<std::size_t>(h.rows());
  RequireExactLimit(dim, limit);
  std::vector<bool> in_star(dim, false);
  for (std::size_t d : s_star) {
    Require(d < dim, "S* index " + std::to_string(d) + " out of range");
    Require(!in_star[d], "S* contains a duplicate index");
    in_star[d] = true;
  }
  const std::vector<std::size_t> star_complement = ComplementOf(dim, in_star);
  const std::size_t k = star_complement.size();
  const double reference = SubgraphObjective(h, star_complement);

  double eta = std::numeric_limits<double>::infinity();
  ForEachSubset(dim, k, [&](std::span<const std::size_t> candidate) {
    if (std::equal(candidate.begin(), candidate.end(), star_complement.begin())) return;
    eta = std::min(eta, SubgraphObjective(h, candidate) - reference);
  });
  return eta;
}

GreedyTrace GreedyScoreFunction(std::size_t dim,
                                const std::function<double(const std::vector<bool>&)>& objective) {
  Require(dim >= 1, "greedy scoring needs at least one feature");
  std::vector<bool> in_s(dim, false);
  double current = objective(in_s);
  GreedyTrace trace;
  trace.scores.assign(dim, 0.0);
  for (std::size_t it = 0; it < dim; ++it) {
    std::size_t best = dim;
    double best_value = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      if (in_s[d]) continue;
      in_s[d] = true;
      const double value = objective(in_s);
      in_s[d] = false;
      if (best == dim || value < best_value) {
        best = d;
        best_value = value;
      }
    }
    trace.scores[best] = (current - best_value) / static_cast<double>(dim - it);
    trace.order.push_back(best);
    in_s[best] = true;
    current = best_value;
  }
  return trace;
}

}  // namespace ksdiff
