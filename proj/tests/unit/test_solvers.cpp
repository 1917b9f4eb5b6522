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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "error.hpp"
#include "oracles.hpp"
#include "solvers.hpp"

using namespace ksdiff;
using Mat = Eigen::MatrixXd;

namespace {

Mat Example3() {
  Mat h(3, 3);
  h << 0, 0, 0, 0, 1, 1, 0, 1, 1;
  return h;
}

double Total(const Mat& h) { return h.sum(); }

}  // namespace

TEST_CASE("objective boundary values") {
  std::mt19937_64 gen(1);
  Mat h = oracle::RandomSymmetric(6, gen);
  std::vector<std::size_t> all{0, 1, 2, 3, 4, 5};
  CHECK(SubgraphObjective(h, all) == doctest::Approx(Total(h)));
  CHECK(SubgraphObjective(h, std::vector<std::size_t>{}) == 0.0);
  // Nonincreasing as S grows: dropping an element from the complement.
  std::vector<std::size_t> c{0, 2, 3, 5};
  std::vector<std::size_t> smaller{0, 3, 5};
  CHECK(SubgraphObjective(h, smaller) <= SubgraphObjective(h, c));
}

TEST_CASE("greedy_k examples") {
  auto zero = GreedyK(Mat::Zero(3, 3), 2);
  CHECK(zero.selected == std::vector<std::size_t>{0});
  CHECK(zero.objective == 0.0);

  // Oracle: exhaustive enumeration of size-2 complements gives minimum 1.
  const Mat h = Example3();
  CHECK(oracle::MinOverComplements(h, 2).best == 1.0);
  auto r = GreedyK(h, 2);
  CHECK(r.selected == std::vector<std::size_t>{1});
  CHECK(r.objective == 1.0);

  auto none = GreedyK(h, 3);
  CHECK(none.selected.empty());
  CHECK(none.objective == Total(h));

  CHECK_THROWS_AS(GreedyK(h, 4), Error);
}

TEST_CASE("greedy_k invariants and bookkeeping match direct re-evaluation") {
  std::mt19937_64 gen(2);
  for (int t = 0; t < 50; ++t) {
    const std::size_t d = 2 + gen() % 9;
    Mat h = oracle::RandomSymmetric(d, gen);
    for (std::size_t k = 0; k <= d; ++k) {
      auto r = GreedyK(h, k);
      CHECK(r.selected.size() == d - k);
      std::vector<std::size_t> sorted = r.selected;
      std::sort(sorted.begin(), sorted.end());
      CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
      CHECK(r.objective == oracle::Objective(h, r.Complement()));

      // Re-run the greedy step with direct evaluation of f at every candidate.
      std::vector<std::size_t> complement(d);
      std::iota(complement.begin(), complement.end(), std::size_t{0});
      std::vector<std::size_t> order;
      for (std::size_t it = 0; it < d - k; ++it) {
        double best = INFINITY;
        std::size_t arg = d;
        for (std::size_t cand : complement) {
          std::vector<std::size_t> rest;
          for (std::size_t e : complement) if (e != cand) rest.push_back(e);
          const double v = oracle::Objective(h, rest);
          if (v < best - 1e-12) {
            best = v;
            arg = cand;
          }
        }
        order.push_back(arg);
        complement.erase(std::find(complement.begin(), complement.end(), arg));
      }
      CHECK(r.selected == order);
    }
  }
}

TEST_CASE("greedy_score examples") {
  auto zero = GreedyScore(Mat::Zero(4, 4));
  for (double s : zero.scores) CHECK(s == 0.0);

  // D = 2, H = diag(1, 0). Removing feature 0 drops f from 1 to 0, removing
  // feature 1 leaves f at 1, so the argmin step takes feature 0 first with
  // score (1 - 0) / 2, then feature 1 with score (0 - 0) / 1.
  Mat h(2, 2);
  h << 1, 0, 0, 0;
  auto r = GreedyScore(h);
  CHECK(r.selected == std::vector<std::size_t>{0, 1});
  CHECK(r.scores[0] == 0.5);
  CHECK(r.scores[1] == 0.0);
}

TEST_CASE("greedy_score telescopes to f(empty) and is nonnegative") {
  std::mt19937_64 gen(3);
  for (int t = 0; t < 100; ++t) {
    const std::size_t d = 1 + gen() % 15;
    Mat h = oracle::RandomSymmetric(d, gen);
    auto r = GreedyScore(h);
    double sum = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const std::size_t feature = r.selected[i];
      CHECK(r.scores[feature] >= 0.0);
      sum += r.scores[feature] * static_cast<double>(d - i);
    }
    CHECK(sum == doctest::Approx(Total(h)).epsilon(1e-10));
  }
}

TEST_CASE("greedy_score is permutation equivariant") {
  std::mt19937_64 gen(4);
  for (int t = 0; t < 30; ++t) {
    const std::size_t d = 8;
    Mat h = oracle::RandomSymmetric(d, gen);
    std::vector<std::size_t> perm(d);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), gen);
    Mat hp(d, d);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) hp(i, j) = h(perm[i], perm[j]);
    }
    auto a = GreedyScore(h);
    auto b = GreedyScore(hp);
    // Continuous random entries make ties improbable, so scores must follow.
    for (std::size_t i = 0; i < d; ++i) {
      CHECK(b.scores[i] == doctest::Approx(a.scores[perm[i]]).epsilon(1e-12));
    }
  }
}

TEST_CASE("exact_min examples") {
  auto zero = ExactMin(Mat::Zero(5, 5), 3);
  CHECK(zero.objective == 0.0);
  CHECK(zero.Complement() == std::vector<std::size_t>{0, 1, 2});

  auto r = ExactMin(Example3(), 2);
  CHECK(r.objective == 1.0);
  CHECK(r.Complement() == std::vector<std::size_t>{0, 1});

  CHECK(ExactMin(Example3(), 0).objective == 0.0);
  CHECK(ExactMin(Example3(), 3).objective == Total(Example3()));
  CHECK_THROWS_AS(ExactMin(Example3(), 4), Error);
}

TEST_CASE("exact_min size limit") {
  try {
    ExactMin(Mat::Zero(26, 26), 3);
    FAIL("expected limit error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kLimit);
    CHECK(std::string(e.what()).find("exact solver size limit") != std::string::npos);
  }
  CHECK_NOTHROW(ExactMin(Mat::Zero(26, 26), 3, 30));
}

TEST_CASE("exact_min equals pruning-free enumeration") {
  std::mt19937_64 gen(5);
  for (int t = 0; t < 40; ++t) {
    Mat h = oracle::RandomSymmetric(10, gen);
    // Integer-valued copies create ties that exercise the lexicographic rule.
    Mat hi = (h * 3.0).array().floor().matrix();
    for (const Mat* m : {&h, &hi}) {
      for (std::size_t k = 0; k <= 10; ++k) {
        auto r = ExactMin(*m, k);
        auto o = oracle::MinOverComplements(*m, k);
        CHECK(r.objective == o.best);
        CHECK(r.Complement() == o.argmin);
      }
    }
  }
}

TEST_CASE("greedy attains 1 - 1/e of the exact improvement") {
  std::mt19937_64 gen(6);
  int violations = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t d = 4 + gen() % 9;  // up to 12
    Mat h = oracle::RandomSymmetric(d, gen);
    const double f_empty = Total(h);
    for (std::size_t k = 1; k < d; ++k) {
      const double greedy = f_empty - GreedyK(h, k).objective;
      const double exact = f_empty - oracle::MinOverComplements(h, k).best;
      if (greedy < (1.0 - std::exp(-1.0)) * exact - 1e-12) ++violations;
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("positive scaling keeps the argmin") {
  std::mt19937_64 gen(7);
  for (int t = 0; t < 20; ++t) {
    Mat h = oracle::RandomSymmetric(9, gen);
    for (double c : {0.25, 3.0, 1e3}) {
      for (std::size_t k : {2u, 5u, 7u}) {
        CHECK(GreedyK(c * h, k).selected == GreedyK(h, k).selected);
        auto a = ExactMin(h, k);
        auto b = ExactMin(c * h, k);
        CHECK(a.Complement() == b.Complement());
        CHECK(b.objective == doctest::Approx(c * a.objective).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("eta_margin examples and oracle") {
  const std::vector<std::size_t> s_star{2};  // S*^c = {0, 1}
  CHECK(EtaMargin(Mat::Zero(3, 3), s_star) == 0.0);
  CHECK(EtaMargin(Example3(), s_star) == 0.0);
  Mat diag = Mat::Zero(3, 3);
  diag(2, 2) = 1.0;
  CHECK(oracle::EtaBruteForce(diag, {0, 1}) == 1.0);
  CHECK(EtaMargin(diag, s_star) == 1.0);
  // Only one size-0 complement: no competitor.
  CHECK(std::isinf(EtaMargin(diag, std::vector<std::size_t>{0, 1, 2})));

  std::mt19937_64 gen(8);
  for (int t = 0; t < 30; ++t) {
    Mat h = oracle::RandomSymmetric(8, gen);
    std::vector<std::size_t> star{1, 4, 6};
    CHECK(EtaMargin(h, star) == oracle::EtaBruteForce(h, {0, 2, 3, 5, 7}));
  }
  CHECK_THROWS_AS(EtaMargin(diag, std::vector<std::size_t>{3}), Error);
  CHECK_THROWS_AS(EtaMargin(diag, std::vector<std::size_t>{1, 1}), Error);
}

TEST_CASE("matrix validation") {
  Mat asym(2, 2);
  asym << 0, 1, 0.5, 0;
  CHECK_THROWS_AS(GreedyScore(asym), Error);
  Mat neg(1, 1);
  neg << -1;
  CHECK_THROWS_AS(GreedyK(neg, 0), Error);
  CHECK_THROWS_AS(GreedyScore(Mat(0, 0)), Error);
  CHECK(ParseSolverMethod("exact") == SolverMethod::kExact);
  CHECK(SolverMethodName(SolverMethod::kGreedyK) == "greedy-k");
  CHECK_THROWS_AS(ParseSolverMethod("cplex"), Error);
}

TEST_CASE("generic greedy scoring on the subgraph objective matches GreedyScore") {
  std::mt19937_64 gen(9);
  Mat h = oracle::RandomSymmetric(7, gen);
  auto trace = GreedyScoreFunction(7, [&](const std::vector<bool>& in_s) {
    std::vector<std::size_t> c;
    for (std::size_t d = 0; d < 7; ++d) if (!in_s[d]) c.push_back(d);
    return oracle::Objective(h, c);
  });
  auto r = GreedyScore(h);
  CHECK(trace.order == r.selected);
  for (std::size_t d = 0; d < 7; ++d) {
    CHECK(trace.scores[d] == doctest::Approx(r.scores[d]).epsilon(1e-12));
  }
}
