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
#include <random>
#include <vector>

#include "baselines.hpp"
#include "error.hpp"
#include "rng.hpp"
#include "synth.hpp"

using namespace ksdiff;
using Mat = Eigen::MatrixXd;

namespace {

Dataset Normal(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> z;
  std::vector<std::vector<double>> rows(n, std::vector<double>(d));
  for (auto& r : rows) for (double& v : r) v = z(gen);
  return Dataset::FromRows(rows);
}

std::size_t ArgMax(const std::vector<double>& s) {
  return static_cast<std::size_t>(std::max_element(s.begin(), s.end()) - s.begin());
}

Mat Spd(std::size_t d, std::mt19937_64& gen) {
  std::normal_distribution<double> z;
  Mat a(d, d);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = z(gen);
  Mat s = a * a.transpose() + Mat::Identity(d, d);
  return 0.5 * (s + s.transpose());
}

}  // namespace

TEST_CASE("covariance uses 1/N and kappa grid spans 1e-4..1e1") {
  Dataset ds = Dataset::FromRows({{1, 0}, {3, 2}, {5, 1}});
  Mat c = EmpiricalCovariance(ds);
  // Column 0: mean 3, deviations -2,0,2 -> 8/3.
  CHECK(c(0, 0) == doctest::Approx(8.0 / 3.0));
  CHECK(c(0, 1) == doctest::Approx((-2.0 * -1 + 0 + 2.0 * 0) / 3.0));
  auto grid = KappaGrid();
  REQUIRE(grid.size() == 11);
  CHECK(grid.front() == doctest::Approx(1e-4));
  CHECK(grid.back() == doctest::Approx(10.0));
  for (std::size_t i = 1; i < grid.size(); ++i) {
    CHECK(grid[i] / grid[i - 1] == doctest::Approx(std::sqrt(10.0)));
  }
}

TEST_CASE("precision cv on standard normal data approaches identity") {
  auto est = EstimatePrecisionCv(Normal(10000, 2, 1), 5);
  CHECK((est.precision - Mat::Identity(2, 2)).norm() < 0.1);
  CHECK(est.cv_log_likelihood.size() == 11);
  const auto grid = KappaGrid();
  CHECK(std::find(grid.begin(), grid.end(), est.kappa) != grid.end());
}

TEST_CASE("precision cv picks the grid maximizer of the held-out likelihood") {
  auto est = EstimatePrecisionCv(Normal(60, 4, 2), 9);
  const auto best = std::max_element(est.cv_log_likelihood.begin(), est.cv_log_likelihood.end());
  CHECK(est.kappa == KappaGrid()[static_cast<std::size_t>(best - est.cv_log_likelihood.begin())]);
  const Mat expected = (est.covariance + est.kappa * Mat::Identity(4, 4)).inverse();
  CHECK((est.precision - expected).norm() < 1e-9);
}

TEST_CASE("precision cv with a constant column") {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 30; ++i) rows.push_back({std::sin(i * 1.3), 2.0});
  auto est = EstimatePrecisionCv(Dataset::FromRows(rows), 1);
  Eigen::LLT<Mat> llt(est.precision);
  CHECK(llt.info() == Eigen::Success);
}

TEST_CASE("precision cv is deterministic and needs three rows") {
  Dataset ds = Normal(40, 3, 3);
  auto a = EstimatePrecisionCv(ds, 11);
  auto b = EstimatePrecisionCv(ds, 11);
  CHECK(a.kappa == b.kappa);
  CHECK(a.precision == b.precision);
  CHECK_THROWS_AS(EstimatePrecisionCv(Normal(2, 3, 3), 0), Error);
}

TEST_CASE("MT: identity trace gives all-zero scores") {
  std::mt19937_64 gen(4);
  Mat c = Spd(5, gen);
  for (double s : MtScoreFromMoments(c, c)) CHECK(std::abs(s) < 1e-12);
}

TEST_CASE("MT: scalar closed form") {
  Mat g(1, 1), c(1, 1);
  g << 3.0;
  c << 2.0;
  const std::vector<std::size_t> empty_s{0};
  CHECK(MtObjective(g, c, empty_s) == doctest::Approx(std::abs(1.0 - 1.5)));
  CHECK(MtObjective(g, c, std::vector<std::size_t>{}) == 0.0);
  auto s = MtScoreFromMoments(g, c);
  CHECK(s[0] == doctest::Approx(0.5));
}

TEST_CASE("MT: objective matches a direct trace") {
  std::mt19937_64 gen(5);
  Mat c = Spd(6, gen), g = Spd(6, gen);
  std::vector<std::size_t> sub{0, 2, 5};
  Mat cs(3, 3), gs(3, 3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      cs(a, b) = c(sub[a], sub[b]);
      gs(a, b) = g(sub[a], sub[b]);
    }
  const double expected = std::abs(3.0 - (gs * cs.inverse()).trace());
  CHECK(MtObjective(g, c, sub) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("MT: singular submatrix reports the subset") {
  Mat c = Mat::Zero(2, 2);
  c(0, 0) = -1.0;  // cannot be rescued by a tiny ridge
  Mat g = Mat::Identity(2, 2);
  try {
    MtObjective(g, c, std::vector<std::size_t>{0, 1});
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNumeric);
    CHECK(std::string(e.what()).find("{0,1}") != std::string::npos);
  }
}

TEST_CASE("MT detects a mean shift") {
  int hits = 0;
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    Dataset p = Normal(1000, 10, 100 + rep);
    Dataset q0 = Normal(1000, 10, 200 + rep);
    PerturbationSpec spec;
    spec.kind = PerturbationKind::kMeanShift;
    spec.c = 1.0;
    spec.targets = {3};
    Dataset q = Perturb(q0, spec);
    if (ArgMax(MtScore(p, q, rep)) == 3) ++hits;
  }
  CHECK(hits >= 15);
}

TEST_CASE("Ide'09: identical precisions give zero scores") {
  std::mt19937_64 gen(6);
  Mat prec = Spd(4, gen);
  for (double s : Ide09ScoreFromPrecisions(prec, prec)) CHECK(std::abs(s) < 1e-12);
}

TEST_CASE("Ide'09: D = 2 scalar evaluation of the partition formula") {
  Mat lp(2, 2), lq(2, 2);
  lp << 2.0, 0.5, 0.5, 1.0;
  lq << 1.5, -0.3, -0.3, 2.5;
  // Hand partition for feature d with other feature o: ell = Lambda(o,d),
  // lambda = Lambda(d,d), W = Sigma(o,o), w = Sigma(o,d), sigma = Sigma(d,d).
  auto inv2 = [](const Mat& m) {
    const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    Mat r(2, 2);
    r << m(1, 1) / det, -m(0, 1) / det, -m(1, 0) / det, m(0, 0) / det;
    return r;
  };
  auto directional = [&](const Mat& a, const Mat& b, int d) {
    const int o = 1 - d;
    const Mat sa = inv2(a);
    const double ell_a = a(o, d), ell_b = b(o, d);
    const double lam_a = a(d, d), lam_b = b(d, d);
    const double big_w = sa(o, o), w = sa(o, d), sig = sa(d, d);
    return w * (ell_b - ell_a) +
           0.5 * (ell_b * big_w * ell_b / lam_b - ell_a * big_w * ell_a / lam_a) +
           0.5 * (std::log(lam_a / lam_b) + sig * (lam_a - lam_b));
  };
  auto s = Ide09ScoreFromPrecisions(lp, lq);
  for (int d = 0; d < 2; ++d) {
    const double expected = std::max(directional(lp, lq, d), directional(lq, lp, d));
    CHECK(s[d] == doctest::Approx(expected).epsilon(1e-12));
  }
  CHECK_THROWS_AS(Ide09ScoreFromPrecisions(Mat::Identity(1, 1), Mat::Identity(1, 1)), Error);
}

TEST_CASE("Ide'09: permutation equivariance and symmetry in P, Q") {
  std::mt19937_64 gen(7);
  Mat a = Spd(5, gen), b = Spd(5, gen);
  std::vector<int> perm{3, 0, 4, 1, 2};
  Mat ap(5, 5), bp(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      ap(i, j) = a(perm[i], perm[j]);
      bp(i, j) = b(perm[i], perm[j]);
    }
  auto s = Ide09ScoreFromPrecisions(a, b);
  auto sp = Ide09ScoreFromPrecisions(ap, bp);
  auto swapped = Ide09ScoreFromPrecisions(b, a);
  for (int i = 0; i < 5; ++i) {
    CHECK(sp[i] == doctest::Approx(s[perm[i]]).epsilon(1e-10));
    CHECK(swapped[i] == doctest::Approx(s[i]).epsilon(1e-12));
  }
  Dataset p = Normal(80, 4, 8), q = Normal(90, 4, 9);
  auto d1 = Ide09Score(p, q, 3);
  auto d2 = Ide09Score(p, q, 3);
  CHECK(d1 == d2);
}

TEST_CASE("Hara'15 matrix and scores") {
  Dataset p = Normal(50, 4, 10), q = Normal(70, 4, 11);
  for (auto mode : {Hara15Mode::kCovariance, Hara15Mode::kPrecision}) {
    CHECK(Hara15Matrix(p, p, mode, 1).isZero(0.0));
    for (double s : Hara15Score(p, p, mode, 1)) CHECK(s == 0.0);
    Mat h = Hara15Matrix(p, q, mode, 1);
    CHECK(h == h.transpose());
    CHECK(h.minCoeff() >= 0.0);
  }
  Mat expected = (EmpiricalCovariance(p) - EmpiricalCovariance(q)).cwiseAbs();
  CHECK(Hara15Matrix(p, q, Hara15Mode::kCovariance, 0) == expected);
  CHECK(ParseHara15Mode("precision") == Hara15Mode::kPrecision);
  CHECK_THROWS_AS(ParseHara15Mode("x"), Error);
  CHECK_THROWS_AS(Hara15Score(p, Normal(5, 3, 1), Hara15Mode::kCovariance, 0), Error);
}

TEST_CASE("Hara'15 finds the changed feature of example 1 at N = 1e4") {
  int hits = 0;
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    auto pair = GenExample1(10000, DeriveSeed(2024, {rep}));
    auto s = Hara15Score(pair.p, pair.q, Hara15Mode::kCovariance, 0);
    if (ArgMax(s) == pair.truth.changed[0]) ++hits;
  }
  CHECK(hits >= 18);
}
