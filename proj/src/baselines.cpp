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

#include "baselines.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "error.hpp"
#include "rng.hpp"
#include "solvers.hpp"

namespace ksdiff {

namespace {

using Index = Eigen::Index;

Index Idx(std::size_t v) { return static_cast<Index>(v); }

void Symmetrize(Eigen::MatrixXd& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = i + 1; j < m.cols(); ++j) {
      const double v = 0.5 * (m(i, j) + m(j, i));
      m(i, j) = v;
      m(j, i) = v;
    }
  }
}

Eigen::MatrixXd Scatter(const Eigen::MatrixXd& x, const Eigen::VectorXd& center) {
  const Eigen::MatrixXd centered = x.rowwise() - center.transpose();
  Eigen::MatrixXd s = (centered.transpose() * centered) / static_cast<double>(x.rows());
  Symmetrize(s);
  return s;
}

Eigen::MatrixXd RidgeInverse(const Eigen::MatrixXd& cov, double kappa) {
  const Index d = cov.rows();
  Eigen::LLT<Eigen::MatrixXd> llt(cov + kappa * Eigen::MatrixXd::Identity(d, d));
  if (llt.info() != Eigen::Success) {
    Fail(ErrorKind::kNumeric, "ridge-regularized covariance is not positive definite");
  }
  Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(d, d));
  Symmetrize(inv);
  return inv;
}

}  // namespace

Eigen::MatrixXd ToMatrix(const Dataset& ds) {
  Eigen::MatrixXd x(Idx(ds.rows()), Idx(ds.cols()));
  for (std::size_t c = 0; c < ds.cols(); ++c) {
    const auto col = ds.column(c);
    for (std::size_t r = 0; r < ds.rows(); ++r) x(Idx(r), Idx(c)) = col[r];
  }
  return x;
}

Eigen::VectorXd ColumnMeans(const Dataset& ds) { return ToMatrix(ds).colwise().mean(); }

Eigen::MatrixXd EmpiricalCovariance(const Dataset& ds) {
  const Eigen::MatrixXd x = ToMatrix(ds);
  return Scatter(x, x.colwise().mean().transpose());
}

std::vector<double> KappaGrid() {
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(std::pow(10.0, -4.0 + 0.5 * i));
  return grid;
}

PrecisionEstimate EstimatePrecisionCv(const Dataset& ds, std::uint64_t fold_seed) {
  const std::size_t n = ds.rows();
  if (n < 3) Fail(ErrorKind::kInvalidArgument, "precision cross validation needs at least 3 rows");
  const Eigen::MatrixXd x = ToMatrix(ds);
  const Index dim = x.cols();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  SplitMix64 rng(DeriveSeed(fold_seed, {0xf01d5ULL}));
  for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng.Below(i + 1)]);

  constexpr std::size_t kFolds = 3;
  const std::vector<double> grid = KappaGrid();
  std::vector<double> total(grid.size(), 0.0);
  const double log_two_pi = std::log(2.0 * std::numbers::pi);

  for (std::size_t fold = 0; fold < kFolds; ++fold) {
    const std::size_t lo = fold * n / kFolds;
    const std::size_t hi = (fold + 1) * n / kFolds;
    Eigen::MatrixXd train(Idx(n - (hi - lo)), dim);
    Eigen::MatrixXd test(Idx(hi - lo), dim);
    for (std::size_t r = 0, tr = 0, te = 0; r < n; ++r) {
      if (r >= lo && r < hi) {
        test.row(Idx(te++)) = x.row(Idx(order[r]));
      } else {
        train.row(Idx(tr++)) = x.row(Idx(order[r]));
      }
    }
    const Eigen::VectorXd mu = train.colwise().mean().transpose();
    const Eigen::MatrixXd cov = Scatter(train, mu);
    const Eigen::MatrixXd centered = test.rowwise() - mu.transpose();
    for (std::size_t g = 0; g < grid.size(); ++g) {
      Eigen::LLT<Eigen::MatrixXd> llt(cov + grid[g] * Eigen::MatrixXd::Identity(dim, dim));
      if (llt.info() != Eigen::Success) {
        total[g] = -std::numeric_limits<double>::infinity();
        continue;
      }
      const Eigen::MatrixXd lower = llt.matrixL();
      const double log_det_cov = 2.0 * lower.diagonal().array().log().sum();
      // Mahalanobis terms via triangular solves: ||L^-1 (x - mu)||^2.
      const Eigen::MatrixXd whitened = llt.matrixL().solve(centered.transpose());
      const double quad = whitened.squaredNorm();
      total[g] += -0.5 * quad - 0.5 * static_cast<double>(test.rows()) *
                                    (log_det_cov + static_cast<double>(dim) * log_two_pi);
    }
  }

  PrecisionEstimate est;
  est.cv_log_likelihood.resize(grid.size());
  std::size_t best = 0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    est.cv_log_likelihood[g] = total[g] / static_cast<double>(n);
    if (est.cv_log_likelihood[g] > est.cv_log_likelihood[best]) best = g;
  }
  est.kappa = grid[best];
  est.covariance = Scatter(x, x.colwise().mean().transpose());
  est.precision = RidgeInverse(est.covariance, est.kappa);
  return est;
}

GaussianSummaries Summarize(const Dataset& p, const Dataset& q, std::uint64_t fold_seed) {
  RequireSameSchema(p, q);
  GaussianSummaries s;
  const PrecisionEstimate ep = EstimatePrecisionCv(p, DeriveSeed(fold_seed, {0}));
  const PrecisionEstimate eq = EstimatePrecisionCv(q, DeriveSeed(fold_seed, {1}));
  s.mean_p = ColumnMeans(p);
  s.mean_q = ColumnMeans(q);
  s.cov_p = ep.covariance;
  s.cov_q = eq.covariance;
  s.prec_p = ep.precision;
  s.prec_q = eq.precision;
  s.kappa_p = ep.kappa;
  s.kappa_q = eq.kappa;
  return s;
}

double MtObjective(const Eigen::MatrixXd& gamma, const Eigen::MatrixXd& c,
                   std::span<const std::size_t> complement) {
  const Index m = Idx(complement.size());
  if (m == 0) return 0.0;
  Eigen::MatrixXd cs(m, m);
  Eigen::MatrixXd gs(m, m);
  for (Index a = 0; a < m; ++a) {
    for (Index b = 0; b < m; ++b) {
      cs(a, b) = c(Idx(complement[a]), Idx(complement[b]));
      gs(a, b) = gamma(Idx(complement[a]), Idx(complement[b]));
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cs);
  if (llt.info() != Eigen::Success) {
    const double ridge = 1e-10 * std::max(1.0, cs.diagonal().cwiseAbs().maxCoeff());
    llt.compute(cs + ridge * Eigen::MatrixXd::Identity(m, m));
    if (llt.info() != Eigen::Success) {
      std::string subset;
      for (std::size_t d : complement) subset += (subset.empty() ? "" : ",") + std::to_string(d);
      Fail(ErrorKind::kNumeric, "MT: singular submatrix for subset {" + subset + "}");
    }
  }
  const double trace = llt.solve(gs).trace();
  return std::fabs(static_cast<double>(m) - trace);
}

std::vector<double> MtScoreFromMoments(const Eigen::MatrixXd& gamma, const Eigen::MatrixXd& c) {
  Require(gamma.rows() == gamma.cols() && c.rows() == c.cols() && gamma.rows() == c.rows() &&
              gamma.rows() >= 1,
          "MT moment matrices must be square with equal size");
  const std::size_t dim = static_cast<std::size_t>(c.rows());
  std::vector<std::size_t> complement;
  const GreedyTrace trace = GreedyScoreFunction(dim, [&](const std::vector<bool>& in_s) {
    complement.clear();
    for (std::size_t d = 0; d < dim; ++d) {
      if (!in_s[d]) complement.push_back(d);
    }
    return MtObjective(gamma, c, complement);
  });
  return trace.scores;
}

std::vector<double> MtScore(const Dataset& p, const Dataset& q, std::uint64_t fold_seed) {
  RequireSameSchema(p, q);
  const PrecisionEstimate ep = EstimatePrecisionCv(p, DeriveSeed(fold_seed, {0}));
  const Index dim = Idx(p.cols());
  const Eigen::MatrixXd c = ep.covariance + ep.kappa * Eigen::MatrixXd::Identity(dim, dim);
  const Eigen::MatrixXd gamma = Scatter(ToMatrix(q), ColumnMeans(p));
  return MtScoreFromMoments(gamma, c);
}

double Ide09Directional(const Eigen::MatrixXd& prec_p, const Eigen::MatrixXd& cov_p,
                        const Eigen::MatrixXd& prec_q, std::size_t d) {
  const Index dim = prec_p.rows();
  std::vector<Index> others;
  for (Index i = 0; i < dim; ++i) {
    if (i != Idx(d)) others.push_back(i);
  }
  const Index m = Idx(others.size());
  Eigen::VectorXd ell_p(m), ell_q(m), w_p(m);
  Eigen::MatrixXd big_w_p(m, m);
  for (Index a = 0; a < m; ++a) {
    ell_p(a) = prec_p(others[a], Idx(d));
    ell_q(a) = prec_q(others[a], Idx(d));
    w_p(a) = cov_p(others[a], Idx(d));
    for (Index b = 0; b < m; ++b) big_w_p(a, b) = cov_p(others[a], others[b]);
  }
  const double lambda_p = prec_p(Idx(d), Idx(d));
  const double lambda_q = prec_q(Idx(d), Idx(d));
  const double sigma_p = cov_p(Idx(d), Idx(d));

  const double linear = w_p.dot(ell_q - ell_p);
  const double quadratic = 0.5 * (ell_q.dot(big_w_p * ell_q) / lambda_q -
                                   ell_p.dot(big_w_p * ell_p) / lambda_p);
  const double diagonal = 0.5 * (std::log(lambda_p / lambda_q) + sigma_p * (lambda_p - lambda_q));
  return linear + quadratic + diagonal;
}

std::vector<double> Ide09ScoreFromPrecisions(const Eigen::MatrixXd& prec_p,
                                             const Eigen::MatrixXd& prec_q) {
  Require(prec_p.rows() == prec_p.cols() && prec_q.rows() == prec_q.cols() &&
              prec_p.rows() == prec_q.rows(),
          "Ide'09 precision matrices must be square with equal size");
  Require(prec_p.rows() >= 2, "Ide'09 needs at least two features");
  const Index dim = prec_p.rows();
  auto invert = [dim](const Eigen::MatrixXd& prec) {
    Eigen::LLT<Eigen::MatrixXd> llt(prec);
    if (llt.info() != Eigen::Success) {
      Fail(ErrorKind::kNumeric, "Ide'09: precision matrix is not positive definite");
    }
    Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(dim, dim));
    Symmetrize(inv);
    return inv;
  };
  const Eigen::MatrixXd cov_p = invert(prec_p);
  const Eigen::MatrixXd cov_q = invert(prec_q);
  std::vector<double> scores(static_cast<std::size_t>(dim));
  for (std::size_t d = 0; d < scores.size(); ++d) {
    scores[d] = std::max(Ide09Directional(prec_p, cov_p, prec_q, d),
                         Ide09Directional(prec_q, cov_q, prec_p, d));
  }
  return scores;
}

std::vector<double> Ide09Score(const Dataset& p, const Dataset& q, std::uint64_t fold_seed) {
  const GaussianSummaries s = Summarize(p, q, fold_seed);
  return Ide09ScoreFromPrecisions(s.prec_p, s.prec_q);
}

std::string_view Hara15ModeName(Hara15Mode mode) {
  return mode == Hara15Mode::kPrecision ? "precision" : "covariance";
}

Hara15Mode ParseHara15Mode(std::string_view name) {
  if (name == "covariance") return Hara15Mode::kCovariance;
  if (name == "precision") return Hara15Mode::kPrecision;
  Fail(ErrorKind::kInvalidArgument, "unknown Hara'15 mode '" + std::string(name) + "'");
}

Eigen::MatrixXd Hara15Matrix(const Dataset& p, const Dataset& q, Hara15Mode mode,
                             std::uint64_t fold_seed) {
  RequireSameSchema(p, q);
  Eigen::MatrixXd diff;
  if (mode == Hara15Mode::kCovariance) {
    diff = (EmpiricalCovariance(p) - EmpiricalCovariance(q)).cwiseAbs();
  } else {
    const GaussianSummaries s = Summarize(p, q, fold_seed);
    diff = (s.prec_p - s.prec_q).cwiseAbs();
  }
  return diff;
}

std::vector<double> Hara15Score(const Dataset& p, const Dataset& q, Hara15Mode mode,
                                std::uint64_t fold_seed) {
  return GreedyScore(Hara15Matrix(p, q, mode, fold_seed)).scores;
}

}  // namespace ksdiff
