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

#ifndef KSDIFF_BASELINES_HPP_
#define KSDIFF_BASELINES_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "dataset.hpp"

namespace ksdiff {

// Gaussian baselines: a simplified MT, Ide'09 and Hara'15, all built on
// empirical moments and Tikhonov-regularized precision matrices.

Eigen::MatrixXd ToMatrix(const Dataset& ds);  // N x D
Eigen::VectorXd ColumnMeans(const Dataset& ds);
// Maximum-likelihood (1/N) covariance, exactly symmetric.
Eigen::MatrixXd EmpiricalCovariance(const Dataset& ds);

// 11 log-spaced ridge candidates 1e-4, 10^-3.5, ..., 1e1.
std::vector<double> KappaGrid();

struct PrecisionEstimate {
  Eigen::MatrixXd precision;   // (Sigma + kappa I)^-1
  Eigen::MatrixXd covariance;  // Sigma
  double kappa = 0.0;
  std::vector<double> cv_log_likelihood;  // one per grid entry
};

// Three-fold cross validation over KappaGrid(). Rows are shuffled with
// `fold_seed` and cut into three contiguous folds; the kappa with the highest
// mean held-out Gaussian log-likelihood wins (smallest kappa on ties).
PrecisionEstimate EstimatePrecisionCv(const Dataset& ds, std::uint64_t fold_seed);

struct GaussianSummaries {
  Eigen::VectorXd mean_p, mean_q;
  Eigen::MatrixXd cov_p, cov_q;
  Eigen::MatrixXd prec_p, prec_q;
  double kappa_p = 0.0;
  double kappa_q = 0.0;
};

GaussianSummaries Summarize(const Dataset& p, const Dataset& q, std::uint64_t fold_seed);

// MT: greedy scoring of f(S) = | |S^c| - tr(Gamma_{S^c} C_{S^c}^-1) | where
// Gamma is the scatter of Q about the mean of P and C = Sigma_P + kappa I.
std::vector<double> MtScore(const Dataset& p, const Dataset& q, std::uint64_t fold_seed);
std::vector<double> MtScoreFromMoments(const Eigen::MatrixXd& gamma, const Eigen::MatrixXd& c);
double MtObjective(const Eigen::MatrixXd& gamma, const Eigen::MatrixXd& c,
                   std::span<const std::size_t> complement);

// Ide'09: s_d = max(s_d^PQ, s_d^QP) from the partition of each precision
// matrix and its inverse around feature d.
std::vector<double> Ide09Score(const Dataset& p, const Dataset& q, std::uint64_t fold_seed);
std::vector<double> Ide09ScoreFromPrecisions(const Eigen::MatrixXd& prec_p,
                                             const Eigen::MatrixXd& prec_q);
double Ide09Directional(const Eigen::MatrixXd& prec_p, const Eigen::MatrixXd& cov_p,
                        const Eigen::MatrixXd& prec_q, std::size_t d);

enum class Hara15Mode { kCovariance, kPrecision };
std::string_view Hara15ModeName(Hara15Mode mode);
Hara15Mode ParseHara15Mode(std::string_view name);

// |Sigma_P - Sigma_Q| (or |Lambda_P - Lambda_Q|), elementwise.
Eigen::MatrixXd Hara15Matrix(const Dataset& p, const Dataset& q, Hara15Mode mode,
                             std::uint64_t fold_seed);
std::vector<double> Hara15Score(const Dataset& p, const Dataset& q, Hara15Mode mode,
                                std::uint64_t fold_seed);

}  // namespace ksdiff

#endif  // KSDIFF_BASELINES_HPP_
