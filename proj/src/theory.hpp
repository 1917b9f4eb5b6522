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

#ifndef KSDIFF_THEORY_HPP_
#define KSDIFF_THEORY_HPP_

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "solvers.hpp"

namespace ksdiff {

// Identifiability conditions for one changed feature d, each tested as
// "entry > tolerance":
//   N1 / S1: H_dd > 0
//   N2: some d' != d has H_dd' > 0
//   S2: every d' != d has H_dd' > 0
struct FeatureConditions {
  std::size_t feature = 0;
  bool n1 = false;
  bool n2 = false;
  bool s1 = false;
  bool s2 = false;
};

struct ConsistencyReport {
  std::size_t k = 0;  // |S*^c|
  double tolerance = 0.0;
  std::vector<FeatureConditions> features;
  bool necessary_holds = false;   // (N1 or N2) for every d in S*
  bool sufficient_holds = false;  // (S1 or S2) for every d in S*
  bool eta_computed = false;
  double eta = 0.0;
};

inline constexpr double kAnalyticTolerance = 1e-9;

// Evaluates the conditions for every d in S* and, when requested, the margin
// eta by brute force (D must not exceed `limit`).
ConsistencyReport CheckConditions(const Eigen::MatrixXd& h, std::span<const std::size_t> s_star,
                                  double tolerance, bool compute_eta = true,
                                  std::size_t limit = kDefaultExactLimit);

struct SampleBound {
  std::size_t k = 0;
  double eta = 0.0;
  std::size_t dim = 0;
  double epsilon = 0.0;
  std::uint64_t n_required = 0;  // ceil(8 k^4 / eta^2 * log(12 D / eps))
  std::uint64_t l_required = 0;  // ceil(8 k^4 / eta^2 * log(3 D (D-1) / eps))
  // The sample-size term driven by C_{eta/2k^2} depends on density constants
  // that cannot be estimated from data and is left out of n_required.
  static constexpr const char* kOmittedTerm =
      "max{., 1/C_(eta/2k^2) * log(D/eps)}: distribution-dependent, omitted";
};

SampleBound ComputeSampleBound(std::size_t k, double eta, std::size_t dim, double epsilon);

struct RecoveryOutcome {
  std::size_t trials = 0;
  std::size_t successes = 0;
  double rate = 0.0;
  double eta = 0.0;
  double radius = 0.0;             // eta / (2 k^2)
  bool guarantee_applies = false;  // magnitude <= radius
};

// Adds `trials` random symmetric perturbations with entries uniform in
// [-magnitude, magnitude] (clamped so the result stays nonnegative), solves
// exactly, and reports how often S*^c is recovered. Requires eta > 0.
RecoveryOutcome RecoveryTrial(const Eigen::MatrixXd& h, std::span<const std::size_t> s_star,
                              std::size_t k, double magnitude, std::size_t trials,
                              std::uint64_t seed, std::size_t limit = kDefaultExactLimit);

struct KlCheck {
  double kl = 0.0;
  double bound = 0.0;  // |sigma - gamma| / 2 - 1/8
  bool holds = false;
};

// KL between two bivariate Gaussians with unit variances and correlations
// sigma and gamma, against its lower bound.
KlCheck KlLowerBoundCheck(double sigma, double gamma);

// 2 exp(-2 delta^2 L).
double HoeffdingBound(double delta, std::size_t projections);

// Fraction of `sets` independent L-angle sets for which
// |g_hat_L - reference| > delta on features (i, j).
double ProjectionExceedanceRate(const Dataset& p, const Dataset& q, std::size_t i, std::size_t j,
                                std::size_t projections, double delta, double reference,
                                std::size_t sets, std::uint64_t seed);

}  // namespace ksdiff

#endif  // KSDIFF_THEORY_HPP_
