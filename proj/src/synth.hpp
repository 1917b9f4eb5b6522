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

#ifndef KSDIFF_SYNTH_HPP_
#define KSDIFF_SYNTH_HPP_

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "dataset.hpp"
#include "rng.hpp"

namespace ksdiff {

// Indices of the features whose distribution changed.
struct GroundTruth {
  std::vector<std::size_t> changed;
};

inline constexpr std::size_t kSyntheticDim = 20;
inline constexpr int kMaxCovarianceRetries = 100;

struct SyntheticPair {
  Dataset p;
  Dataset q;
  GroundTruth truth;
  Eigen::MatrixXd sigma;        // law of P (example 1) or of the latent u (example 2)
  Eigen::MatrixXd sigma_prime;  // law of Q (example 1); equals sigma for example 2
  // Example 2 only: mixture component of feature x1 per row; 0 -> +4/3,
  // 1 -> -4/3, 2 -> 0 offset.
  std::vector<int> p_components;
  std::vector<int> q_components;
  int covariance_attempts = 1;
  std::string_view factorization = "cholesky";
};

// Sigma = Theta^T Theta with Theta ~ U(-1, 1)^{dim x dim}, rescaled to unit
// diagonal.
Eigen::MatrixXd RandomCorrelation(SplitMix64& rng, std::size_t dim);

// Covariance of Q in example 1: row/column of feature x1 rewritten,
//   S'_11 = 0.49 S_11 + 0.09 S_22 + 0.21 S_12,  S'_1d = 0.7 S_1d + 0.3 S_2d,
// mirrored to keep the matrix symmetric.
Eigen::MatrixXd ShiftFirstFeatureCovariance(const Eigen::MatrixXd& sigma);

// N rows from N(0, L L^T) given the lower Cholesky factor.
Dataset SampleGaussian(const Eigen::MatrixXd& lower, std::size_t rows, SplitMix64& rng);

// Gaussian covariance change on x1. Theta is redrawn (up to
// kMaxCovarianceRetries times) while the shifted covariance is not positive
// definite.
SyntheticPair GenExample1(std::size_t rows, std::uint64_t seed, std::size_t dim = kSyntheticDim);

// Mixture-rate change on x1: x1 = u1/3 + offset with offsets {+4/3, -4/3}
// at rates (0.5, 0.5) under P and {+4/3, -4/3, 0} at (0.35, 0.35, 0.3) under
// Q; the other features are the latent Gaussian coordinates.
SyntheticPair GenExample2(std::size_t rows, std::uint64_t seed, std::size_t dim = kSyntheticDim);

enum class PerturbationKind {
  kMeanShift,             // x_i += c
  kVarianceChange,        // x_i += c eps, eps ~ N(0, 1)
  kCovChange,             // x_i = (1 - c) x_i + c x_j
  kCovChangeConditional,  // as above on rows with x_j <= v (lower quartile)
  kCovChangeNoVar,        // as above, then rescaled to keep var(x_i)
};

std::string_view PerturbationKindName(PerturbationKind kind);
PerturbationKind ParsePerturbationKind(std::string_view name);
bool NeedsReference(PerturbationKind kind);

struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::kMeanShift;
  double c = 0.0;
  std::vector<std::size_t> targets;
  std::vector<std::size_t> references;  // one per target for the covariance kinds
  std::uint64_t seed = 0;
};

// Applies one transformation per target feature; every other cell is copied
// unchanged.
Dataset Perturb(const Dataset& q, const PerturbationSpec& spec);

// ceil(0.25 N)-th smallest value (order statistic, no interpolation).
double LowerQuartile(std::span<const double> values);

// Population variance (1/N).
double Variance(std::span<const double> values);

// Zero mean and unit variance per column; constant columns are only centered.
Dataset Standardize(const Dataset& ds);

// Draws `count` distinct targets and, for the covariance kinds, a reference
// from the remaining features for each target.
PerturbationSpec RandomPerturbationSpec(PerturbationKind kind, double c, std::size_t dim,
                                        std::size_t count, std::uint64_t seed);

}  // namespace ksdiff

#endif  // KSDIFF_SYNTH_HPP_
