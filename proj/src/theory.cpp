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

#include "theory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "error.hpp"
#include "ks_core.hpp"
#include "rng.hpp"

namespace ksdiff {

namespace {

using Index = Eigen::Index;

std::vector<std::size_t> ComplementOfSet(std::size_t dim, std::span<const std::size_t> set) {
  std::vector<bool> in_set(dim, false);
  for (std::size_t d : set) {
    Require(d < dim, "S* index " + std::to_string(d) + " out of range");
    Require(!in_set[d], "S* contains a duplicate index");
    in_set[d] = true;
  }
  std::vector<std::size_t> out;
  for (std::size_t d = 0; d < dim; ++d) {
    if (!in_set[d]) out.push_back(d);
  }
  return out;
}

}  // namespace

ConsistencyReport CheckConditions(const Eigen::MatrixXd& h, std::span<const std::size_t> s_star,
                                  double tolerance, bool compute_eta, std::size_t limit) {
  ValidateSubgraphMatrix(h);
  Require(std::isfinite(tolerance) && tolerance >= 0.0, "tolerance must be nonnegative");
  const std::size_t dim = static_cast<std::size_t>(h.rows());
  Require(!s_star.empty(), "S* must be nonempty");
  const std::vector<std::size_t> complement = ComplementOfSet(dim, s_star);

  ConsistencyReport report;
  report.k = complement.size();
  report.tolerance = tolerance;
  report.necessary_holds = true;
  report.sufficient_holds = true;
  for (std::size_t d : s_star) {
    FeatureConditions fc;
    fc.feature = d;
    const auto di = static_cast<Index>(d);
    fc.n1 = h(di, di) > tolerance;
    fc.s1 = fc.n1;
    bool any = false;
    bool all = true;
    for (Index e = 0; e < h.cols(); ++e) {
      if (e == di) continue;
      const bool positive = h(di, e) > tolerance;
      any = any || positive;
      all = all && positive;
    }
    fc.n2 = any;
    fc.s2 = dim > 1 && all;
    report.necessary_holds = report.necessary_holds && (fc.n1 || fc.n2);
    report.sufficient_holds = report.sufficient_holds && (fc.s1 || fc.s2);
    report.features.push_back(fc);
  }
  if (compute_eta) {
    report.eta = EtaMargin(h, s_star, limit);
    report.eta_computed = true;
  }
  return report;
}

SampleBound ComputeSampleBound(std::size_t k, double eta, std::size_t dim, double epsilon) {
  Require(k >= 1, "k must be at least 1");
  Require(dim >= 1, "D must be at least 1");
  Require(std::isfinite(epsilon) && epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0, 1)");
  if (!(eta > 0.0)) Fail(ErrorKind::kInvalidArgument, "S* not uniquely identifiable (eta <= 0)");
  SampleBound b;
  b.k = k;
  b.eta = eta;
  b.dim = dim;
  b.epsilon = epsilon;
  const double k2 = static_cast<double>(k) * static_cast<double>(k);
  const double factor = 8.0 * k2 * k2 / (eta * eta);
  const double d = static_cast<double>(dim);
  b.n_required = static_cast<std::uint64_t>(std::ceil(factor * std::log(12.0 * d / epsilon)));
  // A single feature has no off-diagonal entries to approximate.
  b.l_required =
      dim < 2 ? 1
              : static_cast<std::uint64_t>(std::ceil(factor * std::log(3.0 * d * (d - 1.0) / epsilon)));
  return b;
}

RecoveryOutcome RecoveryTrial(const Eigen::MatrixXd& h, std::span<const std::size_t> s_star,
                              std::size_t k, double magnitude, std::size_t trials,
                              std::uint64_t seed, std::size_t limit) {
  ValidateSubgraphMatrix(h);
  const std::size_t dim = static_cast<std::size_t>(h.rows());
  const std::vector<std::size_t> complement = ComplementOfSet(dim, s_star);
  Require(!s_star.empty() && k == complement.size(), "k must equal D - |S*|");
  Require(std::isfinite(magnitude) && magnitude >= 0.0, "magnitude must be nonnegative");
  Require(trials >= 1, "need at least one trial");

  RecoveryOutcome out;
  out.trials = trials;
  out.eta = EtaMargin(h, s_star, limit);
  if (!(out.eta > 0.0)) {
    Fail(ErrorKind::kInvalidArgument, "S* not uniquely identifiable (eta <= 0)");
  }
  out.radius = out.eta / (2.0 * static_cast<double>(k) * static_cast<double>(k));
  out.guarantee_applies = magnitude <= out.radius;

  const auto n = static_cast<Index>(dim);
  for (std::size_t t = 0; t < trials; ++t) {
    SplitMix64 rng(DeriveSeed(seed, {t}));
    Eigen::MatrixXd perturbed = h;
    for (Index i = 0; i < n; ++i) {
      for (Index j = i; j < n; ++j) {
        const double v = std::max(0.0, h(i, j) + rng.Uniform(-magnitude, magnitude));
        perturbed(i, j) = v;
        perturbed(j, i) = v;
      }
    }
    if (ExactMin(perturbed, k, limit).Complement() == complement) ++out.successes;
  }
  out.rate = static_cast<double>(out.successes) / static_cast<double>(trials);
  return out;
}

KlCheck KlLowerBoundCheck(double sigma, double gamma) {
  if (!(std::fabs(sigma) < 1.0) || !(std::fabs(gamma) < 1.0)) {
    Fail(ErrorKind::kInvalidArgument, "correlation magnitude must be < 1 (singular covariance)");
  }
  KlCheck out;
  const double one_minus_g2 = 1.0 - gamma * gamma;
  out.kl = 0.5 * ((2.0 - 2.0 * sigma * gamma) / one_minus_g2 -
                  std::log((1.0 - sigma * sigma) / one_minus_g2) - 2.0);
  out.bound = 0.5 * std::fabs(sigma - gamma) - 0.125;
  out.holds = out.kl >= out.bound;
  return out;
}

double HoeffdingBound(double delta, std::size_t projections) {
  return 2.0 * std::exp(-2.0 * delta * delta * static_cast<double>(projections));
}

double ProjectionExceedanceRate(const Dataset& p, const Dataset& q, std::size_t i, std::size_t j,
                                std::size_t projections, double delta, double reference,
                                std::size_t sets, std::uint64_t seed) {
  Require(sets >= 1, "need at least one angle set");
  std::size_t exceed = 0;
  for (std::size_t s = 0; s < sets; ++s) {
    const auto angles = ProjectionAngleSet::Generate(projections, DeriveSeed(seed, {s}));
    if (std::fabs(GHatL(p, q, i, j, angles) - reference) > delta) ++exceed;
  }
  return static_cast<double>(exceed) / static_cast<double>(sets);
}

}  // namespace ksdiff
