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

#include "synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "error.hpp"

namespace ksdiff {

namespace {

using Index = Eigen::Index;

Index Idx(std::size_t v) { return static_cast<Index>(v); }

enum StreamTag : std::uint64_t { kTheta = 1, kRowsP = 2, kRowsQ = 3, kMixP = 4, kMixQ = 5 };

constexpr double kOffset = 4.0 / 3.0;

}  // namespace

Eigen::MatrixXd RandomCorrelation(SplitMix64& rng, std::size_t dim) {
  Require(dim >= 1, "dimension must be positive");
  Eigen::MatrixXd theta(Idx(dim), Idx(dim));
  for (Index r = 0; r < theta.rows(); ++r) {
    for (Index c = 0; c < theta.cols(); ++c) theta(r, c) = rng.Uniform(-1.0, 1.0);
  }
  Eigen::MatrixXd sigma = theta.transpose() * theta;
  const Eigen::VectorXd scale = sigma.diagonal().cwiseSqrt().cwiseInverse();
  for (Index i = 0; i < sigma.rows(); ++i) {
    for (Index j = i; j < sigma.cols(); ++j) {
      const double v = i == j ? 1.0 : sigma(i, j) * scale(i) * scale(j);
      sigma(i, j) = v;
      sigma(j, i) = v;
    }
  }
  return sigma;
}

Eigen::MatrixXd ShiftFirstFeatureCovariance(const Eigen::MatrixXd& sigma) {
  Require(sigma.rows() >= 2 && sigma.rows() == sigma.cols(),
          "covariance shift needs a square matrix with at least two features");
  Eigen::MatrixXd shifted = sigma;
  shifted(0, 0) = 0.49 * sigma(0, 0) + 0.09 * sigma(1, 1) + 0.21 * sigma(0, 1);
  // The cross terms are those of x1 <- 0.7 x1 + 0.3 x2, i.e. 0.7 S_1d + 0.3 S_2d.
  // Reading the second term as 0.3 S_dd (which agrees only at d = 2) yields a
  // matrix that is essentially never positive definite.
  for (Index d = 1; d < sigma.rows(); ++d) {
    const double v = 0.7 * sigma(0, d) + 0.3 * sigma(1, d);
    shifted(0, d) = v;
    shifted(d, 0) = v;
  }
  return shifted;
}

Dataset SampleGaussian(const Eigen::MatrixXd& lower, std::size_t rows, SplitMix64& rng) {
  const std::size_t dim = static_cast<std::size_t>(lower.rows());
  std::vector<double> data(rows * dim);
  Eigen::VectorXd z(Idx(dim));
  for (std::size_t r = 0; r < rows; ++r) {
    for (Index d = 0; d < z.size(); ++d) z(d) = rng.Normal();
    const Eigen::VectorXd x = lower.triangularView<Eigen::Lower>() * z;
    for (std::size_t d = 0; d < dim; ++d) data[d * rows + r] = x(Idx(d));
  }
  return Dataset(rows, dim, std::move(data), DefaultFeatureNames(dim));
}

SyntheticPair GenExample1(std::size_t rows, std::uint64_t seed, std::size_t dim) {
  Require(rows >= 2, "example generators need N >= 2");
  Require(dim >= 2, "example 1 needs at least two features");
  for (int attempt = 0; attempt < kMaxCovarianceRetries; ++attempt) {
    SplitMix64 theta_rng(DeriveSeed(seed, {kTheta, static_cast<std::uint64_t>(attempt)}));
    Eigen::MatrixXd sigma = RandomCorrelation(theta_rng, dim);
    Eigen::MatrixXd shifted = ShiftFirstFeatureCovariance(sigma);
    Eigen::LLT<Eigen::MatrixXd> llt_p(sigma);
    Eigen::LLT<Eigen::MatrixXd> llt_q(shifted);
    if (llt_p.info() != Eigen::Success || llt_q.info() != Eigen::Success) continue;

    SplitMix64 rng_p(DeriveSeed(seed, {kRowsP}));
    SplitMix64 rng_q(DeriveSeed(seed, {kRowsQ}));
    Dataset p = SampleGaussian(llt_p.matrixL(), rows, rng_p);
    Dataset q = SampleGaussian(llt_q.matrixL(), rows, rng_q);
    return SyntheticPair{std::move(p), std::move(q),      GroundTruth{{0}}, std::move(sigma),
                         std::move(shifted), {}, {}, attempt + 1};
  }
  Fail(ErrorKind::kNumeric, "example 1: shifted covariance not positive definite after " +
                                std::to_string(kMaxCovarianceRetries) + " draws");
}

SyntheticPair GenExample2(std::size_t rows, std::uint64_t seed, std::size_t dim) {
  Require(rows >= 2, "example generators need N >= 2");
  Require(dim >= 1, "example 2 needs at least one feature");
  SplitMix64 theta_rng(DeriveSeed(seed, {kTheta, 0}));
  Eigen::MatrixXd sigma = RandomCorrelation(theta_rng, dim);
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) {
    Fail(ErrorKind::kNumeric, "example 2: latent covariance not positive definite");
  }
  const Eigen::MatrixXd lower = llt.matrixL();

  auto draw = [&](std::uint64_t rows_tag, std::uint64_t mix_tag, double rate_plus,
                  double rate_minus, std::vector<int>& components) {
    SplitMix64 rng(DeriveSeed(seed, {rows_tag}));
    SplitMix64 mix(DeriveSeed(seed, {mix_tag}));
    Dataset ds = SampleGaussian(lower, rows, rng);
    auto x1 = ds.mutable_column(0);
    components.resize(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      const double u = mix.Uniform01();
      int component = 2;
      double offset = 0.0;
      if (u < rate_plus) {
        component = 0;
        offset = kOffset;
      } else if (u < rate_plus + rate_minus) {
        component = 1;
        offset = -kOffset;
      }
      components[r] = component;
      x1[r] = x1[r] / 3.0 + offset;
    }
    return ds;
  };

  std::vector<int> p_components;
  std::vector<int> q_components;
  Dataset p = draw(kRowsP, kMixP, 0.5, 0.5, p_components);
  Dataset q = draw(kRowsQ, kMixQ, 0.35, 0.35, q_components);
  Eigen::MatrixXd sigma_prime = sigma;
  return SyntheticPair{std::move(p),           std::move(q),          GroundTruth{{0}},
                       std::move(sigma),       std::move(sigma_prime), std::move(p_components),
                       std::move(q_components), 1};
}

std::string_view PerturbationKindName(PerturbationKind kind) {
  switch (kind) {
    case PerturbationKind::kMeanShift:
      return "mean_shift";
    case PerturbationKind::kVarianceChange:
      return "variance_change";
    case PerturbationKind::kCovChange:
      return "cov_change";
    case PerturbationKind::kCovChangeConditional:
      return "cov_change_conditional";
    case PerturbationKind::kCovChangeNoVar:
      return "cov_change_no_var";
  }
  return "unknown";
}

PerturbationKind ParsePerturbationKind(std::string_view name) {
  for (auto kind : {PerturbationKind::kMeanShift, PerturbationKind::kVarianceChange,
                    PerturbationKind::kCovChange, PerturbationKind::kCovChangeConditional,
                    PerturbationKind::kCovChangeNoVar}) {
    if (name == PerturbationKindName(kind)) return kind;
  }
  Fail(ErrorKind::kInvalidArgument, "unknown perturbation kind '" + std::string(name) + "'");
}

bool NeedsReference(PerturbationKind kind) {
  return kind == PerturbationKind::kCovChange || kind == PerturbationKind::kCovChangeConditional ||
         kind == PerturbationKind::kCovChangeNoVar;
}

double LowerQuartile(std::span<const double> values) {
  Require(!values.empty(), "quantile of an empty column");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const std::size_t rank = (n + 3) / 4;  // ceil(0.25 n), 1-based
  return sorted[rank - 1];
}

double Variance(std::span<const double> values) {
  Require(!values.empty(), "variance of an empty column");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return ss / n;
}

Dataset Perturb(const Dataset& q, const PerturbationSpec& spec) {
  Require(std::isfinite(spec.c) && spec.c >= 0.0 && spec.c <= 1.0,
          "difference level c must lie in [0, 1]");
  Require(!spec.targets.empty(), "perturbation needs at least one target feature");
  const std::size_t dim = q.cols();
  std::vector<bool> is_target(dim, false);
  for (std::size_t t : spec.targets) {
    Require(t < dim, "target index " + std::to_string(t) + " out of range");
    Require(!is_target[t], "duplicate target index " + std::to_string(t));
    is_target[t] = true;
  }
  const bool needs_reference = NeedsReference(spec.kind);
  if (needs_reference) {
    Require(spec.references.size() == spec.targets.size(),
            std::string(PerturbationKindName(spec.kind)) + " needs one reference per target");
  }
  for (std::size_t r : spec.references) {
    Require(r < dim, "reference index " + std::to_string(r) + " out of range");
    if (is_target[r]) {
      Fail(ErrorKind::kInvalidArgument,
           "overlapping target/reference: feature " + std::to_string(r));
    }
  }

  Dataset out = q;
  const double c = spec.c;
  for (std::size_t t = 0; t < spec.targets.size(); ++t) {
    const std::size_t i = spec.targets[t];
    auto xi = out.mutable_column(i);
    switch (spec.kind) {
      case PerturbationKind::kMeanShift:
        for (double& v : xi) v += c;
        break;
      case PerturbationKind::kVarianceChange: {
        SplitMix64 rng(DeriveSeed(spec.seed, {i}));
        for (double& v : xi) v += c * rng.Normal();
        break;
      }
      case PerturbationKind::kCovChange: {
        const auto xj = q.column(spec.references[t]);
        for (std::size_t n = 0; n < xi.size(); ++n) xi[n] = (1.0 - c) * xi[n] + c * xj[n];
        break;
      }
      case PerturbationKind::kCovChangeConditional: {
        const auto xj = q.column(spec.references[t]);
        const double v = LowerQuartile(xj);
        for (std::size_t n = 0; n < xi.size(); ++n) {
          if (xj[n] <= v) xi[n] = (1.0 - c) * xi[n] + c * xj[n];
        }
        break;
      }
      case PerturbationKind::kCovChangeNoVar: {
        const auto xj = q.column(spec.references[t]);
        const double before = Variance(xi);
        std::vector<double> mixed(xi.size());
        for (std::size_t n = 0; n < xi.size(); ++n) mixed[n] = (1.0 - c) * xi[n] + c * xj[n];
        const double after = Variance(mixed);
        double w = 1.0;
        if (after > 0.0) {
          w = std::sqrt(before / after);
        } else if (before > 0.0) {
          Fail(ErrorKind::kNumeric, "cov_change_no_var: mixed column " + std::to_string(i) +
                                        " is constant, variance cannot be restored");
        }
        for (std::size_t n = 0; n < xi.size(); ++n) xi[n] = w * mixed[n];
        break;
      }
    }
  }
  return out;
}

Dataset Standardize(const Dataset& ds) {
  Dataset out = ds;
  for (std::size_t c = 0; c < out.cols(); ++c) {
    auto col = out.mutable_column(c);
    const double n = static_cast<double>(col.size());
    const double mean = std::accumulate(col.begin(), col.end(), 0.0) / n;
    const double sd = std::sqrt(Variance(col));
    for (double& v : col) v = sd > 0.0 ? (v - mean) / sd : v - mean;
  }
  return out;
}

PerturbationSpec RandomPerturbationSpec(PerturbationKind kind, double c, std::size_t dim,
                                        std::size_t count, std::uint64_t seed) {
  const bool needs_reference = NeedsReference(kind);
  Require(count >= 1 && count < dim,
          "need 1 <= number of targets < D so at least one feature stays unchanged");
  std::vector<std::size_t> order(dim);
  std::iota(order.begin(), order.end(), std::size_t{0});
  SplitMix64 rng(DeriveSeed(seed, {0x7a26e7ULL}));
  for (std::size_t i = dim - 1; i > 0; --i) std::swap(order[i], order[rng.Below(i + 1)]);

  PerturbationSpec spec;
  spec.kind = kind;
  spec.c = c;
  spec.seed = seed;
  spec.targets.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count));
  std::sort(spec.targets.begin(), spec.targets.end());
  if (needs_reference) {
    const std::size_t pool = dim - count;
    for (std::size_t t = 0; t < count; ++t) {
      spec.references.push_back(order[count + rng.Below(pool)]);
    }
  }
  return spec;
}

}  // namespace ksdiff
