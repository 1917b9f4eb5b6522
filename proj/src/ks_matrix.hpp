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

#ifndef KSDIFF_KS_MATRIX_HPP_
#define KSDIFF_KS_MATRIX_HPP_

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "dataset.hpp"

namespace ksdiff {

enum class AnglePolicy {
  kPerPair,  // pair (i, j) uses angles from DeriveSeed(seed, {i, j})
  kShared,   // every pair uses the same L angles
};

std::string_view AnglePolicyName(AnglePolicy policy);
AnglePolicy ParseAnglePolicy(std::string_view name);

// Symmetric D x D matrix: per-feature KS statistics on the diagonal and the
// sampled projected KS distance off the diagonal, plus the parameters that
// produced it.
struct EmpiricalKsMatrix {
  std::vector<std::string> names;
  Eigen::MatrixXd entries;
  std::size_t projections = 0;
  std::uint64_t master_seed = 0;
  AnglePolicy policy = AnglePolicy::kPerPair;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(entries.rows()); }
};

// Builds the matrix over `jobs` worker threads (0 = all hardware threads).
// Each diagonal entry and each pair i < j is one unit of work whose angle set
// depends only on (master_seed, i, j), so the result is bit-identical for any
// worker count.
EmpiricalKsMatrix BuildKsMatrix(const Dataset& p, const Dataset& q, std::size_t projections,
                                std::uint64_t master_seed,
                                AnglePolicy policy = AnglePolicy::kPerPair, unsigned jobs = 1);

// Throws unless the entries are finite, exactly symmetric and within [0, 1].
void ValidateKsMatrix(const EmpiricalKsMatrix& m);

// File format:
//   # ksdiff-matrix L=<L> seed=<seed> policy=<per-pair|shared>
//   <name_1>,...,<name_D>
//   D rows of D comma-separated entries (shortest round-trip decimals)
void SaveMatrix(const EmpiricalKsMatrix& m, std::ostream& out);
void SaveMatrix(const EmpiricalKsMatrix& m, const std::string& path);
EmpiricalKsMatrix LoadMatrix(std::istream& in, std::string_view source = "<stream>");
EmpiricalKsMatrix LoadMatrix(const std::string& path);

}  // namespace ksdiff

#endif  // KSDIFF_KS_MATRIX_HPP_
