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

#include "ks_matrix.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "error.hpp"
#include "ks_core.hpp"
#include "parallel.hpp"

namespace ksdiff {

namespace {

constexpr std::string_view kMagic = "# ksdiff-matrix";

std::string At(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line) + ": ";
}

struct WorkUnit {
  std::size_t i;
  std::size_t j;
};

}  // namespace

std::string_view AnglePolicyName(AnglePolicy policy) {
  return policy == AnglePolicy::kShared ? "shared" : "per-pair";
}

AnglePolicy ParseAnglePolicy(std::string_view name) {
  if (name == "per-pair") return AnglePolicy::kPerPair;
  if (name == "shared") return AnglePolicy::kShared;
  Fail(ErrorKind::kInvalidArgument, "unknown angle policy '" + std::string(name) + "'");
}

EmpiricalKsMatrix BuildKsMatrix(const Dataset& p, const Dataset& q, std::size_t projections,
                                std::uint64_t master_seed, AnglePolicy policy, unsigned jobs) {
  RequireSameSchema(p, q);
  Require(projections >= 1, "number of projections L must be at least 1");
  const std::size_t dim = p.cols();

  std::vector<WorkUnit> units;
  units.reserve(dim * (dim + 1) / 2);
  for (std::size_t i = 0; i < dim; ++i) units.push_back({i, i});
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i + 1; j < dim; ++j) units.push_back({i, j});
  }

  std::optional<ProjectionAngleSet> shared;
  if (policy == AnglePolicy::kShared) {
    shared = ProjectionAngleSet::Generate(projections, master_seed);
  }

  std::vector<double> values(units.size());
  ParallelFor(units.size(), jobs, [&](std::size_t u) {
    const auto [i, j] = units[u];
    if (i == j) {
      values[u] = KsStatistic(p.column(i), q.column(i));
      return;
    }
    const ProjectionAngleSet angles =
        shared ? *shared
               : ProjectionAngleSet::Generate(projections, master_seed,
                                              ProjectionAngleSet::PairId{i, j});
    values[u] = GHatL(p, q, i, j, angles);
  });

  EmpiricalKsMatrix m;
  m.names = p.names();
  m.entries = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                    static_cast<Eigen::Index>(dim));
  for (std::size_t u = 0; u < units.size(); ++u) {
    const auto i = static_cast<Eigen::Index>(units[u].i);
    const auto j = static_cast<Eigen::Index>(units[u].j);
    m.entries(i, j) = values[u];
    m.entries(j, i) = values[u];
  }
  m.projections = projections;
  m.master_seed = master_seed;
  m.policy = policy;
  return m;
}

void ValidateKsMatrix(const EmpiricalKsMatrix& m) {
  const Eigen::Index d = m.entries.rows();
  Require(d >= 1 && m.entries.cols() == d, "KS matrix must be square and nonempty");
  Require(m.names.size() == static_cast<std::size_t>(d), "KS matrix names do not match its size");
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const double v = m.entries(i, j);
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        Fail(ErrorKind::kInvalidArgument, "entry out of [0,1] at (" + std::to_string(i) + "," +
                                              std::to_string(j) + ")");
      }
      if (v != m.entries(j, i)) {
        Fail(ErrorKind::kInvalidArgument, "matrix is not symmetric at (" + std::to_string(i) +
                                              "," + std::to_string(j) + ")");
      }
    }
  }
}

void SaveMatrix(const EmpiricalKsMatrix& m, std::ostream& out) {
  ValidateKsMatrix(m);
  out << kMagic << " L=" << m.projections << " seed=" << m.master_seed
      << " policy=" << AnglePolicyName(m.policy) << '\n';
  for (std::size_t c = 0; c < m.names.size(); ++c) {
    if (c) out << ',';
    out << m.names[c];
  }
  out << '\n';
  for (Eigen::Index i = 0; i < m.entries.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.entries.cols(); ++j) {
      if (j) out << ',';
      out << FormatDouble(m.entries(i, j));
    }
    out << '\n';
  }
}

void SaveMatrix(const EmpiricalKsMatrix& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorKind::kIo, "cannot open '" + path + "' for writing");
  SaveMatrix(m, out);
  if (!out) Fail(ErrorKind::kIo, "write to '" + path + "' failed");
}

EmpiricalKsMatrix LoadMatrix(std::istream& in, std::string_view source) {
  std::string line;
  std::size_t line_no = 0;

  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  };

  if (!next_line() || line.rfind(kMagic, 0) != 0) {
    Fail(ErrorKind::kParse, At(source, line_no) + "missing '" + std::string(kMagic) +
                                "' metadata line");
  }
  EmpiricalKsMatrix m;
  bool have_l = false;
  bool have_seed = false;
  bool have_policy = false;
  std::istringstream meta(line.substr(kMagic.size()));
  std::string token;
  while (meta >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) {
      Fail(ErrorKind::kParse, At(source, line_no) + "malformed metadata token '" + token + "'");
    }
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    auto parse_u64 = [&](std::uint64_t& out) {
      const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
      if (ec != std::errc() || ptr != value.data() + value.size()) {
        Fail(ErrorKind::kParse, At(source, line_no) + "bad value for " + key + ": '" + value + "'");
      }
    };
    if (key == "L") {
      std::uint64_t l = 0;
      parse_u64(l);
      if (l < 1) Fail(ErrorKind::kParse, At(source, line_no) + "L must be at least 1");
      m.projections = static_cast<std::size_t>(l);
      have_l = true;
    } else if (key == "seed") {
      parse_u64(m.master_seed);
      have_seed = true;
    } else if (key == "policy") {
      if (value != "per-pair" && value != "shared") {
        Fail(ErrorKind::kParse, At(source, line_no) + "unknown policy '" + value + "'");
      }
      m.policy = ParseAnglePolicy(value);
      have_policy = true;
    } else {
      Fail(ErrorKind::kParse, At(source, line_no) + "unknown metadata key '" + key + "'");
    }
  }
  if (!have_l || !have_seed || !have_policy) {
    Fail(ErrorKind::kParse, At(source, line_no) + "metadata needs L, seed and policy");
  }

  if (!next_line()) Fail(ErrorKind::kParse, At(source, line_no) + "missing header row");
  for (std::string_view name : SplitCsvLine(line)) {
    if (name.empty()) Fail(ErrorKind::kParse, At(source, line_no) + "empty feature name");
    m.names.emplace_back(name);
  }
  const auto dim = static_cast<Eigen::Index>(m.names.size());
  m.entries.resize(dim, dim);

  for (Eigen::Index i = 0; i < dim; ++i) {
    if (!next_line()) {
      Fail(ErrorKind::kParse, At(source, line_no) + "expected " + std::to_string(dim) +
                                  " matrix rows, found " + std::to_string(i));
    }
    const auto fields = SplitCsvLine(line);
    if (static_cast<Eigen::Index>(fields.size()) != dim) {
      Fail(ErrorKind::kParse, At(source, line_no) + "expected " + std::to_string(dim) +
                                  " entries, found " + std::to_string(fields.size()));
    }
    for (Eigen::Index j = 0; j < dim; ++j) {
      double v = 0.0;
      if (!ParseDouble(fields[static_cast<std::size_t>(j)], v)) {
        Fail(ErrorKind::kParse, At(source, line_no) + "cannot parse entry " +
                                    std::to_string(j + 1) + ": '" +
                                    std::string(fields[static_cast<std::size_t>(j)]) + "'");
      }
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        Fail(ErrorKind::kParse, At(source, line_no) + "entry out of [0,1] at column " +
                                    std::to_string(j + 1));
      }
      m.entries(i, j) = v;
    }
  }
  if (next_line()) Fail(ErrorKind::kParse, At(source, line_no) + "trailing data after matrix");
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      if (m.entries(i, j) != m.entries(j, i)) {
        Fail(ErrorKind::kParse, std::string(source) + ": matrix is not symmetric at (" +
                                    std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
  return m;
}

EmpiricalKsMatrix LoadMatrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot open '" + path + "' for reading");
  return LoadMatrix(in, path);
}

}  // namespace ksdiff
