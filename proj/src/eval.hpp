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

#ifndef KSDIFF_EVAL_HPP_
#define KSDIFF_EVAL_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pipeline.hpp"
#include "synth.hpp"

namespace ksdiff {

// Mann-Whitney AUROC: fraction of (changed, unchanged) feature pairs where the
// changed feature scores higher, ties counting one half.
double Auroc(std::span<const double> scores, const GroundTruth& truth);

enum class GeneratorKind { kExample1, kExample2, kIdentical };

std::string_view GeneratorName(GeneratorKind kind);
GeneratorKind ParseGenerator(std::string_view name);

// Generates one (P, Q, S*) instance. `kIdentical` draws P and Q from the same
// Gaussian and labels feature 0 as changed, which makes every AUROC a null
// draw.
SyntheticPair GenerateInstance(GeneratorKind kind, std::size_t rows, std::uint64_t seed,
                               std::size_t dim = kSyntheticDim);

struct ExperimentConfig {
  GeneratorKind generator = GeneratorKind::kExample2;
  std::vector<MethodId> methods;
  std::vector<std::size_t> sample_sizes;
  std::size_t repetitions = 1;
  std::uint64_t master_seed = 0;
  std::size_t projections = kDefaultProjections;
  std::size_t dim = kSyntheticDim;
  // When false runtimes are reported as 0 so reruns produce identical bytes.
  bool timing = true;
};

// Parses the JSON experiment spec:
//   {"generator": "example2", "methods": ["proposed", "hara15"],
//    "N": [100, 1000], "repetitions": 20, "seed": 7,
//    "L": 10, "dim": 20, "timing": true}
// "L", "dim" and "timing" are optional.
ExperimentConfig ParseExperimentConfig(std::string_view json_text);

struct RepetitionRecord {
  std::string method;
  std::size_t n = 0;
  std::size_t repetition = 0;
  std::uint64_t rep_seed = 0;
  double auroc = 0.0;
  double runtime_sec = 0.0;
  bool ok = true;
  std::string error;
};

struct AggregateRecord {
  std::string method;
  std::size_t n = 0;
  std::size_t count = 0;  // successful repetitions
  std::size_t failures = 0;
  double mean_auroc = 0.0;
  double std_auroc = 0.0;  // sample standard deviation, 0 for one repetition
  double mean_runtime_sec = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<RepetitionRecord> records;  // by method, then N, then rep_seed
  std::vector<AggregateRecord> aggregates;
};

// rep_seed = DeriveSeed(master_seed, {N, repetition}); every method sees the
// same instance for a given (N, repetition). Repetitions run on `jobs`
// threads; the report does not depend on the worker count.
ExperimentReport RunExperiment(const ExperimentConfig& config, unsigned jobs = 1);

std::vector<AggregateRecord> Aggregate(const ExperimentConfig& config,
                                       const std::vector<RepetitionRecord>& records);

// method,N,rep_seed,auroc,runtime_sec
void WriteRecordsCsv(const ExperimentReport& report, std::ostream& out);
// method,N,mean_auroc,std
void WriteAurocVsNCsv(const ExperimentReport& report, std::ostream& out);
std::string AggregateJson(const ExperimentReport& report);

}  // namespace ksdiff

#endif  // KSDIFF_EVAL_HPP_
