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

#include "eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <json.hpp>
#include <ostream>

#include "error.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace ksdiff {

double Auroc(std::span<const double> scores, const GroundTruth& truth) {
  const std::size_t dim = scores.size();
  std::vector<bool> positive(dim, false);
  for (std::size_t d : truth.changed) {
    Require(d < dim, "ground-truth index " + std::to_string(d) + " out of range");
    Require(!positive[d], "ground truth contains a duplicate index");
    positive[d] = true;
  }
  if (truth.changed.empty() || truth.changed.size() >= dim) {
    Fail(ErrorKind::kInvalidArgument, "degenerate ground truth");
  }
  for (double s : scores) Require(!std::isnan(s), "AUROC scores must not be NaN");
  double wins = 0.0;
  for (std::size_t a = 0; a < dim; ++a) {
    if (!positive[a]) continue;
    for (std::size_t b = 0; b < dim; ++b) {
      if (positive[b]) continue;
      if (scores[a] > scores[b]) {
        wins += 1.0;
      } else if (scores[a] == scores[b]) {
        wins += 0.5;
      }
    }
  }
  const double pairs =
      static_cast<double>(truth.changed.size()) * static_cast<double>(dim - truth.changed.size());
  return wins / pairs;
}

std::string_view GeneratorName(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::kExample1:
      return "example1";
    case GeneratorKind::kExample2:
      return "example2";
    case GeneratorKind::kIdentical:
      return "identical";
  }
  return "unknown";
}

GeneratorKind ParseGenerator(std::string_view name) {
  for (auto g : {GeneratorKind::kExample1, GeneratorKind::kExample2, GeneratorKind::kIdentical}) {
    if (name == GeneratorName(g)) return g;
  }
  Fail(ErrorKind::kInvalidArgument, "unknown generator '" + std::string(name) + "'");
}

SyntheticPair GenerateInstance(GeneratorKind kind, std::size_t rows, std::uint64_t seed,
                               std::size_t dim) {
  switch (kind) {
    case GeneratorKind::kExample1:
      return GenExample1(rows, seed, dim);
    case GeneratorKind::kExample2:
      return GenExample2(rows, seed, dim);
    case GeneratorKind::kIdentical: {
      Require(rows >= 2 && dim >= 2, "identical generator needs N >= 2 and D >= 2");
      SplitMix64 theta_rng(DeriveSeed(seed, {1, 0}));
      Eigen::MatrixXd sigma = RandomCorrelation(theta_rng, dim);
      Eigen::LLT<Eigen::MatrixXd> llt(sigma);
      if (llt.info() != Eigen::Success) {
        Fail(ErrorKind::kNumeric, "identical generator: covariance not positive definite");
      }
      SplitMix64 rng_p(DeriveSeed(seed, {2}));
      SplitMix64 rng_q(DeriveSeed(seed, {3}));
      Dataset p = SampleGaussian(llt.matrixL(), rows, rng_p);
      Dataset q = SampleGaussian(llt.matrixL(), rows, rng_q);
      Eigen::MatrixXd sigma_prime = sigma;
      return SyntheticPair{std::move(p), std::move(q), GroundTruth{{0}}, std::move(sigma),
                           std::move(sigma_prime), {}, {}};
    }
  }
  Fail(ErrorKind::kInvalidArgument, "unknown generator");
}

ExperimentConfig ParseExperimentConfig(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    Fail(ErrorKind::kParse, std::string("experiment spec: ") + e.what());
  }
  if (!j.is_object()) Fail(ErrorKind::kParse, "experiment spec must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    static const char* kKnown[] = {"generator", "methods", "N",   "repetitions",
                                   "seed",      "L",       "dim", "timing"};
    if (std::find_if(std::begin(kKnown), std::end(kKnown),
                     [&](const char* k) { return key == k; }) == std::end(kKnown)) {
      Fail(ErrorKind::kParse, "experiment spec: unknown key '" + key + "'");
    }
  }
  auto need = [&](const char* key) -> const nlohmann::json& {
    if (!j.contains(key)) Fail(ErrorKind::kParse, std::string("experiment spec: missing '") + key + "'");
    return j.at(key);
  };
  auto as_count = [](const nlohmann::json& v, const char* what) -> std::size_t {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      Fail(ErrorKind::kParse, std::string("experiment spec: '") + what +
                                  "' must be a nonnegative integer");
    }
    return v.get<std::size_t>();
  };

  ExperimentConfig config;
  try {
    const auto& generator = need("generator");
    if (!generator.is_string()) Fail(ErrorKind::kParse, "experiment spec: 'generator' must be a string");
    config.generator = ParseGenerator(generator.get<std::string>());

    const auto& methods = need("methods");
    if (!methods.is_array() || methods.empty()) {
      Fail(ErrorKind::kParse, "experiment spec: 'methods' must be a nonempty array");
    }
    for (const auto& m : methods) {
      if (!m.is_string()) Fail(ErrorKind::kParse, "experiment spec: method names must be strings");
      config.methods.push_back(ParseMethod(m.get<std::string>()));
    }

    const auto& sizes = need("N");
    if (!sizes.is_array() || sizes.empty()) {
      Fail(ErrorKind::kParse, "experiment spec: 'N' must be a nonempty array");
    }
    for (const auto& n : sizes) config.sample_sizes.push_back(as_count(n, "N"));

    config.repetitions = as_count(need("repetitions"), "repetitions");
    const auto& seed = need("seed");
    if (!seed.is_number_integer() || (seed.is_number_integer() && !seed.is_number_unsigned() &&
                                      seed.get<long long>() < 0)) {
      Fail(ErrorKind::kParse, "experiment spec: 'seed' must be a nonnegative integer");
    }
    config.master_seed = seed.get<std::uint64_t>();
    if (j.contains("L")) config.projections = as_count(j.at("L"), "L");
    if (j.contains("dim")) config.dim = as_count(j.at("dim"), "dim");
    if (j.contains("timing")) {
      if (!j.at("timing").is_boolean()) Fail(ErrorKind::kParse, "experiment spec: 'timing' must be a boolean");
      config.timing = j.at("timing").get<bool>();
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kParse) throw;
    Fail(ErrorKind::kParse, std::string("experiment spec: ") + e.what());
  }
  if (config.repetitions < 1) Fail(ErrorKind::kParse, "experiment spec: repetitions must be >= 1");
  if (config.projections < 1) Fail(ErrorKind::kParse, "experiment spec: L must be >= 1");
  if (config.dim < 2) Fail(ErrorKind::kParse, "experiment spec: dim must be >= 2");
  for (std::size_t n : config.sample_sizes) {
    if (n < 3) Fail(ErrorKind::kParse, "experiment spec: every N must be >= 3");
  }
  return config;
}

std::vector<AggregateRecord> Aggregate(const ExperimentConfig& config,
                                       const std::vector<RepetitionRecord>& records) {
  std::vector<AggregateRecord> out;
  for (MethodId method : config.methods) {
    for (std::size_t n : config.sample_sizes) {
      AggregateRecord agg;
      agg.method = std::string(MethodName(method));
      agg.n = n;
      std::vector<double> aurocs;
      double runtime = 0.0;
      for (const auto& r : records) {
        if (r.method != agg.method || r.n != n) continue;
        if (!r.ok) {
          ++agg.failures;
          continue;
        }
        aurocs.push_back(r.auroc);
        runtime += r.runtime_sec;
      }
      agg.count = aurocs.size();
      if (!aurocs.empty()) {
        double sum = 0.0;
        for (double a : aurocs) sum += a;
        agg.mean_auroc = sum / static_cast<double>(aurocs.size());
        if (aurocs.size() > 1) {
          double ss = 0.0;
          for (double a : aurocs) ss += (a - agg.mean_auroc) * (a - agg.mean_auroc);
          agg.std_auroc = std::sqrt(ss / static_cast<double>(aurocs.size() - 1));
        }
        agg.mean_runtime_sec = runtime / static_cast<double>(aurocs.size());
      } else {
        agg.mean_auroc = std::nan("");
        agg.std_auroc = std::nan("");
      }
      out.push_back(agg);
    }
  }
  return out;
}

ExperimentReport RunExperiment(const ExperimentConfig& config, unsigned jobs) {
  Require(!config.methods.empty(), "experiment needs at least one method");
  Require(!config.sample_sizes.empty(), "experiment needs at least one sample size");
  Require(config.repetitions >= 1, "experiment needs at least one repetition");

  struct Task {
    std::size_t size_index;
    std::size_t repetition;
  };
  std::vector<Task> tasks;
  for (std::size_t s = 0; s < config.sample_sizes.size(); ++s) {
    for (std::size_t r = 0; r < config.repetitions; ++r) tasks.push_back({s, r});
  }
  const std::size_t methods = config.methods.size();
  std::vector<RepetitionRecord> slots(tasks.size() * methods);

  ParallelFor(tasks.size(), jobs, [&](std::size_t t) {
    const std::size_t n = config.sample_sizes[tasks[t].size_index];
    const std::uint64_t rep_seed = DeriveSeed(config.master_seed, {n, tasks[t].repetition});
    std::optional<SyntheticPair> instance;
    std::string generation_error;
    try {
      instance = GenerateInstance(config.generator, n, rep_seed, config.dim);
    } catch (const std::exception& e) {
      generation_error = e.what();
    }
    for (std::size_t m = 0; m < methods; ++m) {
      RepetitionRecord& rec = slots[t * methods + m];
      rec.method = std::string(MethodName(config.methods[m]));
      rec.n = n;
      rec.repetition = tasks[t].repetition;
      rec.rep_seed = rep_seed;
      if (!instance) {
        rec.ok = false;
        rec.error = "generation failed: " + generation_error;
        continue;
      }
      try {
        const std::uint64_t method_seed =
            DeriveSeed(rep_seed, {static_cast<std::uint64_t>(config.methods[m]) + 100});
        const auto start = std::chrono::steady_clock::now();
        const std::vector<double> scores = MethodScores(config.methods[m], instance->p,
                                                        instance->q, config.projections,
                                                        method_seed);
        const auto stop = std::chrono::steady_clock::now();
        rec.auroc = Auroc(scores, instance->truth);
        rec.runtime_sec =
            config.timing ? std::chrono::duration<double>(stop - start).count() : 0.0;
      } catch (const std::exception& e) {
        rec.ok = false;
        rec.error = e.what();
      }
    }
  });

  ExperimentReport report;
  report.config = config;
  for (std::size_t m = 0; m < methods; ++m) {
    for (std::size_t s = 0; s < config.sample_sizes.size(); ++s) {
      std::vector<RepetitionRecord> group;
      for (std::size_t t = 0; t < tasks.size(); ++t) {
        if (tasks[t].size_index == s) group.push_back(slots[t * methods + m]);
      }
      std::stable_sort(group.begin(), group.end(),
                       [](const RepetitionRecord& a, const RepetitionRecord& b) {
                         return a.rep_seed < b.rep_seed;
                       });
      report.records.insert(report.records.end(), group.begin(), group.end());
    }
  }
  report.aggregates = Aggregate(config, report.records);
  return report;
}

void WriteRecordsCsv(const ExperimentReport& report, std::ostream& out) {
  out << "method,N,rep_seed,auroc,runtime_sec\n";
  for (const auto& r : report.records) {
    out << r.method << ',' << r.n << ',' << r.rep_seed << ','
        << (r.ok ? FormatDouble(r.auroc) : std::string("nan")) << ','
        << FormatDouble(r.runtime_sec) << '\n';
  }
}

void WriteAurocVsNCsv(const ExperimentReport& report, std::ostream& out) {
  out << "method,N,mean_auroc,std\n";
  for (const auto& a : report.aggregates) {
    out << a.method << ',' << a.n << ',' << FormatDouble(a.mean_auroc) << ','
        << FormatDouble(a.std_auroc) << '\n';
  }
}

std::string AggregateJson(const ExperimentReport& report) {
  nlohmann::ordered_json j;
  j["generator"] = GeneratorName(report.config.generator);
  j["seed"] = report.config.master_seed;
  j["L"] = report.config.projections;
  j["dim"] = report.config.dim;
  j["repetitions"] = report.config.repetitions;
  j["timing"] = report.config.timing;
  auto& aggregates = j["aggregates"] = nlohmann::ordered_json::array();
  for (const auto& a : report.aggregates) {
    nlohmann::ordered_json row;
    row["method"] = a.method;
    row["N"] = a.n;
    row["repetitions_ok"] = a.count;
    row["failures"] = a.failures;
    if (a.count > 0) {
      row["mean_auroc"] = a.mean_auroc;
      row["std_auroc"] = a.std_auroc;
    } else {
      row["mean_auroc"] = nullptr;
      row["std_auroc"] = nullptr;
    }
    row["mean_runtime_sec"] = a.mean_runtime_sec;
    aggregates.push_back(std::move(row));
  }
  auto& failures = j["failures"] = nlohmann::ordered_json::array();
  for (const auto& r : report.records) {
    if (r.ok) continue;
    failures.push_back({{"method", r.method}, {"N", r.n}, {"rep_seed", r.rep_seed},
                        {"error", r.error}});
  }
  return j.dump(2) + "\n";
}

}  // namespace ksdiff
