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


// extern "C" surface over the C++ core. Each entry point catches every
// exception, stores the message in a thread-local buffer and returns a status.

#include "ksdiff/ksdiff.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <memory>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "baselines.hpp"
#include "dataset.hpp"
#include "error.hpp"
#include "eval.hpp"
#include "ks_core.hpp"
#include "ks_matrix.hpp"
#include "pipeline.hpp"
#include "solvers.hpp"
#include "synth.hpp"
#include "theory.hpp"

struct ksdiff_dataset {
  ksdiff::Dataset value;
};
struct ksdiff_matrix {
  ksdiff::EmpiricalKsMatrix value;
};
struct ksdiff_solution {
  ksdiff::SolverResult value;
};
struct ksdiff_selection {
  ksdiff::SelectionReport report;
  std::string json;
  std::string csv;
  std::vector<std::size_t> by_rank;  // feature index at rank r + 1
  std::optional<ksdiff_matrix> matrix;
};
struct ksdiff_consistency {
  ksdiff::ConsistencyReport value;
  std::string json;
};
struct ksdiff_experiment {
  ksdiff::ExperimentReport value;
  std::string records_csv;
  std::string auroc_csv;
  std::string aggregate_json;
};

namespace {

using ksdiff::ErrorKind;

thread_local std::string g_last_error;

ksdiff_status StatusFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return KSDIFF_ERR_INVALID_ARGUMENT;
    case ErrorKind::kParse: return KSDIFF_ERR_PARSE;
    case ErrorKind::kIo: return KSDIFF_ERR_IO;
    case ErrorKind::kLimit: return KSDIFF_ERR_LIMIT;
    case ErrorKind::kNumeric: return KSDIFF_ERR_NUMERIC;
  }
  return KSDIFF_ERR_INTERNAL;
}

template <typename Fn>
ksdiff_status Guard(Fn&& fn) noexcept {
  try {
    fn();
    return KSDIFF_OK;
  } catch (const ksdiff::Error& e) {
    g_last_error = e.what();
    return StatusFor(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return KSDIFF_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return KSDIFF_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return KSDIFF_ERR_INTERNAL;
  }
}

void RequirePtr(const void* p, const char* what) {
  ksdiff::Require(p != nullptr, std::string(what) + " must not be NULL");
}

std::vector<std::string> NamesOrDefault(const char* const* names, std::size_t count) {
  if (names == nullptr) return ksdiff::DefaultFeatureNames(count);
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    RequirePtr(names[i], "feature name");
    out.emplace_back(names[i]);
  }
  return out;
}

std::vector<std::size_t> Indices(const std::size_t* values, std::size_t count) {
  if (count > 0) RequirePtr(values, "index array");
  return std::vector<std::size_t>(values, values + count);
}

ksdiff::SolverMethod ToSolver(ksdiff_solver s) {
  switch (s) {
    case KSDIFF_SOLVER_GREEDY_SCORE: return ksdiff::SolverMethod::kGreedyScore;
    case KSDIFF_SOLVER_GREEDY_K: return ksdiff::SolverMethod::kGreedyK;
    case KSDIFF_SOLVER_EXACT: return ksdiff::SolverMethod::kExact;
  }
  ksdiff::Fail(ErrorKind::kInvalidArgument, "unknown solver");
}

ksdiff_solver FromSolver(ksdiff::SolverMethod s) {
  switch (s) {
    case ksdiff::SolverMethod::kGreedyScore: return KSDIFF_SOLVER_GREEDY_SCORE;
    case ksdiff::SolverMethod::kGreedyK: return KSDIFF_SOLVER_GREEDY_K;
    case ksdiff::SolverMethod::kExact: return KSDIFF_SOLVER_EXACT;
  }
  return KSDIFF_SOLVER_GREEDY_SCORE;
}

ksdiff::MethodId ToMethod(ksdiff_method m) {
  switch (m) {
    case KSDIFF_METHOD_PROPOSED: return ksdiff::MethodId::kProposed;
    case KSDIFF_METHOD_MT: return ksdiff::MethodId::kMt;
    case KSDIFF_METHOD_IDE09: return ksdiff::MethodId::kIde09;
    case KSDIFF_METHOD_HARA15: return ksdiff::MethodId::kHara15;
  }
  ksdiff::Fail(ErrorKind::kInvalidArgument, "unknown method");
}

ksdiff::AnglePolicy ToPolicy(ksdiff_angle_policy p) {
  switch (p) {
    case KSDIFF_ANGLES_PER_PAIR: return ksdiff::AnglePolicy::kPerPair;
    case KSDIFF_ANGLES_SHARED: return ksdiff::AnglePolicy::kShared;
  }
  ksdiff::Fail(ErrorKind::kInvalidArgument, "unknown angle policy");
}

ksdiff::PerturbationKind ToKind(ksdiff_perturbation_kind k) {
  switch (k) {
    case KSDIFF_PERTURB_MEAN_SHIFT: return ksdiff::PerturbationKind::kMeanShift;
    case KSDIFF_PERTURB_VARIANCE_CHANGE: return ksdiff::PerturbationKind::kVarianceChange;
    case KSDIFF_PERTURB_COV_CHANGE: return ksdiff::PerturbationKind::kCovChange;
    case KSDIFF_PERTURB_COV_CHANGE_CONDITIONAL:
      return ksdiff::PerturbationKind::kCovChangeConditional;
    case KSDIFF_PERTURB_COV_CHANGE_NO_VAR: return ksdiff::PerturbationKind::kCovChangeNoVar;
  }
  ksdiff::Fail(ErrorKind::kInvalidArgument, "unknown perturbation kind");
}

std::string ConsistencyJson(const ksdiff::ConsistencyReport& r) {
  nlohmann::ordered_json j;
  j["k"] = r.k;
  j["tolerance"] = r.tolerance;
  j["necessary_holds"] = r.necessary_holds;
  j["sufficient_holds"] = r.sufficient_holds;
  if (r.eta_computed) {
    // JSON has no infinity; a unique candidate is reported as null.
    j["eta"] = std::isfinite(r.eta) ? nlohmann::ordered_json(r.eta) : nlohmann::ordered_json();
    j["eta_unique_candidate"] = std::isinf(r.eta);
  }
  nlohmann::ordered_json features = nlohmann::ordered_json::array();
  for (const auto& f : r.features) {
    features.push_back({{"feature", f.feature},
                        {"n1", f.n1},
                        {"n2", f.n2},
                        {"s1", f.s1},
                        {"s2", f.s2}});
  }
  j["features"] = std::move(features);
  return j.dump(2);
}

}  // namespace

extern "C" {

const char* ksdiff_version(void) { return "0.1.0"; }

const char* ksdiff_last_error(void) { return g_last_error.c_str(); }

const char* ksdiff_status_string(ksdiff_status status) {
  switch (status) {
    case KSDIFF_OK: return "ok";
    case KSDIFF_ERR_INVALID_ARGUMENT: return "invalid argument";
    case KSDIFF_ERR_PARSE: return "parse error";
    case KSDIFF_ERR_IO: return "i/o error";
    case KSDIFF_ERR_LIMIT: return "limit exceeded";
    case KSDIFF_ERR_NUMERIC: return "numeric failure";
    case KSDIFF_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

ksdiff_status ksdiff_method_from_name(const char* name, ksdiff_method* out) {
  return Guard([&] {
    RequirePtr(name, "name");
    RequirePtr(out, "out");
    switch (ksdiff::ParseMethod(name)) {
      case ksdiff::MethodId::kProposed: *out = KSDIFF_METHOD_PROPOSED; break;
      case ksdiff::MethodId::kMt: *out = KSDIFF_METHOD_MT; break;
      case ksdiff::MethodId::kIde09: *out = KSDIFF_METHOD_IDE09; break;
      case ksdiff::MethodId::kHara15: *out = KSDIFF_METHOD_HARA15; break;
    }
  });
}

ksdiff_status ksdiff_solver_from_name(const char* name, ksdiff_solver* out) {
  return Guard([&] {
    RequirePtr(name, "name");
    RequirePtr(out, "out");
    *out = FromSolver(ksdiff::ParseSolverMethod(name));
  });
}

ksdiff_status ksdiff_perturbation_kind_from_name(const char* name,
                                                 ksdiff_perturbation_kind* out) {
  return Guard([&] {
    RequirePtr(name, "name");
    RequirePtr(out, "out");
    *out = static_cast<ksdiff_perturbation_kind>(ksdiff::ParsePerturbationKind(name));
  });
}

ksdiff_status ksdiff_angle_policy_from_name(const char* name, ksdiff_angle_policy* out) {
  return Guard([&] {
    RequirePtr(name, "name");
    RequirePtr(out, "out");
    *out = ksdiff::ParseAnglePolicy(name) == ksdiff::AnglePolicy::kShared
               ? KSDIFF_ANGLES_SHARED
               : KSDIFF_ANGLES_PER_PAIR;
  });
}

// ---- datasets --------------------------------------------------------------

ksdiff_status ksdiff_dataset_create(size_t rows, size_t cols, const double* row_major,
                                    const char* const* names, ksdiff_dataset** out) {
  return Guard([&] {
    RequirePtr(out, "out");
    if (rows * cols > 0) RequirePtr(row_major, "data");
    std::vector<double> column_major(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) column_major[c * rows + r] = row_major[r * cols + c];
    }
    *out = new ksdiff_dataset{
        ksdiff::Dataset(rows, cols, std::move(column_major), NamesOrDefault(names, cols))};
  });
}

ksdiff_status ksdiff_dataset_load_csv(const char* path, ksdiff_dataset** out) {
  return Guard([&] {
    RequirePtr(path, "path");
    RequirePtr(out, "out");
    *out = new ksdiff_dataset{ksdiff::ReadCsv(path)};
  });
}

ksdiff_status ksdiff_dataset_save_csv(const ksdiff_dataset* ds, const char* path) {
  return Guard([&] {
    RequirePtr(ds, "dataset");
    RequirePtr(path, "path");
    ksdiff::WriteCsv(ds->value, std::string(path));
  });
}

size_t ksdiff_dataset_rows(const ksdiff_dataset* ds) { return ds ? ds->value.rows() : 0; }
size_t ksdiff_dataset_cols(const ksdiff_dataset* ds) { return ds ? ds->value.cols() : 0; }

const char* ksdiff_dataset_name(const ksdiff_dataset* ds, size_t col) {
  if (ds == nullptr || col >= ds->value.cols()) return nullptr;
  return ds->value.names()[col].c_str();
}

ksdiff_status ksdiff_dataset_column(const ksdiff_dataset* ds, size_t col, double* out) {
  return Guard([&] {
    RequirePtr(ds, "dataset");
    ksdiff::Require(col < ds->value.cols(), "column index out of range");
    if (ds->value.rows() > 0) RequirePtr(out, "out");
    auto values = ds->value.column(col);
    std::copy(values.begin(), values.end(), out);
  });
}

ksdiff_status ksdiff_dataset_standardize(const ksdiff_dataset* ds, ksdiff_dataset** out) {
  return Guard([&] {
    RequirePtr(ds, "dataset");
    RequirePtr(out, "out");
    *out = new ksdiff_dataset{ksdiff::Standardize(ds->value)};
  });
}

void ksdiff_dataset_free(ksdiff_dataset* ds) { delete ds; }

// ---- KS statistics ---------------------------------------------------------

ksdiff_status ksdiff_ks_statistic(const double* p, size_t n, const double* q, size_t m,
                                  double* out) {
  return Guard([&] {
    RequirePtr(out, "out");
    if (n > 0) RequirePtr(p, "p");
    if (m > 0) RequirePtr(q, "q");
    *out = ksdiff::KsStatistic(std::span<const double>(p, n), std::span<const double>(q, m));
  });
}

ksdiff_status ksdiff_projected_ks(const ksdiff_dataset* p, const ksdiff_dataset* q, size_t i,
                                  size_t j, size_t projections, uint64_t seed, double* out) {
  return Guard([&] {
    RequirePtr(p, "p");
    RequirePtr(q, "q");
    RequirePtr(out, "out");
    ksdiff::RequireSameSchema(p->value, q->value);
    ksdiff::Require(i < p->value.cols() && j < p->value.cols(), "feature index out of range");
    ksdiff::Require(projections >= 1, "number of projections must be at least 1");
    const std::size_t lo = std::min(i, j);
    const std::size_t hi = std::max(i, j);
    auto angles = ksdiff::ProjectionAngleSet::Generate(projections, seed, std::pair{lo, hi});
    *out = ksdiff::GHatL(p->value, q->value, lo, hi, angles);
  });
}

// ---- KS matrix -------------------------------------------------------------

ksdiff_status ksdiff_matrix_build(const ksdiff_dataset* p, const ksdiff_dataset* q,
                                  size_t projections, uint64_t seed, ksdiff_angle_policy policy,
                                  unsigned jobs, ksdiff_matrix** out) {
  return Guard([&] {
    RequirePtr(p, "p");
    RequirePtr(q, "q");
    RequirePtr(out, "out");
    *out = new ksdiff_matrix{
        ksdiff::BuildKsMatrix(p->value, q->value, projections, seed, ToPolicy(policy), jobs)};
  });
}

ksdiff_status ksdiff_matrix_from_values(size_t dim, const double* row_major,
                                        const char* const* names, ksdiff_matrix** out) {
  return Guard([&] {
    RequirePtr(out, "out");
    if (dim > 0) RequirePtr(row_major, "values");
    ksdiff::EmpiricalKsMatrix m;
    m.names = NamesOrDefault(names, dim);
    m.entries.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t r = 0; r < dim; ++r) {
      for (std::size_t c = 0; c < dim; ++c) {
        m.entries(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            row_major[r * dim + c];
      }
    }
    ksdiff::ValidateSubgraphMatrix(m.entries);
    *out = new ksdiff_matrix{std::move(m)};
  });
}

ksdiff_status ksdiff_matrix_load(const char* path, ksdiff_matrix** out) {
  return Guard([&] {
    RequirePtr(path, "path");
    RequirePtr(out, "out");
    *out = new ksdiff_matrix{ksdiff::LoadMatrix(std::string(path))};
  });
}

ksdiff_status ksdiff_matrix_save(const ksdiff_matrix* m, const char* path) {
  return Guard([&] {
    RequirePtr(m, "matrix");
    RequirePtr(path, "path");
    ksdiff::SaveMatrix(m->value, std::string(path));
  });
}

size_t ksdiff_matrix_dim(const ksdiff_matrix* m) { return m ? m->value.dim() : 0; }

double ksdiff_matrix_get(const ksdiff_matrix* m, size_t i, size_t j) {
  if (m == nullptr || i >= m->value.dim() || j >= m->value.dim()) return std::nan("");
  return m->value.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

const char* ksdiff_matrix_name(const ksdiff_matrix* m, size_t i) {
  if (m == nullptr || i >= m->value.names.size()) return nullptr;
  return m->value.names[i].c_str();
}

size_t ksdiff_matrix_projections(const ksdiff_matrix* m) { return m ? m->value.projections : 0; }
uint64_t ksdiff_matrix_seed(const ksdiff_matrix* m) { return m ? m->value.master_seed : 0; }

ksdiff_angle_policy ksdiff_matrix_policy(const ksdiff_matrix* m) {
  return m && m->value.policy == ksdiff::AnglePolicy::kShared ? KSDIFF_ANGLES_SHARED
                                                              : KSDIFF_ANGLES_PER_PAIR;
}

void ksdiff_matrix_free(ksdiff_matrix* m) { delete m; }

// ---- solvers ---------------------------------------------------------------

ksdiff_status ksdiff_solve(const ksdiff_matrix* m, ksdiff_solver solver, size_t k,
                           ksdiff_solution** out) {
  return Guard([&] {
    RequirePtr(m, "matrix");
    RequirePtr(out, "out");
    const auto& h = m->value.entries;
    ksdiff::SolverResult result;
    switch (ToSolver(solver)) {
      case ksdiff::SolverMethod::kGreedyScore: result = ksdiff::GreedyScore(h); break;
      case ksdiff::SolverMethod::kGreedyK: result = ksdiff::GreedyK(h, k); break;
      case ksdiff::SolverMethod::kExact: result = ksdiff::ExactMin(h, k); break;
    }
    *out = new ksdiff_solution{std::move(result)};
  });
}

size_t ksdiff_solution_dim(const ksdiff_solution* s) { return s ? s->value.dim : 0; }

size_t ksdiff_solution_selected_count(const ksdiff_solution* s) {
  return s ? s->value.selected.size() : 0;
}

size_t ksdiff_solution_selected(const ksdiff_solution* s, size_t index) {
  if (s == nullptr || index >= s->value.selected.size()) return static_cast<size_t>(-1);
  return s->value.selected[index];
}

double ksdiff_solution_score(const ksdiff_solution* s, size_t feature) {
  if (s == nullptr || feature >= s->value.scores.size()) return 0.0;
  return s->value.scores[feature];
}

double ksdiff_solution_objective(const ksdiff_solution* s) { return s ? s->value.objective : 0.0; }

void ksdiff_solution_free(ksdiff_solution* s) { delete s; }

ksdiff_status ksdiff_eta_margin(const ksdiff_matrix* m, const size_t* s_star, size_t count,
                                double* out) {
  return Guard([&] {
    RequirePtr(m, "matrix");
    RequirePtr(out, "out");
    *out = ksdiff::EtaMargin(m->value.entries, Indices(s_star, count));
  });
}

// ---- end-to-end selection --------------------------------------------------

void ksdiff_selection_options_init(ksdiff_selection_options* options) {
  if (options == nullptr) return;
  *options = ksdiff_selection_options{};
  options->method = KSDIFF_METHOD_PROPOSED;
  options->solver = KSDIFF_SOLVER_GREEDY_SCORE;
  options->projections = ksdiff::kDefaultProjections;
  options->jobs = 1;
  options->angle_policy = KSDIFF_ANGLES_PER_PAIR;
}

ksdiff_status ksdiff_select(const ksdiff_dataset* p, const ksdiff_dataset* q,
                            const ksdiff_selection_options* options, ksdiff_selection** out) {
  return Guard([&] {
    RequirePtr(p, "p");
    RequirePtr(q, "q");
    RequirePtr(options, "options");
    RequirePtr(out, "out");
    ksdiff::SelectionConfig config;
    config.method = ToMethod(options->method);
    config.solver = ToSolver(options->solver);
    if (options->has_k) config.k = options->k;
    config.projections = options->projections;
    config.seed = options->seed;
    config.jobs = options->jobs;
    if (options->has_threshold) config.threshold = options->threshold;
    config.angle_policy = ToPolicy(options->angle_policy);
    config.hara15_mode =
        options->hara15_precision ? ksdiff::Hara15Mode::kPrecision : ksdiff::Hara15Mode::kCovariance;

    auto sel = std::make_unique<ksdiff_selection>();
    sel->report = ksdiff::RunSelection(p->value, q->value, config);
    sel->json = ksdiff::SelectionReportJson(sel->report, config);
    sel->csv = ksdiff::SelectionReportCsv(sel->report);
    sel->by_rank.resize(sel->report.ranking.size());
    for (const auto& f : sel->report.ranking) sel->by_rank[f.rank - 1] = f.index;
    if (sel->report.matrix) sel->matrix = ksdiff_matrix{*sel->report.matrix};
    *out = sel.release();
  });
}

size_t ksdiff_selection_dim(const ksdiff_selection* s) { return s ? s->report.scores.size() : 0; }

double ksdiff_selection_score(const ksdiff_selection* s, size_t feature) {
  if (s == nullptr || feature >= s->report.scores.size()) return std::nan("");
  return s->report.scores[feature];
}

size_t ksdiff_selection_rank(const ksdiff_selection* s, size_t feature) {
  if (s == nullptr) return 0;
  for (const auto& f : s->report.ranking) {
    if (f.index == feature) return f.rank;
  }
  return 0;
}

size_t ksdiff_selection_feature_at_rank(const ksdiff_selection* s, size_t rank) {
  if (s == nullptr || rank == 0 || rank > s->by_rank.size()) return static_cast<size_t>(-1);
  return s->by_rank[rank - 1];
}

const char* ksdiff_selection_report_json(const ksdiff_selection* s) {
  return s ? s->json.c_str() : nullptr;
}

const char* ksdiff_selection_report_csv(const ksdiff_selection* s) {
  return s ? s->csv.c_str() : nullptr;
}

const ksdiff_matrix* ksdiff_selection_matrix(const ksdiff_selection* s) {
  return s && s->matrix ? &*s->matrix : nullptr;
}

void ksdiff_selection_free(ksdiff_selection* s) { delete s; }

// ---- Gaussian baselines ----------------------------------------------------

ksdiff_status ksdiff_baseline_scores(const ksdiff_dataset* p, const ksdiff_dataset* q,
                                     ksdiff_method method, uint64_t fold_seed, double* scores) {
  return Guard([&] {
    RequirePtr(p, "p");
    RequirePtr(q, "q");
    RequirePtr(scores, "scores");
    std::vector<double> s;
    switch (ToMethod(method)) {
      case ksdiff::MethodId::kMt: s = ksdiff::MtScore(p->value, q->value, fold_seed); break;
      case ksdiff::MethodId::kIde09: s = ksdiff::Ide09Score(p->value, q->value, fold_seed); break;
      case ksdiff::MethodId::kHara15:
        s = ksdiff::Hara15Score(p->value, q->value, ksdiff::Hara15Mode::kCovariance, fold_seed);
        break;
      case ksdiff::MethodId::kProposed:
        ksdiff::Fail(ErrorKind::kInvalidArgument,
                     "the proposed method is not a Gaussian baseline; use ksdiff_select");
    }
    std::copy(s.begin(), s.end(), scores);
  });
}

ksdiff_status ksdiff_precision_cv(const ksdiff_dataset* ds, uint64_t fold_seed, double* precision,
                                  double* kappa) {
  return Guard([&] {
    RequirePtr(ds, "dataset");
    auto est = ksdiff::EstimatePrecisionCv(ds->value, fold_seed);
    if (precision != nullptr) {
      const auto d = est.precision.rows();
      for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index c = 0; c < d; ++c) precision[r * d + c] = est.precision(r, c);
      }
    }
    if (kappa != nullptr) *kappa = est.kappa;
  });
}

// ---- synthetic data and perturbations --------------------------------------

ksdiff_status ksdiff_generate(int example, size_t rows, uint64_t seed, ksdiff_dataset** p,
                              ksdiff_dataset** q, size_t* changed) {
  return Guard([&] {
    RequirePtr(p, "p");
    RequirePtr(q, "q");
    ksdiff::Require(example == 1 || example == 2, "example must be 1 or 2");
    auto pair = example == 1 ? ksdiff::GenExample1(rows, seed) : ksdiff::GenExample2(rows, seed);
    auto out_p = std::make_unique<ksdiff_dataset>(ksdiff_dataset{std::move(pair.p)});
    auto out_q = std::make_unique<ksdiff_dataset>(ksdiff_dataset{std::move(pair.q)});
    if (changed != nullptr) *changed = pair.truth.changed.at(0);
    *p = out_p.release();
    *q = out_q.release();
  });
}

ksdiff_status ksdiff_perturb(const ksdiff_dataset* q, ksdiff_perturbation_kind kind, double c,
                             const size_t* targets, const size_t* refs, size_t count,
                             uint64_t seed, ksdiff_dataset** out) {
  return Guard([&] {
    RequirePtr(q, "dataset");
    RequirePtr(out, "out");
    ksdiff::PerturbationSpec spec;
    spec.kind = ToKind(kind);
    spec.c = c;
    spec.targets = Indices(targets, count);
    if (refs != nullptr) spec.references = Indices(refs, count);
    spec.seed = seed;
    *out = new ksdiff_dataset{ksdiff::Perturb(q->value, spec)};
  });
}

ksdiff_status ksdiff_random_targets(ksdiff_perturbation_kind kind, size_t dim, size_t count,
                                    uint64_t seed, size_t* targets, size_t* refs) {
  return Guard([&] {
    RequirePtr(targets, "targets");
    const auto k = ToKind(kind);
    auto spec = ksdiff::RandomPerturbationSpec(k, 0.0, dim, count, seed);
    std::copy(spec.targets.begin(), spec.targets.end(), targets);
    if (ksdiff::NeedsReference(k)) {
      RequirePtr(refs, "refs");
      std::copy(spec.references.begin(), spec.references.end(), refs);
    }
  });
}

// ---- theory checks ---------------------------------------------------------

ksdiff_status ksdiff_check_conditions(const ksdiff_matrix* m, const size_t* s_star, size_t count,
                                      double tolerance, int compute_eta,
                                      ksdiff_consistency** out) {
  return Guard([&] {
    RequirePtr(m, "matrix");
    RequirePtr(out, "out");
    auto report = ksdiff::CheckConditions(m->value.entries, Indices(s_star, count), tolerance,
                                          compute_eta != 0);
    auto json = ConsistencyJson(report);
    *out = new ksdiff_consistency{std::move(report), std::move(json)};
  });
}

double ksdiff_consistency_eta(const ksdiff_consistency* c) { return c ? c->value.eta : 0.0; }
int ksdiff_consistency_eta_computed(const ksdiff_consistency* c) {
  return c && c->value.eta_computed ? 1 : 0;
}
int ksdiff_consistency_necessary_holds(const ksdiff_consistency* c) {
  return c && c->value.necessary_holds ? 1 : 0;
}
int ksdiff_consistency_sufficient_holds(const ksdiff_consistency* c) {
  return c && c->value.sufficient_holds ? 1 : 0;
}
size_t ksdiff_consistency_k(const ksdiff_consistency* c) { return c ? c->value.k : 0; }
const char* ksdiff_consistency_json(const ksdiff_consistency* c) {
  return c ? c->json.c_str() : nullptr;
}
void ksdiff_consistency_free(ksdiff_consistency* c) { delete c; }

ksdiff_status ksdiff_sample_bound(size_t k, double eta, size_t dim, double epsilon,
                                  uint64_t* n_required, uint64_t* l_required) {
  return Guard([&] {
    auto b = ksdiff::ComputeSampleBound(k, eta, dim, epsilon);
    if (n_required != nullptr) *n_required = b.n_required;
    if (l_required != nullptr) *l_required = b.l_required;
  });
}

ksdiff_status ksdiff_recovery_trial(const ksdiff_matrix* m, const size_t* s_star, size_t count,
                                    size_t k, double magnitude, size_t trials, uint64_t seed,
                                    double* rate, double* eta, int* guarantee_applies) {
  return Guard([&] {
    RequirePtr(m, "matrix");
    auto r = ksdiff::RecoveryTrial(m->value.entries, Indices(s_star, count), k, magnitude, trials,
                                   seed);
    if (rate != nullptr) *rate = r.rate;
    if (eta != nullptr) *eta = r.eta;
    if (guarantee_applies != nullptr) *guarantee_applies = r.guarantee_applies ? 1 : 0;
  });
}

ksdiff_status ksdiff_kl_bound_check(double sigma, double gamma, double* kl, double* bound,
                                    int* holds) {
  return Guard([&] {
    auto r = ksdiff::KlLowerBoundCheck(sigma, gamma);
    if (kl != nullptr) *kl = r.kl;
    if (bound != nullptr) *bound = r.bound;
    if (holds != nullptr) *holds = r.holds ? 1 : 0;
  });
}

// ---- evaluation ------------------------------------------------------------

ksdiff_status ksdiff_auroc(const double* scores, size_t dim, const size_t* truth, size_t count,
                           double* out) {
  return Guard([&] {
    RequirePtr(out, "out");
    if (dim > 0) RequirePtr(scores, "scores");
    ksdiff::GroundTruth t{Indices(truth, count)};
    *out = ksdiff::Auroc(std::span<const double>(scores, dim), t);
  });
}

ksdiff_status ksdiff_experiment_run(const char* spec_json, unsigned jobs,
                                    ksdiff_experiment** out) {
  return Guard([&] {
    RequirePtr(spec_json, "spec");
    RequirePtr(out, "out");
    auto config = ksdiff::ParseExperimentConfig(spec_json);
    auto e = std::make_unique<ksdiff_experiment>();
    e->value = ksdiff::RunExperiment(config, jobs);
    std::ostringstream records;
    ksdiff::WriteRecordsCsv(e->value, records);
    e->records_csv = records.str();
    std::ostringstream auroc;
    ksdiff::WriteAurocVsNCsv(e->value, auroc);
    e->auroc_csv = auroc.str();
    e->aggregate_json = ksdiff::AggregateJson(e->value);
    *out = e.release();
  });
}

size_t ksdiff_experiment_record_count(const ksdiff_experiment* e) {
  return e ? e->value.records.size() : 0;
}
const char* ksdiff_experiment_records_csv(const ksdiff_experiment* e) {
  return e ? e->records_csv.c_str() : nullptr;
}
const char* ksdiff_experiment_auroc_vs_n_csv(const ksdiff_experiment* e) {
  return e ? e->auroc_csv.c_str() : nullptr;
}
const char* ksdiff_experiment_aggregate_json(const ksdiff_experiment* e) {
  return e ? e->aggregate_json.c_str() : nullptr;
}
void ksdiff_experiment_free(ksdiff_experiment* e) { delete e; }

}  // extern "C"
