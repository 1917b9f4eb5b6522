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

/*
 * ksdiff C API.
 *
 * Every object is an opaque handle created by a ksdiff_*_create/_load/_build
 * style call and released with the matching ksdiff_*_free. Fallible calls
 * return a ksdiff_status; on failure ksdiff_last_error() describes the
 * problem. The message is thread-local and stays valid until the next failing
 * call on the same thread. Feature indices are 0-based.
 */
#ifndef KSDIFF_KSDIFF_H_
#define KSDIFF_KSDIFF_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(KSDIFF_BUILDING)
#define KSDIFF_API __declspec(dllexport)
#else
#define KSDIFF_API __declspec(dllimport)
#endif
#else
#define KSDIFF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ksdiff_status {
  KSDIFF_OK = 0,
  KSDIFF_ERR_INVALID_ARGUMENT = 1,
  KSDIFF_ERR_PARSE = 2,
  KSDIFF_ERR_IO = 3,
  KSDIFF_ERR_LIMIT = 4, /* e.g. exact solver size limit */
  KSDIFF_ERR_NUMERIC = 5,
  KSDIFF_ERR_INTERNAL = 6
} ksdiff_status;

typedef enum ksdiff_angle_policy {
  KSDIFF_ANGLES_PER_PAIR = 0,
  KSDIFF_ANGLES_SHARED = 1
} ksdiff_angle_policy;

typedef enum ksdiff_solver {
  KSDIFF_SOLVER_GREEDY_SCORE = 0,
  KSDIFF_SOLVER_GREEDY_K = 1,
  KSDIFF_SOLVER_EXACT = 2
} ksdiff_solver;

typedef enum ksdiff_method {
  KSDIFF_METHOD_PROPOSED = 0,
  KSDIFF_METHOD_MT = 1,
  KSDIFF_METHOD_IDE09 = 2,
  KSDIFF_METHOD_HARA15 = 3
} ksdiff_method;

typedef enum ksdiff_perturbation_kind {
  KSDIFF_PERTURB_MEAN_SHIFT = 0,
  KSDIFF_PERTURB_VARIANCE_CHANGE = 1,
  KSDIFF_PERTURB_COV_CHANGE = 2,
  KSDIFF_PERTURB_COV_CHANGE_CONDITIONAL = 3,
  KSDIFF_PERTURB_COV_CHANGE_NO_VAR = 4
} ksdiff_perturbation_kind;

typedef struct ksdiff_dataset ksdiff_dataset;
typedef struct ksdiff_matrix ksdiff_matrix;
typedef struct ksdiff_solution ksdiff_solution;
typedef struct ksdiff_selection ksdiff_selection;
typedef struct ksdiff_consistency ksdiff_consistency;
typedef struct ksdiff_experiment ksdiff_experiment;

KSDIFF_API const char* ksdiff_version(void);
KSDIFF_API const char* ksdiff_last_error(void);
KSDIFF_API const char* ksdiff_status_string(ksdiff_status status);

/* Name lookups ("proposed", "greedy-score", "mean_shift", "per-pair", ...). */
KSDIFF_API ksdiff_status ksdiff_method_from_name(const char* name, ksdiff_method* out);
KSDIFF_API ksdiff_status ksdiff_solver_from_name(const char* name, ksdiff_solver* out);
KSDIFF_API ksdiff_status ksdiff_perturbation_kind_from_name(const char* name,
                                                           ksdiff_perturbation_kind* out);
KSDIFF_API ksdiff_status ksdiff_angle_policy_from_name(const char* name,
                                                      ksdiff_angle_policy* out);

/* ---- datasets ---------------------------------------------------------- */

/* `names` may be NULL (x1..xD). Non-finite values are rejected. */
KSDIFF_API ksdiff_status ksdiff_dataset_create(size_t rows, size_t cols, const double* row_major,
                                               const char* const* names, ksdiff_dataset** out);
KSDIFF_API ksdiff_status ksdiff_dataset_load_csv(const char* path, ksdiff_dataset** out);
KSDIFF_API ksdiff_status ksdiff_dataset_save_csv(const ksdiff_dataset* ds, const char* path);
KSDIFF_API size_t ksdiff_dataset_rows(const ksdiff_dataset* ds);
KSDIFF_API size_t ksdiff_dataset_cols(const ksdiff_dataset* ds);
/* NULL when col is out of range. */
KSDIFF_API const char* ksdiff_dataset_name(const ksdiff_dataset* ds, size_t col);
/* Copies column `col` into out[0..rows). */
KSDIFF_API ksdiff_status ksdiff_dataset_column(const ksdiff_dataset* ds, size_t col, double* out);
KSDIFF_API ksdiff_status ksdiff_dataset_standardize(const ksdiff_dataset* ds,
                                                   ksdiff_dataset** out);
KSDIFF_API void ksdiff_dataset_free(ksdiff_dataset* ds);

/* ---- KS statistics ----------------------------------------------------- */

KSDIFF_API ksdiff_status ksdiff_ks_statistic(const double* p, size_t n, const double* q, size_t m,
                                             double* out);
/* Sampled projected KS distance of features (i, j) with the per-pair angle
 * set of (seed, i, j), i.e. the value a matrix build with that seed uses. */
KSDIFF_API ksdiff_status ksdiff_projected_ks(const ksdiff_dataset* p, const ksdiff_dataset* q,
                                             size_t i, size_t j, size_t projections,
                                             uint64_t seed, double* out);

/* ---- KS matrix --------------------------------------------------------- */

/* jobs = 0 uses every hardware thread; the result does not depend on it. */
KSDIFF_API ksdiff_status ksdiff_matrix_build(const ksdiff_dataset* p, const ksdiff_dataset* q,
                                             size_t projections, uint64_t seed,
                                             ksdiff_angle_policy policy, unsigned jobs,
                                             ksdiff_matrix** out);
/* Wraps any symmetric nonnegative matrix (e.g. for the solvers or theory
 * checks). `names` may be NULL. Saving requires entries in [0, 1]. */
KSDIFF_API ksdiff_status ksdiff_matrix_from_values(size_t dim, const double* row_major,
                                                   const char* const* names,
                                                   ksdiff_matrix** out);
KSDIFF_API ksdiff_status ksdiff_matrix_load(const char* path, ksdiff_matrix** out);
KSDIFF_API ksdiff_status ksdiff_matrix_save(const ksdiff_matrix* m, const char* path);
KSDIFF_API size_t ksdiff_matrix_dim(const ksdiff_matrix* m);
KSDIFF_API double ksdiff_matrix_get(const ksdiff_matrix* m, size_t i, size_t j);
KSDIFF_API const char* ksdiff_matrix_name(const ksdiff_matrix* m, size_t i);
KSDIFF_API size_t ksdiff_matrix_projections(const ksdiff_matrix* m);
KSDIFF_API uint64_t ksdiff_matrix_seed(const ksdiff_matrix* m);
KSDIFF_API ksdiff_angle_policy ksdiff_matrix_policy(const ksdiff_matrix* m);
KSDIFF_API void ksdiff_matrix_free(ksdiff_matrix* m);

/* ---- solvers ----------------------------------------------------------- */

/* k is ignored by the greedy-score solver. */
KSDIFF_API ksdiff_status ksdiff_solve(const ksdiff_matrix* m, ksdiff_solver solver, size_t k,
                                      ksdiff_solution** out);
KSDIFF_API size_t ksdiff_solution_dim(const ksdiff_solution* s);
/* Selected (changed) features: insertion order for greedy, ascending for exact. */
KSDIFF_API size_t ksdiff_solution_selected_count(const ksdiff_solution* s);
KSDIFF_API size_t ksdiff_solution_selected(const ksdiff_solution* s, size_t index);
/* Greedy-score only; 0 otherwise. */
KSDIFF_API double ksdiff_solution_score(const ksdiff_solution* s, size_t feature);
KSDIFF_API double ksdiff_solution_objective(const ksdiff_solution* s);
KSDIFF_API void ksdiff_solution_free(ksdiff_solution* s);

/* +inf when S*^c is the only candidate of its size. */
KSDIFF_API ksdiff_status ksdiff_eta_margin(const ksdiff_matrix* m, const size_t* s_star,
                                           size_t count, double* out);

/* ---- end-to-end selection ---------------------------------------------- */

typedef struct ksdiff_selection_options {
  ksdiff_method method;
  ksdiff_solver solver;
  int has_k;
  size_t k;
  size_t projections; /* L */
  uint64_t seed;
  unsigned jobs;
  int has_threshold;
  double threshold;
  ksdiff_angle_policy angle_policy;
  int hara15_precision; /* 0: covariance differences, 1: precision differences */
} ksdiff_selection_options;

/* Defaults: proposed, greedy-score, L = 10, seed 0, one job, no threshold. */
KSDIFF_API void ksdiff_selection_options_init(ksdiff_selection_options* options);
KSDIFF_API ksdiff_status ksdiff_select(const ksdiff_dataset* p, const ksdiff_dataset* q,
                                       const ksdiff_selection_options* options,
                                       ksdiff_selection** out);
KSDIFF_API size_t ksdiff_selection_dim(const ksdiff_selection* s);
KSDIFF_API double ksdiff_selection_score(const ksdiff_selection* s, size_t feature);
/* 1-based rank of a feature (ties broken by index). */
KSDIFF_API size_t ksdiff_selection_rank(const ksdiff_selection* s, size_t feature);
/* Feature index holding 1-based rank `rank`. */
KSDIFF_API size_t ksdiff_selection_feature_at_rank(const ksdiff_selection* s, size_t rank);
/* Borrowed strings / handle, valid while the selection lives. The matrix is
 * NULL for methods other than "proposed". */
KSDIFF_API const char* ksdiff_selection_report_json(const ksdiff_selection* s);
KSDIFF_API const char* ksdiff_selection_report_csv(const ksdiff_selection* s);
KSDIFF_API const ksdiff_matrix* ksdiff_selection_matrix(const ksdiff_selection* s);
KSDIFF_API void ksdiff_selection_free(ksdiff_selection* s);

/* ---- Gaussian baselines ------------------------------------------------ */

/* scores must hold D values. */
KSDIFF_API ksdiff_status ksdiff_baseline_scores(const ksdiff_dataset* p, const ksdiff_dataset* q,
                                                ksdiff_method method, uint64_t fold_seed,
                                                double* scores);
/* precision must hold D*D values (row-major). */
KSDIFF_API ksdiff_status ksdiff_precision_cv(const ksdiff_dataset* ds, uint64_t fold_seed,
                                             double* precision, double* kappa);

/* ---- synthetic data and perturbations ---------------------------------- */

/* example is 1 or 2; `changed` (nullable) receives the changed feature. */
KSDIFF_API ksdiff_status ksdiff_generate(int example, size_t rows, uint64_t seed,
                                         ksdiff_dataset** p, ksdiff_dataset** q,
                                         size_t* changed);
/* refs may be NULL for mean_shift / variance_change. */
KSDIFF_API ksdiff_status ksdiff_perturb(const ksdiff_dataset* q, ksdiff_perturbation_kind kind,
                                        double c, const size_t* targets, const size_t* refs,
                                        size_t count, uint64_t seed, ksdiff_dataset** out);
/* Random targets (and references from the remaining features). */
KSDIFF_API ksdiff_status ksdiff_random_targets(ksdiff_perturbation_kind kind, size_t dim,
                                               size_t count, uint64_t seed, size_t* targets,
                                               size_t* refs);

/* ---- theory checks ----------------------------------------------------- */

KSDIFF_API ksdiff_status ksdiff_check_conditions(const ksdiff_matrix* m, const size_t* s_star,
                                                 size_t count, double tolerance,
                                                 int compute_eta, ksdiff_consistency** out);
KSDIFF_API double ksdiff_consistency_eta(const ksdiff_consistency* c);
KSDIFF_API int ksdiff_consistency_eta_computed(const ksdiff_consistency* c);
KSDIFF_API int ksdiff_consistency_necessary_holds(const ksdiff_consistency* c);
KSDIFF_API int ksdiff_consistency_sufficient_holds(const ksdiff_consistency* c);
KSDIFF_API size_t ksdiff_consistency_k(const ksdiff_consistency* c);
KSDIFF_API const char* ksdiff_consistency_json(const ksdiff_consistency* c);
KSDIFF_API void ksdiff_consistency_free(ksdiff_consistency* c);

KSDIFF_API ksdiff_status ksdiff_sample_bound(size_t k, double eta, size_t dim, double epsilon,
                                             uint64_t* n_required, uint64_t* l_required);
KSDIFF_API ksdiff_status ksdiff_recovery_trial(const ksdiff_matrix* m, const size_t* s_star,
                                               size_t count, size_t k, double magnitude,
                                               size_t trials, uint64_t seed, double* rate,
                                               double* eta, int* guarantee_applies);
KSDIFF_API ksdiff_status ksdiff_kl_bound_check(double sigma, double gamma, double* kl,
                                               double* bound, int* holds);

/* ---- evaluation -------------------------------------------------------- */

KSDIFF_API ksdiff_status ksdiff_auroc(const double* scores, size_t dim, const size_t* truth,
                                      size_t count, double* out);
/* spec_json: see README ("Experiment spec"). */
KSDIFF_API ksdiff_status ksdiff_experiment_run(const char* spec_json, unsigned jobs,
                                               ksdiff_experiment** out);
KSDIFF_API size_t ksdiff_experiment_record_count(const ksdiff_experiment* e);
KSDIFF_API const char* ksdiff_experiment_records_csv(const ksdiff_experiment* e);
KSDIFF_API const char* ksdiff_experiment_auroc_vs_n_csv(const ksdiff_experiment* e);
KSDIFF_API const char* ksdiff_experiment_aggregate_json(const ksdiff_experiment* e);
KSDIFF_API void ksdiff_experiment_free(ksdiff_experiment* e);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  /* KSDIFF_KSDIFF_H_ */
