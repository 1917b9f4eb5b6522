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


// Exercises the shared library strictly through its C header.

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include <ksdiff/ksdiff.h>

namespace {

struct Pair {
  ksdiff_dataset* p = nullptr;
  ksdiff_dataset* q = nullptr;
  size_t changed = 0;
  Pair(int example, size_t rows, uint64_t seed) {
    REQUIRE(ksdiff_generate(example, rows, seed, &p, &q, &changed) == KSDIFF_OK);
  }
  ~Pair() {
    ksdiff_dataset_free(p);
    ksdiff_dataset_free(q);
  }
};

std::filesystem::path TempPath(const char* name) {
  return std::filesystem::temp_directory_path() / ("ksdiff_capi_" + std::string(name));
}

}  // namespace

TEST_CASE("status strings and name lookups") {
  CHECK(std::string(ksdiff_version()).size() > 0);
  CHECK(std::string(ksdiff_status_string(KSDIFF_ERR_LIMIT)) == "limit exceeded");
  ksdiff_method m;
  CHECK(ksdiff_method_from_name("hara15", &m) == KSDIFF_OK);
  CHECK(m == KSDIFF_METHOD_HARA15);
  CHECK(ksdiff_method_from_name("bogus", &m) == KSDIFF_ERR_INVALID_ARGUMENT);
  CHECK(std::string(ksdiff_last_error()).find("bogus") != std::string::npos);
  ksdiff_solver s;
  CHECK(ksdiff_solver_from_name("exact", &s) == KSDIFF_OK);
  CHECK(s == KSDIFF_SOLVER_EXACT);
  ksdiff_perturbation_kind k;
  CHECK(ksdiff_perturbation_kind_from_name("mean_shift", &k) == KSDIFF_OK);
  CHECK(k == KSDIFF_PERTURB_MEAN_SHIFT);
  ksdiff_angle_policy a;
  CHECK(ksdiff_angle_policy_from_name("shared", &a) == KSDIFF_OK);
  CHECK(a == KSDIFF_ANGLES_SHARED);
  CHECK(ksdiff_method_from_name(nullptr, &m) == KSDIFF_ERR_INVALID_ARGUMENT);
}

TEST_CASE("datasets round-trip through CSV") {
  const double values[] = {1.0, 2.0, 3.5, -4.0, 0.25, 6.0};
  const char* names[] = {"a", "b"};
  ksdiff_dataset* ds = nullptr;
  REQUIRE(ksdiff_dataset_create(3, 2, values, names, &ds) == KSDIFF_OK);
  CHECK(ksdiff_dataset_rows(ds) == 3);
  CHECK(ksdiff_dataset_cols(ds) == 2);
  CHECK(std::string(ksdiff_dataset_name(ds, 1)) == "b");
  double col[3];
  REQUIRE(ksdiff_dataset_column(ds, 1, col) == KSDIFF_OK);
  CHECK(col[0] == 2.0);
  CHECK(col[1] == -4.0);
  CHECK(col[2] == 6.0);
  CHECK(ksdiff_dataset_column(ds, 2, col) == KSDIFF_ERR_INVALID_ARGUMENT);

  const auto path = TempPath("roundtrip.csv");
  REQUIRE(ksdiff_dataset_save_csv(ds, path.c_str()) == KSDIFF_OK);
  ksdiff_dataset* back = nullptr;
  REQUIRE(ksdiff_dataset_load_csv(path.c_str(), &back) == KSDIFF_OK);
  double again[3];
  ksdiff_dataset_column(back, 0, again);
  CHECK(again[0] == 1.0);
  CHECK(again[1] == 3.5);
  CHECK(again[2] == 0.25);

  ksdiff_dataset* z = nullptr;
  REQUIRE(ksdiff_dataset_standardize(ds, &z) == KSDIFF_OK);
  double zc[3];
  ksdiff_dataset_column(z, 0, zc);
  CHECK(zc[0] + zc[1] + zc[2] == doctest::Approx(0.0).epsilon(1e-12));

  ksdiff_dataset_free(z);
  ksdiff_dataset_free(back);
  ksdiff_dataset_free(ds);
  std::filesystem::remove(path);

  ksdiff_dataset* missing = nullptr;
  CHECK(ksdiff_dataset_load_csv("/nonexistent/dir/file.csv", &missing) == KSDIFF_ERR_IO);
  CHECK(missing == nullptr);
  CHECK(std::strlen(ksdiff_last_error()) > 0);

  const auto bad = TempPath("bad.csv");
  if (FILE* f = std::fopen(bad.c_str(), "w")) {
    std::fputs("a,b\n1,zz\n", f);
    std::fclose(f);
  }
  CHECK(ksdiff_dataset_load_csv(bad.c_str(), &missing) == KSDIFF_ERR_PARSE);
  std::filesystem::remove(bad);
}

TEST_CASE("KS statistic entry points") {
  const double p[] = {0.0, 1.0, 2.0, 3.0};
  const double q[] = {10.0, 11.0};
  double d = -1.0;
  REQUIRE(ksdiff_ks_statistic(p, 4, q, 2, &d) == KSDIFF_OK);
  CHECK(d == 1.0);
  REQUIRE(ksdiff_ks_statistic(p, 4, p, 4, &d) == KSDIFF_OK);
  CHECK(d == 0.0);
  CHECK(ksdiff_ks_statistic(p, 0, q, 2, &d) == KSDIFF_ERR_INVALID_ARGUMENT);

  Pair pair(2, 300, 1);
  double a = 0.0, b = 0.0;
  REQUIRE(ksdiff_projected_ks(pair.p, pair.q, 0, 1, 10, 5, &a) == KSDIFF_OK);
  REQUIRE(ksdiff_projected_ks(pair.p, pair.q, 0, 1, 10, 5, &b) == KSDIFF_OK);
  CHECK(a == b);
  CHECK(a > 0.0);
  CHECK(ksdiff_projected_ks(pair.p, pair.q, 0, 1, 0, 5, &a) == KSDIFF_ERR_INVALID_ARGUMENT);
}

TEST_CASE("matrix, solvers and consistency") {
  Pair pair(2, 500, 2);
  CHECK(pair.changed == 0);
  ksdiff_matrix* m = nullptr;
  REQUIRE(ksdiff_matrix_build(pair.p, pair.q, 10, 9, KSDIFF_ANGLES_PER_PAIR, 2, &m) == KSDIFF_OK);
  const size_t dim = ksdiff_matrix_dim(m);
  CHECK(dim == 20);
  CHECK(ksdiff_matrix_projections(m) == 10);
  CHECK(ksdiff_matrix_seed(m) == 9);
  CHECK(ksdiff_matrix_policy(m) == KSDIFF_ANGLES_PER_PAIR);
  CHECK(std::string(ksdiff_matrix_name(m, 0)) == "x1");
  CHECK(ksdiff_matrix_get(m, 3, 5) == ksdiff_matrix_get(m, 5, 3));
  CHECK(std::isnan(ksdiff_matrix_get(m, dim, 0)));

  const auto path = TempPath("matrix.csv");
  REQUIRE(ksdiff_matrix_save(m, path.c_str()) == KSDIFF_OK);
  ksdiff_matrix* loaded = nullptr;
  REQUIRE(ksdiff_matrix_load(path.c_str(), &loaded) == KSDIFF_OK);
  for (size_t i = 0; i < dim; ++i) {
    for (size_t j = 0; j < dim; ++j) CHECK(ksdiff_matrix_get(loaded, i, j) == ksdiff_matrix_get(m, i, j));
  }
  ksdiff_matrix_free(loaded);
  std::filesystem::remove(path);

  ksdiff_solution* sol = nullptr;
  REQUIRE(ksdiff_solve(m, KSDIFF_SOLVER_GREEDY_SCORE, 0, &sol) == KSDIFF_OK);
  CHECK(ksdiff_solution_dim(sol) == dim);
  CHECK(ksdiff_solution_selected_count(sol) == dim);
  double best = -1.0;
  size_t arg = dim;
  for (size_t d = 0; d < dim; ++d) {
    if (ksdiff_solution_score(sol, d) > best) {
      best = ksdiff_solution_score(sol, d);
      arg = d;
    }
  }
  CHECK(arg == 0);
  ksdiff_solution_free(sol);

  REQUIRE(ksdiff_solve(m, KSDIFF_SOLVER_EXACT, dim - 1, &sol) == KSDIFF_OK);
  REQUIRE(ksdiff_solution_selected_count(sol) == 1);
  CHECK(ksdiff_solution_selected(sol, 0) == 0);
  ksdiff_solution_free(sol);

  sol = nullptr;
  CHECK(ksdiff_solve(m, KSDIFF_SOLVER_GREEDY_K, dim + 1, &sol) == KSDIFF_ERR_INVALID_ARGUMENT);
  CHECK(sol == nullptr);

  const size_t s_star[] = {0};
  double eta = 0.0;
  REQUIRE(ksdiff_eta_margin(m, s_star, 1, &eta) == KSDIFF_OK);
  CHECK(eta > 0.0);

  ksdiff_consistency* c = nullptr;
  REQUIRE(ksdiff_check_conditions(m, s_star, 1, 0.02, 1, &c) == KSDIFF_OK);
  CHECK(ksdiff_consistency_eta(c) == eta);
  CHECK(ksdiff_consistency_eta_computed(c) == 1);
  CHECK(ksdiff_consistency_necessary_holds(c) == 1);
  CHECK(ksdiff_consistency_k(c) == dim - 1);
  CHECK(std::string(ksdiff_consistency_json(c)).find("\"sufficient_holds\"") != std::string::npos);
  ksdiff_consistency_free(c);

  ksdiff_matrix_free(m);
}

TEST_CASE("limit errors from the exact solver") {
  std::vector<double> zeros(26 * 26, 0.0);
  ksdiff_matrix* m = nullptr;
  REQUIRE(ksdiff_matrix_from_values(26, zeros.data(), nullptr, &m) == KSDIFF_OK);
  ksdiff_solution* sol = nullptr;
  CHECK(ksdiff_solve(m, KSDIFF_SOLVER_EXACT, 3, &sol) == KSDIFF_ERR_LIMIT);
  CHECK(ksdiff_solve(m, KSDIFF_SOLVER_GREEDY_K, 3, &sol) == KSDIFF_OK);
  ksdiff_solution_free(sol);
  ksdiff_matrix_free(m);

  const double asym[] = {0.0, 1.0, 0.5, 0.0};
  CHECK(ksdiff_matrix_from_values(2, asym, nullptr, &m) == KSDIFF_ERR_INVALID_ARGUMENT);
}

TEST_CASE("selection through options") {
  Pair pair(2, 800, 3);
  ksdiff_selection_options opt;
  ksdiff_selection_options_init(&opt);
  CHECK(opt.method == KSDIFF_METHOD_PROPOSED);
  CHECK(opt.solver == KSDIFF_SOLVER_GREEDY_SCORE);
  CHECK(opt.projections == 10);
  opt.seed = 4;
  opt.has_threshold = 1;
  opt.threshold = 0.0;
  ksdiff_selection* sel = nullptr;
  REQUIRE(ksdiff_select(pair.p, pair.q, &opt, &sel) == KSDIFF_OK);
  CHECK(ksdiff_selection_dim(sel) == 20);
  CHECK(ksdiff_selection_feature_at_rank(sel, 1) == 0);
  CHECK(ksdiff_selection_rank(sel, 0) == 1);
  CHECK(ksdiff_selection_score(sel, 0) > 0.0);
  CHECK(ksdiff_selection_matrix(sel) != nullptr);
  CHECK(std::string(ksdiff_selection_report_json(sel)).find("\"above_threshold\"") !=
        std::string::npos);
  CHECK(std::string(ksdiff_selection_report_csv(sel)).rfind("name,score,rank,above_threshold", 0) ==
        0);
  ksdiff_selection_free(sel);

  opt.method = KSDIFF_METHOD_MT;
  opt.solver = KSDIFF_SOLVER_EXACT;
  opt.has_k = 1;
  opt.k = 19;
  sel = nullptr;
  CHECK(ksdiff_select(pair.p, pair.q, &opt, &sel) == KSDIFF_ERR_INVALID_ARGUMENT);
  CHECK(sel == nullptr);
}

TEST_CASE("baselines, synthesis and perturbation") {
  Pair pair(1, 2000, 4);
  double scores[20];
  for (ksdiff_method m : {KSDIFF_METHOD_MT, KSDIFF_METHOD_IDE09, KSDIFF_METHOD_HARA15}) {
    REQUIRE(ksdiff_baseline_scores(pair.p, pair.q, m, 0, scores) == KSDIFF_OK);
    for (double s : scores) CHECK(std::isfinite(s));
  }
  std::vector<double> precision(400);
  double kappa = 0.0;
  REQUIRE(ksdiff_precision_cv(pair.p, 0, precision.data(), &kappa) == KSDIFF_OK);
  CHECK(kappa > 0.0);
  CHECK(precision[1] == precision[20]);

  size_t targets[3], refs[3];
  REQUIRE(ksdiff_random_targets(KSDIFF_PERTURB_COV_CHANGE, 20, 3, 8, targets, refs) == KSDIFF_OK);
  for (int i = 0; i < 3; ++i) CHECK(targets[i] != refs[i]);
  ksdiff_dataset* out = nullptr;
  REQUIRE(ksdiff_perturb(pair.q, KSDIFF_PERTURB_MEAN_SHIFT, 0.0, targets, nullptr, 3, 1, &out) ==
          KSDIFF_OK);
  double a[2000], b[2000];
  ksdiff_dataset_column(out, targets[0], a);
  ksdiff_dataset_column(pair.q, targets[0], b);
  CHECK(std::memcmp(a, b, sizeof a) == 0);
  ksdiff_dataset_free(out);
  out = nullptr;
  CHECK(ksdiff_perturb(pair.q, KSDIFF_PERTURB_COV_CHANGE, 0.5, targets, nullptr, 3, 1, &out) ==
        KSDIFF_ERR_INVALID_ARGUMENT);

  ksdiff_dataset *p = nullptr, *q = nullptr;
  CHECK(ksdiff_generate(3, 100, 0, &p, &q, nullptr) == KSDIFF_ERR_INVALID_ARGUMENT);
}

TEST_CASE("theory entry points") {
  uint64_t n = 0, l = 0;
  REQUIRE(ksdiff_sample_bound(1, 0.5, 20, 0.05, &n, &l) == KSDIFF_OK);
  CHECK(n == static_cast<uint64_t>(std::ceil(32.0 * std::log(4800.0))));
  CHECK(ksdiff_sample_bound(1, 0.0, 20, 0.05, &n, &l) == KSDIFF_ERR_INVALID_ARGUMENT);
  CHECK(std::string(ksdiff_last_error()).find("not uniquely identifiable") != std::string::npos);

  double kl = 0.0, bound = 0.0;
  int holds = 0;
  REQUIRE(ksdiff_kl_bound_check(0.4, 0.4, &kl, &bound, &holds) == KSDIFF_OK);
  CHECK(bound == -0.125);
  CHECK(holds == 1);
  CHECK(ksdiff_kl_bound_check(1.0, 0.4, &kl, &bound, &holds) == KSDIFF_ERR_INVALID_ARGUMENT);

  const double h[] = {0, 0, 0, 0, 0, 0, 0, 0, 1};
  ksdiff_matrix* m = nullptr;
  REQUIRE(ksdiff_matrix_from_values(3, h, nullptr, &m) == KSDIFF_OK);
  const size_t s_star[] = {2};
  double rate = 0.0, eta = 0.0;
  int applies = 0;
  REQUIRE(ksdiff_recovery_trial(m, s_star, 1, 2, 0.0, 10, 1, &rate, &eta, &applies) == KSDIFF_OK);
  CHECK(rate == 1.0);
  CHECK(eta == 1.0);
  CHECK(applies == 1);
  ksdiff_matrix_free(m);
}

TEST_CASE("evaluation entry points") {
  const double scores[] = {0.9, 0.1, 0.2};
  const size_t truth[] = {0};
  double a = 0.0;
  REQUIRE(ksdiff_auroc(scores, 3, truth, 1, &a) == KSDIFF_OK);
  CHECK(a == 1.0);
  CHECK(ksdiff_auroc(scores, 3, truth, 0, &a) == KSDIFF_ERR_INVALID_ARGUMENT);

  const char* spec =
      R"({"generator":"identical","methods":["proposed"],"N":[100],"repetitions":1,"seed":0,"timing":false})";
  ksdiff_experiment* e1 = nullptr;
  ksdiff_experiment* e2 = nullptr;
  REQUIRE(ksdiff_experiment_run(spec, 1, &e1) == KSDIFF_OK);
  REQUIRE(ksdiff_experiment_run(spec, 4, &e2) == KSDIFF_OK);
  CHECK(ksdiff_experiment_record_count(e1) == 1);
  CHECK(std::string(ksdiff_experiment_records_csv(e1)) == ksdiff_experiment_records_csv(e2));
  CHECK(std::string(ksdiff_experiment_aggregate_json(e1)) == ksdiff_experiment_aggregate_json(e2));
  CHECK(std::string(ksdiff_experiment_auroc_vs_n_csv(e1)).rfind("method,N,mean_auroc,std\n", 0) ==
        0);
  ksdiff_experiment_free(e1);
  ksdiff_experiment_free(e2);

  ksdiff_experiment* bad = nullptr;
  CHECK(ksdiff_experiment_run("{", 1, &bad) == KSDIFF_ERR_PARSE);
  CHECK(bad == nullptr);
}

TEST_CASE("null handles are tolerated by accessors and free functions") {
  ksdiff_dataset_free(nullptr);
  ksdiff_matrix_free(nullptr);
  ksdiff_solution_free(nullptr);
  ksdiff_selection_free(nullptr);
  ksdiff_consistency_free(nullptr);
  ksdiff_experiment_free(nullptr);
  CHECK(ksdiff_dataset_rows(nullptr) == 0);
  CHECK(ksdiff_matrix_dim(nullptr) == 0);
  CHECK(ksdiff_selection_report_json(nullptr) == nullptr);
  ksdiff_matrix* m = nullptr;
  CHECK(ksdiff_matrix_build(nullptr, nullptr, 10, 0, KSDIFF_ANGLES_PER_PAIR, 1, &m) ==
        KSDIFF_ERR_INVALID_ARGUMENT);
}
