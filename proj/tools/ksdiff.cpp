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


// ksdiff command-line tool. Everything goes through the public C API.
//
// Exit codes: 0 success, 2 usage or input errors (bad flags, unreadable or
// malformed files, invalid arguments), 3 limit errors (exact solver too large),
// 1 for anything unexpected.

#include <ksdiff/ksdiff.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

namespace {

constexpr int kExitInput = 2;
constexpr int kExitLimit = 3;
constexpr int kExitInternal = 1;

// Carries a C API failure up to main, which turns it into an exit code.
struct ApiFailure {
  ksdiff_status status;
  std::string message;
};

void Check(ksdiff_status status, const std::string& context) {
  if (status == KSDIFF_OK) return;
  throw ApiFailure{status, context + ": " + ksdiff_last_error()};
}

struct UsageError {
  std::string message;
};

int ExitCodeFor(ksdiff_status status) {
  switch (status) {
    case KSDIFF_ERR_LIMIT: return kExitLimit;
    case KSDIFF_ERR_INTERNAL: return kExitInternal;
    default: return kExitInput;
  }
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using DatasetPtr = std::unique_ptr<ksdiff_dataset, Deleter<ksdiff_dataset, ksdiff_dataset_free>>;
using MatrixPtr = std::unique_ptr<ksdiff_matrix, Deleter<ksdiff_matrix, ksdiff_matrix_free>>;
using SelectionPtr =
    std::unique_ptr<ksdiff_selection, Deleter<ksdiff_selection, ksdiff_selection_free>>;
using ConsistencyPtr =
    std::unique_ptr<ksdiff_consistency, Deleter<ksdiff_consistency, ksdiff_consistency_free>>;
using ExperimentPtr =
    std::unique_ptr<ksdiff_experiment, Deleter<ksdiff_experiment, ksdiff_experiment_free>>;

DatasetPtr LoadCsv(const std::string& path) {
  ksdiff_dataset* ds = nullptr;
  Check(ksdiff_dataset_load_csv(path.c_str(), &ds), "reading " + path);
  return DatasetPtr(ds);
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ApiFailure{KSDIFF_ERR_IO, "cannot open " + path + " for writing"};
  out << text;
  if (!out) throw ApiFailure{KSDIFF_ERR_IO, "failed writing " + path};
}

std::string ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ApiFailure{KSDIFF_ERR_IO, "cannot open " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ksdiff_angle_policy ParsePolicy(const std::string& name) {
  ksdiff_angle_policy policy{};
  Check(ksdiff_angle_policy_from_name(name.c_str(), &policy), "--angles");
  return policy;
}

// ---- select ----------------------------------------------------------------

struct SelectArgs {
  std::string p, q, method = "proposed", solver = "greedy-score", out, format = "json";
  std::string angles = "per-pair", hara15_mode = "covariance";
  std::optional<std::size_t> k;
  std::size_t projections = 10;
  std::uint64_t seed = 0;
  std::optional<double> threshold;
  unsigned jobs = 1;
};

void RunSelect(const SelectArgs& a) {
  ksdiff_selection_options options;
  ksdiff_selection_options_init(&options);
  Check(ksdiff_method_from_name(a.method.c_str(), &options.method), "--method");
  Check(ksdiff_solver_from_name(a.solver.c_str(), &options.solver), "--solver");
  if (a.k) {
    options.has_k = 1;
    options.k = *a.k;
  }
  options.projections = a.projections;
  options.seed = a.seed;
  options.jobs = a.jobs;
  if (a.threshold) {
    options.has_threshold = 1;
    options.threshold = *a.threshold;
  }
  options.angle_policy = ParsePolicy(a.angles);
  if (a.hara15_mode == "precision") {
    options.hara15_precision = 1;
  } else if (a.hara15_mode != "covariance") {
    throw UsageError{"--hara15-mode must be covariance or precision"};
  }

  auto p = LoadCsv(a.p);
  auto q = LoadCsv(a.q);
  ksdiff_selection* raw = nullptr;
  Check(ksdiff_select(p.get(), q.get(), &options, &raw), "select");
  SelectionPtr sel(raw);
  WriteText(a.out, a.format == "csv" ? ksdiff_selection_report_csv(sel.get())
                                     : ksdiff_selection_report_json(sel.get()));
}

// ---- matrix ----------------------------------------------------------------

struct MatrixArgs {
  std::string p, q, out, angles = "per-pair";
  std::size_t projections = 10;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

void RunMatrix(const MatrixArgs& a) {
  auto p = LoadCsv(a.p);
  auto q = LoadCsv(a.q);
  ksdiff_matrix* raw = nullptr;
  Check(ksdiff_matrix_build(p.get(), q.get(), a.projections, a.seed, ParsePolicy(a.angles), a.jobs,
                            &raw),
        "matrix");
  MatrixPtr m(raw);
  Check(ksdiff_matrix_save(m.get(), a.out.c_str()), "writing " + a.out);
}

// ---- experiment ------------------------------------------------------------

struct ExperimentArgs {
  std::string spec, out_dir;
  unsigned jobs = 1;
};

void RunExperimentCmd(const ExperimentArgs& a) {
  const std::string spec = ReadText(a.spec);
  ksdiff_experiment* raw = nullptr;
  Check(ksdiff_experiment_run(spec.c_str(), a.jobs, &raw), a.spec);
  ExperimentPtr e(raw);
  std::error_code ec;
  std::filesystem::create_directories(a.out_dir, ec);
  if (ec) throw ApiFailure{KSDIFF_ERR_IO, "cannot create " + a.out_dir + ": " + ec.message()};
  const std::filesystem::path dir(a.out_dir);
  WriteText((dir / "report.csv").string(), ksdiff_experiment_records_csv(e.get()));
  WriteText((dir / "aggregate.json").string(), ksdiff_experiment_aggregate_json(e.get()));
  WriteText((dir / "auroc_vs_N.csv").string(), ksdiff_experiment_auroc_vs_n_csv(e.get()));
}

// ---- perturb ---------------------------------------------------------------

struct PerturbArgs {
  std::string in, out, kind;
  double c = 0.0;
  std::vector<std::size_t> targets, refs;
  std::optional<std::size_t> count;
  std::uint64_t seed = 0;
};

void RunPerturb(const PerturbArgs& a) {
  ksdiff_perturbation_kind kind{};
  Check(ksdiff_perturbation_kind_from_name(a.kind.c_str(), &kind), "--kind");
  auto q = LoadCsv(a.in);
  std::vector<std::size_t> targets = a.targets;
  std::vector<std::size_t> refs = a.refs;
  if (a.count) {
    if (!targets.empty() || !refs.empty()) {
      throw UsageError{"--count cannot be combined with --targets/--refs"};
    }
    targets.resize(*a.count);
    refs.resize(*a.count);
    Check(ksdiff_random_targets(kind, ksdiff_dataset_cols(q.get()), *a.count, a.seed,
                                targets.data(), refs.data()),
          "--count");
    const bool needs_refs = kind != KSDIFF_PERTURB_MEAN_SHIFT &&
                            kind != KSDIFF_PERTURB_VARIANCE_CHANGE;
    if (!needs_refs) refs.clear();
  }
  if (!refs.empty() && refs.size() != targets.size()) {
    throw UsageError{"--refs needs one entry per target"};
  }
  ksdiff_dataset* raw = nullptr;
  Check(ksdiff_perturb(q.get(), kind, a.c, targets.data(), refs.empty() ? nullptr : refs.data(),
                       targets.size(), a.seed, &raw),
        "perturb");
  DatasetPtr out(raw);
  Check(ksdiff_dataset_save_csv(out.get(), a.out.c_str()), "writing " + a.out);
}

// ---- generate --------------------------------------------------------------

struct GenerateArgs {
  int example = 2;
  std::size_t rows = 1000;
  std::uint64_t seed = 0;
  std::string out_p, out_q;
};

void RunGenerate(const GenerateArgs& a) {
  ksdiff_dataset* p = nullptr;
  ksdiff_dataset* q = nullptr;
  std::size_t changed = 0;
  Check(ksdiff_generate(a.example, a.rows, a.seed, &p, &q, &changed), "generate");
  DatasetPtr pp(p), qq(q);
  Check(ksdiff_dataset_save_csv(pp.get(), a.out_p.c_str()), "writing " + a.out_p);
  Check(ksdiff_dataset_save_csv(qq.get(), a.out_q.c_str()), "writing " + a.out_q);
  std::cout << "changed feature: " << ksdiff_dataset_name(pp.get(), changed) << " (index "
            << changed << ")\n";
}

// ---- check / bound ---------------------------------------------------------

struct CheckArgs {
  std::string matrix, out;
  std::vector<std::size_t> s_star;
  std::optional<std::size_t> k;
  double tolerance = 1e-9;
  bool no_eta = false;
  std::optional<double> epsilon;
};

void RunCheck(const CheckArgs& a) {
  ksdiff_matrix* raw = nullptr;
  Check(ksdiff_matrix_load(a.matrix.c_str(), &raw), "reading " + a.matrix);
  MatrixPtr m(raw);
  const std::size_t dim = ksdiff_matrix_dim(m.get());
  ksdiff_consistency* craw = nullptr;
  Check(ksdiff_check_conditions(m.get(), a.s_star.data(), a.s_star.size(), a.tolerance,
                                a.no_eta ? 0 : 1, &craw),
        "check");
  ConsistencyPtr c(craw);
  const std::size_t k = ksdiff_consistency_k(c.get());
  if (a.k && *a.k != k) {
    throw UsageError{"--k " + std::to_string(*a.k) + " disagrees with |complement of S*| = " +
                     std::to_string(k)};
  }
  auto report = nlohmann::ordered_json::parse(ksdiff_consistency_json(c.get()));
  if (a.epsilon) {
    if (a.no_eta) throw UsageError{"--epsilon needs eta; drop --no-eta"};
    const double eta = ksdiff_consistency_eta(c.get());
    nlohmann::ordered_json bound;
    bound["epsilon"] = *a.epsilon;
    if (std::isinf(eta)) {
      bound["note"] = "S* complement is the only candidate; no sample requirement";
    } else {
      std::uint64_t n = 0, l = 0;
      Check(ksdiff_sample_bound(k, eta, dim, *a.epsilon, &n, &l), "sample bound");
      bound["n_required"] = n;
      bound["l_required"] = l;
      bound["omitted"] = "distribution-dependent density term, omitted";
    }
    report["sample_bound"] = std::move(bound);
  }
  const std::string text = report.dump(2) + "\n";
  if (a.out.empty()) {
    std::cout << text;
  } else {
    WriteText(a.out, text);
  }
}

struct BoundArgs {
  std::size_t k = 1, dim = 2;
  double eta = 1.0, epsilon = 0.05;
};

void RunBound(const BoundArgs& a) {
  std::uint64_t n = 0, l = 0;
  Check(ksdiff_sample_bound(a.k, a.eta, a.dim, a.epsilon, &n, &l), "bound");
  nlohmann::ordered_json j;
  j["k"] = a.k;
  j["eta"] = a.eta;
  j["D"] = a.dim;
  j["epsilon"] = a.epsilon;
  j["n_required"] = n;
  j["l_required"] = l;
  j["omitted"] = "distribution-dependent density term, omitted";
  std::cout << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ksdiff: find the features on which two datasets differ"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ksdiff_version()));

  SelectArgs sel;
  auto* select = app.add_subcommand("select", "rank features by how much they changed");
  select->add_option("--p", sel.p, "CSV sampled from p")->required()->check(CLI::ExistingFile);
  select->add_option("--q", sel.q, "CSV sampled from q")->required()->check(CLI::ExistingFile);
  select->add_option("--method", sel.method, "proposed | mt | ide09 | hara15")
      ->capture_default_str();
  select->add_option("--solver", sel.solver, "greedy-score | greedy-k | exact")
      ->capture_default_str();
  select->add_option("--k", sel.k, "number of unchanged features (greedy-k, exact)");
  select->add_option("--L", sel.projections, "projection angles per pair")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  select->add_option("--seed", sel.seed, "random seed")->required();
  select->add_option("--threshold", sel.threshold, "also report features with score > t");
  select->add_option("--out", sel.out, "output path")->required();
  select->add_option("--format", sel.format, "json | csv")
      ->capture_default_str()
      ->check(CLI::IsMember({"json", "csv"}));
  select->add_option("--jobs", sel.jobs, "worker threads (0 = all cores)")->capture_default_str();
  select->add_option("--angles", sel.angles, "per-pair | shared")->capture_default_str();
  select->add_option("--hara15-mode", sel.hara15_mode, "covariance | precision")
      ->capture_default_str();

  MatrixArgs mat;
  auto* matrix = app.add_subcommand("matrix", "build and save the KS matrix");
  matrix->add_option("--p", mat.p)->required()->check(CLI::ExistingFile);
  matrix->add_option("--q", mat.q)->required()->check(CLI::ExistingFile);
  matrix->add_option("--L", mat.projections)->capture_default_str()->check(CLI::PositiveNumber);
  matrix->add_option("--seed", mat.seed)->required();
  matrix->add_option("--out", mat.out)->required();
  matrix->add_option("--jobs", mat.jobs)->capture_default_str();
  matrix->add_option("--angles", mat.angles, "per-pair | shared")->capture_default_str();

  ExperimentArgs exp;
  auto* experiment = app.add_subcommand("experiment", "run a seeded AUROC sweep");
  experiment->add_option("--spec", exp.spec, "experiment JSON")->required();
  experiment->add_option("--out-dir", exp.out_dir, "output directory")->required();
  experiment->add_option("--jobs", exp.jobs)->capture_default_str();

  PerturbArgs per;
  auto* perturb = app.add_subcommand("perturb", "inject a controlled change into a CSV");
  perturb->add_option("--in", per.in)->required()->check(CLI::ExistingFile);
  perturb->add_option("--out", per.out)->required();
  perturb
      ->add_option("--kind", per.kind,
                   "mean_shift | variance_change | cov_change | cov_change_conditional | "
                   "cov_change_no_var")
      ->required();
  perturb->add_option("--c", per.c, "strength in [0, 1]")->required();
  perturb->add_option("--targets", per.targets, "0-based target features")->delimiter(',');
  perturb->add_option("--refs", per.refs, "0-based reference features")->delimiter(',');
  perturb->add_option("--count", per.count, "pick this many random targets instead");
  perturb->add_option("--seed", per.seed)->required();

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "write a synthetic pair with known changes");
  generate->add_option("--example", gen.example, "1 or 2")
      ->capture_default_str()
      ->check(CLI::IsMember({1, 2}));
  generate->add_option("--N", gen.rows)->capture_default_str();
  generate->add_option("--seed", gen.seed)->required();
  generate->add_option("--out-p", gen.out_p)->required();
  generate->add_option("--out-q", gen.out_q)->required();

  CheckArgs chk;
  auto* check = app.add_subcommand("check", "test the recovery conditions on a saved matrix");
  check->add_option("--matrix", chk.matrix)->required()->check(CLI::ExistingFile);
  check->add_option("--s-star", chk.s_star, "0-based changed features")
      ->required()
      ->delimiter(',');
  check->add_option("--k", chk.k, "expected |complement of S*| (optional cross-check)");
  check->add_option("--tolerance", chk.tolerance)->capture_default_str();
  check->add_flag("--no-eta", chk.no_eta, "skip the brute-force margin");
  check->add_option("--epsilon", chk.epsilon, "also compute the sample-size bound");
  check->add_option("--out", chk.out, "write the report here instead of stdout");

  BoundArgs bnd;
  auto* bound = app.add_subcommand("bound", "sample-size and projection-count bound");
  bound->add_option("--k", bnd.k)->required();
  bound->add_option("--eta", bnd.eta)->required();
  bound->add_option("--D", bnd.dim)->required();
  bound->add_option("--epsilon", bnd.epsilon)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*select) RunSelect(sel);
    if (*matrix) RunMatrix(mat);
    if (*experiment) RunExperimentCmd(exp);
    if (*perturb) RunPerturb(per);
    if (*generate) RunGenerate(gen);
    if (*check) RunCheck(chk);
    if (*bound) RunBound(bnd);
  } catch (const ApiFailure& f) {
    std::cerr << "ksdiff: " << f.message << "\n";
    return ExitCodeFor(f.status);
  } catch (const UsageError& u) {
    std::cerr << "ksdiff: " << u.message << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "ksdiff: " << e.what() << "\n";
    return kExitInternal;
  }
  return 0;
}
