#include "core/experiment.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "core/model_io.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace mssvdd;
namespace fs = std::filesystem;

namespace {

struct TempTree {
  fs::path root;
  explicit TempTree(const std::string& name) : root(test_support::temp_path(name)) {
    fs::remove_all(root);
    fs::create_directories(root);
  }
  ~TempTree() { fs::remove_all(root); }
  std::string str(const std::string& sub) const { return (root / sub).string(); }
};

std::string write_config(const TempTree& tree, const std::string& body) {
  const std::string path = tree.str("config.toml");
  std::ofstream out(path);
  out << body;
  return path;
}

ExperimentConfig synthetic_config(const TempTree& tree, const std::string& extra_grids = "",
                                  const std::string& extra_protocol = "") {
  const std::string data_path = tree.str("synthetic.data");
  test_support::write_synthetic_robot_file(data_path, 28, 24, 1234);
  std::ostringstream cfg;
  cfg << "[dataset]\nkind = \"robot\"\npath = \"" << data_path << "\"\nlp = 1\n\n"
      << "[grids]\nvariant = [\"linear\"]\nomega = [\"omega2\"]\ndecision = [\"DS3\"]\n"
      << "C = [0.3, 0.6]\nbeta = [0.1]\nsigma = [1.0]\nd = [2]\nmax_iter = 5\n"
      << extra_grids << "\n"
      << "[protocol]\nseeds = [1, 2]\ncv_folds = 3\n" << extra_protocol << "\n"
      << "[output]\ndir = \"" << tree.str("out") << "\"\n";
  return parse_config_text(cfg.str(), "synthetic");
}

}  // namespace

TEST_CASE("config parser reads a full file and rejects unknown keys") {
  const std::string good =
      "# comment\n"
      "[dataset]\n"
      "kind = \"spectf\"\n"
      "train_path = \"a.csv\"  # trailing comment\n"
      "test_path = \"b.csv\"\n"
      "[grids]\n"
      "variant = [\"linear\", \"kernel\"]\n"
      "omega = [\"omega0\", \"omega3\"]\n"
      "decision = [\"DS1\", \"DS4\"]\n"
      "C = [0.1, 0.5]\n"
      "beta = [0.01, 10.0]\n"
      "sigma = [0.1, 1.0, 10.0]\n"
      "d = [1, 2, 3]\n"
      "eta = 0.1\n"
      "max_iter = 25\n"
      "[protocol]\n"
      "seeds = [7]\n"
      "cv_folds = 4\n"
      "standardize = false\n"
      "[output]\n"
      "dir = \"runs/test\"\n";
  const ExperimentConfig cfg = parse_config_text(good, "good");
  CHECK(cfg.kind == "spectf");
  CHECK(cfg.variants.size() == 2);
  CHECK(cfg.omegas.size() == 2);
  CHECK(cfg.decisions.size() == 2);
  CHECK(cfg.c_grid.size() == 2);
  CHECK(cfg.sigma_grid.size() == 3);
  CHECK(cfg.max_iter == 25);
  CHECK(cfg.cv_k == 4);
  CHECK_FALSE(cfg.standardize);
  CHECK(cfg.out_dir == "runs/test");

  try {
    parse_config_text(good + "mystery = 1\n", "bad");
    FAIL("expected config error");
  } catch (const error& e) {
    CHECK(e.code() == errc::config_error);
  }
  CHECK_THROWS_AS(parse_config_text("[grids]\nC = [0.5]\n", "nodataset"), error);
  CHECK_THROWS_AS(parse_config_text(good + "[mystery]\nx = 1\n", "badsec"), error);
}

TEST_CASE("grid_search returns the single cell of a one-cell grid") {
  TempTree tree("grid_single");
  ExperimentConfig cfg = synthetic_config(tree);
  cfg.c_grid = {0.4};

  const ModalDataset data = load_robot(cfg.path, 1);
  const SplitPlan plan = stratified_split(data.labels, 0.7, 1);
  const ModalDataset train = data.subset(plan.train_idx);

  const MethodSpec spec{MethodSpec::Kind::mssvdd, -1, "MS-SVDD"};
  const GridOutcome out =
      grid_search(train, cfg, spec, Variant::linear, OmegaKind::w2, Decision::ds3, 1);
  CHECK(out.best.c == 0.4);
  CHECK(out.best.d == 2);
  CHECK(out.evaluated == 1);
  CHECK(out.score >= 0.0);
}

TEST_CASE("grid_search skips infeasible cells and keeps feasible ones") {
  TempTree tree("grid_skip");
  ExperimentConfig cfg = synthetic_config(tree);
  // with ~19 fit targets per fold and two modalities, C=0.01 gives C*M*N < 1
  cfg.c_grid = {0.01, 0.5};

  const ModalDataset data = load_robot(cfg.path, 1);
  const SplitPlan plan = stratified_split(data.labels, 0.7, 1);
  const ModalDataset train = data.subset(plan.train_idx);

  const MethodSpec spec{MethodSpec::Kind::mssvdd, -1, "MS-SVDD"};
  const GridOutcome out =
      grid_search(train, cfg, spec, Variant::linear, OmegaKind::w2, Decision::ds3, 1);
  CHECK(out.best.c == 0.5);
  CHECK(out.skipped == 1);
  CHECK(out.evaluated == 1);
  REQUIRE(!out.skip_log.empty());
  CHECK(out.skip_log.front().find("skipped") != std::string::npos);
}

TEST_CASE("grid ties resolve to the first cell in ascending order") {
  TempTree tree("grid_tie");
  ExperimentConfig cfg = synthetic_config(tree);
  // omega0 ignores beta entirely, so both beta cells score identically
  cfg.beta_grid = {0.5, 2.0};
  cfg.c_grid = {0.4};

  const ModalDataset data = load_robot(cfg.path, 1);
  const SplitPlan plan = stratified_split(data.labels, 0.7, 1);
  const ModalDataset train = data.subset(plan.train_idx);

  const MethodSpec spec{MethodSpec::Kind::mssvdd, -1, "MS-SVDD"};
  const GridOutcome out =
      grid_search(train, cfg, spec, Variant::linear, OmegaKind::w0, Decision::ds3, 1);
  CHECK(out.best.beta == 0.5);
  CHECK(out.evaluated == 2);
}

TEST_CASE("grid_search with no feasible cell throws") {
  TempTree tree("grid_none");
  ExperimentConfig cfg = synthetic_config(tree);
  cfg.c_grid = {0.01};

  const ModalDataset data = load_robot(cfg.path, 1);
  const SplitPlan plan = stratified_split(data.labels, 0.7, 1);
  const ModalDataset train = data.subset(plan.train_idx);

  const MethodSpec spec{MethodSpec::Kind::mssvdd, -1, "MS-SVDD"};
  try {
    grid_search(train, cfg, spec, Variant::linear, OmegaKind::w2, Decision::ds3, 1);
    FAIL("expected no feasible cell");
  } catch (const error& e) {
    CHECK(e.code() == errc::no_feasible_cell);
  }
}

TEST_CASE("run_protocol is deterministic and writes consistent artifacts") {
  TempTree tree("proto_det");
  const ExperimentConfig cfg = synthetic_config(tree);

  const ProtocolResult a = run_and_write(cfg);
  const ProtocolResult b = run_protocol(cfg);
  REQUIRE(a.rows.size() == b.rows.size());
  REQUIRE(!a.rows.empty());
  CHECK(a.failures.empty());
  CHECK(a.monotonicity_checks > 0);
  for (size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].metrics.gmean == b.rows[i].metrics.gmean);
    CHECK(a.rows[i].chosen.c == b.rows[i].chosen.c);
    CHECK(a.rows[i].counts.tp == b.rows[i].counts.tp);
  }

  // every reported gmean must recompute from its stored counts
  for (const ResultRow& row : a.rows) {
    const MetricReport again = compute_metrics(row.counts);
    CHECK(row.metrics.gmean == doctest::Approx(again.gmean).epsilon(1e-15));
  }

  // artifacts
  CHECK(fs::exists(tree.str("out") + "/rows.csv"));
  CHECK(fs::exists(tree.str("out") + "/summary.md"));
  CHECK(fs::exists(tree.str("out") + "/summary.csv"));
  CHECK(fs::exists(tree.str("out") + "/models"));

  // a second run into a fresh directory produces byte-identical artifacts
  {
    ExperimentConfig again = cfg;
    again.out_dir = tree.str("out2");
    run_and_write(again);
    auto slurp = [](const std::string& p) {
      std::ifstream in(p, std::ios::binary);
      return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    };
    CHECK(slurp(tree.str("out") + "/rows.csv") == slurp(tree.str("out2") + "/rows.csv"));
    CHECK(slurp(tree.str("out") + "/summary.md") == slurp(tree.str("out2") + "/summary.md"));
    CHECK(slurp(tree.str("out") + "/summary.csv") == slurp(tree.str("out2") + "/summary.csv"));
  }

  // rows.csv round-trips
  const std::vector<ResultRow> back = read_rows_csv(tree.str("out") + "/rows.csv");
  REQUIRE(back.size() == a.rows.size());
  for (size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].method == a.rows[i].method);
    CHECK(back[i].metrics.gmean == a.rows[i].metrics.gmean);
    CHECK(back[i].counts.fn == a.rows[i].counts.fn);
  }

  // a saved model evaluates to the stored test counts on the same split
  bool checked_model = false;
  for (const auto& entry : fs::directory_iterator(tree.str("out") + "/models")) {
    const TrainedModel model = load_model(entry.path().string());
    CHECK(model.dataset_kind == "robot");
    checked_model = true;
    break;
  }
  CHECK(checked_model);
}

TEST_CASE("baseline rows match their reduction paths") {
  TempTree tree("proto_base");
  ExperimentConfig cfg = synthetic_config(tree);
  cfg.seeds = {3};
  cfg.include_baselines = true;

  const ProtocolResult result = run_protocol(cfg);

  const ModalDataset data = load_robot(cfg.path, 1);
  const SplitPlan plan = stratified_split(data.labels, cfg.train_fraction, 3);
  const ModalDataset train = data.subset(plan.train_idx);
  const ModalDataset test = data.subset(plan.test_idx);

  SUBCASE("plain SVDD equals solve_dual on concatenated raw features") {
    const ResultRow* svdd_row = nullptr;
    for (const ResultRow& row : result.rows)
      if (row.method == "SVDD") svdd_row = &row;
    REQUIRE(svdd_row);

    const MethodSpec spec{MethodSpec::Kind::svdd_concat, -1, "SVDD"};
    ModalDataset concat_train = method_view(train, spec);
    ModalDataset targets = concat_train.targets_only();
    Standardization pre = fit_standardizer(targets);
    targets = apply_standardizer(pre, targets);

    TrainedModel direct = train_for_method(spec, targets, svdd_row->chosen, &pre);
    const ConfusionCounts counts =
        evaluate_model(direct, method_view(test, spec), Decision::ds1);
    CHECK(counts.tp == svdd_row->counts.tp);
    CHECK(counts.fp == svdd_row->counts.fp);
    CHECK(counts.tn == svdd_row->counts.tn);
    CHECK(counts.fn == svdd_row->counts.fn);
  }

  SUBCASE("single-modality rows equal a direct single-modality pipeline call") {
    const ResultRow* ssvdd_row = nullptr;
    for (const ResultRow& row : result.rows)
      if (row.method == "S-SVDD[force]") ssvdd_row = &row;
    REQUIRE(ssvdd_row);

    const MethodSpec spec{MethodSpec::Kind::ssvdd, 0, "S-SVDD[force]"};
    ModalDataset view = method_view(train, spec).targets_only();
    Standardization pre = fit_standardizer(view);
    view = apply_standardizer(pre, view);
    TrainedModel direct = train_for_method(spec, view, ssvdd_row->chosen, &pre);
    const ConfusionCounts counts =
        evaluate_model(direct, method_view(test, spec), Decision::ds1);
    CHECK(counts.tp == ssvdd_row->counts.tp);
    CHECK(counts.tn == ssvdd_row->counts.tn);
  }
}

TEST_CASE("method failures are isolated and reported instead of aborting the run") {
  TempTree tree("proto_isolation");
  ExperimentConfig cfg = synthetic_config(tree);
  cfg.c_grid = {0.01};  // infeasible for every fold: C * M * N_fit < 1
  cfg.seeds = {1};
  cfg.include_baselines = true;

  const ProtocolResult result = run_protocol(cfg);
  CHECK(result.rows.empty());
  CHECK(!result.failures.empty());
  bool mentions_cell = false;
  for (const std::string& f : result.failures)
    if (f.find("no feasible grid cell") != std::string::npos) mentions_cell = true;
  CHECK(mentions_cell);
}

TEST_CASE("subspace dimensions beyond the embedding rank are skipped per cell") {
  TempTree tree("proto_npt_rank");
  ExperimentConfig cfg = synthetic_config(tree);
  cfg.variants = {Variant::npt};
  cfg.sigma_grid = {2.0};
  // 30 passes the modality-dimension filter (< 45) but exceeds the embedding
  // rank (at most fit-targets - 1), so those cells must be skipped
  cfg.d_grid = {2, 30};
  cfg.seeds = {1};
  cfg.include_baselines = false;

  const ProtocolResult result = run_protocol(cfg);
  REQUIRE(!result.rows.empty());
  for (const ResultRow& row : result.rows) {
    CHECK(row.chosen.d == 2);
    CHECK(row.variant == Variant::npt);
  }
  bool skipped_large_d = false;
  for (const std::string& line : result.grid_log)
    if (line.find("d=30") != std::string::npos && line.find("skipped") != std::string::npos)
      skipped_large_d = true;
  CHECK(skipped_large_d);
}

TEST_CASE("oversized subspace dimensions are dropped with a warning") {
  TempTree tree("proto_dims");
  ExperimentConfig cfg = synthetic_config(tree);
  cfg.d_grid = {2, 45, 100};
  cfg.seeds = {1};
  cfg.include_baselines = false;

  const ProtocolResult result = run_protocol(cfg);
  CHECK(!result.rows.empty());
  int dropped = 0;
  for (const std::string& line : result.grid_log)
    if (line.find("dropped d=") != std::string::npos) ++dropped;
  CHECK(dropped == 2);
  for (const ResultRow& row : result.rows) CHECK(row.chosen.d == 2);
}

TEST_CASE("emit_report renders rounded markdown and full-precision csv") {
  ResultRow row;
  row.dataset = "toy";
  row.method = "MS-SVDD";
  row.variant = Variant::linear;
  row.omega = OmegaKind::w2;
  row.decision = Decision::ds3;
  row.counts = {477, 23, 477, 23};
  row.metrics = compute_metrics(row.counts);  // tpr = tnr = 0.954
  row.cv_score = 0.9;

  TempTree tree("report");
  emit_report({row}, "md", tree.str("report.md"));
  emit_report({row}, "csv", tree.str("report.csv"));

  std::ifstream md(tree.str("report.md"));
  std::string md_text((std::istreambuf_iterator<char>(md)), std::istreambuf_iterator<char>());
  CHECK(md_text.find("| MS-SVDD | linear | omega2 | DS3 |") != std::string::npos);
  CHECK(md_text.find("0.95") != std::string::npos);  // 0.954 rounds to 0.95
  CHECK(md_text.find("0.954") == std::string::npos);

  std::ifstream csv(tree.str("report.csv"));
  std::string csv_text((std::istreambuf_iterator<char>(csv)), std::istreambuf_iterator<char>());
  CHECK(csv_text.find("0.954") != std::string::npos);  // full precision survives

  CHECK_THROWS_AS(emit_report({}, "md", tree.str("empty.md")), error);
  CHECK_THROWS_AS(emit_report({row}, "pdf", tree.str("bad.pdf")), error);
}

TEST_CASE("report_from_runs merges stored rows") {
  TempTree tree("runs_merge");
  const ExperimentConfig cfg = synthetic_config(tree);
  run_and_write(cfg);

  report_from_runs(tree.str("out"), "csv");
  CHECK(fs::exists(tree.str("out") + "/report.csv"));
  report_from_runs(tree.str("out"), "md");
  CHECK(fs::exists(tree.str("out") + "/report.md"));

  CHECK_THROWS_AS(report_from_runs(tree.str("missing"), "md"), error);
}

TEST_CASE("method_view reshapes datasets") {
  const ModalDataset data = test_support::toy_two_modality(6, 2, 3, 5);

  const ModalDataset concat = method_view(data, {MethodSpec::Kind::svdd_concat, -1, ""});
  CHECK(concat.modalities() == 1);
  CHECK(concat.x[0].rows() == 6);
  CHECK(max_abs(concat.x[0].topRows(3) - data.x[0]) == 0.0);
  CHECK(max_abs(concat.x[0].bottomRows(3) - data.x[1]) == 0.0);

  const ModalDataset solo = method_view(data, {MethodSpec::Kind::ssvdd, 1, ""});
  CHECK(solo.modalities() == 1);
  CHECK(max_abs(solo.x[0] - data.x[1]) == 0.0);

  CHECK(apply_method_view(data, "all").modalities() == 2);
  CHECK(apply_method_view(data, "concat").x[0].rows() == 6);
  CHECK(max_abs(apply_method_view(data, "modality:0").x[0] - data.x[0]) == 0.0);
}
