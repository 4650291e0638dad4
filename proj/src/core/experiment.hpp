#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "dataset.hpp"
#include "trainer.hpp"

namespace mssvdd {

struct MethodSpec {
  enum class Kind {
    mssvdd,       // full multimodal pipeline
    svdd_concat,  // plain SVDD on concatenated raw features (no subspace step)
    ssvdd,        // single-modality reduction of the pipeline
  };
  Kind kind = Kind::mssvdd;
  int modality = -1;  // ssvdd only
  std::string id = "MS-SVDD";
};

struct GridOutcome {
  HyperParams best;
  double score = -1.0;            // mean validation Gmean
  long evaluated = 0;
  long skipped = 0;
  std::vector<std::string> skip_log;
};

struct ResultRow {
  std::string dataset;
  std::string method;
  Variant variant = Variant::linear;
  OmegaKind omega = OmegaKind::w0;
  Decision decision = Decision::ds1;
  HyperParams chosen;
  double cv_score = 0.0;
  ConfusionCounts counts;
  MetricReport metrics;
  int split_id = 0;
  uint64_t seed = 0;
  bool standardized = false;
  bool refit_on_full_train = true;
};

struct SummaryRow {
  std::string dataset, method;
  Variant variant;
  OmegaKind omega;
  Decision decision;
  int splits = 0;
  MetricReport mean;
  double mean_cv_score = 0.0;
};

struct ProtocolResult {
  std::vector<ResultRow> rows;
  std::vector<std::string> failures;      // per-split isolated errors
  std::vector<std::string> grid_log;      // skipped grid cells
  long monotonicity_checks = 0;           // decision-strategy inclusion checks run
};

/// Restrict a dataset to what a method consumes: all modalities, the single
/// concatenated modality, or one modality.
ModalDataset method_view(const ModalDataset& data, const MethodSpec& spec);

/// Same, driven by a stored model's view string ("all", "concat", "modality:<k>").
ModalDataset apply_method_view(const ModalDataset& data, const std::string& view);

/// CV model selection for one (variant, omega): every grid cell is trained per
/// fold on fold-fit target items and scored by mean validation Gmean per
/// decision strategy. Ties keep the first cell in (beta, C, sigma, d)
/// ascending order. Throws no_feasible_cell when nothing evaluates.
std::map<Decision, GridOutcome> grid_search_multi(const ModalDataset& train,
                                                  const ExperimentConfig& cfg,
                                                  const MethodSpec& spec, Variant variant,
                                                  OmegaKind omega,
                                                  const std::vector<Decision>& decisions,
                                                  uint64_t fold_seed);

GridOutcome grid_search(const ModalDataset& train, const ExperimentConfig& cfg,
                        const MethodSpec& spec, Variant variant, OmegaKind omega,
                        Decision decision, uint64_t fold_seed);

/// Train a method on (already standardized) target items with chosen params.
TrainedModel train_for_method(const MethodSpec& spec, const ModalDataset& targets,
                              const HyperParams& params, const Standardization* pre);

/// Confusion counts of fused decisions over a labeled dataset; also verifies
/// the decision-strategy inclusion property per item when M >= 2.
ConfusionCounts evaluate_model(const TrainedModel& model, const ModalDataset& data,
                               Decision decision, long* monotonicity_checks = nullptr);

/// Full experimental protocol: repeated stratified splits for datasets without
/// a fixed split, CV selection within each training set, refit on the full
/// training targets, evaluation on the held-out set.
ProtocolResult run_protocol(const ExperimentConfig& cfg);

/// run_protocol plus artifacts: rows.csv, summary.csv/.md, models/, grid_log.
ProtocolResult run_and_write(const ExperimentConfig& cfg);

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);

void emit_report(const std::vector<ResultRow>& rows, const std::string& format,
                 const std::string& out_path);

void write_rows_csv(const std::vector<ResultRow>& rows, const std::string& path);
std::vector<ResultRow> read_rows_csv(const std::string& path);

/// Scan a directory tree for rows.csv files and render merged tables.
void report_from_runs(const std::string& runs_dir, const std::string& format);

}  // namespace mssvdd
