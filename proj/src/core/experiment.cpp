#include "experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "model_io.hpp"

namespace fs = std::filesystem;

namespace mssvdd {

ModalDataset method_view(const ModalDataset& data, const MethodSpec& spec) {
  switch (spec.kind) {
    case MethodSpec::Kind::mssvdd:
      return data;
    case MethodSpec::Kind::svdd_concat: {
      ModalDataset out;
      Index total = 0;
      for (const Matrix& xm : data.x) total += xm.rows();
      Matrix cat(total, data.items());
      Index at = 0;
      for (const Matrix& xm : data.x) {
        cat.middleRows(at, xm.rows()) = xm;
        at += xm.rows();
      }
      out.modality_names = {"concat"};
      out.x = {std::move(cat)};
      out.labels = data.labels;
      out.item_ids = data.item_ids;
      return out;
    }
    case MethodSpec::Kind::ssvdd: {
      if (spec.modality < 0 || spec.modality >= data.modalities())
        fail(errc::invalid_argument, "method_view: bad modality index");
      ModalDataset out;
      out.modality_names = {data.modality_names[static_cast<size_t>(spec.modality)]};
      out.x = {data.x[static_cast<size_t>(spec.modality)]};
      out.labels = data.labels;
      out.item_ids = data.item_ids;
      return out;
    }
  }
  fail(errc::invalid_argument, "method_view: unknown method kind");
}

ModalDataset apply_method_view(const ModalDataset& data, const std::string& view) {
  if (view.empty() || view == "all") return data;
  if (view == "concat") return method_view(data, {MethodSpec::Kind::svdd_concat, -1, ""});
  if (view.rfind("modality:", 0) == 0) {
    MethodSpec spec{MethodSpec::Kind::ssvdd, std::stoi(view.substr(9)), ""};
    return method_view(data, spec);
  }
  fail(errc::corrupt_file, "unknown method view '" + view + "'");
}

TrainedModel train_for_method(const MethodSpec& spec, const ModalDataset& targets,
                              const HyperParams& params, const Standardization* pre) {
  if (spec.kind == MethodSpec::Kind::svdd_concat) {
    HyperParams p = params;
    p.variant = Variant::linear;
    p.omega = OmegaKind::w0;
    p.beta = 0.0;
    p.max_iter = 0;
    p.d = static_cast<int>(targets.x[0].rows());
    const std::vector<Matrix> identity{Matrix::Identity(p.d, p.d)};
    return train_linear(targets, p, pre, &identity);
  }
  return train(targets, params, pre);
}

namespace {

bool is_skippable(errc code) {
  switch (code) {
    case errc::infeasible_c:
    case errc::dimension_too_large:
    case errc::rank_deficient:
    case errc::degenerate_projection:
    case errc::degenerate_kernel:
    case errc::non_finite_gradient:
    case errc::too_few_items:
      return true;
    default:
      return false;
  }
}

void check_monotonicity(const std::vector<Label>& per_modality) {
  const bool and_pos = fuse_labels(per_modality, Decision::ds1) == Label::positive;
  const bool or_pos = fuse_labels(per_modality, Decision::ds2) == Label::positive;
  const bool m1_pos = fuse_labels(per_modality, Decision::ds3) == Label::positive;
  const bool m2_pos = fuse_labels(per_modality, Decision::ds4) == Label::positive;
  if ((and_pos && !(m1_pos && m2_pos && or_pos)) || ((m1_pos || m2_pos) && !or_pos))
    fail(errc::invalid_argument, "decision-strategy inclusion violated");
}

struct CellScore {
  double sum = 0.0;
  int folds = 0;
};

std::string cell_desc(const HyperParams& p) {
  std::ostringstream ss;
  ss << "beta=" << p.beta << " C=" << p.c << " sigma=" << p.sigma << " d=" << p.d;
  return ss.str();
}

}  // namespace

ConfusionCounts evaluate_model(const TrainedModel& model, const ModalDataset& data,
                               Decision decision, long* monotonicity_checks) {
  ConfusionCounts counts;
  for (Index i = 0; i < data.items(); ++i) {
    const std::vector<Label> per_modality = modality_labels(model, data.item(i));
    if (per_modality.size() >= 2) {
      check_monotonicity(per_modality);
      if (monotonicity_checks) ++(*monotonicity_checks);
    }
    counts.add(fuse_labels(per_modality, decision), data.labels[static_cast<size_t>(i)]);
  }
  return counts;
}

std::map<Decision, GridOutcome> grid_search_multi(const ModalDataset& train,
                                                  const ExperimentConfig& cfg,
                                                  const MethodSpec& spec, Variant variant,
                                                  OmegaKind omega,
                                                  const std::vector<Decision>& decisions,
                                                  uint64_t fold_seed) {
  std::vector<int> train_idx(static_cast<size_t>(train.items()));
  for (size_t i = 0; i < train_idx.size(); ++i) train_idx[i] = static_cast<int>(i);
  const auto folds = cv_folds(train_idx, train.labels, cfg.cv_k, fold_seed);

  // Per-fold fixed pieces.
  struct Fold {
    ModalDataset fit_targets;
    Standardization std;
    std::vector<int> val_idx;
    bool val_has_both = false;
  };
  std::vector<Fold> prepared;
  for (const auto& [fit_idx, val_idx] : folds) {
    Fold f;
    const ModalDataset fit_all = train.subset(fit_idx);
    ModalDataset fit_targets = fit_all.targets_only();
    if (fit_targets.items() == 0) continue;
    if (cfg.standardize) {
      f.std = fit_standardizer(fit_targets);
      fit_targets = apply_standardizer(f.std, fit_targets);
    }
    f.fit_targets = std::move(fit_targets);
    f.val_idx = val_idx;
    bool pos = false, neg = false;
    for (int i : val_idx)
      (train.labels[static_cast<size_t>(i)] == Label::positive ? pos : neg) = true;
    f.val_has_both = pos && neg;
    prepared.push_back(std::move(f));
  }

  const bool baseline_svdd = spec.kind == MethodSpec::Kind::svdd_concat;
  std::vector<double> betas = baseline_svdd ? std::vector<double>{0.0} : cfg.beta_grid;
  const bool uses_sigma = !baseline_svdd && variant != Variant::linear;
  std::vector<double> sigmas = uses_sigma ? cfg.sigma_grid : std::vector<double>{1.0};
  std::vector<int> ds = baseline_svdd ? std::vector<int>{static_cast<int>(train.x[0].rows())}
                                      : cfg.d_grid;
  std::vector<double> cs = cfg.c_grid;
  // ties keep the first cell in ascending (beta, C, sigma, d) order
  std::sort(betas.begin(), betas.end());
  std::sort(cs.begin(), cs.end());
  std::sort(sigmas.begin(), sigmas.end());
  std::sort(ds.begin(), ds.end());

  std::map<Decision, GridOutcome> best;
  for (Decision dec : decisions) best[dec] = GridOutcome{};
  std::vector<std::string> shared_log;
  long evaluated = 0, skipped = 0;

  for (double beta : betas)
    for (double c : cs)
      for (double sigma : sigmas)
        for (int d : ds) {
          HyperParams params;
          params.variant = baseline_svdd ? Variant::linear : variant;
          params.omega = baseline_svdd ? OmegaKind::w0 : omega;
          params.c = c;
          params.beta = beta;
          params.sigma = sigma;
          params.d = d;
          params.eta = cfg.eta;
          params.max_iter = baseline_svdd ? 0 : cfg.max_iter;
          params.center_kernel_gram = cfg.center_kernel_gram;

          std::map<Decision, CellScore> scores;
          bool cell_failed = false;
          std::string cell_error;
          for (const Fold& fold : prepared) {
            if (!fold.val_has_both) continue;
            try {
              const TrainedModel model =
                  train_for_method(spec, fold.fit_targets, params,
                                   cfg.standardize ? &fold.std : nullptr);
              std::map<Decision, ConfusionCounts> counts;
              for (int vi : fold.val_idx) {
                const std::vector<Label> labels_m = modality_labels(model, train.item(vi));
                if (labels_m.size() >= 2) check_monotonicity(labels_m);
                const Label truth = train.labels[static_cast<size_t>(vi)];
                for (Decision dec : decisions)
                  counts[dec].add(fuse_labels(labels_m, dec), truth);
              }
              for (Decision dec : decisions) {
                const MetricReport rep = compute_metrics(counts[dec]);
                scores[dec].sum += rep.gmean;
                scores[dec].folds += 1;
              }
            } catch (const error& e) {
              if (is_skippable(e.code())) {
                cell_failed = true;
                cell_error = e.what();
                break;
              }
              throw;
            }
          }

          if (cell_failed || scores.empty() || scores.begin()->second.folds == 0) {
            ++skipped;
            shared_log.push_back(spec.id + " " + variant_name(params.variant) + " " +
                                 omega_name(params.omega) + " " + cell_desc(params) +
                                 ": skipped" + (cell_error.empty() ? "" : " (" + cell_error + ")"));
            continue;
          }

          ++evaluated;
          for (Decision dec : decisions) {
            const double score = scores[dec].sum / scores[dec].folds;
            GridOutcome& out = best[dec];
            if (score > out.score) {
              out.score = score;
              out.best = params;
              out.best.decision = dec;
            }
          }
        }

  for (Decision dec : decisions) {
    GridOutcome& out = best[dec];
    out.evaluated = evaluated;
    out.skipped = skipped;
    out.skip_log = shared_log;
    if (out.score < 0.0)
      fail(errc::no_feasible_cell,
           "grid_search: no feasible grid cell for " + spec.id + " " + variant_name(variant));
  }
  return best;
}

GridOutcome grid_search(const ModalDataset& train, const ExperimentConfig& cfg,
                        const MethodSpec& spec, Variant variant, OmegaKind omega,
                        Decision decision, uint64_t fold_seed) {
  auto all = grid_search_multi(train, cfg, spec, variant, omega, {decision}, fold_seed);
  return all[decision];
}

// ---------------------------------------------------------------------------
// Protocol

namespace {

struct LoadedData {
  std::string name;
  ModalDataset all;                                        // random-split datasets
  std::optional<std::pair<ModalDataset, ModalDataset>> fixed;  // spectf
  std::string target_label;
};

LoadedData load_for_config(const ExperimentConfig& cfg) {
  LoadedData out;
  if (cfg.kind == "robot") {
    out.all = load_robot(cfg.path, cfg.lp, cfg.target_label);
    out.name = cfg.lp > 0 ? "robot_lp" + std::to_string(cfg.lp) : "robot";
    out.target_label = cfg.target_label.empty() ? (cfg.lp == 3 ? "ok" : "normal") : cfg.target_label;
  } else if (cfg.kind == "spectf") {
    out.fixed = load_spectf(cfg.train_path, cfg.test_path);
    out.name = "spectf";
    out.target_label = "healthy";
  } else {
    out.all = load_dataset(cfg.path);
    out.name = fs::path(cfg.path).stem().string();
    out.target_label = cfg.target_label;
  }
  return out;
}

std::vector<MethodSpec> build_methods(const ExperimentConfig& cfg, const ModalDataset& sample) {
  std::vector<MethodSpec> methods;
  methods.push_back({MethodSpec::Kind::mssvdd, -1, "MS-SVDD"});
  if (cfg.include_baselines) {
    methods.push_back({MethodSpec::Kind::svdd_concat, -1, "SVDD"});
    for (int m = 0; m < sample.modalities(); ++m)
      methods.push_back({MethodSpec::Kind::ssvdd, m, "S-SVDD[" + sample.modality_names[static_cast<size_t>(m)] + "]"});
  }
  return methods;
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  return out;
}

}  // namespace

ProtocolResult run_protocol(const ExperimentConfig& cfg) {
  cfg.validate();
  LoadedData data = load_for_config(cfg);

  const ModalDataset& shape = data.fixed ? data.fixed->first : data.all;
  Index min_dim = shape.x[0].rows();
  for (const Matrix& xm : shape.x) min_dim = std::min(min_dim, xm.rows());

  ExperimentConfig effective = cfg;
  effective.d_grid.clear();
  ProtocolResult result;
  for (int d : cfg.d_grid) {
    if (d < min_dim)
      effective.d_grid.push_back(d);
    else
      result.grid_log.push_back("dropped d=" + std::to_string(d) +
                                " (not below smallest modality dimension " +
                                std::to_string(min_dim) + ")");
  }
  if (effective.d_grid.empty())
    fail(errc::config_error, "no d value below the smallest modality dimension");

  const std::vector<MethodSpec> methods = build_methods(cfg, shape);

  // One pass per split: select hyperparameters inside the training set, refit
  // on its target items, evaluate on the held-out set.
  const size_t split_count = data.fixed ? 1 : cfg.seeds.size();
  for (size_t split = 0; split < split_count; ++split) {
    const uint64_t seed = cfg.seeds[split % cfg.seeds.size()];
    ModalDataset train_set, test_set;
    if (data.fixed) {
      train_set = data.fixed->first;
      test_set = data.fixed->second;
    } else {
      const SplitPlan plan = stratified_split(data.all.labels, cfg.train_fraction, seed);
      train_set = data.all.subset(plan.train_idx);
      test_set = data.all.subset(plan.test_idx);
    }

    for (const MethodSpec& method : methods) {
      const ModalDataset train_view = method_view(train_set, method);
      const ModalDataset test_view = method_view(test_set, method);

      const bool multimodal = method.kind == MethodSpec::Kind::mssvdd;
      const std::vector<Variant> variants =
          method.kind == MethodSpec::Kind::svdd_concat ? std::vector<Variant>{Variant::linear}
                                                       : effective.variants;
      const std::vector<OmegaKind> omegas =
          method.kind == MethodSpec::Kind::svdd_concat ? std::vector<OmegaKind>{OmegaKind::w0}
                                                       : effective.omegas;
      const std::vector<Decision> decisions =
          multimodal ? effective.decisions : std::vector<Decision>{Decision::ds1};

      for (Variant variant : variants)
        for (OmegaKind omega : omegas) {
          try {
            auto outcomes =
                grid_search_multi(train_view, effective, method, variant, omega, decisions, seed);
            if (!outcomes.empty()) {
              const auto& shared_log = outcomes.begin()->second.skip_log;
              result.grid_log.insert(result.grid_log.end(), shared_log.begin(), shared_log.end());
            }
            for (auto& [decision, outcome] : outcomes) {
              ModalDataset targets = train_view.targets_only();
              Standardization std_state;
              if (cfg.standardize) {
                std_state = fit_standardizer(targets);
                targets = apply_standardizer(std_state, targets);
              }
              TrainedModel model = train_for_method(method, targets, outcome.best,
                                                    cfg.standardize ? &std_state : nullptr);
              model.dataset_kind = cfg.kind;
              model.target_label = data.target_label;
              model.method_view =
                  method.kind == MethodSpec::Kind::svdd_concat
                      ? "concat"
                      : (method.kind == MethodSpec::Kind::ssvdd
                             ? "modality:" + std::to_string(method.modality)
                             : "all");

              ResultRow row;
              row.dataset = data.name;
              row.method = method.id;
              row.variant = outcome.best.variant;
              row.omega = outcome.best.omega;
              row.decision = decision;
              row.chosen = outcome.best;
              row.cv_score = outcome.score;
              row.counts = evaluate_model(model, test_view, decision, &result.monotonicity_checks);
              row.metrics = compute_metrics(row.counts);
              row.split_id = static_cast<int>(split);
              row.seed = seed;
              row.standardized = cfg.standardize;
              result.rows.push_back(row);

              if (!cfg.out_dir.empty()) {
                const fs::path dir = fs::path(cfg.out_dir) / "models";
                fs::create_directories(dir);
                const std::string name = sanitize(data.name) + "_" + sanitize(method.id) + "_" +
                                         variant_name(outcome.best.variant) + "_" +
                                         omega_name(outcome.best.omega) + "_" +
                                         decision_name(decision) + "_split" +
                                         std::to_string(split) + ".msvd";
                save_model(model, (dir / name).string());
              }
            }
          } catch (const error& e) {
            result.failures.push_back(data.name + " " + method.id + " " + variant_name(variant) +
                                      " " + omega_name(omega) + " split " + std::to_string(split) +
                                      ": " + e.what());
          }
        }
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Reports

namespace {

std::string fmt_full(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);  // shortest round-trip
  return std::string(buf, res.ptr);
}

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  std::vector<SummaryRow> out;
  auto key_of = [](const ResultRow& r) {
    return r.dataset + "\x1f" + r.method + "\x1f" + variant_name(r.variant) + "\x1f" +
           omega_name(r.omega) + "\x1f" + decision_name(r.decision);
  };
  std::vector<std::string> order;
  std::map<std::string, SummaryRow> acc;
  for (const ResultRow& r : rows) {
    const std::string key = key_of(r);
    auto it = acc.find(key);
    if (it == acc.end()) {
      order.push_back(key);
      SummaryRow s;
      s.dataset = r.dataset;
      s.method = r.method;
      s.variant = r.variant;
      s.omega = r.omega;
      s.decision = r.decision;
      it = acc.emplace(key, s).first;
    }
    SummaryRow& s = it->second;
    s.splits += 1;
    s.mean.accu += r.metrics.accu;
    s.mean.tpr += r.metrics.tpr;
    s.mean.tnr += r.metrics.tnr;
    s.mean.pre += r.metrics.pre;
    s.mean.f1 += r.metrics.f1;
    s.mean.gmean += r.metrics.gmean;
    s.mean_cv_score += r.cv_score;
  }
  for (const std::string& key : order) {
    SummaryRow s = acc[key];
    const double n = s.splits;
    s.mean.accu /= n;
    s.mean.tpr /= n;
    s.mean.tnr /= n;
    s.mean.pre /= n;
    s.mean.f1 /= n;
    s.mean.gmean /= n;
    s.mean_cv_score /= n;
    out.push_back(s);
  }
  return out;
}

void emit_report(const std::vector<ResultRow>& rows, const std::string& format,
                 const std::string& out_path) {
  if (rows.empty()) fail(errc::invalid_argument, "emit_report: no rows");
  if (format != "md" && format != "csv") fail(errc::invalid_argument, "emit_report: format must be md or csv");

  const std::vector<SummaryRow> summary = summarize(rows);
  std::set<std::string> datasets;
  for (const SummaryRow& s : summary) datasets.insert(s.dataset);

  std::ofstream out(out_path);
  if (!out) fail(errc::io_error, "emit_report: cannot write " + out_path);

  if (format == "csv") {
    out << "dataset,method,variant,omega,decision,splits,accu,tpr,tnr,pre,f1,gmean,cv_gmean\n";
    for (const SummaryRow& s : summary)
      out << s.dataset << ',' << s.method << ',' << variant_name(s.variant) << ','
          << omega_name(s.omega) << ',' << decision_name(s.decision) << ',' << s.splits << ','
          << fmt_full(s.mean.accu) << ',' << fmt_full(s.mean.tpr) << ',' << fmt_full(s.mean.tnr)
          << ',' << fmt_full(s.mean.pre) << ',' << fmt_full(s.mean.f1) << ','
          << fmt_full(s.mean.gmean) << ',' << fmt_full(s.mean_cv_score) << '\n';
  } else {
    for (const std::string& ds : datasets) {
      out << "# Results: " << ds << "\n\n";
      out << "| Method | Variant | Omega | DS | accu | tpr | tnr | pre | F1 | Gmean |\n";
      out << "|---|---|---|---|---|---|---|---|---|---|\n";
      for (const SummaryRow& s : summary) {
        if (s.dataset != ds) continue;
        out << "| " << s.method << " | " << variant_name(s.variant) << " | " << omega_name(s.omega)
            << " | " << decision_name(s.decision) << " | " << fmt2(s.mean.accu) << " | "
            << fmt2(s.mean.tpr) << " | " << fmt2(s.mean.tnr) << " | " << fmt2(s.mean.pre) << " | "
            << fmt2(s.mean.f1) << " | " << fmt2(s.mean.gmean) << " |\n";
      }
      out << "\n";
    }
  }
  if (!out) fail(errc::io_error, "emit_report: write failed for " + out_path);
}

void write_rows_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(errc::io_error, "cannot write " + path);
  out << "dataset,method,variant,omega,decision,split,seed,d,C,beta,sigma,eta,max_iter,"
         "standardize,refit,cv_gmean,tp,fp,tn,fn,accu,tpr,tnr,pre,f1,gmean\n";
  for (const ResultRow& r : rows) {
    out << r.dataset << ',' << r.method << ',' << variant_name(r.variant) << ','
        << omega_name(r.omega) << ',' << decision_name(r.decision) << ',' << r.split_id << ','
        << r.seed << ',' << r.chosen.d << ',' << fmt_full(r.chosen.c) << ','
        << fmt_full(r.chosen.beta) << ',' << fmt_full(r.chosen.sigma) << ','
        << fmt_full(r.chosen.eta) << ',' << r.chosen.max_iter << ','
        << (r.standardized ? 1 : 0) << ',' << (r.refit_on_full_train ? 1 : 0) << ','
        << fmt_full(r.cv_score) << ',' << r.counts.tp << ','
        << r.counts.fp << ',' << r.counts.tn << ',' << r.counts.fn << ','
        << fmt_full(r.metrics.accu) << ',' << fmt_full(r.metrics.tpr) << ','
        << fmt_full(r.metrics.tnr) << ',' << fmt_full(r.metrics.pre) << ','
        << fmt_full(r.metrics.f1) << ',' << fmt_full(r.metrics.gmean) << '\n';
  }
}

std::vector<ResultRow> read_rows_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io_error, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) fail(errc::corrupt_file, "empty rows file: " + path);

  std::vector<ResultRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 26)
      fail(errc::corrupt_file, path + ":" + std::to_string(line_no) + ": expected 26 fields");
    ResultRow r;
    size_t i = 0;
    r.dataset = f[i++];
    r.method = f[i++];
    r.variant = variant_from_name(f[i++]);
    r.omega = omega_from_name(f[i++]);
    r.decision = decision_from_name(f[i++]);
    r.split_id = std::stoi(f[i++]);
    r.seed = static_cast<uint64_t>(std::stoull(f[i++]));
    r.chosen.d = std::stoi(f[i++]);
    r.chosen.c = std::stod(f[i++]);
    r.chosen.beta = std::stod(f[i++]);
    r.chosen.sigma = std::stod(f[i++]);
    r.chosen.eta = std::stod(f[i++]);
    r.chosen.max_iter = std::stoi(f[i++]);
    r.standardized = f[i++] == "1";
    r.refit_on_full_train = f[i++] == "1";
    r.cv_score = std::stod(f[i++]);
    r.counts.tp = std::stol(f[i++]);
    r.counts.fp = std::stol(f[i++]);
    r.counts.tn = std::stol(f[i++]);
    r.counts.fn = std::stol(f[i++]);
    r.metrics.accu = std::stod(f[i++]);
    r.metrics.tpr = std::stod(f[i++]);
    r.metrics.tnr = std::stod(f[i++]);
    r.metrics.pre = std::stod(f[i++]);
    r.metrics.f1 = std::stod(f[i++]);
    r.metrics.gmean = std::stod(f[i++]);
    r.chosen.variant = r.variant;
    r.chosen.omega = r.omega;
    r.chosen.decision = r.decision;
    rows.push_back(r);
  }
  return rows;
}

ProtocolResult run_and_write(const ExperimentConfig& cfg) {
  ProtocolResult result = run_protocol(cfg);
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  write_rows_csv(result.rows, (dir / "rows.csv").string());
  if (!result.rows.empty()) {
    emit_report(result.rows, "csv", (dir / "summary.csv").string());
    emit_report(result.rows, "md", (dir / "summary.md").string());
  }
  std::ofstream log(dir / "grid_log.txt");
  for (const std::string& s : result.grid_log) log << s << '\n';
  for (const std::string& s : result.failures) log << "FAILURE " << s << '\n';
  return result;
}

void report_from_runs(const std::string& runs_dir, const std::string& format) {
  if (!fs::exists(runs_dir)) fail(errc::io_error, "runs directory not found: " + runs_dir);
  std::vector<ResultRow> rows;
  for (const auto& entry : fs::recursive_directory_iterator(runs_dir)) {
    if (entry.is_regular_file() && entry.path().filename() == "rows.csv") {
      const auto part = read_rows_csv(entry.path().string());
      rows.insert(rows.end(), part.begin(), part.end());
    }
  }
  if (rows.empty()) fail(errc::io_error, "no rows.csv found under " + runs_dir);
  emit_report(rows, format, (fs::path(runs_dir) / ("report." + format)).string());
}

}  // namespace mssvdd
