#include "mssvdd.h"

#include <filesystem>
#include <fstream>
#include <string>

#include "core/config.hpp"
#include "core/dataset.hpp"
#include "core/experiment.hpp"
#include "core/model_io.hpp"
#include "core/trainer.hpp"

namespace fs = std::filesystem;

namespace {

thread_local std::string g_last_error = "";

msvd_status status_of(mssvdd::errc code) {
  using mssvdd::errc;
  switch (code) {
    case errc::config_error:
      return MSVD_ERR_CONFIG;
    case errc::parse_error:
    case errc::unknown_label:
    case errc::column_count:
    case errc::too_few_items:
    case errc::data_unavailable:
      return MSVD_ERR_DATA;
    case errc::io_error:
    case errc::version_mismatch:
    case errc::corrupt_file:
      return MSVD_ERR_IO;
    case errc::invalid_argument:
    case errc::strategy_arity:
    case errc::empty_class:
      return MSVD_ERR_INVALID_ARG;
    case errc::rank_deficient:
    case errc::not_symmetric:
    case errc::dimension_too_large:
    case errc::infeasible_c:
    case errc::no_feasible_cell:
    case errc::non_finite_gradient:
    case errc::degenerate_projection:
    case errc::degenerate_kernel:
      return MSVD_ERR_NUMERIC;
  }
  return MSVD_ERR_INTERNAL;
}

template <typename Fn>
msvd_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return MSVD_OK;
  } catch (const mssvdd::error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MSVD_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return MSVD_ERR_INTERNAL;
  }
}

msvd_status invalid(const char* msg) {
  g_last_error = msg;
  return MSVD_ERR_INVALID_ARG;
}

mssvdd::ModalDataset load_eval_data(const mssvdd::TrainedModel& model, const std::string& path) {
  if (model.dataset_kind == "spectf") return mssvdd::load_spectf_file(path);
  if (model.dataset_kind == "robot" || model.dataset_kind.empty())
    return mssvdd::load_robot(path, 0, model.target_label);
  return mssvdd::load_dataset(path);
}

}  // namespace

struct msvd_model {
  mssvdd::TrainedModel impl;
};

extern "C" {

const char* msvd_version(void) { return "1.0.0"; }

const char* msvd_last_error(void) { return g_last_error.c_str(); }

msvd_status msvd_run_train(const char* config_path) {
  if (!config_path) return invalid("config_path is NULL");
  return guarded([&] {
    const mssvdd::ExperimentConfig cfg = mssvdd::parse_config(config_path);
    mssvdd::run_and_write(cfg);
  });
}

msvd_status msvd_run_grid(const char* config_path) {
  if (!config_path) return invalid("config_path is NULL");
  return guarded([&] {
    const mssvdd::ExperimentConfig cfg = mssvdd::parse_config(config_path);

    // Selection only: use the first protocol split's training portion.
    mssvdd::ModalDataset train;
    if (cfg.kind == "spectf") {
      train = mssvdd::load_spectf(cfg.train_path, cfg.test_path).first;
    } else {
      mssvdd::ModalDataset all = cfg.kind == "robot"
                                     ? mssvdd::load_robot(cfg.path, cfg.lp, cfg.target_label)
                                     : mssvdd::load_dataset(cfg.path);
      const mssvdd::SplitPlan plan =
          mssvdd::stratified_split(all.labels, cfg.train_fraction, cfg.seeds[0]);
      train = all.subset(plan.train_idx);
    }

    fs::create_directories(cfg.out_dir);
    std::ofstream out(fs::path(cfg.out_dir) / "grid.csv");
    if (!out) mssvdd::fail(mssvdd::errc::io_error, "cannot write grid.csv");
    out << "method,variant,omega,decision,beta,C,sigma,d,cv_gmean,evaluated,skipped\n";

    const mssvdd::MethodSpec method{mssvdd::MethodSpec::Kind::mssvdd, -1, "MS-SVDD"};
    for (mssvdd::Variant v : cfg.variants)
      for (mssvdd::OmegaKind w : cfg.omegas) {
        auto outcomes =
            mssvdd::grid_search_multi(train, cfg, method, v, w, cfg.decisions, cfg.seeds[0]);
        for (const auto& [decision, outcome] : outcomes) {
          out << method.id << ',' << mssvdd::variant_name(v) << ',' << mssvdd::omega_name(w) << ','
              << mssvdd::decision_name(decision) << ',' << outcome.best.beta << ','
              << outcome.best.c << ',' << outcome.best.sigma << ',' << outcome.best.d << ','
              << outcome.score << ',' << outcome.evaluated << ',' << outcome.skipped << '\n';
        }
      }
  });
}

msvd_status msvd_run_report(const char* runs_dir, const char* format) {
  if (!runs_dir || !format) return invalid("runs_dir/format is NULL");
  return guarded([&] { mssvdd::report_from_runs(runs_dir, format); });
}

msvd_status msvd_model_load(const char* path, msvd_model** out) {
  if (!path || !out) return invalid("path/out is NULL");
  *out = nullptr;
  return guarded([&] { *out = new msvd_model{mssvdd::load_model(path)}; });
}

msvd_status msvd_model_save(const msvd_model* model, const char* path) {
  if (!model || !path) return invalid("model/path is NULL");
  return guarded([&] { mssvdd::save_model(model->impl, path); });
}

void msvd_model_free(msvd_model* model) { delete model; }

msvd_status msvd_model_modalities(const msvd_model* model, size_t* count) {
  if (!model || !count) return invalid("model/count is NULL");
  *count = static_cast<size_t>(model->impl.modalities());
  return MSVD_OK;
}

msvd_status msvd_model_input_dim(const msvd_model* model, size_t modality, size_t* dim) {
  if (!model || !dim) return invalid("model/dim is NULL");
  if (modality >= static_cast<size_t>(model->impl.modalities()))
    return invalid("modality index out of range");
  const mssvdd::TrainedModel& m = model->impl;
  switch (m.params.variant) {
    case mssvdd::Variant::linear:
      *dim = static_cast<size_t>(m.projections[modality].cols());
      break;
    case mssvdd::Variant::kernel:
      *dim = static_cast<size_t>(m.kernel_state->train_x[modality].rows());
      break;
    case mssvdd::Variant::npt:
      *dim = static_cast<size_t>(m.npt_state->mods[modality].train_x.rows());
      break;
  }
  return MSVD_OK;
}

msvd_status msvd_model_radius2(const msvd_model* model, double* r2) {
  if (!model || !r2) return invalid("model/r2 is NULL");
  *r2 = model->impl.dual.r_squared;
  return MSVD_OK;
}

msvd_status msvd_model_decision(const msvd_model* model, int* decision) {
  if (!model || !decision) return invalid("model/decision is NULL");
  *decision = static_cast<int>(model->impl.params.decision);
  return MSVD_OK;
}

msvd_status msvd_model_decide(const msvd_model* model, const double* const* xs,
                              const size_t* dims, size_t m_count, double* dist2, int* labels,
                              int* fused) {
  if (!model || !xs || !dims) return invalid("model/xs/dims is NULL");
  if (m_count != static_cast<size_t>(model->impl.modalities()))
    return invalid("modality count mismatch");
  return guarded([&] {
    std::vector<mssvdd::Vector> item;
    for (size_t m = 0; m < m_count; ++m) {
      mssvdd::Vector v(static_cast<mssvdd::Index>(dims[m]));
      for (size_t i = 0; i < dims[m]; ++i) v(static_cast<mssvdd::Index>(i)) = xs[m][i];
      item.push_back(std::move(v));
    }
    const auto values = mssvdd::decision_values(model->impl, item);
    std::vector<mssvdd::Label> per_modality;
    for (size_t m = 0; m < values.size(); ++m) {
      if (dist2) dist2[m] = values[m].first;
      if (labels) labels[m] = values[m].second ? 1 : 0;
      per_modality.push_back(values[m].second ? mssvdd::Label::positive
                                              : mssvdd::Label::negative);
    }
    if (fused)
      *fused = mssvdd::fuse_labels(per_modality, model->impl.params.decision) ==
                       mssvdd::Label::positive
                   ? 1
                   : 0;
  });
}

msvd_status msvd_model_evaluate(const msvd_model* model, const char* data_path, double metrics[6],
                                long counts[4]) {
  if (!model || !data_path || !metrics) return invalid("model/data_path/metrics is NULL");
  return guarded([&] {
    const mssvdd::ModalDataset data =
        mssvdd::apply_method_view(load_eval_data(model->impl, data_path), model->impl.method_view);
    const mssvdd::ConfusionCounts c =
        mssvdd::evaluate_model(model->impl, data, model->impl.params.decision);
    const mssvdd::MetricReport r = mssvdd::compute_metrics(c);
    metrics[0] = r.accu;
    metrics[1] = r.tpr;
    metrics[2] = r.tnr;
    metrics[3] = r.pre;
    metrics[4] = r.f1;
    metrics[5] = r.gmean;
    if (counts) {
      counts[0] = c.tp;
      counts[1] = c.fp;
      counts[2] = c.tn;
      counts[3] = c.fn;
    }
  });
}

}  // extern "C"
