#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "kernel.hpp"
#include "matrix.hpp"
#include "metrics.hpp"
#include "npt.hpp"
#include "omega.hpp"
#include "svdd.hpp"

namespace mssvdd {

enum class Variant : int { linear = 0, kernel = 1, npt = 2 };

/// Column i of the result is proj * x_i.
Matrix project_modality(const Matrix& proj, const Matrix& x);

struct HyperParams {
  Variant variant = Variant::linear;
  OmegaKind omega = OmegaKind::w0;
  double c = 0.3;
  double beta = 0.0;
  double sigma = 1.0;      // kernel / npt only
  int d = 1;
  double eta = 0.1;
  int max_iter = 50;
  Decision decision = Decision::ds1;
  bool center_kernel_gram = false;  // kernel-trick variant; npt always centers

  void validate() const;
};

/// Per-iteration snapshot handed to an observer: projections after the update,
/// the dual solution the update used, and the data matrices the projections
/// apply to (X for linear/npt, Gram for kernel).
struct IterationState {
  int iteration;
  const std::vector<Matrix>& projections;
  const std::vector<Matrix>& data;
  const DualSolution& dual;
};
using IterationObserver = std::function<void(const IterationState&)>;

struct TrainedModel {
  HyperParams params;
  std::vector<Matrix> projections;   // Q_m (d x D_m) or W_m (d x N)
  DualSolution dual;
  PooledPoints train_repr;
  Standardization preproc;
  std::optional<KernelState> kernel_state;
  std::optional<NptState> npt_state;
  std::vector<std::string> notes;    // non-fatal training events (kept steps etc.)

  // harness metadata carried through model files
  std::string dataset_kind;
  std::string target_label;
  std::string method_view = "all";  // "all" | "concat" | "modality:<k>"

  int modalities() const { return static_cast<int>(projections.size()); }
};

/// One projection step with the step halved up to five times when the
/// normalizer rejects the result; returns the previous matrix (and reports)
/// when every attempt fails.
Matrix step_and_normalize(const Matrix& current, const Matrix& grad, double eta,
                          const std::function<Matrix(const Matrix&)>& normalize,
                          bool* kept_previous = nullptr);

/// Training entry points. `data` must contain target items only and already be
/// preprocessed; `pre` (when given) is retained in the model for test time.
/// `init` overrides the PCA initialization (used by reduction baselines).
TrainedModel train_linear(const ModalDataset& data, const HyperParams& params,
                          const Standardization* pre = nullptr,
                          const std::vector<Matrix>* init = nullptr,
                          const IterationObserver& observer = {});

TrainedModel train_kernel(const ModalDataset& data, const HyperParams& params,
                          const Standardization* pre = nullptr,
                          const std::vector<Matrix>* init = nullptr,
                          const IterationObserver& observer = {});

TrainedModel train_npt(const ModalDataset& data, const HyperParams& params,
                       const Standardization* pre = nullptr,
                       const IterationObserver& observer = {});

TrainedModel train(const ModalDataset& data, const HyperParams& params,
                   const Standardization* pre = nullptr,
                   const IterationObserver& observer = {});

/// Per-modality (squared distance, positive?) for one raw item; preprocessing
/// and the variant's projection are applied internally.
std::vector<std::pair<double, bool>> decision_values(const TrainedModel& model,
                                                     const std::vector<Vector>& item);

/// Per-modality labels for one item, ready for fuse_labels.
std::vector<Label> modality_labels(const TrainedModel& model, const std::vector<Vector>& item);

}  // namespace mssvdd
