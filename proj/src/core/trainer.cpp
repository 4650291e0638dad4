#include "trainer.hpp"

#include <cmath>

#include "numerics.hpp"

namespace mssvdd {

Matrix project_modality(const Matrix& proj, const Matrix& x) {
  if (proj.cols() != x.rows()) fail(errc::invalid_argument, "project_modality: dimension mismatch");
  return proj * x;
}

void HyperParams::validate() const {
  if (eta <= 0.0) fail(errc::invalid_argument, "hyperparams: eta must be positive");
  if (c <= 0.0 || c > 1.0) fail(errc::invalid_argument, "hyperparams: C must be in (0,1]");
  if (d < 1) fail(errc::invalid_argument, "hyperparams: d must be >= 1");
  if (beta < 0.0) fail(errc::invalid_argument, "hyperparams: beta must be >= 0");
  if (max_iter < 0) fail(errc::invalid_argument, "hyperparams: max_iter must be >= 0");
  if ((variant == Variant::kernel || variant == Variant::npt) && sigma <= 0.0)
    fail(errc::invalid_argument, "hyperparams: sigma must be positive");
}

Matrix step_and_normalize(const Matrix& current, const Matrix& grad, double eta,
                          const std::function<Matrix(const Matrix&)>& normalize,
                          bool* kept_previous) {
  if (kept_previous) *kept_previous = false;
  double step = eta;
  for (int attempt = 0; attempt <= 5; ++attempt) {
    try {
      return normalize(current - step * grad);
    } catch (const error& e) {
      if (e.code() != errc::rank_deficient && e.code() != errc::degenerate_projection)
        throw;
      step *= 0.5;
    }
  }
  if (kept_previous) *kept_previous = true;
  return current;
}

namespace {

PooledPoints project_all(const std::vector<Matrix>& proj, const std::vector<Matrix>& data) {
  PooledPoints pooled;
  pooled.m_count = static_cast<int>(proj.size());
  pooled.items = static_cast<int>(data[0].cols());
  const Index d = proj[0].rows();
  pooled.y.resize(d, static_cast<Index>(pooled.m_count) * pooled.items);
  for (size_t m = 0; m < proj.size(); ++m)
    pooled.y.middleCols(static_cast<Index>(m) * pooled.items, pooled.items) =
        project_modality(proj[m], data[m]);
  return pooled;
}

struct LoopResult {
  std::vector<Matrix> projections;
  DualSolution dual;
  PooledPoints repr;
  std::vector<std::string> notes;
};

// Alternating optimization: solve the dual with projections fixed, then step
// each projection along the frozen-alpha gradient and re-normalize, modality
// by modality.
LoopResult run_loop(const std::vector<Matrix>& data, std::vector<Matrix> proj,
                    const HyperParams& params,
                    const std::vector<std::function<Matrix(const Matrix&)>>& normalize,
                    const IterationObserver& observer) {
  const int m_count = static_cast<int>(data.size());
  const Index items = data[0].cols();
  LoopResult out;

  for (int iter = 0; iter < params.max_iter; ++iter) {
    const PooledPoints pooled = project_all(proj, data);
    const DualSolution sol = solve_dual(pooled, params.c);

    std::vector<Vector> alphas(static_cast<size_t>(m_count));
    std::vector<Vector> lambdas(static_cast<size_t>(m_count));
    for (int m = 0; m < m_count; ++m) {
      alphas[static_cast<size_t>(m)] = alpha_slice(sol.alpha, m, items);
      lambdas[static_cast<size_t>(m)] = lambda_from_alpha(alphas[static_cast<size_t>(m)], params.c);
    }

    for (int m = 0; m < m_count; ++m) {
      Matrix grad = main_gradient(m, proj, data, sol.alpha);
      if (params.beta != 0.0 && params.omega != OmegaKind::w0)
        grad += params.beta * omega_gradient(params.omega, m, proj, data, alphas, lambdas);
      if (!grad.allFinite())
        fail(errc::non_finite_gradient, "training: non-finite gradient at iteration " +
                                            std::to_string(iter) + ", modality " + std::to_string(m));
      bool kept = false;
      proj[static_cast<size_t>(m)] = step_and_normalize(
          proj[static_cast<size_t>(m)], grad, params.eta, normalize[static_cast<size_t>(m)], &kept);
      if (kept)
        out.notes.push_back("iteration " + std::to_string(iter) + " modality " + std::to_string(m) +
                            ": rank-deficient update, kept previous projection");
      Index zero_rows = 0;
      for (Index r = 0; r < proj[static_cast<size_t>(m)].rows(); ++r)
        if (proj[static_cast<size_t>(m)].row(r).isZero(0.0)) ++zero_rows;
      if (zero_rows > 0)
        out.notes.push_back("iteration " + std::to_string(iter) + " modality " + std::to_string(m) +
                            ": " + std::to_string(zero_rows) +
                            " projection direction(s) clamped to zero");
    }

    if (observer) observer(IterationState{iter, proj, data, sol});
  }

  out.repr = project_all(proj, data);
  out.dual = solve_dual(out.repr, params.c);
  out.projections = std::move(proj);
  return out;
}

void check_shared_dimension(const ModalDataset& data, int d) {
  Index min_dim = data.x[0].rows();
  for (const Matrix& xm : data.x) min_dim = std::min(min_dim, xm.rows());
  if (d > min_dim)
    fail(errc::dimension_too_large, "train: d exceeds the smallest modality dimension");
}

}  // namespace

TrainedModel train_linear(const ModalDataset& data, const HyperParams& params,
                          const Standardization* pre, const std::vector<Matrix>* init,
                          const IterationObserver& observer) {
  params.validate();
  data.validate();
  check_shared_dimension(data, params.d);

  const int m_count = data.modalities();
  std::vector<Matrix> proj;
  if (init) {
    if (static_cast<int>(init->size()) != m_count)
      fail(errc::invalid_argument, "train_linear: init projection count mismatch");
    proj = *init;
  } else {
    for (int m = 0; m < m_count; ++m)
      proj.push_back(pca_directions(data.x[static_cast<size_t>(m)], params.d));
  }

  std::vector<std::function<Matrix(const Matrix&)>> normalize(
      static_cast<size_t>(m_count), [](const Matrix& q) { return orthonormalize_rows(q); });

  LoopResult res = run_loop(data.x, std::move(proj), params, normalize, observer);

  TrainedModel model;
  model.params = params;
  model.projections = std::move(res.projections);
  model.dual = std::move(res.dual);
  model.train_repr = std::move(res.repr);
  model.notes = std::move(res.notes);
  if (pre) model.preproc = *pre;
  return model;
}

TrainedModel train_kernel(const ModalDataset& data, const HyperParams& params,
                          const Standardization* pre, const std::vector<Matrix>* init,
                          const IterationObserver& observer) {
  params.validate();
  data.validate();

  const int m_count = data.modalities();
  KernelState state;
  state.sigma = params.sigma;
  state.centered = params.center_kernel_gram;

  std::vector<Matrix> grams(static_cast<size_t>(m_count));
  for (int m = 0; m < m_count; ++m) {
    const Matrix& xm = data.x[static_cast<size_t>(m)];
    Matrix k = rbf_kernel(xm, xm, params.sigma);
    state.train_x.push_back(xm);
    state.gram.push_back(k);
    grams[static_cast<size_t>(m)] = params.center_kernel_gram ? center_kernel(k) : std::move(k);
  }

  std::vector<Matrix> proj;
  if (init) {
    if (static_cast<int>(init->size()) != m_count)
      fail(errc::invalid_argument, "train_kernel: init projection count mismatch");
    proj = *init;
  } else {
    for (int m = 0; m < m_count; ++m)
      proj.push_back(kernel_pca_init(grams[static_cast<size_t>(m)], params.d));
  }

  std::vector<std::function<Matrix(const Matrix&)>> normalize;
  for (int m = 0; m < m_count; ++m) {
    const Matrix& k = grams[static_cast<size_t>(m)];
    normalize.push_back([&k](const Matrix& w) { return normalize_w(w, k); });
  }

  LoopResult res = run_loop(grams, std::move(proj), params, normalize, observer);

  TrainedModel model;
  model.params = params;
  model.projections = std::move(res.projections);
  model.dual = std::move(res.dual);
  model.train_repr = std::move(res.repr);
  model.notes = std::move(res.notes);
  model.kernel_state = std::move(state);
  if (pre) model.preproc = *pre;
  return model;
}

TrainedModel train_npt(const ModalDataset& data, const HyperParams& params,
                       const Standardization* pre, const IterationObserver& observer) {
  params.validate();
  data.validate();

  auto [embedded, state] = npt_preprocess(data, params.sigma);

  HyperParams linear_params = params;
  linear_params.variant = Variant::linear;
  TrainedModel model = train_linear(embedded, linear_params, pre, nullptr, observer);
  model.params = params;
  model.npt_state = std::move(state);
  return model;
}

TrainedModel train(const ModalDataset& data, const HyperParams& params,
                   const Standardization* pre, const IterationObserver& observer) {
  switch (params.variant) {
    case Variant::linear: return train_linear(data, params, pre, nullptr, observer);
    case Variant::kernel: return train_kernel(data, params, pre, nullptr, observer);
    case Variant::npt: return train_npt(data, params, pre, observer);
  }
  fail(errc::invalid_argument, "train: unknown variant");
}

std::vector<std::pair<double, bool>> decision_values(const TrainedModel& model,
                                                     const std::vector<Vector>& item) {
  if (static_cast<int>(item.size()) != model.modalities())
    fail(errc::invalid_argument, "decision_values: modality count mismatch");

  const DistanceEvaluator dist(model.train_repr, model.dual);
  std::vector<std::pair<double, bool>> out;
  out.reserve(item.size());
  for (int m = 0; m < model.modalities(); ++m) {
    Index expected = 0;
    switch (model.params.variant) {
      case Variant::linear: expected = model.projections[static_cast<size_t>(m)].cols(); break;
      case Variant::kernel: expected = model.kernel_state->train_x[static_cast<size_t>(m)].rows(); break;
      case Variant::npt: expected = model.npt_state->mods[static_cast<size_t>(m)].train_x.rows(); break;
    }
    if (item[static_cast<size_t>(m)].size() != expected)
      fail(errc::invalid_argument, "decision_values: modality " + std::to_string(m) +
                                       " expects dimension " + std::to_string(expected));
    const Vector v = model.preproc.apply(item[static_cast<size_t>(m)], m);
    Vector projected;
    switch (model.params.variant) {
      case Variant::linear:
        projected = model.projections[static_cast<size_t>(m)] * v;
        break;
      case Variant::kernel:
        projected = model.projections[static_cast<size_t>(m)] *
                    test_kernel_vector(*model.kernel_state, m, v);
        break;
      case Variant::npt:
        projected = model.projections[static_cast<size_t>(m)] *
                    npt_map_test(*model.npt_state, m, v);
        break;
    }
    const double d2 = dist(projected);
    out.emplace_back(d2, classify_positive(d2, model.dual.r_squared));
  }
  return out;
}

std::vector<Label> modality_labels(const TrainedModel& model, const std::vector<Vector>& item) {
  std::vector<Label> labels;
  for (const auto& [d2, pos] : decision_values(model, item))
    labels.push_back(pos ? Label::positive : Label::negative);
  return labels;
}

}  // namespace mssvdd
