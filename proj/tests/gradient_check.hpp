#pragma once

// Shared between the gradient unit tests and the acceptance suite: explicit
// trace-loop oracle for regularizer values, frozen-alpha objective, random
// instances, and the finite-difference comparison.

#include <vector>

#include "core/kernel.hpp"
#include "core/omega.hpp"
#include "core/svdd.hpp"
#include "test_support.hpp"

namespace test_support {

using mssvdd::OmegaKind;

inline double omega_loop_oracle(OmegaKind kind, const std::vector<Matrix>& proj,
                                const std::vector<Matrix>& data,
                                const std::vector<Vector>& alpha,
                                const std::vector<Vector>& lambda) {
  const size_t m_count = proj.size();
  auto pair_trace = [&](size_t m, size_t n) {
    const Matrix a = proj[m] * data[m];
    const Matrix b = proj[n] * data[n];
    double tr = 0.0;
    for (Index r = 0; r < a.rows(); ++r)
      for (Index c = 0; c < a.cols(); ++c) tr += a(r, c) * b(r, c);
    return tr;
  };
  auto weighted_pair = [&](size_t m, size_t n, const std::vector<Vector>& w) {
    const Vector um = proj[m] * (data[m] * w[m]);
    const Vector un = proj[n] * (data[n] * w[n]);
    return un.dot(um);
  };

  double acc = 0.0;
  switch (kind) {
    case OmegaKind::w0: return 0.0;
    case OmegaKind::w1:
      for (size_t m = 0; m < m_count; ++m) acc += pair_trace(m, m);
      return acc;
    case OmegaKind::w2:
      for (size_t m = 0; m < m_count; ++m) acc += weighted_pair(m, m, alpha);
      return acc;
    case OmegaKind::w3:
      for (size_t m = 0; m < m_count; ++m) acc += weighted_pair(m, m, lambda);
      return acc;
    case OmegaKind::w4:
      for (size_t m = 0; m < m_count; ++m)
        for (size_t n = 0; n < m_count; ++n) acc += pair_trace(m, n);
      return acc;
    case OmegaKind::w5:
      for (size_t m = 0; m < m_count; ++m)
        for (size_t n = 0; n < m_count; ++n) acc += weighted_pair(m, n, alpha);
      return acc;
    case OmegaKind::w6:
      for (size_t m = 0; m < m_count; ++m)
        for (size_t n = 0; n < m_count; ++n) acc += weighted_pair(m, n, lambda);
      return acc;
  }
  return acc;
}

inline double dual_objective_terms(const std::vector<Matrix>& proj,
                                   const std::vector<Matrix>& data,
                                   const std::vector<Vector>& alpha) {
  double first = 0.0;
  Vector center = Vector::Zero(proj[0].rows());
  for (size_t m = 0; m < proj.size(); ++m) {
    for (Index i = 0; i < data[m].cols(); ++i)
      first += alpha[m](i) * (proj[m] * data[m].col(i)).squaredNorm();
    center += proj[m] * (data[m] * alpha[m]);
  }
  return first - center.squaredNorm();
}

struct GradInstance {
  std::vector<Matrix> proj;
  std::vector<Matrix> data;
  std::vector<Vector> alpha;
  std::vector<Vector> lambda;
  Vector pooled;
  double c = 0.45;
};

inline GradInstance random_grad_instance(mssvdd::Rng& rng, bool kernelized) {
  GradInstance inst;
  const int m_count = 1 + static_cast<int>(rng.next_below(3));
  const Index n = 3 + static_cast<Index>(rng.next_below(4));
  const Index d = 1 + static_cast<Index>(rng.next_below(2));

  Vector raw = random_vector(static_cast<Index>(m_count) * n, rng);
  inst.pooled = mssvdd::project_capped_simplex(raw, inst.c);

  for (int m = 0; m < m_count; ++m) {
    const Index dim = 2 + static_cast<Index>(rng.next_below(4));
    Matrix x = random_matrix(dim, n, rng);
    if (kernelized) {
      inst.data.push_back(mssvdd::rbf_kernel(x, x, 0.8 + rng.next_double()));
      inst.proj.push_back(random_matrix(d, n, rng));
    } else {
      inst.data.push_back(std::move(x));
      inst.proj.push_back(random_matrix(d, dim, rng));
    }
    inst.alpha.push_back(mssvdd::alpha_slice(inst.pooled, m, n));
    inst.lambda.push_back(mssvdd::lambda_from_alpha(inst.alpha.back(), inst.c));
  }
  return inst;
}

/// Worst relative deviation between the analytic gradient of the full frozen-
/// alpha objective and central finite differences, over all modalities.
inline double gradient_fd_error(const GradInstance& inst, OmegaKind kind, double beta) {
  double worst = 0.0;
  for (size_t m = 0; m < inst.proj.size(); ++m) {
    const Matrix analytic =
        mssvdd::main_gradient(static_cast<int>(m), inst.proj, inst.data, inst.pooled) +
        beta * mssvdd::omega_gradient(kind, static_cast<int>(m), inst.proj, inst.data,
                                      inst.alpha, inst.lambda);
    auto objective = [&](const Matrix& probe) {
      std::vector<Matrix> proj = inst.proj;
      proj[m] = probe;
      return dual_objective_terms(proj, inst.data, inst.alpha) +
             beta * omega_loop_oracle(kind, proj, inst.data, inst.alpha, inst.lambda);
    };
    const Matrix fd = central_diff(objective, inst.proj[m]);
    worst = std::max(worst, relative_error(analytic, fd));
  }
  return worst;
}

}  // namespace test_support
