#include "omega.hpp"

namespace mssvdd {

Vector alpha_slice(const Vector& pooled_alpha, int m, Index items) {
  if (m < 0 || (static_cast<Index>(m) + 1) * items > pooled_alpha.size())
    fail(errc::invalid_argument, "alpha_slice: modality index out of range");
  return pooled_alpha.segment(static_cast<Index>(m) * items, items);
}

namespace {

// sum_m P_m Z_m w_m, the weighted subspace aggregate shared by w5/w6 and the
// cross term of the main gradient.
Vector weighted_aggregate(const std::vector<Matrix>& proj,
                          const std::vector<Matrix>& data,
                          const std::vector<Vector>& w) {
  Vector acc = Vector::Zero(proj[0].rows());
  for (size_t m = 0; m < proj.size(); ++m) acc += proj[m] * (data[m] * w[m]);
  return acc;
}

}  // namespace

double omega_value(OmegaKind kind,
                   const std::vector<Matrix>& proj,
                   const std::vector<Matrix>& data,
                   const std::vector<Vector>& alpha,
                   const std::vector<Vector>& lambda) {
  const size_t m_count = proj.size();
  switch (kind) {
    case OmegaKind::w0:
      return 0.0;
    case OmegaKind::w1: {
      double acc = 0.0;
      for (size_t m = 0; m < m_count; ++m) acc += (proj[m] * data[m]).squaredNorm();
      return acc;
    }
    case OmegaKind::w2: {
      double acc = 0.0;
      for (size_t m = 0; m < m_count; ++m) acc += (proj[m] * (data[m] * alpha[m])).squaredNorm();
      return acc;
    }
    case OmegaKind::w3: {
      double acc = 0.0;
      for (size_t m = 0; m < m_count; ++m) acc += (proj[m] * (data[m] * lambda[m])).squaredNorm();
      return acc;
    }
    case OmegaKind::w4: {
      Matrix acc = Matrix::Zero(proj[0].rows(), data[0].cols());
      for (size_t m = 0; m < m_count; ++m) acc += proj[m] * data[m];
      return acc.squaredNorm();
    }
    case OmegaKind::w5:
      return weighted_aggregate(proj, data, alpha).squaredNorm();
    case OmegaKind::w6:
      return weighted_aggregate(proj, data, lambda).squaredNorm();
  }
  fail(errc::invalid_argument, "omega_value: unknown regularizer");
}

Matrix omega_gradient(OmegaKind kind, int m,
                      const std::vector<Matrix>& proj,
                      const std::vector<Matrix>& data,
                      const std::vector<Vector>& alpha,
                      const std::vector<Vector>& lambda) {
  const size_t mi = static_cast<size_t>(m);
  switch (kind) {
    case OmegaKind::w0:
      return Matrix::Zero(proj[mi].rows(), proj[mi].cols());
    case OmegaKind::w1:
      return 2.0 * (proj[mi] * data[mi]) * data[mi].transpose();
    case OmegaKind::w2: {
      const Vector u = data[mi] * alpha[mi];
      return 2.0 * (proj[mi] * u) * u.transpose();
    }
    case OmegaKind::w3: {
      const Vector u = data[mi] * lambda[mi];
      return 2.0 * (proj[mi] * u) * u.transpose();
    }
    case OmegaKind::w4: {
      Matrix acc = Matrix::Zero(proj[0].rows(), data[0].cols());
      for (size_t n = 0; n < proj.size(); ++n) acc += proj[n] * data[n];
      return 2.0 * acc * data[mi].transpose();
    }
    case OmegaKind::w5:
      return 2.0 * weighted_aggregate(proj, data, alpha) * (data[mi] * alpha[mi]).transpose();
    case OmegaKind::w6:
      return 2.0 * weighted_aggregate(proj, data, lambda) * (data[mi] * lambda[mi]).transpose();
  }
  fail(errc::invalid_argument, "omega_gradient: unknown regularizer");
}

Matrix main_gradient(int m,
                     const std::vector<Matrix>& proj,
                     const std::vector<Matrix>& data,
                     const Vector& pooled_alpha) {
  const size_t mi = static_cast<size_t>(m);
  const Index items = data[mi].cols();

  std::vector<Vector> slices(proj.size());
  for (size_t n = 0; n < proj.size(); ++n)
    slices[n] = alpha_slice(pooled_alpha, static_cast<int>(n), items);

  const Matrix projected = proj[mi] * data[mi];
  const Matrix term1 = 2.0 * (projected * slices[mi].asDiagonal()) * data[mi].transpose();

  const Vector center = weighted_aggregate(proj, data, slices);
  const Matrix term2 = 2.0 * center * (data[mi] * slices[mi]).transpose();

  return term1 - term2;
}

}  // namespace mssvdd
