#include "kernel.hpp"

#include <cmath>

#include "numerics.hpp"

namespace mssvdd {

Matrix rbf_kernel(const Matrix& x, const Matrix& x2, double sigma) {
  if (sigma <= 0.0) fail(errc::invalid_argument, "rbf_kernel: sigma must be positive");
  if (x.rows() != x2.rows()) fail(errc::invalid_argument, "rbf_kernel: dimension mismatch");
  require_finite(x, "rbf_kernel");
  require_finite(x2, "rbf_kernel");

  const Vector sq1 = x.colwise().squaredNorm();
  const Vector sq2 = x2.colwise().squaredNorm();
  Matrix k = -2.0 * (x.transpose() * x2);
  k.colwise() += sq1;
  k.rowwise() += sq2.transpose();
  const double inv = 1.0 / (2.0 * sigma * sigma);
  const auto arg = (-inv * k.cwiseMax(0.0)).array();
  // flush deep underflow to exact zero; subnormal kernel entries cripple
  // downstream products on most CPUs
  return (arg < -700.0).select(0.0, arg.exp());
}

Matrix kernel_project(const Matrix& w, const Matrix& k) {
  if (w.cols() != k.rows()) fail(errc::invalid_argument, "kernel_project: dimension mismatch");
  return w * k;
}

Matrix normalize_w(const Matrix& w, const Matrix& k) {
  if (w.cols() != k.rows() || k.rows() != k.cols())
    fail(errc::invalid_argument, "normalize_w: dimension mismatch");
  const Matrix wkw = w * k * w.transpose();
  const EigResult eig = sym_eig(wkw);
  const Vector scale = diag_sqrt_pinv(eig.values);
  if ((scale.array() != 0.0).count() == 0)
    fail(errc::degenerate_projection, "normalize_w: projection collapsed to rank zero");
  return scale.asDiagonal() * eig.vectors.transpose() * w;
}

Matrix kernel_pca_init(const Matrix& k, Index d) {
  if (k.rows() != k.cols()) fail(errc::invalid_argument, "kernel_pca_init: gram not square");
  if (d < 1) fail(errc::invalid_argument, "kernel_pca_init: d must be >= 1");
  const Index n = k.rows();
  const Matrix centering = Matrix::Identity(n, n) - Matrix::Constant(n, n, 1.0 / static_cast<double>(n));
  const Matrix centered = centering * k * centering;
  const EigResult eig = sym_eig(centered);
  if (d > spectral_rank(eig.values))
    fail(errc::dimension_too_large, "kernel_pca_init: d exceeds rank of centered gram");

  Matrix w(d, n);
  for (Index r = 0; r < d; ++r)
    w.row(r) = eig.vectors.col(r).transpose() / std::sqrt(eig.values(r));
  return w;
}

Vector test_kernel_vector(const KernelState& state, int m, const Vector& x_star) {
  const size_t mi = static_cast<size_t>(m);
  if (mi >= state.train_x.size()) fail(errc::invalid_argument, "test_kernel_vector: bad modality");
  const Matrix& tx = state.train_x[mi];
  if (x_star.size() != tx.rows()) fail(errc::invalid_argument, "test_kernel_vector: dimension mismatch");

  Matrix col(x_star.size(), 1);
  col.col(0) = x_star;
  Vector k_star = rbf_kernel(tx, col, state.sigma).col(0);
  if (!state.centered) return k_star;

  const Index n = tx.cols();
  const Matrix& k = state.gram[mi];
  const Vector shifted = k_star - k * Vector::Constant(n, 1.0 / static_cast<double>(n));
  return shifted - Vector::Constant(n, shifted.mean());
}

}  // namespace mssvdd
