#include "numerics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace mssvdd {

Matrix orthonormalize_rows(const Matrix& q) {
  const Index d = q.rows();
  const Index big_d = q.cols();
  if (d < 1 || d > big_d) fail(errc::invalid_argument, "orthonormalize_rows: need 1 <= rows <= cols");
  require_finite(q, "orthonormalize_rows");

  Eigen::JacobiSVD<Matrix> svd(q);
  const Vector& sv = svd.singularValues();
  const double largest = sv.size() ? sv(0) : 0.0;
  if (largest <= 0.0 || sv(sv.size() - 1) < kQrRankTol * largest)
    fail(errc::rank_deficient, "orthonormalize_rows: numerical rank below row count");

  Eigen::HouseholderQR<Matrix> qr(q.transpose());
  const Matrix thin_q = qr.householderQ() * Matrix::Identity(big_d, d);
  return thin_q.transpose();
}

EigResult sym_eig(const Matrix& s) {
  if (s.rows() != s.cols()) fail(errc::invalid_argument, "sym_eig: matrix not square");
  require_finite(s, "sym_eig");

  const double asym = max_abs(s - s.transpose());
  if (asym > 1e-8 * (1.0 + max_abs(s)))
    fail(errc::not_symmetric, "sym_eig: asymmetry " + std::to_string(asym) + " above tolerance");

  const Matrix sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success) fail(errc::invalid_argument, "sym_eig: eigensolver failed");

  // Eigen returns ascending order; flip to descending.
  const Index n = s.rows();
  EigResult out;
  out.values = es.eigenvalues().reverse();
  out.vectors.resize(n, n);
  for (Index k = 0; k < n; ++k) out.vectors.col(k) = es.eigenvectors().col(n - 1 - k);
  return out;
}

Index spectral_rank(const Vector& values) {
  if (values.size() == 0) return 0;
  const double top = std::max(values(0), 0.0);
  if (top <= 0.0) return 0;
  const double cutoff = kEigRankTol * top;
  Index r = 0;
  for (Index i = 0; i < values.size(); ++i)
    if (values(i) > cutoff) ++r;
  return r;
}

Matrix pca_directions(const Matrix& x, Index d) {
  const Index big_d = x.rows();
  const Index n = x.cols();
  if (d < 1) fail(errc::invalid_argument, "pca_directions: d must be >= 1");
  require_finite(x, "pca_directions");
  if (d > std::min(big_d, n))
    fail(errc::dimension_too_large, "pca_directions: d exceeds min(dimension, samples)");

  const Vector mu = x.rowwise().mean();
  const Matrix centered = x.colwise() - mu;
  const Matrix cov = centered * centered.transpose();
  const EigResult eig = sym_eig(cov);

  if (d > spectral_rank(eig.values))
    fail(errc::dimension_too_large, "pca_directions: d exceeds numerical rank of centered data");
  return eig.vectors.leftCols(d).transpose();
}

Vector diag_sqrt_pinv(const Vector& values) {
  Vector out = Vector::Zero(values.size());
  if (values.size() == 0) return out;
  const double cutoff = kEigRankTol * std::max(values.maxCoeff(), 0.0);
  for (Index i = 0; i < values.size(); ++i)
    if (values(i) > cutoff) out(i) = 1.0 / std::sqrt(values(i));
  return out;
}

}  // namespace mssvdd
