#pragma once

#include "matrix.hpp"

namespace mssvdd {

/// Eigendecomposition of a symmetric matrix, eigenvalues sorted descending.
/// Column k of `vectors` pairs with `values[k]`.
struct EigResult {
  Vector values;
  Matrix vectors;
};

// Fixed relative cutoffs so rank decisions are reproducible.
inline constexpr double kQrRankTol = 1e-10;   // singular value cutoff for row orthonormalization
inline constexpr double kEigRankTol = 1e-9;   // eigenvalue cutoff for rank / pseudo-inverse

/// Row-orthonormal basis of the row space of `q` (d x D, d <= D), via QR of qT.
/// Throws rank_deficient when the numerical rank of q is below its row count.
Matrix orthonormalize_rows(const Matrix& q);

/// Symmetric eigendecomposition. Input is symmetrized by averaging with its
/// transpose; throws not_symmetric when the asymmetry exceeds 1e-8 * (1 + |S|_inf).
EigResult sym_eig(const Matrix& s);

/// Top-d principal directions (rows) of the column-centered data matrix x (D x N).
/// The column mean is not retained; only directions are returned.
Matrix pca_directions(const Matrix& x, Index d);

/// Elementwise v -> 1/sqrt(v) for entries above 1e-9 * max(values, 0), else 0.
Vector diag_sqrt_pinv(const Vector& values);

/// Count of eigenvalues above the relative rank cutoff (values assumed descending).
Index spectral_rank(const Vector& values);

}  // namespace mssvdd
