#pragma once

#include <vector>

#include "matrix.hpp"

namespace mssvdd {

/// RBF Gram block K(i,j) = exp(-|x_i - x2_j|^2 / (2 sigma^2)).
Matrix rbf_kernel(const Matrix& x, const Matrix& x2, double sigma);

/// Column j of the result is w * k_j.
Matrix kernel_project(const Matrix& w, const Matrix& k);

/// Rescale w so that w K wT = I on the retained (non-clamped) eigendirections:
/// eigendecompose w K wT = V L VT and return diag_sqrt_pinv(L) VT w.
/// Throws degenerate_projection when every eigenvalue clamps to zero.
Matrix normalize_w(const Matrix& w, const Matrix& k);

/// Kernel-PCA initialization: rows (1/sqrt(a_k)) u_kT for the top-d eigenpairs
/// of the double-centered Gram matrix.
Matrix kernel_pca_init(const Matrix& k, Index d);

/// Training-time kernel state retained for projecting test instances.
struct KernelState {
  std::vector<Matrix> train_x;   // per modality, preprocessed training columns
  std::vector<Matrix> gram;      // raw (uncentered) RBF Gram per modality
  double sigma = 1.0;
  bool centered = false;         // whether training used the centered Gram
};

/// Kernel vector of a test instance against the stored training columns;
/// centered consistently with the training Gram when `centered` is set.
Vector test_kernel_vector(const KernelState& state, int m, const Vector& x_star);

}  // namespace mssvdd
