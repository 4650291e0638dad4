#pragma once

#include <tuple>
#include <vector>

#include "dataset.hpp"
#include "matrix.hpp"

namespace mssvdd {

/// Per-modality state of the explicit reduced kernel-space embedding.
struct NptModalityState {
  Matrix train_x;   // preprocessed training columns the kernel was built from
  Matrix k;         // raw (uncentered) Gram
  Vector a;         // retained eigenvalues of the centered Gram, descending
  Matrix u;         // matching eigenvectors (N x r)
  Matrix phi;       // r x N embedded training data
};

struct NptState {
  std::vector<NptModalityState> mods;
  double sigma = 1.0;
};

/// (I - E) K (I - E) with E = (1/N) 1 1T.
Matrix center_kernel(const Matrix& k);

/// Eigendecompose an already-centered Gram, drop eigenvalues below the
/// relative cutoff, and return (phi, a, u) with phi = sqrt(A) UT on the
/// retained rank. Throws degenerate_kernel at rank zero.
std::tuple<Matrix, Vector, Matrix> npt_embed(const Matrix& k_centered);

/// Replace each modality by its embedded representation; the returned state
/// maps test instances consistently.
std::pair<ModalDataset, NptState> npt_preprocess(const ModalDataset& data, double sigma);

/// Kernel vector against training columns, centered, then mapped through the
/// stored pseudo-inverse of phiT.
Vector npt_map_test(const NptState& state, int m, const Vector& x_star);

}  // namespace mssvdd
