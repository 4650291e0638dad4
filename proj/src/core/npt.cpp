#include "npt.hpp"

#include "kernel.hpp"
#include "numerics.hpp"

namespace mssvdd {

Matrix center_kernel(const Matrix& k) {
  if (k.rows() != k.cols()) fail(errc::invalid_argument, "center_kernel: matrix not square");
  const Index n = k.rows();
  const Matrix centering = Matrix::Identity(n, n) - Matrix::Constant(n, n, 1.0 / static_cast<double>(n));
  return centering * k * centering;
}

std::tuple<Matrix, Vector, Matrix> npt_embed(const Matrix& k_centered) {
  const EigResult eig = sym_eig(k_centered);
  const Index r = spectral_rank(eig.values);
  if (r == 0) fail(errc::degenerate_kernel, "npt_embed: centered gram has rank zero");

  const Vector a = eig.values.head(r);
  const Matrix u = eig.vectors.leftCols(r);
  const Vector inv_sqrt = diag_sqrt_pinv(a);
  const Matrix phi = inv_sqrt.asDiagonal() * u.transpose() * k_centered;
  return {phi, a, u};
}

std::pair<ModalDataset, NptState> npt_preprocess(const ModalDataset& data, double sigma) {
  if (sigma <= 0.0) fail(errc::invalid_argument, "npt_preprocess: sigma must be positive");

  ModalDataset embedded;
  embedded.modality_names = data.modality_names;
  embedded.labels = data.labels;
  embedded.item_ids = data.item_ids;

  NptState state;
  state.sigma = sigma;
  for (int m = 0; m < data.modalities(); ++m) {
    NptModalityState ms;
    ms.train_x = data.x[static_cast<size_t>(m)];
    ms.k = rbf_kernel(ms.train_x, ms.train_x, sigma);
    auto [phi, a, u] = npt_embed(center_kernel(ms.k));
    ms.phi = phi;
    ms.a = a;
    ms.u = u;
    embedded.x.push_back(std::move(phi));
    state.mods.push_back(std::move(ms));
  }
  return {std::move(embedded), std::move(state)};
}

Vector npt_map_test(const NptState& state, int m, const Vector& x_star) {
  const size_t mi = static_cast<size_t>(m);
  if (mi >= state.mods.size()) fail(errc::invalid_argument, "npt_map_test: bad modality");
  const NptModalityState& ms = state.mods[mi];
  if (x_star.size() != ms.train_x.rows())
    fail(errc::invalid_argument, "npt_map_test: dimension mismatch");

  const Index n = ms.train_x.cols();
  Matrix col(x_star.size(), 1);
  col.col(0) = x_star;
  const Vector k_star = rbf_kernel(ms.train_x, col, state.sigma).col(0);

  const Vector shifted = k_star - ms.k * Vector::Constant(n, 1.0 / static_cast<double>(n));
  const Vector centered = shifted - Vector::Constant(n, shifted.mean());

  return diag_sqrt_pinv(ms.a).asDiagonal() * ms.u.transpose() * centered;
}

}  // namespace mssvdd
