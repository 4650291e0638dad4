#include "core/npt.hpp"

#include <cmath>

#include "core/kernel.hpp"
#include "core/numerics.hpp"
#include "core/trainer.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace mssvdd;
using test_support::random_matrix;

TEST_CASE("center_kernel hand-expanded 2x2 case") {
  const Matrix k = Matrix::Identity(2, 2);
  const Matrix c = center_kernel(k);
  CHECK(c(0, 0) == doctest::Approx(0.5));
  CHECK(c(0, 1) == doctest::Approx(-0.5));
  CHECK(c(1, 0) == doctest::Approx(-0.5));
  CHECK(c(1, 1) == doctest::Approx(0.5));
}

TEST_CASE("center_kernel annihilates constant matrices") {
  const Matrix k = Matrix::Constant(5, 5, 3.7);
  CHECK(max_abs(center_kernel(k)) <= 1e-12);
}

TEST_CASE("center_kernel zeroes row sums and is idempotent") {
  Rng rng(3);
  const Matrix g = random_matrix(6, 6, rng);
  const Matrix k = g * g.transpose();
  const Matrix c = center_kernel(k);
  CHECK(max_abs(Matrix(c.rowwise().sum())) <= 1e-8);
  CHECK(max_abs(Matrix(c.colwise().sum())) <= 1e-8);
  CHECK(max_abs(center_kernel(c) - c) <= 1e-10);
}

TEST_CASE("npt_embed reconstructs the centered gram") {
  Rng rng(5);
  SUBCASE("rank one") {
    Vector v(4);
    v << 1, -1, 2, -2;
    const Vector centered_v = v - Vector::Constant(4, v.mean());
    const Matrix k = centered_v * centered_v.transpose();
    auto [phi, a, u] = npt_embed(k);
    CHECK(phi.rows() == 1);
    CHECK(max_abs(phi.transpose() * phi - k) <= 1e-6 * (1.0 + max_abs(k)));
  }
  SUBCASE("zero matrix is degenerate") {
    CHECK_THROWS_AS(npt_embed(Matrix::Zero(3, 3)), error);
    try {
      npt_embed(Matrix::Zero(3, 3));
    } catch (const error& e) {
      CHECK(e.code() == errc::degenerate_kernel);
    }
  }
  SUBCASE("random centered PSD") {
    for (int trial = 0; trial < 10; ++trial) {
      const Matrix g = random_matrix(7, 7, rng);
      const Matrix k = center_kernel(g * g.transpose());
      auto [phi, a, u] = npt_embed(k);
      CHECK(max_abs(phi.transpose() * phi - k) <= 1e-6 * (1.0 + max_abs(k)));
      CHECK(phi.rows() <= 6);  // centering removes at least one direction
    }
  }
}

TEST_CASE("npt_preprocess feeds the linear pipeline unchanged") {
  const ModalDataset data = test_support::toy_two_modality(12, 0, 4, 7);
  auto [embedded, state] = npt_preprocess(data, 2.0);

  CHECK(embedded.modalities() == 2);
  CHECK(embedded.items() == 12);
  for (int m = 0; m < 2; ++m) CHECK(embedded.x[static_cast<size_t>(m)].rows() <= 11);

  HyperParams params;
  params.variant = Variant::linear;
  params.c = 0.4;
  params.d = 2;
  params.max_iter = 3;
  const TrainedModel model = train_linear(embedded, params);
  CHECK(model.dual.alpha.size() == 24);
}

TEST_CASE("identical modalities embed identically up to per-direction sign") {
  Rng rng(11);
  ModalDataset data;
  const Matrix x = random_matrix(3, 8, rng);
  data.modality_names = {"a", "b"};
  data.x = {x, x};
  for (int i = 0; i < 8; ++i) {
    data.labels.push_back(Label::positive);
    data.item_ids.push_back("i");
  }
  auto [embedded, state] = npt_preprocess(data, 1.5);
  REQUIRE(embedded.x[0].rows() == embedded.x[1].rows());
  for (Index r = 0; r < embedded.x[0].rows(); ++r) {
    const Vector a = embedded.x[0].row(r).transpose();
    const Vector b = embedded.x[1].row(r).transpose();
    CHECK(std::min((a - b).norm(), (a + b).norm()) <= 1e-8 * (1.0 + a.norm()));
  }
}

TEST_CASE("npt_map_test reproduces training columns") {
  const ModalDataset data = test_support::toy_two_modality(15, 0, 4, 13);
  auto [embedded, state] = npt_preprocess(data, 2.5);
  for (int m = 0; m < 2; ++m)
    for (Index i = 0; i < data.items(); ++i) {
      const Vector mapped = npt_map_test(state, m, data.x[static_cast<size_t>(m)].col(i));
      const Vector expected = embedded.x[static_cast<size_t>(m)].col(i);
      CHECK(max_abs(Matrix(mapped - expected)) <= 1e-6 * (1.0 + max_abs(Matrix(expected))));
    }
}

TEST_CASE("npt_map_test limiting form for a far-away point") {
  const ModalDataset data = test_support::toy_two_modality(10, 0, 3, 17);
  auto [embedded, state] = npt_preprocess(data, 1.0);

  const Vector far = Vector::Constant(3, 1e6);
  const Vector mapped = npt_map_test(state, 0, far);
  CHECK(mapped.allFinite());

  // kernel vector vanishes, so the mapping reduces to the constant part
  const NptModalityState& ms = state.mods[0];
  const Index n = ms.train_x.cols();
  const Vector shifted = -ms.k * Vector::Constant(n, 1.0 / static_cast<double>(n));
  const Vector centered = shifted - Vector::Constant(n, shifted.mean());
  const Vector expected = diag_sqrt_pinv(ms.a).asDiagonal() * ms.u.transpose() * centered;
  CHECK(max_abs(Matrix(mapped - expected)) <= 1e-9 * (1.0 + max_abs(Matrix(expected))));
}

TEST_CASE("npt_map_test with one training point maps to zero") {
  NptModalityState ms;
  ms.train_x = Matrix::Constant(2, 1, 0.5);
  ms.k = Matrix::Constant(1, 1, 1.0);
  ms.a = Vector::Constant(1, 1.0);
  ms.u = Matrix::Constant(1, 1, 1.0);
  ms.phi = Matrix::Constant(1, 1, 0.0);
  NptState state;
  state.sigma = 1.0;
  state.mods.push_back(ms);

  Vector probe(2);
  probe << 3.0, -1.0;
  const Vector mapped = npt_map_test(state, 0, probe);
  CHECK(max_abs(Matrix(mapped)) <= 1e-15);
}
