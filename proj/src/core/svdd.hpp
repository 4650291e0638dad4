#pragma once

#include <vector>

#include "matrix.hpp"

namespace mssvdd {

// Classification tolerance for alpha ~ 0 and alpha ~ C.
inline constexpr double kAlphaTol = 1e-8;

/// Projected subspace representations pooled over all modalities,
/// modality-major: columns [Y_1 | Y_2 | ... | Y_M], each block `items` wide.
struct PooledPoints {
  Matrix y;          // d x (m_count * items)
  int m_count = 1;
  int items = 0;

  Index total() const { return y.cols(); }
};

struct DualSolution {
  Vector alpha;                      // length m_count * items
  double c = 1.0;
  std::vector<Index> support_idx;    // tol < alpha < C - tol
  std::vector<Index> outlier_idx;    // alpha >= C - tol
  double r_squared = 0.0;
  double objective = 0.0;
  double kkt_residual = 0.0;
  bool degenerate = false;           // all training points identical
};

/// Exact Euclidean projection onto { x : sum(x) = target, 0 <= x <= ub }.
/// O(n log n) breakpoint search; requires 0 <= target <= n * ub.
Vector project_capped_simplex(const Vector& v, double ub, double target = 1.0);

/// Maximize sum_i a_i y_i.y_i - sum_ij a_i a_j y_i.y_j subject to
/// sum(a) = 1, 0 <= a <= c. Projected-gradient ascent with exact projection,
/// then pairwise polish until the KKT residual is below 1e-7.
DualSolution solve_dual(const PooledPoints& points, double c);

/// Squared distance of y_star to the hypersphere center, expanded through
/// inner products with the training representations.
double distance_to_center(const Vector& y_star, const PooledPoints& points, const DualSolution& sol);

/// Mean squared boundary distance over strict support vectors; falls back to
/// the largest distance among points with alpha > tol when none are strict.
double radius_squared(const PooledPoints& points, const DualSolution& sol);

/// Boundary counts as positive.
inline bool classify_positive(double distance2, double r2) { return distance2 <= r2; }

/// Copy of an alpha slice with entries at the box bound zeroed.
Vector lambda_from_alpha(const Vector& alpha_slice, double c);

/// Precomputed pieces of the distance expansion, for evaluating many points
/// against one trained description.
class DistanceEvaluator {
public:
  DistanceEvaluator(const PooledPoints& points, const DualSolution& sol);
  double operator()(const Vector& y_star) const;

private:
  const Matrix& y_;
  Vector center_;       // sum_i alpha_i y_i
  double self_term_;    // sum_ij alpha_i alpha_j y_i.y_j
};

}  // namespace mssvdd
