#include "svdd.hpp"

#include <algorithm>
#include <cmath>

namespace mssvdd {

Vector project_capped_simplex(const Vector& v, double ub, double target) {
  const Index n = v.size();
  if (n == 0) fail(errc::invalid_argument, "project_capped_simplex: empty vector");
  if (ub <= 0.0) fail(errc::invalid_argument, "project_capped_simplex: bound must be positive");
  if (target < -1e-12 || target > static_cast<double>(n) * ub + 1e-12)
    fail(errc::invalid_argument, "project_capped_simplex: target outside [0, n*ub]");

  const double n_ub = static_cast<double>(n) * ub;
  if (target >= n_ub) return Vector::Constant(n, ub);
  if (target <= 0.0) return Vector::Zero(n);

  // f(tau) = sum_i clip(v_i - tau, 0, ub) is continuous, piecewise linear and
  // non-increasing, with breakpoints at v_i and v_i - ub.
  std::vector<double> bps(2 * static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) {
    bps[2 * static_cast<size_t>(i)] = v(i);
    bps[2 * static_cast<size_t>(i) + 1] = v(i) - ub;
  }
  std::sort(bps.begin(), bps.end());

  auto f = [&](double tau) {
    double s = 0.0;
    for (Index i = 0; i < n; ++i) s += std::clamp(v(i) - tau, 0.0, ub);
    return s;
  };

  // First breakpoint with f <= target; f(bps.front()) = n*ub > target,
  // f(bps.back()) = 0 <= target, so it exists and is > 0.
  size_t lo = 0, hi = bps.size() - 1;
  while (lo < hi) {
    const size_t mid = (lo + hi) / 2;
    if (f(bps[mid]) <= target)
      hi = mid;
    else
      lo = mid + 1;
  }
  const double right = bps[lo];
  const double left = bps[lo - 1];
  const double fl = f(left);
  const double fr = f(right);

  double tau = right;
  if (fl > fr) tau = left + (fl - target) * (right - left) / (fl - fr);

  Vector x(n);
  for (Index i = 0; i < n; ++i) x(i) = std::clamp(v(i) - tau, 0.0, ub);

  // Spread residual fp error over the strictly interior coordinates.
  const double drift = target - x.sum();
  if (drift != 0.0) {
    Index free_count = 0;
    for (Index i = 0; i < n; ++i)
      if (x(i) > 0.0 && x(i) < ub) ++free_count;
    if (free_count > 0) {
      const double corr = drift / static_cast<double>(free_count);
      for (Index i = 0; i < n; ++i)
        if (x(i) > 0.0 && x(i) < ub) x(i) = std::clamp(x(i) + corr, 0.0, ub);
    }
  }
  return x;
}

namespace {

void classify_indices(DualSolution& sol) {
  sol.support_idx.clear();
  sol.outlier_idx.clear();
  for (Index i = 0; i < sol.alpha.size(); ++i) {
    const double a = sol.alpha(i);
    if (a >= sol.c - kAlphaTol)
      sol.outlier_idx.push_back(i);
    else if (a > kAlphaTol)
      sol.support_idx.push_back(i);
  }
}

}  // namespace

DualSolution solve_dual(const PooledPoints& points, double c) {
  const Index n = points.total();
  if (n < 2) fail(errc::invalid_argument, "solve_dual: need at least 2 points");
  if (static_cast<Index>(points.m_count) * points.items != n)
    fail(errc::invalid_argument, "solve_dual: modality-major layout mismatch");
  require_finite(points.y, "solve_dual");
  if (c * static_cast<double>(n) < 1.0 - 1e-12)
    fail(errc::infeasible_c, "solve_dual: C * point count below 1, constraint set empty");

  DualSolution sol;
  sol.c = c;

  const Matrix gram = points.y.transpose() * points.y;
  if (!gram.allFinite())
    fail(errc::invalid_argument, "solve_dual: inner products overflow (feature scale too large)");
  const Vector q = gram.diagonal();

  // All points identical: every feasible alpha attains the same objective.
  double max_pair_dist2 = 0.0;
  for (Index i = 0; i < n && max_pair_dist2 <= 1e-15 * (1.0 + q.maxCoeff()); ++i)
    for (Index j = i + 1; j < n; ++j)
      max_pair_dist2 = std::max(max_pair_dist2, q(i) + q(j) - 2.0 * gram(i, j));
  if (max_pair_dist2 <= 1e-15 * (1.0 + q.maxCoeff())) {
    sol.alpha = Vector::Constant(n, 1.0 / static_cast<double>(n));
    sol.degenerate = true;
    sol.objective = q.dot(sol.alpha) - sol.alpha.dot(gram * sol.alpha);
    sol.r_squared = 0.0;
    sol.kkt_residual = 0.0;
    classify_indices(sol);
    return sol;
  }

  Vector alpha = Vector::Constant(n, 1.0 / static_cast<double>(n));

  // Projected gradient ascent with exact line search along the projected
  // direction. The probe step uses twice the largest absolute row sum of G as
  // a Lipschitz bound for the gradient.
  const double bound = gram.cwiseAbs().rowwise().sum().maxCoeff();
  const double step = 1.0 / (2.0 * bound + 1e-30);

  Vector g_alpha = gram * alpha;
  double obj_scale = 1.0 + std::abs(q.dot(alpha) - alpha.dot(g_alpha));
  constexpr int kMaxPg = 100;
  for (int it = 0; it < kMaxPg; ++it) {
    const Vector grad = q - 2.0 * g_alpha;
    const Vector dir = project_capped_simplex(alpha + step * grad, c) - alpha;
    if (dir.cwiseAbs().maxCoeff() < 1e-14) break;
    const Vector g_dir = gram * dir;
    const double ascent = grad.dot(dir);
    const double curv = dir.dot(g_dir);
    double t = 1.0;
    if (curv > 0.0) t = std::min(ascent / (2.0 * curv), 1.0);
    if (t <= 0.0) break;
    alpha += t * dir;
    g_alpha += t * g_dir;
    if (t * ascent - t * t * curv < 1e-15 * obj_scale) break;  // stalled
  }
  alpha = project_capped_simplex(alpha, c);  // snap off accumulated drift

  // Pairwise polish: move mass from the lowest-gradient coordinate that can
  // shrink to the highest-gradient coordinate that can grow.
  Vector grad = q - 2.0 * (gram * alpha);
  constexpr int kMaxPolish = 10000;
  constexpr double kKktTarget = 1e-7;
  double viol = 0.0;
  for (int it = 0; it < kMaxPolish; ++it) {
    Index up = -1, down = -1;
    double gmax = -std::numeric_limits<double>::infinity();
    double gmin = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < n; ++i) {
      if (alpha(i) < c - 1e-12 && grad(i) > gmax) { gmax = grad(i); up = i; }
      if (alpha(i) > 1e-12 && grad(i) < gmin) { gmin = grad(i); down = i; }
    }
    if (up < 0 || down < 0 || up == down) { viol = 0.0; break; }
    viol = gmax - gmin;
    if (viol < kKktTarget) break;

    const double curv = gram(up, up) + gram(down, down) - 2.0 * gram(up, down);
    const double cap = std::min(c - alpha(up), alpha(down));
    double delta = cap;
    if (curv > 1e-30) delta = std::min(viol / (2.0 * curv), cap);
    if (delta <= 0.0) break;

    alpha(up) += delta;
    alpha(down) -= delta;
    grad -= (2.0 * delta) * (gram.col(up) - gram.col(down));
  }

  sol.alpha = alpha;
  sol.kkt_residual = std::max(viol, 0.0);
  sol.objective = q.dot(alpha) - alpha.dot(gram * alpha);
  classify_indices(sol);
  sol.r_squared = radius_squared(points, sol);
  return sol;
}

DistanceEvaluator::DistanceEvaluator(const PooledPoints& points, const DualSolution& sol)
    : y_(points.y) {
  center_ = y_ * sol.alpha;
  self_term_ = sol.alpha.dot(y_.transpose() * center_);
}

double DistanceEvaluator::operator()(const Vector& y_star) const {
  if (y_star.size() != y_.rows()) fail(errc::invalid_argument, "distance: dimension mismatch");
  return y_star.squaredNorm() - 2.0 * center_.dot(y_star) + self_term_;
}

double distance_to_center(const Vector& y_star, const PooledPoints& points, const DualSolution& sol) {
  return DistanceEvaluator(points, sol)(y_star);
}

double radius_squared(const PooledPoints& points, const DualSolution& sol) {
  if (sol.degenerate) return 0.0;
  const DistanceEvaluator dist(points, sol);

  double acc = 0.0;
  Index count = 0;
  for (Index i : sol.support_idx) {
    acc += dist(points.y.col(i));
    ++count;
  }
  if (count > 0) return acc / static_cast<double>(count);

  // No strict support vector: largest distance among contributing points.
  double worst = 0.0;
  for (Index i = 0; i < sol.alpha.size(); ++i)
    if (sol.alpha(i) > kAlphaTol) worst = std::max(worst, dist(points.y.col(i)));
  return worst;
}

Vector lambda_from_alpha(const Vector& alpha_slice, double c) {
  Vector lam = alpha_slice;
  for (Index i = 0; i < lam.size(); ++i)
    if (lam(i) >= c - kAlphaTol) lam(i) = 0.0;
  return lam;
}

}  // namespace mssvdd
