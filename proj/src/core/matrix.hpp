#pragma once

#include <Eigen/Dense>

#include "errors.hpp"

namespace mssvdd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline void require_finite(const Matrix& a, const char* what) {
  if (!a.allFinite()) fail(errc::invalid_argument, std::string(what) + ": non-finite entries");
}

inline void require_finite(const Vector& a, const char* what) {
  if (!a.allFinite()) fail(errc::invalid_argument, std::string(what) + ": non-finite entries");
}

inline double max_abs(const Matrix& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace mssvdd
