#pragma once

#include <vector>

#include "matrix.hpp"

namespace mssvdd {

/// Trace-form covariance regularizers steering the projection update.
/// w1-w3 use only the modality's own representations; w4-w6 couple all
/// modality pairs. w2/w5 weight points by alpha (support vectors and
/// outliers), w3/w6 by lambda (support vectors only).
enum class OmegaKind { w0 = 0, w1, w2, w3, w4, w5, w6 };

/// Slice of the pooled modality-major alpha vector for modality m.
Vector alpha_slice(const Vector& pooled_alpha, int m, Index items);

double omega_value(OmegaKind kind,
                   const std::vector<Matrix>& proj,
                   const std::vector<Matrix>& data,
                   const std::vector<Vector>& alpha,
                   const std::vector<Vector>& lambda);

/// Derivative of the selected regularizer with respect to proj[m].
Matrix omega_gradient(OmegaKind kind, int m,
                      const std::vector<Matrix>& proj,
                      const std::vector<Matrix>& data,
                      const std::vector<Vector>& alpha,
                      const std::vector<Vector>& lambda);

/// Gradient of the augmented dual objective (without the beta term) with
/// respect to proj[m], alphas frozen.
Matrix main_gradient(int m,
                     const std::vector<Matrix>& proj,
                     const std::vector<Matrix>& data,
                     const Vector& pooled_alpha);

}  // namespace mssvdd
