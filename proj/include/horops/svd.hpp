#pragma once

#include "horops/matrix.hpp"

namespace horops {

struct SvdResult {
  Matrix left_factor;        // orthogonal U
  Vec singular_values;       // non-increasing, >= 0
  Matrix right_factor;       // orthogonal V, with M = U diag(s) V^T
};

// One-sided Jacobi on columns.  Rotations are applied in a fixed pair
// order, so results are reproducible run to run; singular values keep
// high relative accuracy even when they spread over many decades, which
// the Cartan projection of long group words depends on.
SvdResult svd(const Matrix& m);

Vec singular_values(const Matrix& m);

}  // namespace horops
