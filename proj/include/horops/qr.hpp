#pragma once

#include "horops/matrix.hpp"

namespace horops {

struct QrResult {
  Matrix q;  // orthogonal
  Matrix r;  // upper triangular, strictly positive diagonal
};

// Householder QR followed by a diagonal sign fix so that diag(R) > 0.
// That makes the factorization unique, and the fixed operation order makes
// it bitwise deterministic, which downstream Iwasawa bookkeeping relies on.
// Throws std::domain_error when the input is numerically singular.
QrResult qr_positive(const Matrix& m);

}  // namespace horops
