#pragma once

// Shared generators for randomized tests.  Everything is seeded explicitly
// so failures reproduce; tests that need independent streams bump the seed.

#include <cstdint>
#include <random>

#include "horops/matrix.hpp"
#include "horops/qr.hpp"

namespace horops::test {

inline Matrix random_matrix(std::mt19937_64& rng, std::size_t d, double lo = -10.0,
                            double hi = 10.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Matrix m(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = dist(rng);
  return m;
}

// random element of SL(d,R): scale a generic matrix to determinant one,
// flipping a column first when the determinant came out negative
inline Matrix random_sl(std::mt19937_64& rng, std::size_t d) {
  for (;;) {
    Matrix m = random_matrix(rng, d, -2.0, 2.0);
    double det = determinant(m);
    if (std::abs(det) < 1e-3) continue;  // too close to singular, redraw
    if (det < 0)
      for (std::size_t i = 0; i < d; ++i) m(i, 0) = -m(i, 0);
    double scale = std::pow(std::abs(det), -1.0 / double(d));
    return m.scaled(scale);
  }
}

inline Matrix random_orthogonal(std::mt19937_64& rng, std::size_t d) {
  return qr_positive(random_matrix(rng, d, -1.0, 1.0)).q;
}

inline Matrix leading_columns(const Matrix& m, std::size_t n) {
  Matrix out(m.rows(), n);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = m(i, j);
  return out;
}

}  // namespace horops::test
