#include <doctest.h>

#include <random>
#include <stdexcept>

#include "horops/matrix.hpp"
#include "horops/qr.hpp"
#include "test_support.hpp"

using namespace horops;

namespace {

// classical Gram-Schmidt on columns, the independent oracle for Q
Matrix gram_schmidt_q(const Matrix& m) {
  std::size_t d = m.rows();
  Matrix q(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    Vec v = m.col(j);
    for (std::size_t p = 0; p < j; ++p) {
      Vec u = q.col(p);
      double proj = dot(u, v);
      v = vec_sub(v, vec_scale(u, proj));
    }
    q.set_col(j, normalized(v));
  }
  return q;
}

}  // namespace

TEST_CASE("upper triangular input is already factored") {
  Matrix t = Matrix::from_rows({{2, 1, 3}, {0, 5, -1}, {0, 0, 0.5}});
  QrResult r = qr_positive(t);
  CHECK(max_entry_diff(r.q, Matrix::identity(3)) < 1e-12);
  CHECK(max_entry_diff(r.r, t) < 1e-12);
}

TEST_CASE("orthogonal input gives R = identity") {
  std::mt19937_64 rng(3);
  Matrix q0 = test::random_orthogonal(rng, 4);
  QrResult r = qr_positive(q0);
  CHECK(max_entry_diff(r.r, Matrix::identity(4)) < 1e-9);
  CHECK(max_entry_diff(r.q, q0) < 1e-9);
}

TEST_CASE("factorization properties over random matrices") {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 500; ++it) {
    Matrix m = test::random_matrix(rng, 3);
    if (std::abs(determinant(m)) < 1e-6) continue;
    QrResult r = qr_positive(m);
    CHECK(max_entry_diff(r.q * r.r, m) < 1e-9 * (1.0 + m.max_abs_entry()));
    CHECK(max_entry_diff(r.q.transpose() * r.q, Matrix::identity(3)) < 1e-9);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(r.r(i, i) > 0.0);
      for (std::size_t j = 0; j < i; ++j) CHECK(r.r(i, j) == 0.0);
    }
    // positive diagonal makes the factorization unique, so the Q factor
    // must agree with the Gram-Schmidt construction up to rounding
    CHECK(max_entry_diff(r.q, gram_schmidt_q(m)) < 1e-7);
  }
}

TEST_CASE("repeat runs are bitwise identical") {
  std::mt19937_64 rng(8);
  Matrix m = test::random_matrix(rng, 5);
  QrResult a = qr_positive(m);
  QrResult b = qr_positive(m);
  CHECK(max_entry_diff(a.q, b.q) == 0.0);
  CHECK(max_entry_diff(a.r, b.r) == 0.0);
}

TEST_CASE("singular input is rejected") {
  Matrix m(3, 3);  // all zeros
  CHECK_THROWS_AS(qr_positive(m), std::domain_error);
  Matrix rank1 = Matrix::from_rows({{1, 2}, {2, 4}});
  CHECK_THROWS_AS(qr_positive(rank1), std::domain_error);
}
