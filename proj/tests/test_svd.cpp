#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "horops/matrix.hpp"
#include "horops/svd.hpp"
#include "test_support.hpp"

using namespace horops;

namespace {

double orthogonality_residual(const Matrix& q) {
  return max_entry_diff(q.transpose() * q, Matrix::identity(q.rows()));
}

double reconstruction_residual(const Matrix& m, const SvdResult& r) {
  Matrix rebuilt = r.left_factor * Matrix::diagonal(r.singular_values) *
                   r.right_factor.transpose();
  return max_entry_diff(m, rebuilt);
}

}  // namespace

TEST_CASE("diagonal positive matrix is its own singular spectrum") {
  SvdResult r = svd(Matrix::diagonal({4.0, 1.0, 0.25}));
  CHECK(r.singular_values[0] == doctest::Approx(4.0));
  CHECK(r.singular_values[1] == doctest::Approx(1.0));
  CHECK(r.singular_values[2] == doctest::Approx(0.25));
}

TEST_CASE("identity has unit spectrum") {
  SvdResult r = svd(Matrix::identity(4));
  for (double s : r.singular_values) CHECK(s == doctest::Approx(1.0));
}

TEST_CASE("unipotent 2x2 spectrum") {
  // oracle: sigma_1^2 is the larger eigenvalue of M^T M = [[1,1],[1,2]],
  // i.e. the larger root of x^2 - 3x + 1
  double expected = std::sqrt((3.0 + std::sqrt(5.0)) / 2.0);
  SvdResult r = svd(Matrix::from_rows({{1, 1}, {0, 1}}));
  CHECK(r.singular_values[0] == doctest::Approx(expected).epsilon(1e-12));
  // determinant 1 forces the product of the two values
  CHECK(r.singular_values[0] * r.singular_values[1] == doctest::Approx(1.0));
}

TEST_CASE("reconstruction and orthogonality over random matrices") {
  std::mt19937_64 rng(7);
  for (int it = 0; it < 10000; ++it) {
    std::size_t d = 2 + (it % 4);
    Matrix m = test::random_matrix(rng, d);
    SvdResult r = svd(m);
    CHECK(reconstruction_residual(m, r) <= 1e-9 * (1.0 + m.max_abs_entry()));
    CHECK(orthogonality_residual(r.left_factor) < 1e-9);
    CHECK(orthogonality_residual(r.right_factor) < 1e-9);
    CHECK(std::is_sorted(r.singular_values.rbegin(), r.singular_values.rend()));
  }
}

TEST_CASE("two runs produce identical values bitwise") {
  std::mt19937_64 rng(9);
  Matrix m = test::random_matrix(rng, 4);
  SvdResult a = svd(m);
  SvdResult b = svd(m);
  for (std::size_t i = 0; i < 4; ++i) CHECK(a.singular_values[i] == b.singular_values[i]);
  CHECK(max_entry_diff(a.left_factor, b.left_factor) == 0.0);
}

TEST_CASE("singular_values shortcut agrees with the full decomposition") {
  std::mt19937_64 rng(13);
  for (int it = 0; it < 100; ++it) {
    Matrix m = test::random_matrix(rng, 3);
    Vec quick = singular_values(m);
    SvdResult full = svd(m);
    for (std::size_t i = 0; i < 3; ++i)
      CHECK(quick[i] == doctest::Approx(full.singular_values[i]).epsilon(1e-12));
  }
}

TEST_CASE("wide dynamic range keeps relative accuracy") {
  Matrix rot = Matrix::from_rows({{std::cos(0.3), -std::sin(0.3)},
                                  {std::sin(0.3), std::cos(0.3)}});
  {
    // eight decades of spread: both values and their product stay sharp,
    // the determinant pinning the exact product of the spectrum
    Matrix m = rot * Matrix::from_rows({{1e4, 0}, {0, 1e-4}}) * rot.transpose();
    Vec s = singular_values(m);
    CHECK(s[0] == doctest::Approx(1e4).epsilon(1e-12));
    CHECK(s[1] == doctest::Approx(1e-4).epsilon(1e-7));
    CHECK(s[0] * s[1] == doctest::Approx(1.0).epsilon(1e-7));
  }
  {
    // sixteen decades: rounding the assembled entries already perturbs the
    // matrix by ~1e8 * eps, so the small value is only known up to that
    // floor; the top value keeps full relative accuracy
    Matrix m = rot * Matrix::from_rows({{1e8, 0}, {0, 1e-8}}) * rot.transpose();
    Vec s = singular_values(m);
    CHECK(s[0] == doctest::Approx(1e8).epsilon(1e-10));
    CHECK(s[1] >= 0.0);
    CHECK(s[1] < 1e8 * 1e-14);
  }
}
