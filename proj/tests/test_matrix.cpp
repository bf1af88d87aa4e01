#include <doctest.h>

#include <random>

#include "horops/matrix.hpp"
#include "test_support.hpp"

using namespace horops;

TEST_CASE("vector helpers") {
  Vec a{3.0, 4.0};
  CHECK(norm2(a) == doctest::Approx(5.0));
  CHECK(dot(a, a) == doctest::Approx(25.0));
  CHECK(norm2(normalized(a)) == doctest::Approx(1.0));
  CHECK(max_abs(vec_sub(a, a)) == 0.0);
  CHECK(vec_add(a, vec_scale(a, -1.0))[0] == 0.0);
}

TEST_CASE("product matches hand expansion") {
  Matrix a = Matrix::from_rows({{1, 2}, {3, 4}});
  Matrix b = Matrix::from_rows({{5, 6}, {7, 8}});
  Matrix c = a * b;
  CHECK(c(0, 0) == 19);
  CHECK(c(0, 1) == 22);
  CHECK(c(1, 0) == 43);
  CHECK(c(1, 1) == 50);
}

TEST_CASE("constructors and accessors") {
  Matrix i3 = Matrix::identity(3);
  CHECK(i3(0, 0) == 1.0);
  CHECK(i3(0, 1) == 0.0);
  Matrix d = Matrix::diagonal({4.0, 1.0, 0.25});
  CHECK(d(1, 1) == 1.0);
  CHECK(d.col(2)[2] == 0.25);
  CHECK(d.row(0)[0] == 4.0);
  Matrix dt = d.transpose();
  CHECK(max_entry_diff(d, dt) == 0.0);  // diagonal is symmetric
}

TEST_CASE("apply acts on column vectors") {
  Matrix a = Matrix::from_rows({{0, -1}, {1, 0}});  // quarter turn
  Vec v = a.apply({1.0, 0.0});
  CHECK(v[0] == 0.0);
  CHECK(v[1] == 1.0);
}

TEST_CASE("determinant on closed forms") {
  CHECK(determinant(Matrix::identity(4)) == doctest::Approx(1.0));
  CHECK(determinant(Matrix::diagonal({2, 3, 5})) == doctest::Approx(30.0));
  Matrix m = Matrix::from_rows({{1, 2}, {3, 4}});
  CHECK(determinant(m) == doctest::Approx(-2.0));
}

TEST_CASE("inverse multiplies back to identity") {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 200; ++it) {
    Matrix m = test::random_matrix(rng, 3);
    if (std::abs(determinant(m)) < 1e-3) continue;
    Matrix p = m * inverse(m);
    CHECK(max_entry_diff(p, Matrix::identity(3)) < 1e-9);
  }
}

TEST_CASE("operator norm of a diagonal matrix is its largest entry") {
  CHECK(operator_norm(Matrix::diagonal({4.0, 1.0, 0.25})) == doctest::Approx(4.0));
  CHECK(operator_norm(Matrix::identity(5)) == doctest::Approx(1.0));
}

TEST_CASE("frobenius and max entry") {
  Matrix m = Matrix::from_rows({{3, 0}, {0, 4}});
  CHECK(m.frobenius() == doctest::Approx(5.0));
  CHECK(m.max_abs_entry() == 4.0);
}
