#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace horops {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);          // euclidean norm
Vec normalized(const Vec& a);
Vec vec_sub(const Vec& a, const Vec& b);
Vec vec_add(const Vec& a, const Vec& b);
Vec vec_scale(const Vec& a, double s);
double max_abs(const Vec& a);

// Dense row-major matrix. Small sizes only (d <= 6 and exterior powers up
// to C(6,3) = 20), so no blocking or clever storage anywhere.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

  static Matrix identity(std::size_t n);
  static Matrix diagonal(const Vec& d);
  static Matrix from_rows(const std::vector<Vec>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  const std::vector<double>& data() const { return a_; }
  std::vector<double>& data() { return a_; }

  Vec col(std::size_t j) const;
  Vec row(std::size_t i) const;
  void set_col(std::size_t j, const Vec& v);

  Matrix transpose() const;
  Matrix operator*(const Matrix& o) const;
  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix scaled(double s) const;
  Vec apply(const Vec& v) const;   // matrix * column vector

  double frobenius() const;
  double max_abs_entry() const;

  bool same_shape(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

// Determinant and inverse via Gaussian elimination with partial pivoting.
// Fine for the well conditioned small matrices we feed them; orbit code
// never inverts long products directly (it builds inverses from words).
double determinant(const Matrix& m);
Matrix inverse(const Matrix& m);

double operator_norm(const Matrix& m);       // largest singular value
double max_entry_diff(const Matrix& a, const Matrix& b);

std::string format_matrix(const Matrix& m);  // debugging aid

}  // namespace horops
