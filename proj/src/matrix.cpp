#include "horops/matrix.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "horops/svd.hpp"

namespace horops {

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

Vec normalized(const Vec& a) {
  double n = norm2(a);
  if (n == 0.0) throw std::domain_error("normalized: zero vector");
  Vec r(a);
  for (double& x : r) x /= n;
  return r;
}

Vec vec_sub(const Vec& a, const Vec& b) {
  Vec r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

Vec vec_add(const Vec& a, const Vec& b) {
  Vec r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

Vec vec_scale(const Vec& a, double s) {
  Vec r(a);
  for (double& x : r) x *= s;
  return r;
}

double max_abs(const Vec& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::fabs(x));
  return m;
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(const Vec& d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vec>& rows) {
  if (rows.empty()) return Matrix();
  Matrix m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) throw std::invalid_argument("ragged rows");
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Vec Matrix::col(std::size_t j) const {
  Vec v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

Vec Matrix::row(std::size_t i) const {
  Vec v(cols_);
  for (std::size_t j = 0; j < cols_; ++j) v[j] = (*this)(i, j);
  return v;
}

void Matrix::set_col(std::size_t j, const Vec& v) {
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("matmul shape mismatch");
  Matrix r(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      double aik = (*this)(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
    }
  return r;
}

Matrix Matrix::operator+(const Matrix& o) const {
  if (!same_shape(o)) throw std::invalid_argument("add shape mismatch");
  Matrix r(*this);
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
  return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
  if (!same_shape(o)) throw std::invalid_argument("sub shape mismatch");
  Matrix r(*this);
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
  return r;
}

Matrix Matrix::scaled(double s) const {
  Matrix r(*this);
  for (double& x : r.a_) x *= s;
  return r;
}

Vec Matrix::apply(const Vec& v) const {
  if (v.size() != cols_) throw std::invalid_argument("matvec shape mismatch");
  Vec r(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

double Matrix::frobenius() const {
  double s = 0.0;
  for (double x : a_) s += x * x;
  return std::sqrt(s);
}

double Matrix::max_abs_entry() const {
  double m = 0.0;
  for (double x : a_) m = std::max(m, std::fabs(x));
  return m;
}

double determinant(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("det: not square");
  std::size_t n = m.rows();
  Matrix a(m);
  double det = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t p = j;
    for (std::size_t i = j + 1; i < n; ++i)
      if (std::fabs(a(i, j)) > std::fabs(a(p, j))) p = i;
    if (a(p, j) == 0.0) return 0.0;
    if (p != j) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a(j, k), a(p, k));
      det = -det;
    }
    det *= a(j, j);
    for (std::size_t i = j + 1; i < n; ++i) {
      double f = a(i, j) / a(j, j);
      for (std::size_t k = j; k < n; ++k) a(i, k) -= f * a(j, k);
    }
  }
  return det;
}

Matrix inverse(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse: not square");
  std::size_t n = m.rows();
  Matrix a(m);
  Matrix inv = Matrix::identity(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t p = j;
    for (std::size_t i = j + 1; i < n; ++i)
      if (std::fabs(a(i, j)) > std::fabs(a(p, j))) p = i;
    if (a(p, j) == 0.0) throw std::domain_error("inverse: singular matrix");
    if (p != j)
      for (std::size_t k = 0; k < n; ++k) {
        std::swap(a(j, k), a(p, k));
        std::swap(inv(j, k), inv(p, k));
      }
    double piv = a(j, j);
    for (std::size_t k = 0; k < n; ++k) {
      a(j, k) /= piv;
      inv(j, k) /= piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) continue;
      double f = a(i, j);
      if (f == 0.0) continue;
      for (std::size_t k = 0; k < n; ++k) {
        a(i, k) -= f * a(j, k);
        inv(i, k) -= f * inv(j, k);
      }
    }
  }
  return inv;
}

double operator_norm(const Matrix& m) {
  // closed form for 2x2, Jacobi otherwise; the 2x2 case sits inside the
  // orbit-measure hot loop
  if (m.rows() == 2 && m.cols() == 2) {
    double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
    double q = a * a + b * b + c * c + d * d;
    double det = a * d - b * c;
    double disc = q * q - 4.0 * det * det;
    if (disc < 0.0) disc = 0.0;
    return std::sqrt(0.5 * (q + std::sqrt(disc)));
  }
  return singular_values(m)[0];
}

double max_entry_diff(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("diff shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    m = std::max(m, std::fabs(a.data()[i] - b.data()[i]));
  return m;
}

std::string format_matrix(const Matrix& m) {
  std::string s;
  char buf[64];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    s += "[";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "% .6g", m(i, j));
      s += buf;
      if (j + 1 < m.cols()) s += ", ";
    }
    s += "]\n";
  }
  return s;
}

}  // namespace horops
