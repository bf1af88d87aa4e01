#include "horops/exterior.hpp"

#include <cmath>
#include <stdexcept>

#include "horops/svd.hpp"

namespace horops {

std::vector<std::vector<std::size_t>> lex_subsets(std::size_t d, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k > d) return out;
  std::vector<std::size_t> cur(k);
  for (std::size_t i = 0; i < k; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    // advance to the next subset in lex order
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (cur[i] != i + d - k) {
        ++cur[i];
        for (std::size_t j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
        break;
      }
      if (i == 0) return out;
    }
    if (k == 0) return out;
  }
}

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

namespace {

// minor of m with the given rows/columns, by elimination with pivoting
double minor_det(const Matrix& m, const std::vector<std::size_t>& rows,
                 const std::vector<std::size_t>& cols) {
  std::size_t k = rows.size();
  if (k == 1) return m(rows[0], cols[0]);
  if (k == 2)
    return m(rows[0], cols[0]) * m(rows[1], cols[1]) -
           m(rows[0], cols[1]) * m(rows[1], cols[0]);
  Matrix sub(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) sub(i, j) = m(rows[i], cols[j]);
  return determinant(sub);
}

}  // namespace

Matrix exterior_power(const Matrix& m, std::size_t k) {
  if (m.rows() != m.cols()) throw std::invalid_argument("exterior_power: square input expected");
  std::size_t d = m.rows();
  if (k == 0) return Matrix::identity(1);
  if (k > d) throw std::invalid_argument("exterior_power: k > d");
  auto subsets = lex_subsets(d, k);
  std::size_t n = subsets.size();
  Matrix out(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      out(a, b) = minor_det(m, subsets[a], subsets[b]);
  return out;
}

Vec wedge_coordinates(const Matrix& basis_cols) {
  std::size_t d = basis_cols.rows();
  std::size_t k = basis_cols.cols();
  auto subsets = lex_subsets(d, k);
  Vec out(subsets.size());
  std::vector<std::size_t> all_cols(k);
  for (std::size_t j = 0; j < k; ++j) all_cols[j] = j;
  for (std::size_t a = 0; a < subsets.size(); ++a) {
    Matrix sub(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) sub(i, j) = basis_cols(subsets[a][i], j);
    out[a] = determinant(sub);
  }
  return out;
}

Matrix orthonormalize_columns(const Matrix& basis_cols) {
  std::size_t d = basis_cols.rows();
  std::size_t k = basis_cols.cols();
  Matrix out(d, k);
  for (std::size_t j = 0; j < k; ++j) {
    Vec v = basis_cols.col(j);
    for (std::size_t p = 0; p < j; ++p) {
      Vec u = out.col(p);
      double c = dot(u, v);
      for (std::size_t i = 0; i < d; ++i) v[i] -= c * u[i];
    }
    // one re-orthogonalization pass; plain GS drifts for near-dependent input
    for (std::size_t p = 0; p < j; ++p) {
      Vec u = out.col(p);
      double c = dot(u, v);
      for (std::size_t i = 0; i < d; ++i) v[i] -= c * u[i];
    }
    double n = norm2(v);
    if (n <= 1e-12) throw std::domain_error("orthonormalize_columns: rank deficient");
    for (std::size_t i = 0; i < d; ++i) out(i, j) = v[i] / n;
  }
  return out;
}

double subspace_gap(const Matrix& a_cols, const Matrix& b_cols) {
  if (a_cols.rows() != b_cols.rows())
    throw std::invalid_argument("subspace_gap: ambient dimension mismatch");
  std::size_t d = a_cols.rows();
  std::size_t ka = a_cols.cols(), kb = b_cols.cols();
  if (ka + kb > d) throw std::invalid_argument("subspace_gap: dimensions exceed ambient");
  Matrix a = orthonormalize_columns(a_cols);
  Matrix b = orthonormalize_columns(b_cols);
  Matrix stacked(d, ka + kb);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < ka; ++j) stacked(i, j) = a(i, j);
    for (std::size_t j = 0; j < kb; ++j) stacked(i, ka + j) = b(i, j);
  }
  Vec s = singular_values(stacked);
  return s.back();
}

}  // namespace horops
