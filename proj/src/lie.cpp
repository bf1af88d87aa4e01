#include "horops/lie.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "horops/qr.hpp"
#include "horops/svd.hpp"

namespace horops {

Matrix PartialFlag::subspace(std::size_t k) const {
  Matrix out(d, k);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < k; ++j) out(i, j) = basis(i, j);
  return out;
}

Matrix PartialFlag::projector(std::size_t k) const {
  Matrix c = subspace(k);
  return c * c.transpose();
}

Vec PartialFlag::wedge_line(std::size_t k) const {
  Vec w = wedge_coordinates(subspace(k));
  return normalized(w);
}

double flag_distance(const PartialFlag& x, const PartialFlag& y) {
  if (x.d != y.d || x.dims != y.dims)
    throw std::invalid_argument("flag_distance: type mismatch");
  double m = 0.0;
  for (std::size_t k : x.dims) {
    Matrix diff = x.projector(k) - y.projector(k);
    m = std::max(m, operator_norm(diff));
  }
  return m;
}

PartialFlag transport_flag(const Matrix& g, const PartialFlag& x) {
  PartialFlag out;
  out.d = x.d;
  out.dims = x.dims;
  out.basis = orthonormalize_columns(g * x.basis);
  return out;
}

PartialFlag flag_from_columns(const Matrix& cols, const std::vector<std::size_t>& dims) {
  PartialFlag f;
  f.d = cols.rows();
  f.dims = dims;
  f.basis = orthonormalize_columns(cols);
  if (f.dims.empty() || f.dims.back() != cols.cols())
    throw std::invalid_argument("flag_from_columns: column count must equal max dim");
  return f;
}

CartanVector cartan_projection(const Matrix& g) {
  if (g.rows() != g.cols()) throw std::invalid_argument("cartan_projection: square input expected");
  Vec s = singular_values(g);
  Vec logs(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] <= 0.0) throw std::domain_error("cartan_projection: singular input");
    logs[i] = std::log(s[i]);
  }
  return CartanVector(std::move(logs));
}

double symmetric_distance(const Matrix& g, const Matrix& h) {
  return cartan_projection(inverse(g) * h).norm();
}

KakDecomposition kak(const Matrix& g) {
  SvdResult s = svd(g);
  Matrix u = s.left_factor;
  Matrix v = s.right_factor;
  std::size_t n = g.rows();
  // svd factors are orthogonal with matching determinant signs (det g > 0);
  // flip the last column of each to land both in SO(d)
  if (determinant(u) < 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      u(i, n - 1) = -u(i, n - 1);
      v(i, n - 1) = -v(i, n - 1);
    }
  }
  KakDecomposition out;
  out.left = u;
  Vec logs(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (s.singular_values[i] <= 0.0) throw std::domain_error("kak: singular input");
    logs[i] = std::log(s.singular_values[i]);
  }
  out.kappa = CartanVector(std::move(logs));
  out.right = v.transpose();
  return out;
}

std::optional<PartialFlag> try_flag_projection(const Matrix& g, const ThetaSubset& theta,
                                               double margin_tol) {
  KakDecomposition kd = kak(g);
  if (chamber_margin(kd.kappa, theta) <= margin_tol) return std::nullopt;
  PartialFlag f;
  f.d = g.rows();
  f.dims = theta.ks;
  std::size_t kmax = theta.ks.back();
  f.basis = Matrix(f.d, kmax);
  for (std::size_t i = 0; i < f.d; ++i)
    for (std::size_t j = 0; j < kmax; ++j) f.basis(i, j) = kd.left(i, j);
  return f;
}

PartialFlag flag_projection(const Matrix& g, const ThetaSubset& theta, double margin_tol) {
  auto f = try_flag_projection(g, theta, margin_tol);
  if (!f) throw std::domain_error("flag_projection: theta-irregular element");
  return *f;
}

Matrix w0_matrix(std::size_t d) {
  Matrix w(d, d);
  for (std::size_t i = 0; i < d; ++i) w(i, d - 1 - i) = (i % 2 == 0) ? 1.0 : -1.0;
  return w;
}

CartanVector iwasawa_cocycle_full(const Matrix& g, const Matrix& k_rep) {
  QrResult f = qr_positive(g * k_rep);
  std::size_t n = g.rows();
  Vec logs(n);
  for (std::size_t i = 0; i < n; ++i) logs[i] = std::log(f.r(i, i));
  return CartanVector(std::move(logs));
}

Matrix complete_flag(const PartialFlag& x) {
  std::size_t d = x.d;
  std::size_t k = x.basis.cols();
  Matrix full(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < k; ++j) full(i, j) = x.basis(i, j);
  std::size_t filled = k;
  for (std::size_t e = 0; e < d && filled < d; ++e) {
    Vec v(d, 0.0);
    v[e] = 1.0;
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t p = 0; p < filled; ++p) {
        double c = 0.0;
        for (std::size_t i = 0; i < d; ++i) c += full(i, p) * v[i];
        for (std::size_t i = 0; i < d; ++i) v[i] -= c * full(i, p);
      }
    double n = norm2(v);
    if (n > 1e-8) {
      for (std::size_t i = 0; i < d; ++i) full(i, filled) = v[i] / n;
      ++filled;
    }
  }
  if (filled < d) throw std::domain_error("complete_flag: completion failed");
  return full;
}

double log_top_weight(const Matrix& m, const Matrix& m_inv, std::size_t k) {
  std::size_t d = m.rows();
  if (k == 0 || k > d) throw std::invalid_argument("log_top_weight: bad k");
  if (k == d) return 0.0;  // determinant one
  if (k <= d - k)
    return std::log(operator_norm(k == 1 ? m : exterior_power(m, k)));
  // omega_k(kappa(m)) = omega_{d-k}(kappa(m^{-1}))
  return std::log(operator_norm(d - k == 1 ? m_inv : exterior_power(m_inv, d - k)));
}

Vec kappa_via_top_weights(const Matrix& m, const Matrix& m_inv) {
  std::size_t d = m.rows();
  Vec omega(d + 1, 0.0);
  for (std::size_t k = 1; k < d; ++k) omega[k] = log_top_weight(m, m_inv, k);
  Vec kappa(d);
  for (std::size_t i = 0; i < d; ++i) kappa[i] = omega[i + 1] - omega[i];
  std::stable_sort(kappa.begin(), kappa.end(), std::greater<double>());
  CartanVector cv(std::move(kappa));
  return cv.h;
}

CartanVector iwasawa_cocycle_partial(const Matrix& g, const PartialFlag& x,
                                     const ThetaSubset& theta) {
  for (std::size_t k : theta.ks)
    if (std::find(x.dims.begin(), x.dims.end(), k) == x.dims.end())
      throw std::invalid_argument("iwasawa_cocycle_partial: flag lacks a theta dimension");
  return partial_projection(theta, iwasawa_cocycle_full(g, complete_flag(x)));
}

}  // namespace horops
