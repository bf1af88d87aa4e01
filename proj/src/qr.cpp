#include "horops/qr.hpp"

#include <cmath>
#include <stdexcept>

namespace horops {

// Householder triangularization, Trefethen & Bau Algorithm 10.1, with Q
// accumulated explicitly (sizes are tiny so the extra O(n^3) is irrelevant).
QrResult qr_positive(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("qr_positive: square input expected");
  std::size_t n = m.rows();
  Matrix r(m);
  Matrix q = Matrix::identity(n);

  for (std::size_t k = 0; k < n; ++k) {
    // build the reflector for column k
    Vec v(n - k);
    double xnorm = 0.0;
    for (std::size_t i = k; i < n; ++i) {
      v[i - k] = r(i, k);
      xnorm += r(i, k) * r(i, k);
    }
    xnorm = std::sqrt(xnorm);
    if (xnorm == 0.0) throw std::domain_error("qr_positive: singular input");
    double sign = (v[0] >= 0.0) ? 1.0 : -1.0;
    v[0] += sign * xnorm;
    double vnorm = norm2(v);
    if (vnorm == 0.0) continue;
    for (double& x : v) x /= vnorm;

    // R <- (I - 2 v v^T) R on the trailing block
    for (std::size_t j = k; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < n; ++i) s += v[i - k] * r(i, j);
      s *= 2.0;
      for (std::size_t i = k; i < n; ++i) r(i, j) -= s * v[i - k];
    }
    // Q <- Q (I - 2 v v^T)
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = k; j < n; ++j) s += q(i, j) * v[j - k];
      s *= 2.0;
      for (std::size_t j = k; j < n; ++j) q(i, j) -= s * v[j - k];
    }
  }

  // zero the strictly-lower part (roundoff residue), then fix signs
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) r(i, j) = 0.0;

  double scale = m.max_abs_entry();
  for (std::size_t i = 0; i < n; ++i) {
    double d = r(i, i);
    if (std::fabs(d) <= 1e-12 * std::max(1.0, scale))
      throw std::domain_error("qr_positive: singular input");
    if (d < 0.0) {
      for (std::size_t j = i; j < n; ++j) r(i, j) = -r(i, j);
      for (std::size_t k2 = 0; k2 < n; ++k2) q(k2, i) = -q(k2, i);
    }
  }
  return {q, r};
}

}  // namespace horops
