#include "horops/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace horops {

namespace {

constexpr double kOffdiagTol = 1e-14;
constexpr int kMaxSweeps = 60;

// Rotating two nearly parallel columns cancels to rounding noise, so any
// computed value below sigma_max * n * eps only tells us "unresolvably
// small".  Values are floored there: products of group elements stay
// loggable, and legitimate small values (subspace gaps ~ 1e-12) sit far
// above the floor.
void floor_tiny(Vec& sigma, std::size_t n) {
  double smax = 0.0;
  for (double s : sigma) smax = std::max(smax, s);
  double floor_val = smax * double(n) * 2.2204460492503131e-16;
  for (double& s : sigma) s = std::max(s, floor_val);
}

// One sweep of plane rotations over all column pairs (p < q).  Returns the
// largest normalized off-diagonal coupling |a_p . a_q| / (|a_p||a_q|) seen
// before rotating, which drives convergence detection.
double jacobi_sweep(Matrix& a, Matrix& v) {
  std::size_t n = a.cols();
  std::size_t m = a.rows();
  double worst = 0.0;
  for (std::size_t p = 0; p + 1 < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      double app = 0.0, aqq = 0.0, apq = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        double x = a(i, p), y = a(i, q);
        app += x * x;
        aqq += y * y;
        apq += x * y;
      }
      double denom = std::sqrt(app) * std::sqrt(aqq);
      if (denom == 0.0) continue;
      double coupling = std::fabs(apq) / denom;
      worst = std::max(worst, coupling);
      if (coupling <= kOffdiagTol) continue;

      // classical Jacobi angle choice
      double tau = (aqq - app) / (2.0 * apq);
      double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
      double c = 1.0 / std::sqrt(1.0 + t * t);
      double s = t * c;
      for (std::size_t i = 0; i < m; ++i) {
        double x = a(i, p), y = a(i, q);
        a(i, p) = c * x - s * y;
        a(i, q) = s * x + c * y;
      }
      for (std::size_t i = 0; i < n; ++i) {
        double x = v(i, p), y = v(i, q);
        v(i, p) = c * x - s * y;
        v(i, q) = s * x + c * y;
      }
    }
  }
  return worst;
}

}  // namespace

SvdResult svd(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("svd: square input expected");
  std::size_t n = m.rows();
  Matrix a(m);
  Matrix v = Matrix::identity(n);

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double worst = jacobi_sweep(a, v);
    if (worst <= kOffdiagTol) break;
  }

  Vec raw(n);
  for (std::size_t j = 0; j < n; ++j) raw[j] = norm2(a.col(j));
  Vec sigma = raw;
  floor_tiny(sigma, n);

  // sort descending, ties kept in original column order
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });

  SvdResult r;
  r.left_factor = Matrix(n, n);
  r.right_factor = Matrix(n, n);
  r.singular_values.resize(n);
  std::vector<std::size_t> degenerate;
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t src = order[j];
    r.singular_values[j] = sigma[src];
    bool resolvable = raw[src] > sigma[src] * 0.5;  // pre-floor norm carried signal
    for (std::size_t i = 0; i < n; ++i) {
      r.left_factor(i, j) = resolvable ? a(i, src) / raw[src] : 0.0;
      r.right_factor(i, j) = v(i, src);
    }
    if (!resolvable) degenerate.push_back(j);
  }
  // columns whose norm drowned in rotation noise carry no direction; fill
  // them by Gram-Schmidt so the left factor stays orthonormal
  for (std::size_t j : degenerate) {
    for (std::size_t cand = 0; cand < n; ++cand) {
      Vec e(n, 0.0);
      e[cand] = 1.0;
      for (std::size_t c = 0; c < n; ++c) {
        if (c == j) continue;
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += r.left_factor(i, c) * e[i];
        for (std::size_t i = 0; i < n; ++i) e[i] -= dot * r.left_factor(i, c);
      }
      double nrm = norm2(e);
      if (nrm > 0.5) {
        for (std::size_t i = 0; i < n; ++i) r.left_factor(i, j) = e[i] / nrm;
        break;
      }
    }
  }
  return r;
}

Vec singular_values(const Matrix& m) {
  // rectangular inputs with rows >= cols are fine for one-sided Jacobi;
  // subspace computations stack thin bases and want the smallest value
  if (m.rows() < m.cols()) throw std::invalid_argument("singular_values: rows >= cols expected");
  std::size_t n = m.cols();
  std::size_t rows = m.rows();
  Matrix a(m);

  // same iteration as svd() but without the V accumulation
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double worst = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double app = 0.0, aqq = 0.0, apq = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
          double x = a(i, p), y = a(i, q);
          app += x * x;
          aqq += y * y;
          apq += x * y;
        }
        double denom = std::sqrt(app) * std::sqrt(aqq);
        if (denom == 0.0) continue;
        double coupling = std::fabs(apq) / denom;
        worst = std::max(worst, coupling);
        if (coupling <= kOffdiagTol) continue;
        double tau = (aqq - app) / (2.0 * apq);
        double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;
        for (std::size_t i = 0; i < rows; ++i) {
          double x = a(i, p), y = a(i, q);
          a(i, p) = c * x - s * y;
          a(i, q) = s * x + c * y;
        }
      }
    }
    if (worst <= kOffdiagTol) break;
  }

  Vec sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = norm2(a.col(j));
  floor_tiny(sigma, n);
  std::sort(sigma.begin(), sigma.end(), std::greater<double>());
  return sigma;
}

}  // namespace horops
