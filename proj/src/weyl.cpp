#include "horops/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <set>
#include <stdexcept>

#include "horops/svd.hpp"

namespace horops {

void CartanVector::reproject() {
  if (h.empty()) return;
  double mean = 0.0;
  for (double x : h) mean += x;
  mean /= static_cast<double>(h.size());
  for (double& x : h) x -= mean;
}

CartanVector CartanVector::operator+(const CartanVector& o) const {
  return CartanVector(vec_add(h, o.h));
}

CartanVector CartanVector::operator-(const CartanVector& o) const {
  return CartanVector(vec_sub(h, o.h));
}

CartanVector CartanVector::scaled(double s) const { return CartanVector(vec_scale(h, s)); }

ThetaSubset::ThetaSubset(std::size_t dim, std::vector<std::size_t> indices)
    : d(dim), ks(std::move(indices)) {
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  if (d < 2) throw std::invalid_argument("ThetaSubset: need d >= 2");
  for (std::size_t k : ks)
    if (k == 0 || k >= d) throw std::invalid_argument("ThetaSubset: root index out of range");
  if (ks.empty()) throw std::invalid_argument("ThetaSubset: empty subset");
}

ThetaSubset ThetaSubset::full(std::size_t d) {
  std::vector<std::size_t> all(d - 1);
  for (std::size_t i = 0; i < d - 1; ++i) all[i] = i + 1;
  return ThetaSubset(d, all);
}

bool ThetaSubset::contains(std::size_t k) const {
  return std::binary_search(ks.begin(), ks.end(), k);
}

Functional::Functional(std::size_t dim, Vec coeffs) : d(dim), c(std::move(coeffs)) {
  if (c.size() != d - 1) throw std::invalid_argument("Functional: need d-1 coefficients");
}

Functional Functional::single_weight(std::size_t d, std::size_t k) {
  Vec c(d - 1, 0.0);
  if (k == 0 || k >= d) throw std::invalid_argument("Functional: weight index out of range");
  c[k - 1] = 1.0;
  return Functional(d, std::move(c));
}

double Functional::apply(const CartanVector& v) const {
  if (v.d() != d) throw std::invalid_argument("Functional: dimension mismatch");
  double s = 0.0;
  for (std::size_t k = 1; k < d; ++k)
    if (c[k - 1] != 0.0) s += c[k - 1] * fundamental_weight(v, k);
  return s;
}

double Functional::abs_coeff_sum() const {
  double s = 0.0;
  for (double x : c) s += std::fabs(x);
  return s;
}

bool Functional::supported_in(const ThetaSubset& theta) const {
  for (std::size_t k = 1; k < d; ++k)
    if (c[k - 1] != 0.0 && !theta.contains(k)) return false;
  return true;
}

double simple_root(const CartanVector& v, std::size_t k) {
  if (k == 0 || k >= v.d()) throw std::invalid_argument("simple_root: index out of range");
  return v.h[k - 1] - v.h[k];
}

double fundamental_weight(const CartanVector& v, std::size_t k) {
  if (k == 0 || k >= v.d()) throw std::invalid_argument("fundamental_weight: index out of range");
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += v.h[i];
  return s;
}

CartanVector opposition_involution(const CartanVector& v) {
  std::size_t d = v.d();
  Vec r(d);
  for (std::size_t i = 0; i < d; ++i) r[i] = -v.h[d - 1 - i];
  return CartanVector(std::move(r));
}

std::vector<std::size_t> istar_theta(const ThetaSubset& theta) {
  std::vector<std::size_t> out;
  out.reserve(theta.ks.size());
  for (std::size_t k : theta.ks) out.push_back(theta.d - k);
  std::sort(out.begin(), out.end());
  return out;
}

double chamber_margin(const CartanVector& v, const ThetaSubset& theta) {
  if (v.d() != theta.d) throw std::invalid_argument("chamber_margin: dimension mismatch");
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k : theta.ks) m = std::min(m, simple_root(v, k));
  return m;
}

namespace {

// coweight ray W_k: first k entries (d-k)/d, remaining entries -k/d;
// alpha_j(W_k) = 0 for j != k, so {W_k : k in theta} spans a_theta
Vec coweight(std::size_t d, std::size_t k) {
  Vec w(d);
  for (std::size_t i = 0; i < d; ++i)
    w[i] = (i < k) ? double(d - k) / double(d) : -double(k) / double(d);
  return w;
}

// gram[i][j] = omega_{k_i}(W_{k_j}) = min(k_i,k_j) * (d - max(k_i,k_j)) / d
Matrix theta_gram(const ThetaSubset& theta) {
  std::size_t m = theta.count();
  Matrix g(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      double lo = double(std::min(theta.ks[i], theta.ks[j]));
      double hi = double(std::max(theta.ks[i], theta.ks[j]));
      g(i, j) = lo * (double(theta.d) - hi) / double(theta.d);
    }
  return g;
}

Vec solve_square(Matrix a, Vec b) {
  std::size_t n = b.size();
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t p = j;
    for (std::size_t i = j + 1; i < n; ++i)
      if (std::fabs(a(i, j)) > std::fabs(a(p, j))) p = i;
    if (a(p, j) == 0.0) throw std::domain_error("solve: singular system");
    if (p != j) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a(j, k), a(p, k));
      std::swap(b[j], b[p]);
    }
    for (std::size_t i = j + 1; i < n; ++i) {
      double f = a(i, j) / a(j, j);
      if (f == 0.0) continue;
      for (std::size_t k = j; k < n; ++k) a(i, k) -= f * a(j, k);
      b[i] -= f * b[j];
    }
  }
  Vec x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a(i, k) * x[k];
    x[i] = s / a(i, i);
  }
  return x;
}

}  // namespace

double theta_gram_condition(const ThetaSubset& theta) {
  Vec s = singular_values(theta_gram(theta));
  return s.front() / s.back();
}

namespace {

// conditioning is a property of (d, theta) alone; check it once, not per
// evaluation (boundary evaluations hit this path millions of times)
void check_theta_conditioning(const ThetaSubset& theta) {
  static std::mutex mu;
  static std::set<std::pair<std::size_t, std::size_t>> seen;
  std::size_t mask = 0;
  for (std::size_t k : theta.ks) mask |= (std::size_t{1} << k);
  std::lock_guard<std::mutex> lock(mu);
  if (seen.count({theta.d, mask})) return;
  if (theta_gram_condition(theta) >= 1e3)
    throw std::domain_error("vector_from_weights: ill conditioned theta system");
  seen.insert({theta.d, mask});
}

}  // namespace

CartanVector vector_from_weights(const ThetaSubset& theta, const Vec& omega_values) {
  if (omega_values.size() != theta.count())
    throw std::invalid_argument("vector_from_weights: value count mismatch");
  check_theta_conditioning(theta);
  Vec coeff = solve_square(theta_gram(theta), omega_values);
  Vec out(theta.d, 0.0);
  for (std::size_t j = 0; j < theta.count(); ++j) {
    Vec w = coweight(theta.d, theta.ks[j]);
    for (std::size_t i = 0; i < theta.d; ++i) out[i] += coeff[j] * w[i];
  }
  return CartanVector(std::move(out));
}

CartanVector partial_projection(const ThetaSubset& theta, const CartanVector& v) {
  if (v.d() != theta.d) throw std::invalid_argument("partial_projection: dimension mismatch");
  Vec w(theta.count());
  for (std::size_t j = 0; j < theta.count(); ++j) w[j] = fundamental_weight(v, theta.ks[j]);
  return vector_from_weights(theta, w);
}

}  // namespace horops
