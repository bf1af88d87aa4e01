#pragma once

#include <cstddef>
#include <vector>

#include "horops/matrix.hpp"

namespace horops {

// Model flat for SL(d,R): traceless diagonal vectors, coordinates stored in
// full length d.  The dominant cone is "coordinates non-increasing".
struct CartanVector {
  Vec h;

  CartanVector() = default;
  explicit CartanVector(Vec v) : h(std::move(v)) { reproject(); }

  std::size_t d() const { return h.size(); }

  // subtract the mean so the trace-zero constraint cannot drift under
  // repeated arithmetic
  void reproject();

  CartanVector operator+(const CartanVector& o) const;
  CartanVector operator-(const CartanVector& o) const;
  CartanVector scaled(double s) const;
  double norm() const { return norm2(h); }
};

// Simple-root subset, 1-based indices k in {1, ..., d-1} meaning
// alpha_k(H) = H_k - H_{k+1}.  Kept sorted and deduplicated.
struct ThetaSubset {
  std::size_t d = 0;
  std::vector<std::size_t> ks;

  ThetaSubset() = default;
  ThetaSubset(std::size_t dim, std::vector<std::size_t> indices);

  static ThetaSubset full(std::size_t d);   // all simple roots
  bool contains(std::size_t k) const;
  std::size_t count() const { return ks.size(); }
};

// Linear functional spanned by fundamental weights: phi = sum c_k omega_k.
// Coefficients are indexed by root number (c[k-1] multiplies omega_k).
struct Functional {
  std::size_t d = 0;
  Vec c;  // length d-1

  Functional() = default;
  Functional(std::size_t dim, Vec coeffs);
  static Functional single_weight(std::size_t d, std::size_t k);

  double apply(const CartanVector& v) const;
  double abs_coeff_sum() const;
  bool supported_in(const ThetaSubset& theta) const;
};

double simple_root(const CartanVector& v, std::size_t k);        // H_k - H_{k+1}
double fundamental_weight(const CartanVector& v, std::size_t k); // H_1 + ... + H_k

// H -> (-H_d, ..., -H_1); exchanges a sequence's expansion data with its
// inverse's
CartanVector opposition_involution(const CartanVector& v);
std::vector<std::size_t> istar_theta(const ThetaSubset& theta);  // k -> d-k

double chamber_margin(const CartanVector& v, const ThetaSubset& theta);

// Projection to the face subspace a_theta = {H : alpha_j(H)=0 for j not in
// theta}, characterized by preserving omega_k for k in theta.  Solved via
// the Gram matrix of the spanning coweights; its conditioning is checked
// once per (d, theta) and must stay below 1e3.
CartanVector partial_projection(const ThetaSubset& theta, const CartanVector& v);

// Reconstruct the unique element of a_theta with the prescribed
// fundamental-weight values (same linear system as partial_projection).
CartanVector vector_from_weights(const ThetaSubset& theta, const Vec& omega_values);

double theta_gram_condition(const ThetaSubset& theta);

}  // namespace horops
