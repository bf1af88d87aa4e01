#pragma once

#include <optional>

#include "horops/exterior.hpp"
#include "horops/matrix.hpp"
#include "horops/weyl.hpp"

namespace horops {

// Nested flag of the dimensions in theta: the k-dim member is the span of
// the first k columns of `basis` (orthonormal, d x max(theta)).
struct PartialFlag {
  std::size_t d = 0;
  std::vector<std::size_t> dims;  // sorted
  Matrix basis;

  Matrix subspace(std::size_t k) const;             // d x k, first k columns
  Matrix projector(std::size_t k) const;            // orthogonal projection
  Vec wedge_line(std::size_t k) const;              // unit wedge of subspace(k)
};

double flag_distance(const PartialFlag& x, const PartialFlag& y);
PartialFlag transport_flag(const Matrix& g, const PartialFlag& x);
PartialFlag flag_from_columns(const Matrix& cols, const std::vector<std::size_t>& dims);

struct KakDecomposition {
  Matrix left;         // in SO(d)
  CartanVector kappa;  // dominant
  Matrix right;        // in SO(d); g = left * exp(kappa) * right
};

// log singular values, non-increasing, re-projected to trace zero
CartanVector cartan_projection(const Matrix& g);
double symmetric_distance(const Matrix& g, const Matrix& h);

KakDecomposition kak(const Matrix& g);

// U_theta(g): flag of top singular subspaces.  Requires a chamber margin
// above margin_tol at every k in theta; otherwise the flag is ill defined
// and we refuse rather than return noise.
PartialFlag flag_projection(const Matrix& g, const ThetaSubset& theta,
                            double margin_tol = 1e-6);
std::optional<PartialFlag> try_flag_projection(const Matrix& g, const ThetaSubset& theta,
                                               double margin_tol = 1e-6);

// longest-element representative: antidiagonal signs, determinant +1
Matrix w0_matrix(std::size_t d);

// Iwasawa cocycle of the full flag represented by the orthogonal matrix k
// (column j spans the j-th step): log of diag(R) in the positive-diagonal
// QR of g*k.  Independent of the sign choices in k.
CartanVector iwasawa_cocycle_full(const Matrix& g, const Matrix& k_rep);

// theta-version: complete the partial flag deterministically, then project.
// The result does not depend on the completion.
CartanVector iwasawa_cocycle_partial(const Matrix& g, const PartialFlag& x,
                                     const ThetaSubset& theta);

// deterministic completion of a partial flag to a full orthonormal frame
Matrix complete_flag(const PartialFlag& x);

// omega_k of the Cartan projection of m, read off the top singular value
// of an exterior power of m or of m_inv, whichever keeps k small.  When m
// and m_inv are both assembled from generator words this stays accurate
// for elements far too ill conditioned for a direct svd of m.
double log_top_weight(const Matrix& m, const Matrix& m_inv, std::size_t k);
Vec kappa_via_top_weights(const Matrix& m, const Matrix& m_inv);

}  // namespace horops
