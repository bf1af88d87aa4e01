#pragma once

#include <cstddef>
#include <vector>

#include "horops/matrix.hpp"

namespace horops {

// Basis bookkeeping for exterior powers: k-element subsets of {0..d-1} in
// lexicographic order index the wedge basis e_{i1} ^ ... ^ e_{ik}.
std::vector<std::vector<std::size_t>> lex_subsets(std::size_t d, std::size_t k);
std::size_t binomial(std::size_t n, std::size_t k);

// k-th exterior power of a d x d matrix: entry (S, T) is the minor of m with
// rows S and columns T.  Functorial: exterior_power(a*b,k) = product of the
// exterior powers.
Matrix exterior_power(const Matrix& m, std::size_t k);

// Coordinates of v1 ^ ... ^ vk in the lex wedge basis; columns of the input
// are the vectors.  The wedge of an orthonormal family is a unit vector.
Vec wedge_coordinates(const Matrix& basis_cols);

// Gram-Schmidt orthonormalization of the columns (used to turn flag data
// into orthonormal representatives).  Throws on rank deficiency.
Matrix orthonormalize_columns(const Matrix& basis_cols);

// Smallest principal gap between a j-dim subspace and a complementary-size
// arrangement: smallest singular value of the stacked orthonormal basis
// matrix [a | b].  Zero iff the spans intersect nontrivially.
double subspace_gap(const Matrix& a_cols, const Matrix& b_cols);

}  // namespace horops
