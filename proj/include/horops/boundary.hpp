#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "horops/lie.hpp"
#include "horops/matrix.hpp"
#include "horops/orbit.hpp"
#include "horops/weyl.hpp"

namespace horops {

// One component of a boundary datum: a unit-operator-norm endomorphism of
// the k-th exterior power.  Rank-one representatives u w^T (both unit) are
// stored factored; evaluation then only needs a matrix-vector product.
struct BoundaryRep {
  std::size_t k = 0;
  std::optional<Matrix> full;          // general T
  std::optional<Vec> image;            // u of a factored T = u w^T
  std::optional<Vec> cofactor;         // w

  Matrix materialize() const;          // always returns T as a matrix
  bool rank_one() const { return image.has_value(); }
};

struct HorofunctionPoint {
  std::size_t d = 0;
  ThetaSubset theta;
  std::vector<BoundaryRep> reps;       // aligned with theta.ks
  std::optional<PartialFlag> flag_tag;
  std::string provenance;
};

// Interior points carry their inverse alongside; when both come from
// generator words the pair stays accurate deep into the orbit.
struct InteriorPoint {
  Matrix mat;
  Matrix inv;

  explicit InteriorPoint(Matrix m) : mat(std::move(m)), inv(inverse(mat)) {}
  InteriorPoint(Matrix m, Matrix m_inv) : mat(std::move(m)), inv(std::move(m_inv)) {}
};

struct CompactificationPoint {
  std::variant<InteriorPoint, HorofunctionPoint> value;

  bool is_interior() const { return value.index() == 0; }
  const InteriorPoint& interior() const { return std::get<InteriorPoint>(value); }
  const HorofunctionPoint& boundary() const { return std::get<HorofunctionPoint>(value); }

  static CompactificationPoint from_matrix(Matrix g) {
    return {InteriorPoint(std::move(g))};
  }
  static CompactificationPoint from_boundary(HorofunctionPoint p) { return {std::move(p)}; }
};

// Precomputed action data of a single group element for a fixed theta:
// exterior powers of g and g^{-1} on the theta components plus the top
// weights of kappa(g).  Build once per element, evaluate many points.
struct ThetaAction {
  std::size_t d = 0;
  ThetaSubset theta;
  Matrix g, g_inv;
  std::vector<Matrix> ext_fwd;   // exterior_power(g, k)
  std::vector<Matrix> ext_inv;   // exterior_power(g^{-1}, k)
  Vec omega_kappa;               // omega_k(kappa(g)) per k in theta
  bool is_identity = false;

  // Set by make_action_word; the presentation must outlive the action.
  // Boundary evaluations then apply the exterior generators of the word
  // one at a time with renormalization in between, which stays accurate
  // where the assembled operator nearly annihilates the representative.
  const GroupPresentation* pres = nullptr;
  Word word;
};

ThetaAction make_action(const Matrix& g, const ThetaSubset& theta);
ThetaAction make_action_word(const GroupPresentation& pres, const Word& w,
                             const ThetaSubset& theta);

// kappa(h^{-1} x) - kappa(x) on the full flat, for the interior point x o
CartanVector busemann_raw(const Matrix& x, const Matrix& h);

// Value of the (projected) horofunction of `p` at the point h o, where h
// is the element the action was built from.  Lands in a_theta.  Exactly
// zero at the identity for every point.
CartanVector evaluate(const CompactificationPoint& p, const ThetaAction& at_h);
CartanVector evaluate(const CompactificationPoint& p, const Matrix& h,
                      const ThetaSubset& theta);

// Cocycle B_theta(g, p): value of p at g^{-1} o.  Satisfies
// B(g1 g2, p) = B(g1, g2 p) + B(g2, p).
CartanVector cocycle_B(const ThetaAction& g, const CompactificationPoint& p);

CompactificationPoint act(const ThetaAction& g, const CompactificationPoint& p);

// flag embedding: rank-one projections onto the top wedge lines
HorofunctionPoint embed_flag(const PartialFlag& x, const ThetaSubset& theta);

struct OrbitLimitDiagnostics {
  bool converged = false;
  std::vector<double> final_increment;   // per k, operator-norm step of the tail
  std::vector<double> rank_defect;       // per k, sigma_2/sigma_1 of the limit rep
};

struct OrbitLimitResult {
  HorofunctionPoint point;
  OrbitLimitDiagnostics diagnostics;
};

// Limit of normalized exterior powers along a sequence of words.  The
// sequence diverges in the group; convergence of the representatives is
// diagnosed, not assumed.
OrbitLimitResult orbit_limit(const GroupPresentation& pres, const std::vector<Word>& seq,
                             const ThetaSubset& theta, double tail_tol = 1e-4);

// deterministic probe family k * exp(t H_ray), t in {1,2,4}
std::vector<Matrix> probe_points(std::size_t d, std::size_t count = 64,
                                 std::uint64_t seed = 12345);

bool boundary_points_equal(const HorofunctionPoint& a, const HorofunctionPoint& b,
                           const std::vector<Matrix>& probes, double tol = 1e-6);

// Metric of the compactification, evaluated through probe sets of balls of
// radius 1..probe_depth (a truncation of the defining series; values are
// comparable only at equal depth and probe seed).
double compactification_distance(const CompactificationPoint& p,
                                 const CompactificationPoint& q, const ThetaSubset& theta,
                                 std::size_t probe_depth = 6, std::uint64_t seed = 12345);

std::string boundary_point_to_json(const HorofunctionPoint& p);
HorofunctionPoint boundary_point_from_json(const std::string& text);

}  // namespace horops
