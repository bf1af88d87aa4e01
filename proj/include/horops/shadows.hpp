#pragma once

#include <cstdint>
#include <vector>

#include "horops/boundary.hpp"
#include "horops/lie.hpp"
#include "horops/matrix.hpp"
#include "horops/orbit.hpp"
#include "horops/weyl.hpp"

namespace horops {

struct ShadowSpec {
  ThetaAction g;     // carries theta and the omega_k kappa(g) values
  double radius;     // R > 0
};

ShadowSpec make_shadow(const Matrix& g, double radius, const ThetaSubset& theta);

// Shadows are open sets; points within `band` of the boundary get a
// marginal verdict instead of a coin flip on rounding noise.
enum class ShadowVerdict { kMember, kMarginal, kNonMember };

struct ShadowTest {
  ShadowVerdict verdict = ShadowVerdict::kNonMember;
  double margin = 0.0;   // min over k of R - omega_k kappa(g) - omega_k(value at g o)
};

ShadowTest shadow_membership(const ShadowSpec& s, const CompactificationPoint& p,
                             double band = 1e-9);

// Max pairwise distance among the candidates that lie in the shadow, a
// lower bound for the true diameter.  Empty or singleton membership gives 0.
double shadow_diameter(const ShadowSpec& s, const std::vector<CompactificationPoint>& candidates,
                       std::size_t probe_depth = 6, std::uint64_t seed = 12345);

struct SymmetricShadowOptions {
  std::size_t budget = 2000;       // objective evaluations per start
  std::size_t multistarts = 32;    // random fiber/chamber restarts (plus one informed)
  std::uint64_t seed = 97531;
  double band = 1e-9;
};

struct SymmetricShadowResult {
  bool member = false;     // achieved < R - band: a certificate
  bool unknown = false;    // no certificate either way; non-membership is never certified
  double achieved = 0.0;   // best distance found
};

// min over H in the dominant cone and over flag representatives k(m) of
// dist(k(m) e^H o, g o) < R.  The fiber ranges over the block stabilizer
// of the standard partial flag; search is derivative-free (the objective
// is non-smooth at singular-value ties).
SymmetricShadowResult symmetric_shadow_membership(const ThetaSubset& theta, const Matrix& g,
                                                  double radius, const PartialFlag& x,
                                                  const SymmetricShadowOptions& opt = {});

struct TransversalityResult {
  bool transverse = false;
  double min_gap = 0.0;   // min over k of the gap between V_k(x) and V_{d-k}(y)
};

// x of type theta against y of complementary type: V_k(x) + V_{d-k}(y)
// must span, for every k in the type of x
TransversalityResult transverse_pair_check(const PartialFlag& x, const PartialFlag& y,
                                           double tol = 1e-9);

// Precomputed shadow machinery for a list of orbit elements at fixed theta,
// ordered by phi-length.  Build once, sweep many directions.
struct ShadowFamily {
  ThetaSubset theta;
  std::vector<ThetaAction> actions;
  std::vector<std::size_t> word_lengths;
  std::vector<double> phi_lengths;       // non-decreasing
  std::vector<double> chamber_margins;   // min_{k in theta} alpha_k(kappa), per element
  std::vector<Word> words;
};

ShadowFamily make_shadow_family(const GroupPresentation& pres, const OrbitBall& ball,
                                const ThetaSubset& theta, const Functional& phi,
                                std::size_t min_word_length = 1,
                                std::size_t max_count = 0 /* 0 = all */);

struct ConicalChain {
  bool found = false;          // chain of length >= min_chain exists
  bool contracting = false;    // chamber margins grow along the chain
  std::vector<std::size_t> indices;   // into the family
  std::vector<double> margins;        // chamber margin at each chain element
};

// Greedy scan in phi-length order for a chain of shadows containing xi,
// word lengths strictly increasing.  Absence of a chain is not a
// non-membership certificate, only "none found in this ball".
ConicalChain conical_witness(const CompactificationPoint& xi, const ShadowFamily& family,
                             double radius, std::size_t min_chain, double band = 1e-9);

// Radius so that g . O_R(h) fits inside O_R'(g h), from the submultiplicative
// bound on the evaluation shift: R' = R + 2 max_k max(omega_k kappa(g), omega_k kappa(g^-1)).
double shadow_translate_radius(const Matrix& g, double radius, const ThetaSubset& theta);

}  // namespace horops
