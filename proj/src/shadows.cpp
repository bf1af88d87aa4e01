#include "horops/shadows.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "horops/util.hpp"

namespace horops {

ShadowSpec make_shadow(const Matrix& g, double radius, const ThetaSubset& theta) {
  if (!(radius > 0.0)) throw std::invalid_argument("make_shadow: radius must be positive");
  return ShadowSpec{make_action(g, theta), radius};
}

namespace {

double membership_margin(const ShadowSpec& s, const CartanVector& value) {
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.g.theta.count(); ++i) {
    double m = s.radius - s.g.omega_kappa[i] -
               fundamental_weight(value, s.g.theta.ks[i]);
    margin = std::min(margin, m);
  }
  return margin;
}

}  // namespace

ShadowTest shadow_membership(const ShadowSpec& s, const CompactificationPoint& p,
                             double band) {
  ShadowTest t;
  t.margin = membership_margin(s, evaluate(p, s.g));
  if (t.margin > band)
    t.verdict = ShadowVerdict::kMember;
  else if (t.margin < -band)
    t.verdict = ShadowVerdict::kNonMember;
  else
    t.verdict = ShadowVerdict::kMarginal;
  return t;
}

double shadow_diameter(const ShadowSpec& s, const std::vector<CompactificationPoint>& candidates,
                       std::size_t probe_depth, std::uint64_t seed) {
  std::vector<const CompactificationPoint*> members;
  for (const CompactificationPoint& p : candidates)
    if (shadow_membership(s, p).verdict == ShadowVerdict::kMember) members.push_back(&p);
  double diam = 0.0;
  for (std::size_t i = 0; i + 1 < members.size(); ++i)
    for (std::size_t j = i + 1; j < members.size(); ++j)
      diam = std::max(diam, compactification_distance(*members[i], *members[j], s.g.theta,
                                                      probe_depth, seed));
  return diam;
}

namespace {

Vec coweight_ray(std::size_t d, std::size_t j) {
  Vec w(d);
  for (std::size_t i = 0; i < d; ++i)
    w[i] = (i < j) ? double(d - j) / double(d) : -double(j) / double(d);
  return w;
}

// Block-diagonal rotation assembled from one Givens angle per coordinate
// pair inside each stabilizer block.  Covers SO(b1) x ... x SO(bm) up to
// the usual chart degeneracies, which multistart papers over.
Matrix fiber_rotation(std::size_t d, const std::vector<std::size_t>& block_bounds,
                      const Vec& angles) {
  Matrix m = Matrix::identity(d);
  std::size_t a = 0;
  for (std::size_t b = 0; b + 1 < block_bounds.size(); ++b) {
    std::size_t lo = block_bounds[b], hi = block_bounds[b + 1];
    for (std::size_t p = lo; p < hi; ++p)
      for (std::size_t q = p + 1; q < hi; ++q) {
        double c = std::cos(angles[a]), s = std::sin(angles[a]);
        ++a;
        // right-multiply by the (p,q) rotation
        for (std::size_t r = 0; r < d; ++r) {
          double xp = m(r, p), xq = m(r, q);
          m(r, p) = c * xp + s * xq;
          m(r, q) = -s * xp + c * xq;
        }
      }
  }
  return m;
}

struct SymmetricObjective {
  std::size_t d;
  Matrix k0_t;                        // transpose of the flag completion
  std::vector<std::size_t> bounds;    // block boundaries 0=b0<b1<...<bm=d
  std::size_t n_angles;
  const Matrix* g;
  std::vector<Vec> rays;              // coweight rays

  // z = (y_1..y_{d-1}, angles); H = sum y_j^2 W_j stays dominant for free
  double operator()(const Vec& z) const {
    Vec h(d, 0.0);
    for (std::size_t j = 0; j + 1 < d; ++j) {
      double c = z[j] * z[j];
      for (std::size_t i = 0; i < d; ++i) h[i] += c * rays[j][i];
    }
    Vec angles(z.begin() + (d - 1), z.end());
    Matrix mt = fiber_rotation(d, bounds, angles).transpose();
    // P^{-1} g = e^{-H} M^T k0^T g
    Matrix t = mt * (k0_t * (*g));
    for (std::size_t i = 0; i < d; ++i) {
      double e = std::exp(-h[i]);
      for (std::size_t j = 0; j < d; ++j) t(i, j) *= e;
    }
    return cartan_projection(t).norm();
  }
};

// first-improvement coordinate search with per-coordinate shrinking steps
double pattern_search(const SymmetricObjective& f, Vec& z, Vec step, std::size_t budget,
                      double good_enough) {
  double best = f(z);
  std::size_t used = 1;
  while (used < budget && best > good_enough) {
    bool improved = false;
    for (std::size_t i = 0; i < z.size() && used < budget; ++i) {
      for (double sgn : {1.0, -1.0}) {
        Vec trial = z;
        trial[i] += sgn * step[i];
        double v = f(trial);
        ++used;
        if (v < best - 1e-13) {
          best = v;
          z = trial;
          improved = true;
          break;
        }
      }
    }
    if (!improved) {
      double mx = 0.0;
      for (double& s : step) {
        s *= 0.5;
        mx = std::max(mx, s);
      }
      if (mx < 1e-7) break;
    }
  }
  return best;
}

}  // namespace

SymmetricShadowResult symmetric_shadow_membership(const ThetaSubset& theta, const Matrix& g,
                                                  double radius, const PartialFlag& x,
                                                  const SymmetricShadowOptions& opt) {
  std::size_t d = theta.d;
  if (x.d != d || !(x.dims == theta.ks))
    throw std::invalid_argument("symmetric_shadow_membership: flag type mismatch");

  SymmetricObjective f;
  f.d = d;
  f.k0_t = complete_flag(x).transpose();
  f.bounds.push_back(0);
  for (std::size_t k : theta.ks) f.bounds.push_back(k);
  f.bounds.push_back(d);
  f.n_angles = 0;
  for (std::size_t b = 0; b + 1 < f.bounds.size(); ++b) {
    std::size_t w = f.bounds[b + 1] - f.bounds[b];
    f.n_angles += w * (w - 1) / 2;
  }
  f.g = &g;
  for (std::size_t j = 1; j < d; ++j) f.rays.push_back(coweight_ray(d, j));

  CartanVector kg = cartan_projection(g);
  double scale = std::sqrt(1.0 + kg.norm());

  // informed start: chamber coordinates of kappa(g), fiber at the base point
  Vec z0(d - 1 + f.n_angles, 0.0);
  for (std::size_t j = 1; j < d; ++j)
    z0[j - 1] = std::sqrt(std::max(0.0, simple_root(kg, j)));

  Rng rng(opt.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uang(-3.141592653589793, 3.141592653589793);

  SymmetricShadowResult out;
  out.achieved = std::numeric_limits<double>::infinity();
  std::size_t per_start = std::max<std::size_t>(20, opt.budget / std::max<std::size_t>(1, opt.multistarts));
  double good_enough = radius - 16.0 * opt.band;
  for (std::size_t s = 0; s < opt.multistarts; ++s) {
    Vec z = z0;
    if (s > 0) {
      for (std::size_t j = 0; j + 1 < d; ++j) z[j] = z0[j] + 0.7 * scale * gauss(rng);
      for (std::size_t a = 0; a < f.n_angles; ++a) z[d - 1 + a] = uang(rng);
    }
    Vec step(z.size(), 0.0);
    for (std::size_t j = 0; j + 1 < d; ++j) step[j] = 0.25 * scale;
    for (std::size_t a = 0; a < f.n_angles; ++a) step[d - 1 + a] = 0.3;
    out.achieved = std::min(out.achieved, pattern_search(f, z, step, per_start, good_enough));
    if (out.achieved < radius - opt.band) break;
  }
  out.member = out.achieved < radius - opt.band;
  out.unknown = !out.member;  // non-membership has no certificate
  return out;
}

TransversalityResult transverse_pair_check(const PartialFlag& x, const PartialFlag& y,
                                           double tol) {
  if (x.d != y.d) throw std::invalid_argument("transverse_pair_check: dimension mismatch");
  std::size_t d = x.d;
  TransversalityResult out;
  out.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t k : x.dims) {
    std::size_t kc = d - k;
    if (std::find(y.dims.begin(), y.dims.end(), kc) == y.dims.end())
      throw std::invalid_argument("transverse_pair_check: complementary dimension missing");
    out.min_gap = std::min(out.min_gap, subspace_gap(x.subspace(k), y.subspace(kc)));
  }
  out.transverse = out.min_gap > tol;
  return out;
}

ShadowFamily make_shadow_family(const GroupPresentation& pres, const OrbitBall& ball,
                                const ThetaSubset& theta, const Functional& phi,
                                std::size_t min_word_length, std::size_t max_count) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < ball.elements.size(); ++i)
    if (ball.elements[i].length() >= min_word_length) idx.push_back(i);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return phi.apply(CartanVector(ball.elements[a].kappa)) <
           phi.apply(CartanVector(ball.elements[b].kappa));
  });
  if (max_count > 0 && idx.size() > max_count) idx.resize(max_count);

  ShadowFamily fam;
  fam.theta = theta;
  fam.actions.reserve(idx.size());
  for (std::size_t i : idx) {
    const OrbitElement& el = ball.elements[i];
    CartanVector kv(el.kappa);
    fam.actions.push_back(make_action_word(pres, el.word, theta));
    fam.word_lengths.push_back(el.length());
    fam.phi_lengths.push_back(phi.apply(kv));
    fam.chamber_margins.push_back(chamber_margin(kv, theta));
    fam.words.push_back(el.word);
  }
  return fam;
}

ConicalChain conical_witness(const CompactificationPoint& xi, const ShadowFamily& family,
                             double radius, std::size_t min_chain, double band) {
  ConicalChain chain;
  std::size_t last_len = 0;
  for (std::size_t i = 0; i < family.actions.size(); ++i) {
    if (family.word_lengths[i] <= last_len) continue;
    const ThetaAction& a = family.actions[i];
    CartanVector v = evaluate(xi, a);
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < a.theta.count(); ++t)
      margin = std::min(margin, radius - a.omega_kappa[t] -
                                    fundamental_weight(v, a.theta.ks[t]));
    if (margin > band) {
      chain.indices.push_back(i);
      chain.margins.push_back(family.chamber_margins[i]);
      last_len = family.word_lengths[i];
    }
  }
  chain.found = chain.indices.size() >= min_chain;

  // contracting requires the theta-margins of kappa to run away along the
  // chain; a least-squares slope against word length above 0.1 with net
  // growth counts, anything flat (the product-group picture) does not
  if (chain.indices.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = chain.indices.size();
    for (std::size_t j = 0; j < n; ++j) {
      double xl = double(family.word_lengths[chain.indices[j]]);
      sx += xl;
      sy += chain.margins[j];
      sxx += xl * xl;
      sxy += xl * chain.margins[j];
    }
    double denom = double(n) * sxx - sx * sx;
    double slope = denom > 0 ? (double(n) * sxy - sx * sy) / denom : 0.0;
    chain.contracting = chain.found && slope > 0.1 &&
                        chain.margins.back() > chain.margins.front() + 0.1;
  }
  return chain;
}

double shadow_translate_radius(const Matrix& g, double radius, const ThetaSubset& theta) {
  CartanVector kg = cartan_projection(g);
  // omega_k kappa(g^-1) = omega_{d-k} kappa(g) via the opposition involution
  double c = 0.0;
  for (std::size_t k : theta.ks)
    c = std::max(c, fundamental_weight(kg, k) + fundamental_weight(kg, theta.d - k));
  return radius + c;
}

}  // namespace horops
