#include "horops/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "horops/exterior.hpp"
#include "horops/qr.hpp"
#include "horops/svd.hpp"
#include "horops/util.hpp"

#include <json.hpp>

namespace horops {

using nlohmann::json;

Matrix BoundaryRep::materialize() const {
  if (full) return *full;
  if (!image || !cofactor) throw std::logic_error("BoundaryRep: empty representative");
  std::size_t m = image->size();
  Matrix t(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) t(i, j) = (*image)[i] * (*cofactor)[j];
  return t;
}

namespace {

bool is_exact_identity(const Matrix& g) {
  if (g.rows() != g.cols()) return false;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j)
      if (g(i, j) != (i == j ? 1.0 : 0.0)) return false;
  return true;
}

void finish_action(ThetaAction& a) {
  a.omega_kappa.resize(a.theta.count());
  for (std::size_t i = 0; i < a.theta.count(); ++i)
    a.omega_kappa[i] = std::log(operator_norm(a.ext_fwd[i]));
  a.is_identity = is_exact_identity(a.g);
}

}  // namespace

ThetaAction make_action(const Matrix& g, const ThetaSubset& theta) {
  if (g.rows() != theta.d) throw std::invalid_argument("make_action: dimension mismatch");
  ThetaAction a;
  a.d = theta.d;
  a.theta = theta;
  a.g = g;
  a.g_inv = inverse(g);
  for (std::size_t k : theta.ks) {
    a.ext_fwd.push_back(k == 1 ? a.g : exterior_power(a.g, k));
    a.ext_inv.push_back(k == 1 ? a.g_inv : exterior_power(a.g_inv, k));
  }
  finish_action(a);
  return a;
}

ThetaAction make_action_word(const GroupPresentation& pres, const Word& w,
                             const ThetaSubset& theta) {
  if (pres.dim() != theta.d) throw std::invalid_argument("make_action_word: dimension mismatch");
  ThetaAction a;
  a.d = theta.d;
  a.theta = theta;
  a.g = word_matrix(pres, w);
  a.g_inv = word_matrix(pres, word_inverse(w));
  for (std::size_t k : theta.ks) {
    a.ext_fwd.push_back(word_exterior(pres, w, k, false));
    a.ext_inv.push_back(word_exterior(pres, w, k, true));
  }
  a.pres = &pres;
  a.word = w;
  finish_action(a);
  return a;
}

CartanVector busemann_raw(const Matrix& x, const Matrix& h) {
  return cartan_projection(inverse(h) * x) - cartan_projection(x);
}

namespace {

CartanVector zero_vector(std::size_t d) { return CartanVector(Vec(d, 0.0)); }

double rep_pushforward_log_norm(const Matrix& op, const BoundaryRep& rep) {
  if (rep.rank_one()) {
    // |op (u w^T)| = |op u| for unit w
    double n = norm2(op.apply(*rep.image));
    if (n < 1e-300) throw std::domain_error("evaluate: degenerate representative value");
    return std::log(n);
  }
  double n = operator_norm(op * rep.materialize());
  if (n < 1e-300) throw std::domain_error("evaluate: degenerate representative value");
  return std::log(n);
}

// Same value as rep_pushforward_log_norm against the exterior power of the
// word (inverted or not), but accumulated one generator factor at a time
// with renormalization in between.  log|F_n ... F_1 v| = sum of per-step
// log-norms exactly; each step maps a unit object through one moderate
// factor, so no catastrophic cancellation occurs even when the assembled
// operator shrinks the representative by hundreds of orders of magnitude.
double seq_pushforward_log_norm(const GroupPresentation& pres, const Word& w,
                                std::size_t k, const BoundaryRep& rep, bool inverted) {
  const std::vector<Matrix>& exts = pres.exterior_gens(k);
  double acc = 0.0;
  if (rep.rank_one()) {
    Vec u = *rep.image;
    auto step = [&](const Matrix& f) {
      u = f.apply(u);
      double n = norm2(u);
      if (n < 1e-300) throw std::domain_error("evaluate: degenerate representative value");
      acc += std::log(n);
      for (double& x : u) x /= n;
    };
    // product strings read right to left: h^{-1} ends with the first
    // letter's inverse, h with the last letter
    if (inverted)
      for (char c : w)
        step(exts[GroupPresentation::inverse_slot(static_cast<unsigned char>(c))]);
    else
      for (std::size_t i = w.size(); i-- > 0;)
        step(exts[static_cast<unsigned char>(w[i])]);
    return acc;
  }
  Matrix t = rep.materialize();
  auto step = [&](const Matrix& f) {
    t = f * t;
    double n = operator_norm(t);
    if (n < 1e-300) throw std::domain_error("evaluate: degenerate representative value");
    acc += std::log(n);
    t = t.scaled(1.0 / n);
  };
  if (inverted)
    for (char c : w)
      step(exts[GroupPresentation::inverse_slot(static_cast<unsigned char>(c))]);
  else
    for (std::size_t i = w.size(); i-- > 0;)
      step(exts[static_cast<unsigned char>(w[i])]);
  return acc;
}

// omega values of the horofunction of p at the base point reached by the
// action: inverted=true evaluates at h o (operators Lambda^k h^{-1}),
// inverted=false at h^{-1} o
Vec boundary_omega_values(const HorofunctionPoint& p, const ThetaAction& a, bool inverted) {
  const std::vector<Matrix>& ops = inverted ? a.ext_inv : a.ext_fwd;
  Vec w(p.reps.size());
  for (std::size_t i = 0; i < p.reps.size(); ++i) {
    if (a.pres != nullptr)
      w[i] = seq_pushforward_log_norm(*a.pres, a.word, a.theta.ks[i], p.reps[i], inverted);
    else
      w[i] = rep_pushforward_log_norm(ops[i], p.reps[i]);
  }
  return w;
}

Vec interior_omega_diff(const InteriorPoint& x, const Matrix& left, const Matrix& left_inv,
                        const ThetaSubset& theta) {
  // omega_k kappa(left * x) - omega_k kappa(x), with both inverses on hand
  Matrix m = left * x.mat;
  Matrix m_inv = x.inv * left_inv;
  Vec w(theta.count());
  for (std::size_t i = 0; i < theta.count(); ++i) {
    std::size_t k = theta.ks[i];
    w[i] = log_top_weight(m, m_inv, k) - log_top_weight(x.mat, x.inv, k);
  }
  return w;
}

}  // namespace

CartanVector evaluate(const CompactificationPoint& p, const ThetaAction& at_h) {
  if (at_h.is_identity) return zero_vector(at_h.d);  // normalization, exact
  if (p.is_interior())
    return vector_from_weights(at_h.theta,
                               interior_omega_diff(p.interior(), at_h.g_inv, at_h.g,
                                                   at_h.theta));
  const HorofunctionPoint& xi = p.boundary();
  if (!(xi.theta.ks == at_h.theta.ks))
    throw std::invalid_argument("evaluate: theta mismatch");
  return vector_from_weights(at_h.theta, boundary_omega_values(xi, at_h, true));
}

CartanVector evaluate(const CompactificationPoint& p, const Matrix& h,
                      const ThetaSubset& theta) {
  return evaluate(p, make_action(h, theta));
}

CartanVector cocycle_B(const ThetaAction& g, const CompactificationPoint& p) {
  if (g.is_identity) return zero_vector(g.d);
  if (p.is_interior())
    return vector_from_weights(g.theta,
                               interior_omega_diff(p.interior(), g.g, g.g_inv, g.theta));
  return vector_from_weights(g.theta, boundary_omega_values(p.boundary(), g, false));
}

CompactificationPoint act(const ThetaAction& g, const CompactificationPoint& p) {
  if (p.is_interior()) {
    const InteriorPoint& x = p.interior();
    return {InteriorPoint(g.g * x.mat, x.inv * g.g_inv)};
  }
  const HorofunctionPoint& xi = p.boundary();
  HorofunctionPoint out;
  out.d = xi.d;
  out.theta = xi.theta;
  out.provenance = xi.provenance;
  for (std::size_t i = 0; i < xi.reps.size(); ++i) {
    const BoundaryRep& r = xi.reps[i];
    BoundaryRep nr;
    nr.k = r.k;
    if (r.rank_one()) {
      nr.image = normalized(g.ext_fwd[i].apply(*r.image));
      nr.cofactor = r.cofactor;
    } else {
      Matrix t = g.ext_fwd[i] * r.materialize();
      double n = operator_norm(t);
      if (n < 1e-300) throw std::domain_error("act: degenerate representative");
      nr.full = t.scaled(1.0 / n);
    }
    out.reps.push_back(std::move(nr));
  }
  if (xi.flag_tag) out.flag_tag = transport_flag(g.g, *xi.flag_tag);
  return CompactificationPoint::from_boundary(std::move(out));
}

HorofunctionPoint embed_flag(const PartialFlag& x, const ThetaSubset& theta) {
  HorofunctionPoint p;
  p.d = x.d;
  p.theta = theta;
  for (std::size_t k : theta.ks) {
    if (std::find(x.dims.begin(), x.dims.end(), k) == x.dims.end())
      throw std::invalid_argument("embed_flag: flag lacks a theta dimension");
    BoundaryRep r;
    r.k = k;
    Vec v = x.wedge_line(k);
    r.image = v;
    r.cofactor = v;  // orthogonal projection onto the wedge line
    p.reps.push_back(std::move(r));
  }
  p.flag_tag = x;
  return p;
}

OrbitLimitResult orbit_limit(const GroupPresentation& pres, const std::vector<Word>& seq,
                             const ThetaSubset& theta, double tail_tol) {
  if (seq.size() < 2) throw std::invalid_argument("orbit_limit: need at least two terms");
  OrbitLimitResult out;
  out.point.d = pres.dim();
  out.point.theta = theta;
  out.point.provenance = word_label(pres, seq.back());
  out.diagnostics.converged = true;
  for (std::size_t k : theta.ks) {
    Matrix prev;
    double last_inc = 0.0;
    Matrix cur;
    for (std::size_t n = 0; n < seq.size(); ++n) {
      Matrix e = word_exterior(pres, seq[n], k, false);
      double nn = operator_norm(e);
      if (nn < 1e-300) throw std::domain_error("orbit_limit: vanishing representative");
      cur = e.scaled(1.0 / nn);
      if (n > 0) last_inc = operator_norm(cur - prev);
      prev = cur;
    }
    out.diagnostics.final_increment.push_back(last_inc);
    if (last_inc > tail_tol) out.diagnostics.converged = false;
    Vec s = singular_values(cur);
    out.diagnostics.rank_defect.push_back(s.size() > 1 ? s[1] / s[0] : 0.0);
    BoundaryRep r;
    r.k = k;
    r.full = cur.scaled(1.0 / operator_norm(cur));
    out.point.reps.push_back(std::move(r));
  }
  // tag a flag only when the limit is visibly flag-like: representatives
  // essentially rank one and the final element safely theta-regular
  bool rank_one = true;
  for (double d : out.diagnostics.rank_defect)
    if (d > 1e-3) rank_one = false;
  if (rank_one && out.diagnostics.converged) {
    Matrix last = word_matrix(pres, seq.back());
    Matrix last_inv = word_matrix(pres, word_inverse(seq.back()));
    CartanVector kv(kappa_via_top_weights(last, last_inv));
    if (chamber_margin(kv, theta) > 0.5)
      out.point.flag_tag = try_flag_projection(last, theta, 0.5);
  }
  return out;
}

namespace {

Vec chamber_ray(std::size_t d, std::size_t k) {
  Vec w(d);
  for (std::size_t i = 0; i < d; ++i)
    w[i] = (i < k) ? double(d - k) / double(d) : -double(k) / double(d);
  double n = norm2(w);
  for (double& x : w) x /= n;
  return w;
}

Matrix random_rotation(std::size_t d, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix m(d, d);
  for (double& x : m.data()) x = gauss(rng);
  Matrix q = qr_positive(m).q;
  if (determinant(q) < 0.0)
    for (std::size_t i = 0; i < d; ++i) q(i, d - 1) = -q(i, d - 1);
  return q;
}

}  // namespace

std::vector<Matrix> probe_points(std::size_t d, std::size_t count, std::uint64_t seed) {
  // k * exp(t H_ray) over the extreme rays of the dominant cone; the SO(d)
  // sample is a seeded pseudo-random stand-in for a low-discrepancy set
  Rng rng(seed);
  std::vector<Matrix> rots;
  std::size_t per = 3 * (d - 1);
  std::size_t n_rot = (count + per - 1) / per;
  for (std::size_t i = 0; i < n_rot; ++i) rots.push_back(random_rotation(d, rng));
  std::vector<Matrix> probes;
  static const double ts[3] = {1.0, 2.0, 4.0};
  for (std::size_t r = 0; r < rots.size() && probes.size() < count; ++r)
    for (int ti = 0; ti < 3 && probes.size() < count; ++ti)
      for (std::size_t k = 1; k < d && probes.size() < count; ++k) {
        Vec ray = chamber_ray(d, k);
        Vec ex(d);
        for (std::size_t i = 0; i < d; ++i) ex[i] = std::exp(ts[ti] * ray[i]);
        probes.push_back(rots[r] * Matrix::diagonal(ex));
      }
  return probes;
}

bool boundary_points_equal(const HorofunctionPoint& a, const HorofunctionPoint& b,
                           const std::vector<Matrix>& probes, double tol) {
  if (!(a.theta.ks == b.theta.ks) || a.d != b.d)
    throw std::invalid_argument("boundary_points_equal: type mismatch");
  CompactificationPoint pa = CompactificationPoint::from_boundary(a);
  CompactificationPoint pb = CompactificationPoint::from_boundary(b);
  for (const Matrix& h : probes) {
    ThetaAction at = make_action(h, a.theta);
    if ((evaluate(pa, at) - evaluate(pb, at)).norm() > tol) return false;
  }
  return true;
}

namespace {

double point_height(const CompactificationPoint& p) {
  // h(x) = 1 / (1 + dist(o, x)); boundary points have height zero
  if (!p.is_interior()) return 0.0;
  const InteriorPoint& x = p.interior();
  CartanVector kv(kappa_via_top_weights(x.mat, x.inv));
  return 1.0 / (1.0 + kv.norm());
}

}  // namespace

double compactification_distance(const CompactificationPoint& p,
                                 const CompactificationPoint& q, const ThetaSubset& theta,
                                 std::size_t probe_depth, std::uint64_t seed) {
  std::size_t d = theta.d;
  // Truncated series sum_n 2^-n sup_{ball(o,n)} |p - q|, the sup replaced
  // by a max over deterministic probes k exp(t H) with t <= n.
  double dist0 = 0.0;
  for (std::size_t n = 1; n <= probe_depth; ++n) {
    Rng rng(seed + 977 * n);
    double level = 0.0;
    for (int rot = 0; rot < 4; ++rot) {
      Matrix k = random_rotation(d, rng);
      for (std::size_t j = 1; j < d; ++j) {
        Vec ray = chamber_ray(d, j);
        for (double frac : {0.5, 1.0}) {
          Vec ex(d);
          for (std::size_t i = 0; i < d; ++i) ex[i] = std::exp(frac * double(n) * ray[i]);
          ThetaAction at = make_action(k * Matrix::diagonal(ex), theta);
          level = std::max(level, (evaluate(p, at) - evaluate(q, at)).norm());
        }
      }
    }
    dist0 += std::pow(0.5, double(n)) * level;
  }

  if (p.is_interior() && q.is_interior()) {
    const InteriorPoint& x = p.interior();
    const InteriorPoint& y = q.interior();
    Matrix m = x.inv * y.mat;
    Matrix m_inv = y.inv * x.mat;
    double dx = CartanVector(kappa_via_top_weights(m, m_inv)).norm();
    return std::min(dx, point_height(p) + point_height(q)) + dist0;
  }
  if (p.is_interior() || q.is_interior())
    return point_height(p) + point_height(q) + dist0;
  return dist0;
}

std::string boundary_point_to_json(const HorofunctionPoint& p) {
  json j;
  j["d"] = p.d;
  j["theta"] = p.theta.ks;
  json alphas = json::array();
  for (const BoundaryRep& r : p.reps) {
    json a;
    a["k"] = r.k;
    a["T_matrix_rowmajor"] = r.materialize().data();
    alphas.push_back(a);
  }
  j["alphas"] = alphas;
  if (p.flag_tag) {
    json f;
    f["dims"] = p.flag_tag->dims;
    f["basis_rowmajor"] = p.flag_tag->basis.data();
    j["flag_tag"] = f;
  }
  if (!p.provenance.empty()) j["provenance"] = p.provenance;
  return j.dump(2);
}

HorofunctionPoint boundary_point_from_json(const std::string& text) {
  json j = json::parse(text);
  HorofunctionPoint p;
  p.d = j.at("d").get<std::size_t>();
  p.theta = ThetaSubset(p.d, j.at("theta").get<std::vector<std::size_t>>());
  for (const json& a : j.at("alphas")) {
    BoundaryRep r;
    r.k = a.at("k").get<std::size_t>();
    std::vector<double> flat = a.at("T_matrix_rowmajor").get<std::vector<double>>();
    std::size_t m = binomial(p.d, r.k);
    if (flat.size() != m * m) throw std::invalid_argument("boundary json: bad T size");
    Matrix t(m, m);
    t.data() = flat;
    r.full = t;
    p.reps.push_back(std::move(r));
  }
  if (j.contains("flag_tag")) {
    PartialFlag f;
    f.d = p.d;
    f.dims = j["flag_tag"].at("dims").get<std::vector<std::size_t>>();
    std::vector<double> flat = j["flag_tag"].at("basis_rowmajor").get<std::vector<double>>();
    std::size_t kmax = f.dims.back();
    if (flat.size() != p.d * kmax) throw std::invalid_argument("boundary json: bad basis size");
    f.basis = Matrix(p.d, kmax);
    f.basis.data() = flat;
    p.flag_tag = f;
  }
  if (j.contains("provenance")) p.provenance = j["provenance"].get<std::string>();
  return p;
}

}  // namespace horops
