#include "horops/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "horops/exterior.hpp"
#include "horops/svd.hpp"
#include "horops/util.hpp"

namespace horops {

GroupPresentation::GroupPresentation(std::size_t d, const std::vector<std::string>& labels,
                                     const std::vector<Matrix>& generators, double det_tol)
    : d_(d) {
  if (labels.size() != generators.size())
    throw std::invalid_argument("GroupPresentation: label/generator count mismatch");
  if (generators.empty()) throw std::invalid_argument("GroupPresentation: no generators");
  for (std::size_t i = 0; i < generators.size(); ++i) {
    const Matrix& g = generators[i];
    if (g.rows() != d || g.cols() != d)
      throw std::invalid_argument("GroupPresentation: generator dimension mismatch");
    double det = determinant(g);
    if (std::fabs(det - 1.0) > det_tol)
      throw std::invalid_argument("GroupPresentation: generator determinant not 1 (" +
                                  labels[i] + ")");
    gens_.push_back(g);
    labels_.push_back(labels[i]);
    gens_.push_back(inverse(g));
    labels_.push_back(labels[i] + "~");
  }
}

const std::vector<Matrix>& GroupPresentation::exterior_gens(std::size_t k) const {
  std::lock_guard<std::mutex> lock(cache_mu_);
  auto it = ext_cache_.find(k);
  if (it != ext_cache_.end()) return it->second;
  std::vector<Matrix> exts;
  exts.reserve(gens_.size());
  for (const Matrix& g : gens_) exts.push_back(exterior_power(g, k));
  return ext_cache_.emplace(k, std::move(exts)).first->second;
}

std::string word_label(const GroupPresentation& pres, const Word& w) {
  if (w.empty()) return "e";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += '.';
    out += pres.label(static_cast<unsigned char>(w[i]));
  }
  return out;
}

Word word_inverse(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (std::size_t i = w.size(); i-- > 0;)
    out.push_back(static_cast<char>(GroupPresentation::inverse_slot(
        static_cast<unsigned char>(w[i]))));
  return out;
}

Word word_reduced_concat(const Word& a, const Word& b) {
  Word out = a;
  for (char c : b) {
    if (!out.empty() &&
        GroupPresentation::inverse_slot(static_cast<unsigned char>(out.back())) ==
            static_cast<std::size_t>(static_cast<unsigned char>(c)))
      out.pop_back();
    else
      out.push_back(c);
  }
  return out;
}

Matrix word_matrix(const GroupPresentation& pres, const Word& w) {
  Matrix m = Matrix::identity(pres.dim());
  for (char c : w) m = m * pres.gen(static_cast<unsigned char>(c));
  return m;
}

Matrix word_exterior(const GroupPresentation& pres, const Word& w, std::size_t k,
                     bool inverted) {
  const std::vector<Matrix>& exts = pres.exterior_gens(k);
  std::size_t n = binomial(pres.dim(), k);
  Matrix m = Matrix::identity(n);
  if (!inverted) {
    for (char c : w) m = m * exts[static_cast<unsigned char>(c)];
  } else {
    for (std::size_t i = w.size(); i-- > 0;)
      m = m * exts[GroupPresentation::inverse_slot(static_cast<unsigned char>(w[i]))];
  }
  return m;
}

namespace {

std::uint64_t quantized_key(const Matrix& m, double tol) {
  // Quantize relative to a power-of-two scale of the matrix so that deep
  // orbit elements (entries far beyond 1/tol) neither overflow llround nor
  // pile into one bucket.  Duplicate paths to one element reproduce the
  // same scale whenever their entries agree to within tol well below the
  // scale boundary, which covers the integer groups where duplicates
  // actually occur; near-boundary misses fall back to distinctness, never
  // to a wrong merge.
  double scale = 1.0;
  for (double x : m.data()) scale = std::max(scale, std::fabs(x));
  int expo = 0;
  std::frexp(scale, &expo);
  double quantum = tol * std::ldexp(1.0, expo);
  std::uint64_t h = 1469598103934665603ull;  // FNV offset
  h ^= static_cast<std::uint64_t>(expo);
  h *= 1099511628211ull;
  for (double x : m.data()) {
    auto q = static_cast<std::int64_t>(std::llround(x / quantum));
    auto u = static_cast<std::uint64_t>(q);
    for (int b = 0; b < 8; ++b) {
      h ^= (u >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  }
  return h;
}

bool within_tol(const Matrix& a, const Matrix& b, double tol) {
  const auto& x = a.data();
  const auto& y = b.data();
  for (std::size_t i = 0; i < x.size(); ++i)
    if (std::fabs(x[i] - y[i]) > tol) return false;
  return true;
}

}  // namespace

OrbitBall enumerate_ball(const GroupPresentation& pres, const BallOptions& opts) {
  OrbitBall ball;
  ball.d = pres.dim();
  ball.opts = opts;

  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> dedup;
  auto try_insert = [&](OrbitElement&& el) -> bool {
    std::uint64_t key = quantized_key(el.mat, opts.dedup_tol);
    auto& bucket = dedup[key];
    for (std::uint32_t idx : bucket)
      if (within_tol(ball.elements[idx].mat, el.mat, opts.dedup_tol)) return false;
    if (ball.elements.size() >= opts.cap)
      throw CapExceeded("enumerate_ball: element cap exceeded");
    bucket.push_back(static_cast<std::uint32_t>(ball.elements.size()));
    ball.elements.push_back(std::move(el));
    return true;
  };

  OrbitElement id;
  id.word = "";
  id.mat = Matrix::identity(ball.d);
  id.inv = Matrix::identity(ball.d);
  id.kappa = Vec(ball.d, 0.0);
  ball.shell_start.push_back(0);
  try_insert(std::move(id));

  std::size_t shell_begin = 0;
  for (std::size_t len = 1; len <= opts.max_word_length; ++len) {
    std::size_t shell_end = ball.elements.size();
    ball.shell_start.push_back(shell_end);

    // candidate expansion: (parent, slot) pairs in sorted order; matrix
    // work is sharded, dedup insertion stays sequential so the outcome is
    // identical at any thread count
    struct Candidate {
      Word word;
      Matrix mat, inv;
      Vec kappa;
      bool reduced = false;
    };
    std::vector<std::pair<std::size_t, std::size_t>> tasks;
    for (std::size_t p = shell_begin; p < shell_end; ++p)
      for (std::size_t s = 0; s < pres.slots(); ++s) tasks.emplace_back(p, s);
    std::vector<Candidate> cand(tasks.size());
    parallel_for(tasks.size(), opts.threads, [&](std::size_t t) {
      auto [p, s] = tasks[t];
      const OrbitElement& parent = ball.elements[p];
      if (!parent.word.empty()) {
        auto last = static_cast<unsigned char>(parent.word.back());
        if (GroupPresentation::inverse_slot(last) == s) return;  // cancellation
      }
      Candidate& c = cand[t];
      c.word = parent.word;
      c.word.push_back(static_cast<char>(s));
      // determinants of the products drift only by O(length * eps), so no
      // renormalization: dividing by a computed determinant would inject
      // the ad - bc cancellation noise (absolute error ~ sigma_1^2 eps)
      c.mat = parent.mat * pres.gen(s);
      c.inv = pres.gen(GroupPresentation::inverse_slot(s)) * parent.inv;
      c.kappa = kappa_via_top_weights(c.mat, c.inv);
      c.reduced = true;
    });
    for (auto& c : cand) {
      if (!c.reduced) continue;
      OrbitElement el;
      el.word = std::move(c.word);
      el.mat = std::move(c.mat);
      el.inv = std::move(c.inv);
      el.kappa = std::move(c.kappa);
      try_insert(std::move(el));
    }
    if (ball.elements.size() == shell_end) break;  // no growth, finite group exhausted
    shell_begin = shell_end;
  }
  ball.shell_start.push_back(ball.elements.size());
  return ball;
}

OrbitLookup::OrbitLookup(const OrbitBall& ball) : ball_(ball), tol_(ball.opts.dedup_tol) {
  for (std::size_t i = 0; i < ball.elements.size(); ++i)
    map_[quantized_key(ball.elements[i].mat, tol_)].push_back(
        static_cast<std::uint32_t>(i));
}

std::optional<std::size_t> OrbitLookup::find(const Matrix& m) const {
  auto it = map_.find(quantized_key(m, tol_));
  if (it == map_.end()) return std::nullopt;
  for (std::uint32_t idx : it->second)
    if (within_tol(ball_.elements[idx].mat, m, tol_)) return idx;
  return std::nullopt;
}

RegularityReport regularity_report(const OrbitBall& ball, const ThetaSubset& theta) {
  RegularityReport rep;
  std::size_t shells = ball.shell_start.size() - 1;
  for (std::size_t s = 0; s < shells; ++s) {
    std::size_t b = ball.shell_start[s], e = ball.shell_start[s + 1];
    if (b == e) continue;
    RegularityRow row;
    row.length = s;
    row.count = e - b;
    double mn = std::numeric_limits<double>::infinity(), sum = 0.0;
    for (std::size_t i = b; i < e; ++i) {
      double m = chamber_margin(CartanVector(ball.elements[i].kappa), theta);
      mn = std::min(mn, m);
      sum += m;
    }
    row.min_margin = mn;
    row.mean_margin = sum / double(e - b);
    rep.rows.push_back(row);
  }
  // least-squares slope of min margin over the outer half of the shells;
  // the inner shells only reflect generator bookkeeping
  std::size_t n = rep.rows.size();
  std::size_t half = n / 2;
  if (n - half >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double cnt = 0;
    for (std::size_t i = half; i < n; ++i) {
      double x = double(rep.rows[i].length), y = rep.rows[i].min_margin;
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      cnt += 1;
    }
    double denom = cnt * sxx - sx * sx;
    rep.slope_last_half = denom != 0.0 ? (cnt * sxy - sx * sy) / denom : 0.0;
  }
  rep.verdict = rep.slope_last_half > 0.05 ? "growing" : "bounded";
  return rep;
}

std::vector<LimitFlagSample> limit_set_sample(const OrbitBall& ball,
                                              const GroupPresentation& pres,
                                              const ThetaSubset& theta, double margin_floor,
                                              double merge_tol) {
  (void)pres;
  std::vector<LimitFlagSample> kept;
  std::vector<std::vector<Matrix>> kept_projs;  // parallel to kept

  auto projectors = [&](const PartialFlag& f) {
    std::vector<Matrix> ps;
    ps.reserve(f.dims.size());
    for (std::size_t k : f.dims) ps.push_back(f.projector(k));
    return ps;
  };
  // operator norm >= max entry and <= frobenius, which screens out almost
  // all pairs before the svd-based exact comparison
  auto close = [&](const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      double maxd = 0.0, frob2 = 0.0;
      const auto& x = a[j].data();
      const auto& y = b[j].data();
      for (std::size_t i = 0; i < x.size(); ++i) {
        double d = std::fabs(x[i] - y[i]);
        if (d >= merge_tol) return false;
        maxd = std::max(maxd, d);
        frob2 += d * d;
      }
      if (std::sqrt(frob2) >= merge_tol && operator_norm(a[j] - b[j]) >= merge_tol)
        return false;
    }
    return true;
  };

  for (const OrbitElement& el : ball.elements) {
    CartanVector kv(el.kappa);
    double margin = chamber_margin(kv, theta);
    if (margin <= margin_floor) continue;
    auto flag = try_flag_projection(el.mat, theta, margin_floor);
    if (!flag) continue;
    auto projs = projectors(*flag);
    bool merged = false;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      if (close(kept_projs[i], projs)) {
        merged = true;  // earlier entries have shorter or lex-smaller words
        break;
      }
    }
    if (!merged) {
      kept.push_back({*flag, el.word, margin});
      kept_projs.push_back(std::move(projs));
    }
  }
  return kept;
}

void write_orbit_csv(const std::string& path, const OrbitBall& ball,
                     const GroupPresentation& pres, const ThetaSubset& theta,
                     const Functional& phi) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("write_orbit_csv: cannot open " + path);
  out << "word,word_length";
  for (std::size_t i = 1; i <= ball.d; ++i) out << ",kappa_" << i;
  out << ",theta_margin,phi_length\n";
  for (const OrbitElement& el : ball.elements) {
    CartanVector kv(el.kappa);
    out << word_label(pres, el.word) << ',' << el.length();
    for (double x : el.kappa) out << ',' << fmt_double(x);
    out << ',' << fmt_double(chamber_margin(kv, theta)) << ','
        << fmt_double(phi.apply(kv)) << '\n';
  }
}

}  // namespace horops
