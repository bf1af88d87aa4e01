#include "horops/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "horops/boundary.hpp"
#include "horops/patterson.hpp"
#include "horops/qr.hpp"
#include "horops/shadows.hpp"
#include "horops/util.hpp"

#include <CLI11.hpp>
#include <json.hpp>

namespace horops {

using nlohmann::json;

namespace {

// All file content is staged in memory and flushed together, so a failed
// command never leaves partial outputs behind.
class OutputBundle {
 public:
  explicit OutputBundle(std::string dir) : dir_(std::move(dir)) {}

  void add(const std::string& name, std::string content) {
    files_.emplace_back(name, std::move(content));
  }

  void flush() {
    std::filesystem::create_directories(dir_);
    for (const auto& [name, content] : files_) {
      std::ofstream out(std::filesystem::path(dir_) / name, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + name + " in " + dir_);
      out << content;
    }
  }

 private:
  std::string dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

double resolve_s(const ExperimentConfig& cfg, const OrbitBall& ball,
                 const GroupPresentation& pres) {
  if (!cfg.measure.s_auto) return cfg.measure.s;
  ExponentEstimate est = critical_exponent(ball, pres, cfg.phi());
  return est.delta_hat + cfg.measure.s_offset;
}

HMode h_mode_of(const ExperimentConfig& cfg) {
  return cfg.measure.h_mode == "polynomial" ? HMode::kPolynomial : HMode::kConstant;
}

// evenly spread test indices from the word-length range [lo_len, hi_len]
std::vector<std::size_t> shell_test_indices(const OrbitBall& ball, std::size_t lo_len,
                                            std::size_t hi_len, std::size_t per_shell) {
  std::vector<std::size_t> idx;
  for (std::size_t len = lo_len;
       len <= hi_len && len + 1 < ball.shell_start.size(); ++len) {
    std::size_t b = ball.shell_start[len], e = ball.shell_start[len + 1];
    if (b >= e) continue;
    std::size_t n = e - b;
    std::size_t take = std::min(per_shell, n);
    for (std::size_t i = 0; i < take; ++i) idx.push_back(b + (i * n) / take);
  }
  return idx;
}

json regularity_to_json(const RegularityReport& rep) {
  json rows = json::array();
  for (const RegularityRow& r : rep.rows)
    rows.push_back({{"length", r.length},
                    {"count", r.count},
                    {"min_margin", r.min_margin},
                    {"mean_margin", r.mean_margin}});
  return {{"rows", rows},
          {"slope_last_half", rep.slope_last_half},
          {"verdict", rep.verdict}};
}

std::string sign_normalized_coords(const Vec& v) {
  double sign = 1.0;
  for (double x : v) {
    if (std::fabs(x) > 1e-12) {
      sign = x > 0 ? 1.0 : -1.0;
      break;
    }
  }
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += fmt_double(sign * v[i]);
  }
  return out;
}

}  // namespace

int cmd_orbit(const ExperimentConfig& cfg, const std::string& out_dir) {
  GroupPresentation pres = cfg.presentation();
  OrbitBall ball = enumerate_ball(pres, cfg.ball);
  RegularityReport rep = regularity_report(ball, cfg.theta());

  OutputBundle out(out_dir);
  {
    // orbit CSV goes through the library writer; stage it via a temp string
    std::ostringstream csv;
    csv << "word,word_length";
    for (std::size_t i = 1; i <= cfg.d; ++i) csv << ",kappa_" << i;
    csv << ",theta_margin,phi_length\n";
    ThetaSubset theta = cfg.theta();
    Functional phi = cfg.phi();
    for (const OrbitElement& el : ball.elements) {
      CartanVector kv(el.kappa);
      csv << word_label(pres, el.word) << ',' << el.length();
      for (double x : el.kappa) csv << ',' << fmt_double(x);
      csv << ',' << fmt_double(chamber_margin(kv, theta)) << ','
          << fmt_double(phi.apply(kv)) << '\n';
    }
    out.add("orbit.csv", csv.str());
  }
  out.add("regularity.json", regularity_to_json(rep).dump(2) + "\n");
  out.flush();
  return 0;
}

int cmd_exponent(const ExperimentConfig& cfg, const std::string& out_dir) {
  GroupPresentation pres = cfg.presentation();
  OrbitBall ball = enumerate_ball(pres, cfg.ball);
  ExponentEstimate est = critical_exponent(ball, pres, cfg.phi());
  double bisect = poincare_abscissa(ball, cfg.phi());

  json j;
  j["delta_hat"] = est.delta_hat;
  j["window"] = {est.window_lo, est.window_hi};
  j["window_caps"] = {{"formula", est.formula_cap}, {"saturation", est.saturation_cap}};
  j["confidence"] = {est.conf_lo, est.conf_hi};
  j["shell_slopes"] = est.shell_slopes;
  j["samples"] = est.samples;
  j["poincare_bisection"] = bisect;
  double denom = std::max({std::fabs(est.delta_hat), std::fabs(bisect), 1e-9});
  j["relative_disagreement"] = std::fabs(est.delta_hat - bisect) / denom;

  OutputBundle out(out_dir);
  out.add("exponent.json", j.dump(2) + "\n");
  out.flush();
  return 0;
}

int cmd_measure(const ExperimentConfig& cfg, const std::string& out_dir) {
  GroupPresentation pres = cfg.presentation();
  OrbitBall ball = enumerate_ball(pres, cfg.ball);
  double s = resolve_s(cfg, ball, pres);
  AtomicMeasure mu = patterson_measure(ball, cfg.phi(), s, h_mode_of(cfg), cfg.measure.h_eps);

  json j;
  j["s"] = s;
  j["h_mode"] = cfg.measure.h_mode;
  j["h_eps"] = mu.h_eps;
  j["atoms"] = mu.weights.size();
  j["log_total_raw"] = mu.log_total_raw;
  json shell_mass = json::array();
  for (std::size_t sh = 0; sh + 1 < ball.shell_start.size(); ++sh) {
    long double m = 0.0L;
    for (std::size_t i = ball.shell_start[sh]; i < ball.shell_start[sh + 1]; ++i)
      m += (long double)mu.weights[i];
    shell_mass.push_back(double(m));
  }
  j["shell_mass"] = shell_mass;
  json spot = json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(5, mu.weights.size()); ++i)
    spot.push_back({{"word", word_label(pres, ball.elements[i].word)},
                    {"weight", mu.weights[i]}});
  j["first_atoms"] = spot;

  OutputBundle out(out_dir);
  out.add("measure.json", j.dump(2) + "\n");
  out.flush();
  return 0;
}

int cmd_shadow_lemma(const ExperimentConfig& cfg, const std::string& out_dir) {
  GroupPresentation pres = cfg.presentation();
  OrbitBall ball = enumerate_ball(pres, cfg.ball);
  double s = resolve_s(cfg, ball, pres);
  AtomicMeasure mu = patterson_measure(ball, cfg.phi(), s, h_mode_of(cfg), cfg.measure.h_eps);
  double radius = cfg.r_grid[cfg.r_grid.size() / 2];

  std::vector<std::size_t> tests = {0};  // identity first: its ratio is pinned at 1
  std::size_t hi = std::min<std::size_t>(ball.opts.max_word_length, 10);
  for (std::size_t i : shell_test_indices(ball, std::min<std::size_t>(4, hi), hi, 5))
    tests.push_back(i);
  ShadowLemmaReport rep =
      shadow_lemma_report(mu, ball, pres, cfg.theta(), radius, s, tests);

  json j;
  j["R"] = radius;
  j["delta"] = s;
  j["tests"] = rep.rows.size();
  j["empty_shadows"] = rep.empty_shadows;
  j["min_ratio"] = rep.min_ratio;
  j["max_ratio"] = rep.max_ratio;
  j["median_ratio"] = rep.median_ratio;
  j["implied_c"] = rep.implied_c;

  std::ostringstream csv;
  csv << "gamma_word,phi_length,shadow_mass,ratio\n";
  for (const ShadowLemmaRow& r : rep.rows)
    csv << r.gamma_word << ',' << fmt_double(r.phi_len) << ',' << fmt_double(r.shadow_mass)
        << ',' << fmt_double(r.ratio) << '\n';

  OutputBundle out(out_dir);
  out.add("shadow_lemma.csv", csv.str());
  out.add("shadow_lemma.json", j.dump(2) + "\n");
  out.flush();

  bool identity_ok = !rep.rows.empty() && std::fabs(rep.rows.front().ratio - 1.0) < 1e-9;
  return identity_ok ? 0 : 1;
}

namespace {

Matrix random_special(std::size_t d, Rng& rng, double kappa_scale) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto rot = [&]() {
    Matrix m(d, d);
    for (double& x : m.data()) x = gauss(rng);
    Matrix q = qr_positive(m).q;
    if (determinant(q) < 0)
      for (std::size_t i = 0; i < d; ++i) q(i, d - 1) = -q(i, d - 1);
    return q;
  };
  Vec h(d);
  double mean = 0.0;
  for (double& x : h) mean += (x = kappa_scale * gauss(rng));
  mean /= double(d);
  Vec e(d);
  for (std::size_t i = 0; i < d; ++i) e[i] = std::exp(h[i] - mean);
  return rot() * Matrix::diagonal(e) * rot();
}

PartialFlag random_flag(std::size_t d, const ThetaSubset& theta, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix m(d, theta.ks.back());
  for (double& x : m.data()) x = gauss(rng);
  return flag_from_columns(orthonormalize_columns(m), theta.ks);
}

int verify_embedding(const ExperimentConfig& cfg, OutputBundle& out) {
  ThetaSubset theta = cfg.theta();
  Rng rng(cfg.seed);
  double worst = 0.0;
  const std::size_t n = 200;
  for (std::size_t i = 0; i < n; ++i) {
    PartialFlag x = random_flag(cfg.d, theta, rng);
    Matrix g = random_special(cfg.d, rng, 1.0);
    CompactificationPoint p = CompactificationPoint::from_boundary(embed_flag(x, theta));
    CartanVector lhs = evaluate(p, make_action(g, theta));
    CartanVector rhs = iwasawa_cocycle_partial(inverse(g), x, theta);
    worst = std::max(worst, max_abs(vec_sub(lhs.h, rhs.h)));
  }
  bool pass = worst <= 1e-7;
  json j = {{"suite", "embedding"},
            {"samples", n},
            {"max_residual", worst},
            {"pass", pass}};
  out.add("verify_embedding.json", j.dump(2) + "\n");
  return pass ? 0 : 1;
}

int verify_shadows(const ExperimentConfig& cfg, OutputBundle& out) {
  GroupPresentation pres = cfg.presentation();
  OrbitBall ball = enumerate_ball(pres, cfg.ball);
  ThetaSubset theta = cfg.theta();

  // attracting flags land in their own shadows at every radius.  A flag
  // stored in doubles carries relative eps noise in its direction, and
  // evaluating it under the element's own inverse amplifies that noise by
  // exp(omega kappa of g) against a signal of exp(-omega kappa of g), so
  // the margin is only readable while omega kappa(g) + omega kappa(g^-1)
  // stays under about 0.8 * -log(eps).  Elements past that budget are
  // counted but not judged: no algorithm can certify them in this format.
  const double resolution_budget = 28.8;
  std::size_t regular = 0, checked = 0, beyond = 0, violations = 0;
  double worst_defect = 0.0;  // most negative membership margin minus R
  for (const OrbitElement& el : ball.elements) {
    if (el.length() == 0) continue;
    CartanVector kv(el.kappa);
    if (chamber_margin(kv, theta) < 1e-4) continue;
    std::optional<PartialFlag> f = try_flag_projection(el.mat, theta, 1e-4);
    if (!f) continue;
    ++regular;
    CartanVector kinv = opposition_involution(kv);
    double amplification = 0.0;
    for (std::size_t k : theta.ks)
      amplification = std::max(amplification,
                               fundamental_weight(kv, k) + fundamental_weight(kinv, k));
    if (amplification > resolution_budget) {
      ++beyond;
      continue;
    }
    ++checked;
    ThetaAction ag = make_action_word(pres, el.word, theta);
    CompactificationPoint p = CompactificationPoint::from_boundary(embed_flag(*f, theta));
    CartanVector v = evaluate(p, ag);
    for (double radius : cfg.r_grid) {
      double margin = std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < theta.count(); ++t)
        margin = std::min(margin, radius - ag.omega_kappa[t] -
                                      fundamental_weight(v, theta.ks[t]));
      if (!(margin > 0)) ++violations;
      worst_defect = std::min(worst_defect, margin - radius);
    }
  }

  // transported members stay inside the enlarged translated shadow; the
  // flag is drawn from words extending h so that membership in O_R(h) is
  // systematic rather than a rare coincidence
  std::size_t transport_checks = 0, transport_violations = 0;
  {
    std::vector<LimitFlagSample> flags = limit_set_sample(ball, pres, theta, 1e-3);
    std::vector<std::size_t> short_els;
    for (std::size_t i = 1; i < ball.elements.size() && ball.elements[i].length() <= 2; ++i)
      short_els.push_back(i);
    Rng rng(cfg.seed + 7);
    if (!flags.empty() && !short_els.empty()) {
      std::uniform_int_distribution<std::size_t> pick_el(0, short_els.size() - 1);
      double radius = cfg.r_grid.front();
      for (int it = 0; it < 200 && transport_checks < 50; ++it) {
        const OrbitElement& ge = ball.elements[short_els[pick_el(rng)]];
        const OrbitElement& he = ball.elements[short_els[pick_el(rng)]];
        std::vector<std::size_t> extending;
        for (std::size_t fi = 0; fi < flags.size(); ++fi)
          if (flags[fi].word.size() > he.word.size() &&
              flags[fi].word.compare(0, he.word.size(), he.word) == 0)
            extending.push_back(fi);
        if (extending.empty()) continue;
        std::uniform_int_distribution<std::size_t> pick_fl(0, extending.size() - 1);
        CompactificationPoint p = CompactificationPoint::from_boundary(
            embed_flag(flags[extending[pick_fl(rng)]].flag, theta));
        ShadowSpec in_shadow{make_action_word(pres, he.word, theta), radius};
        if (shadow_membership(in_shadow, p).verdict != ShadowVerdict::kMember) continue;
        ++transport_checks;
        double r_prime = shadow_translate_radius(ge.mat, radius, theta);
        ThetaAction ag = make_action_word(pres, ge.word, theta);
        ShadowSpec out_shadow{make_action(ge.mat * he.mat, theta), r_prime};
        if (shadow_membership(out_shadow, act(ag, p)).verdict == ShadowVerdict::kNonMember)
          ++transport_violations;
      }
    }
  }

  bool pass = violations == 0 && transport_violations == 0;
  json j = {{"suite", "shadows"},
            {"regular_elements", regular},
            {"own_shadow_checked", checked},
            {"beyond_resolution", beyond},
            {"own_shadow_violations", violations},
            {"worst_margin_minus_R", worst_defect},
            {"transport_checks", transport_checks},
            {"transport_violations", transport_violations},
            {"pass", pass}};
  out.add("verify_shadows.json", j.dump(2) + "\n");
  return pass ? 0 : 1;
}

int verify_shadow_lemma(const ExperimentConfig& cfg, OutputBundle& out) {
  GroupPresentation pres = cfg.presentation();
  OrbitBall ball = enumerate_ball(pres, cfg.ball);
  double s = resolve_s(cfg, ball, pres);
  AtomicMeasure mu = patterson_measure(ball, cfg.phi(), s, h_mode_of(cfg), cfg.measure.h_eps);
  double radius = cfg.r_grid[cfg.r_grid.size() / 2];
  std::vector<std::size_t> tests = {0};
  std::size_t hi = std::min<std::size_t>(ball.opts.max_word_length, 8);
  for (std::size_t i : shell_test_indices(ball, 1, hi, 3)) tests.push_back(i);
  ShadowLemmaReport rep = shadow_lemma_report(mu, ball, pres, cfg.theta(), radius, s, tests);

  bool identity_ok = !rep.rows.empty() && std::fabs(rep.rows.front().ratio - 1.0) < 1e-9;
  bool finite = true;
  for (const ShadowLemmaRow& r : rep.rows)
    if (!std::isfinite(r.ratio)) finite = false;
  bool pass = identity_ok && finite;
  json j = {{"suite", "shadow-lemma"},
            {"R", radius},
            {"delta", s},
            {"rows", rep.rows.size()},
            {"empty_shadows", rep.empty_shadows},
            {"identity_ratio_exact", identity_ok},
            {"implied_c", rep.implied_c},
            {"pass", pass}};
  out.add("verify_shadow_lemma.json", j.dump(2) + "\n");
  return pass ? 0 : 1;
}

int verify_axioms(const ExperimentConfig& cfg, OutputBundle& out) {
  GroupPresentation pres = cfg.presentation();
  OrbitBall ball = enumerate_ball(pres, cfg.ball);
  double s = resolve_s(cfg, ball, pres);
  AtomicMeasure mu = patterson_measure(ball, cfg.phi(), s, h_mode_of(cfg), cfg.measure.h_eps);
  ThetaSubset theta = cfg.theta();

  std::vector<HorofunctionPoint> candidates;
  for (const LimitFlagSample& f : limit_set_sample(ball, pres, theta, 1.0, 1e-3)) {
    candidates.push_back(embed_flag(f.flag, theta));
    if (candidates.size() >= 24) break;
  }
  PsAxiomOptions opt;
  opt.r_grid = cfg.r_grid;
  opt.seed = cfg.seed;
  std::vector<AxiomCheck> checks = ps_axiom_report(ball, pres, mu, theta, candidates, opt);
  out.add("verify_axioms.json", axiom_report_to_json(checks) + "\n");
  for (const AxiomCheck& c : checks)
    if (c.verdict == "fail") return 1;
  return 0;
}

int verify_example59(const ExperimentConfig& cfg, OutputBundle& out) {
  GroupPresentation pres = cfg.presentation();
  OrbitBall ball = enumerate_ball(pres, cfg.ball);
  ThetaSubset theta = ThetaSubset::full(cfg.d);
  Functional phi = cfg.phi();

  // the full-theta regular limit set must be empty: every orbit element
  // has a vanishing middle root value
  std::size_t regular_flags = limit_set_sample(ball, pres, theta, 0.1).size();

  auto direction_flag = [&](double ax, double ay) {
    Matrix basis(4, 3);
    basis(0, 0) = std::cos(ax);
    basis(1, 0) = std::sin(ax);
    basis(2, 1) = std::cos(ay);
    basis(3, 1) = std::sin(ay);
    basis(2, 2) = -std::sin(ay);
    basis(3, 2) = std::cos(ay);
    return flag_from_columns(basis, {1, 2, 3});
  };

  ShadowFamily family = make_shadow_family(pres, ball, theta, phi, 1);
  Rng rng(cfg.seed);
  std::uniform_real_distribution<double> uang(0.0, 3.141592653589793);
  const std::size_t n_dirs = 40;
  std::size_t with_chain = 0, contracting = 0;
  for (std::size_t i = 0; i < n_dirs; ++i) {
    CompactificationPoint xi = CompactificationPoint::from_boundary(
        embed_flag(direction_flag(uang(rng), uang(rng)), theta));
    ConicalChain chain = conical_witness(xi, family, 3.0, 5);
    if (chain.found) ++with_chain;
    if (chain.contracting) ++contracting;
  }
  double conical_fraction = double(with_chain) / double(n_dirs);

  // shadows along a diverging sequence keep a fat second factor: points
  // sharing the base direction but differing in the fiber stay members,
  // so the diameter cannot collapse
  double min_diam = std::numeric_limits<double>::infinity();
  {
    // attracting direction of the hyperbolic element t u
    Matrix tu = pres.gen(0) * pres.gen(2);
    double lam = (tu(0, 0) + tu(1, 1) + std::sqrt((tu(0, 0) + tu(1, 1)) *
                                                      (tu(0, 0) + tu(1, 1)) -
                                                  4.0)) /
                 2.0;
    double ax = std::atan2(lam - tu(0, 0), tu(0, 1));
    std::vector<CompactificationPoint> cands;
    for (int k = 0; k < 8; ++k)
      cands.push_back(CompactificationPoint::from_boundary(
          embed_flag(direction_flag(ax, 3.141592653589793 * double(k) / 8.0), theta)));
    Word w;
    for (int n = 1; n <= 8; ++n) {
      w.push_back(char(0));
      w.push_back(char(2));
      if (n < 3) continue;  // let the sequence escape before measuring
      ShadowSpec spec{make_action_word(pres, w, theta), 3.0};
      min_diam = std::min(min_diam,
                          shadow_diameter(spec, cands, cfg.probe_depth, cfg.seed));
    }
  }

  bool pass = regular_flags == 0 && conical_fraction >= 0.9 && contracting == 0 &&
              min_diam > 0.3;
  json j = {{"suite", "example59"},
            {"regular_limit_flags", regular_flags},
            {"directions", n_dirs},
            {"conical_fraction", conical_fraction},
            {"contracting_chains", contracting},
            {"min_sequence_diameter", min_diam},
            {"pass", pass}};
  out.add("verify_example59.json", j.dump(2) + "\n");
  return pass ? 0 : 1;
}

}  // namespace

int cmd_verify(const ExperimentConfig& cfg, const std::string& out_dir,
               const std::string& suite) {
  OutputBundle out(out_dir);
  int rc;
  if (suite == "embedding")
    rc = verify_embedding(cfg, out);
  else if (suite == "shadows")
    rc = verify_shadows(cfg, out);
  else if (suite == "shadow-lemma")
    rc = verify_shadow_lemma(cfg, out);
  else if (suite == "axioms")
    rc = verify_axioms(cfg, out);
  else if (suite == "example59")
    rc = verify_example59(cfg, out);
  else
    throw ConfigError("verify: unknown suite '" + suite + "'");
  out.flush();  // reports are written even when the suite fails
  return rc;
}

int cmd_limit_set(const ExperimentConfig& cfg, const std::string& out_dir) {
  GroupPresentation pres = cfg.presentation();
  OrbitBall ball = enumerate_ball(pres, cfg.ball);
  ThetaSubset theta = cfg.theta();
  std::vector<LimitFlagSample> flags = limit_set_sample(ball, pres, theta, 0.1);

  std::ostringstream csv;
  csv << "word,margin";
  for (std::size_t k : theta.ks) {
    std::size_t m = binomial(cfg.d, k);
    for (std::size_t j = 0; j < m; ++j) csv << ",k" << k << "_c" << j;
  }
  csv << '\n';
  for (const LimitFlagSample& f : flags) {
    csv << word_label(pres, f.word) << ',' << fmt_double(f.margin);
    for (std::size_t k : theta.ks) csv << ',' << sign_normalized_coords(f.flag.wedge_line(k));
    csv << '\n';
  }

  OutputBundle out(out_dir);
  out.add("limit_set.csv", csv.str());
  out.flush();
  return 0;
}

namespace {

ExperimentConfig resolve_config(const std::string& spec_path) {
  if (std::filesystem::exists(spec_path)) return load_config(spec_path);
  for (const std::string& name : builtin_config_names())
    if (name == spec_path) return builtin_config(name);
  throw ConfigError("config: '" + spec_path + "' is neither a file nor a builtin name");
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"horofunction compactification and Patterson-Sullivan toolkit"};
  app.require_subcommand(1);

  std::string config_spec, out_dir = ".", suite = "embedding";
  unsigned threads = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_spec, "config file path or builtin name")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--threads", threads, "worker threads (0 = config value)");
    sub->add_option("--seed", seed, "seed override")->each([&](const std::string&) {
      seed_set = true;
    });
  };

  CLI::App* orbit = app.add_subcommand("orbit", "enumerate the orbit ball");
  CLI::App* exponent = app.add_subcommand("exponent", "estimate the critical exponent");
  CLI::App* measure = app.add_subcommand("measure", "build the orbit measure");
  CLI::App* shadow_lemma =
      app.add_subcommand("shadow-lemma", "shadow-mass ratio statistics");
  CLI::App* verify = app.add_subcommand("verify", "run an invariant suite");
  CLI::App* limit_set = app.add_subcommand("limit-set", "sample limit flags");
  for (CLI::App* sub : {orbit, exponent, measure, shadow_lemma, verify, limit_set})
    add_common(sub);
  verify->add_option("--suite", suite,
                     "embedding | shadows | shadow-lemma | axioms | example59");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    ExperimentConfig cfg = resolve_config(config_spec);
    if (threads > 0) cfg.ball.threads = threads;
    if (seed_set) cfg.seed = seed;

    if (orbit->parsed()) return cmd_orbit(cfg, out_dir);
    if (exponent->parsed()) return cmd_exponent(cfg, out_dir);
    if (measure->parsed()) return cmd_measure(cfg, out_dir);
    if (shadow_lemma->parsed()) return cmd_shadow_lemma(cfg, out_dir);
    if (verify->parsed()) return cmd_verify(cfg, out_dir, suite);
    if (limit_set->parsed()) return cmd_limit_set(cfg, out_dir);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace horops
