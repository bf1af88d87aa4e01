#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "horops/config.hpp"
#include "horops/patterson.hpp"
#include "test_support.hpp"

using namespace horops;

namespace {

GroupPresentation cyclic_pres() {
  return GroupPresentation(3, {"a"}, {Matrix::diagonal({4.0, 1.0, 0.25})});
}

OrbitBall cyclic_ball(std::size_t len) {
  BallOptions opts;
  opts.max_word_length = len;
  return enumerate_ball(cyclic_pres(), opts);
}

// index of a^n in the cyclic ball: shells hold {a^l, a~^l} in slot order
std::size_t pow_index(int n) {
  return n > 0 ? std::size_t(2 * n - 1) : (n < 0 ? std::size_t(-2 * n) : 0);
}

const double kLog4 = std::log(4.0);

}  // namespace

TEST_CASE("phi length closed form and subadditivity") {
  Functional phi(3, {1.0, 0.0});
  OrbitBall ball = cyclic_ball(8);
  for (int n = 1; n <= 8; ++n) {
    CHECK(phi_length(phi, ball.elements[pow_index(n)]) ==
          doctest::Approx(n * kLog4).epsilon(1e-10));
    CHECK(phi_length(phi, ball.elements[pow_index(-n)]) ==
          doctest::Approx(n * kLog4).epsilon(1e-10));
  }

  std::mt19937_64 rng(80);
  Functional phi2(3, {0.7, 0.4});
  for (int it = 0; it < 200; ++it) {
    Matrix a = test::random_sl(rng, 3);
    Matrix b = test::random_sl(rng, 3);
    double lab = phi2.apply(cartan_projection(a * b));
    double la = phi2.apply(cartan_projection(a));
    double lb = phi2.apply(cartan_projection(b));
    CHECK(lab <= la + lb + 1e-9);
  }
}

TEST_CASE("poincare partial sums over the cyclic ball") {
  Functional phi(3, {1.0, 0.0});
  OrbitBall ball = cyclic_ball(12);
  double s = 0.4;
  PoincareSum ps = poincare_partial_sum(ball, phi, s);
  REQUIRE(ps.shell_sums.size() == 13);
  CHECK(ps.shell_sums[0] == 1.0);
  for (std::size_t l = 1; l <= 12; ++l)
    CHECK(ps.shell_sums[l] ==
          doctest::Approx(2.0 * std::exp(-s * double(l) * kLog4)).epsilon(1e-12));
  double total = std::accumulate(ps.shell_sums.begin(), ps.shell_sums.end(), 0.0);
  CHECK(ps.value == doctest::Approx(total).epsilon(1e-14));
  REQUIRE(ps.tail_ratios.size() == 12);
  // first ratio carries the count jump from one atom to two; beyond that
  // the shells decay geometrically
  CHECK(ps.tail_ratios[0] ==
        doctest::Approx(2.0 * std::exp(-s * kLog4)).epsilon(1e-10));
  for (std::size_t i = 1; i < ps.tail_ratios.size(); ++i)
    CHECK(ps.tail_ratios[i] == doctest::Approx(std::exp(-s * kLog4)).epsilon(1e-10));
}

TEST_CASE("orbit weights decay at slope minus s") {
  Functional phi(3, {1.0, 0.0});
  OrbitBall ball = cyclic_ball(20);
  AtomicMeasure mu = patterson_measure(ball, phi, 0.3);
  REQUIRE(mu.weights.size() == ball.elements.size());
  double total = std::accumulate(mu.weights.begin(), mu.weights.end(), 0.0);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  for (int n = 1; n < 20; ++n) {
    CHECK(mu.weights[pow_index(n + 1)] / mu.weights[pow_index(n)] ==
          doctest::Approx(std::exp(-0.3 * kLog4)).epsilon(1e-10));
    CHECK(mu.weights[pow_index(n)] == mu.weights[pow_index(-n)]);
  }
  // the raw log mass matches an independently accumulated partition sum
  double z = 1.0;
  for (int n = 1; n <= 20; ++n) z += 2.0 * std::exp(-0.3 * n * kLog4);
  CHECK(mu.log_total_raw == doctest::Approx(std::log(z)).epsilon(1e-10));

  AtomicMeasure poly = patterson_measure(ball, phi, 0.3, HMode::kPolynomial, 0.5);
  for (int n = 2; n < 20; ++n) {
    double expected = std::exp(-0.3 * kLog4) *
                      std::sqrt((1.0 + (n + 1) * kLog4) / (1.0 + n * kLog4));
    CHECK(poly.weights[pow_index(n + 1)] / poly.weights[pow_index(n)] ==
          doctest::Approx(expected).epsilon(1e-8));
  }
}

TEST_CASE("critical exponent of linear growth is zero") {
  GroupPresentation pres = cyclic_pres();
  BallOptions opts;
  opts.max_word_length = 128;
  OrbitBall ball = enumerate_ball(pres, opts);
  Functional phi(3, {1.0, 0.0});
  ExponentEstimate est = critical_exponent(ball, pres, phi);
  CHECK(std::abs(est.delta_hat) < 0.05);
  CHECK(est.window_lo == doctest::Approx(0.3 * est.window_hi));
  CHECK(est.window_hi <= est.formula_cap + 1e-9);
  CHECK(est.conf_lo <= est.delta_hat + 1e-12);
  CHECK(est.conf_hi >= est.delta_hat - 1e-12);
  CHECK(est.samples > 10);

  BallOptions tiny;
  tiny.max_word_length = 2;
  OrbitBall small = enumerate_ball(pres, tiny);
  CHECK_THROWS(critical_exponent(small, pres, phi));
}

TEST_CASE("counting exponent and series abscissa agree on a free group") {
  ExperimentConfig cfg = builtin_config("schottky_sl2");
  GroupPresentation pres = cfg.presentation();
  BallOptions opts;
  opts.max_word_length = 10;
  OrbitBall ball = enumerate_ball(pres, opts);
  ExponentEstimate est = critical_exponent(ball, pres, cfg.phi());
  double abscissa = poincare_abscissa(ball, cfg.phi());
  CHECK(est.delta_hat > 0.5);
  CHECK(std::abs(est.delta_hat - abscissa) / abscissa < 0.10);
}

TEST_CASE("quasi invariance of the cyclic measure") {
  GroupPresentation pres = cyclic_pres();
  OrbitBall ball = cyclic_ball(40);
  OrbitLookup lookup(ball);
  ThetaSubset theta(3, {1, 2});
  Functional phi(3, {1.0, 0.0});
  AtomicMeasure mu = patterson_measure(ball, phi, 0.3);
  Word gamma_a;
  gamma_a.push_back((char)0);
  auto reports = quasi_invariance_report(mu, ball, pres, lookup, theta,
                                         {Word{}, gamma_a});
  REQUIRE(reports.size() == 2);

  // the identity permutes nothing: deviation vanishes bit for bit
  CHECK(reports[0].max_deviation == 0.0);
  CHECK(!reports[0].ball_too_small);
  for (const QuasiShellRow& row : reports[0].shells) {
    CHECK(row.unmatched == 0);
    CHECK(row.lost_mass_fraction == 0.0);
  }

  // translation by the generator matches the cocycle density on every
  // matched atom; only one of the two outermost atoms leaves the ball
  CHECK(reports[1].max_deviation < 1e-9);
  CHECK(!reports[1].ball_too_small);
  const QuasiShellRow& outer = reports[1].shells.back();
  CHECK(outer.unmatched == 1);
  CHECK(outer.lost_mass_fraction == doctest::Approx(0.5));
  std::size_t matched = 0, unmatched = 0;
  for (const QuasiShellRow& row : reports[1].shells) {
    matched += row.matched;
    unmatched += row.unmatched;
  }
  CHECK(matched + unmatched == ball.elements.size());
  CHECK(unmatched == 1);
}

TEST_CASE("shadow lemma ratios for explicit geometric masses") {
  GroupPresentation pres = cyclic_pres();
  OrbitBall ball = cyclic_ball(40);
  ThetaSubset theta(3, {1, 2});
  Functional phi(3, {1.0, 0.0});
  double s = 0.3;
  AtomicMeasure mu = patterson_measure(ball, phi, s);

  // identity shadow: every atom is a member, total mass one, ratio one
  ShadowLemmaReport at_e = shadow_lemma_report(mu, ball, pres, theta, 1.0, s, {0});
  REQUIRE(at_e.rows.size() == 1);
  CHECK(at_e.rows[0].members == ball.elements.size());
  CHECK(at_e.rows[0].shadow_mass == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(at_e.rows[0].ratio == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(at_e.empty_shadows == 0);

  // the shadow of a^m at modest radius captures exactly the forward tail
  std::vector<std::size_t> targets;
  for (int m : {2, 5, 9}) targets.push_back(pow_index(m));
  ShadowLemmaReport rep = shadow_lemma_report(mu, ball, pres, theta, 1.0, s, targets);
  REQUIRE(rep.rows.size() == 3);
  std::size_t ti = 0;
  for (int m : {2, 5, 9}) {
    const ShadowLemmaRow& row = rep.rows[ti++];
    CHECK(row.members == std::size_t(40 - m + 1));
    double mass = 0.0;
    for (int n = m; n <= 40; ++n) mass += mu.weights[pow_index(n)];
    CHECK(row.shadow_mass == doctest::Approx(mass).epsilon(1e-12));
    CHECK(row.phi_len == doctest::Approx(m * kLog4).epsilon(1e-10));
    CHECK(row.ratio ==
          doctest::Approx(mass / std::exp(-s * m * kLog4)).epsilon(1e-10));
  }
  CHECK(rep.min_ratio <= rep.median_ratio);
  CHECK(rep.median_ratio <= rep.max_ratio);
  CHECK(rep.implied_c >= rep.max_ratio);

  std::string path = "test_shadow_lemma_tmp.csv";
  write_shadow_lemma_csv(path, rep);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header == "gamma_word,phi_length,shadow_mass,ratio");
  std::size_t rows = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 3);
  std::remove(path.c_str());
}

TEST_CASE("axiom report is reproducible bit for bit") {
  ExperimentConfig cfg = builtin_config("schottky_sl2");
  GroupPresentation pres = cfg.presentation();
  BallOptions opts;
  opts.max_word_length = 6;
  OrbitBall ball = enumerate_ball(pres, opts);
  AtomicMeasure mu = patterson_measure(ball, cfg.phi(), 1.1);
  std::vector<HorofunctionPoint> candidates;
  for (const LimitFlagSample& s :
       limit_set_sample(ball, pres, cfg.theta(), 1.0)) {
    candidates.push_back(embed_flag(s.flag, cfg.theta()));
    if (candidates.size() == 8) break;
  }
  REQUIRE(!candidates.empty());
  auto first = ps_axiom_report(ball, pres, mu, cfg.theta(), candidates);
  auto second = ps_axiom_report(ball, pres, mu, cfg.theta(), candidates);
  std::string ja = axiom_report_to_json(first);
  std::string jb = axiom_report_to_json(second);
  CHECK(ja == jb);
  REQUIRE(first.size() == 8);
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].axiom == std::string("PS") + std::to_string(i + 1));
    CHECK(!first[i].verdict.empty());
  }
}
