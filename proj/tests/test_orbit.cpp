#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "horops/config.hpp"
#include "horops/exterior.hpp"
#include "horops/orbit.hpp"

using namespace horops;

namespace {

GroupPresentation cyclic_pres() {
  return GroupPresentation(3, {"a"}, {Matrix::diagonal({4.0, 1.0, 0.25})});
}

GroupPresentation modular_pres() {
  // T and U generate all of SL(2,Z), so the ball has genuine collisions
  return GroupPresentation(2, {"t", "u"},
                           {Matrix::from_rows({{1, 1}, {0, 1}}),
                            Matrix::from_rows({{1, 0}, {1, 1}})});
}

// Brute-force orbit count: every word over all four slots up to the given
// length, matrices compared exactly (integer entries stay exact in doubles
// at these lengths).  Independent of the BFS and of free reduction.
std::size_t modular_brute_count(std::size_t max_len) {
  GroupPresentation pres = modular_pres();
  std::set<std::array<long long, 4>> seen;
  std::vector<Matrix> frontier{Matrix::identity(2)};
  auto key = [](const Matrix& m) {
    return std::array<long long, 4>{
        (long long)std::llround(m(0, 0)), (long long)std::llround(m(0, 1)),
        (long long)std::llround(m(1, 0)), (long long)std::llround(m(1, 1))};
  };
  seen.insert(key(Matrix::identity(2)));
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<Matrix> next;
    for (const Matrix& m : frontier)
      for (std::size_t s = 0; s < 4; ++s) {
        Matrix p = m * pres.gen(s);
        next.push_back(p);
        seen.insert(key(p));
      }
    frontier = std::move(next);
  }
  return seen.size();
}

}  // namespace

TEST_CASE("word helpers") {
  GroupPresentation pres = modular_pres();
  CHECK(word_label(pres, Word{}) == "e");
  Word w;
  w.push_back(0);  // t
  w.push_back(3);  // u~
  CHECK(word_label(pres, w) == "t.u~");
  Word wi = word_inverse(w);
  CHECK(word_label(pres, wi) == "u.t~");
  CHECK(GroupPresentation::inverse_slot(0) == 1);
  CHECK(GroupPresentation::inverse_slot(1) == 0);
  CHECK(GroupPresentation::inverse_slot(2) == 3);

  // concatenation cancels across the seam, possibly fully
  CHECK(word_reduced_concat(w, wi).empty());
  Word a;
  a.push_back(0);
  a.push_back(2);  // t.u
  Word b;
  b.push_back(3);
  b.push_back(0);  // u~.t
  Word ab = word_reduced_concat(a, b);
  CHECK(ab.size() == 2);
  CHECK(word_label(pres, ab) == "t.t");

  CHECK(max_entry_diff(word_matrix(pres, w), pres.gen(0) * pres.gen(3)) == 0.0);
  CHECK(max_entry_diff(word_matrix(pres, Word{}), Matrix::identity(2)) == 0.0);
}

TEST_CASE("word exterior products match exterior powers of the product") {
  ExperimentConfig cfg = builtin_config("schottky_sl2");
  GroupPresentation pres = cfg.presentation();
  Word w;
  for (int s : {0, 2, 0, 3, 1}) w.push_back((char)s);
  Matrix m = word_matrix(pres, w);
  CHECK(max_entry_diff(word_exterior(pres, w, 1, false), m) < 1e-12);
  Matrix mi = word_matrix(pres, word_inverse(w));
  CHECK(max_entry_diff(word_exterior(pres, w, 1, true), mi) < 1e-10);

  ExperimentConfig cfg4 = builtin_config("example59_sl4");
  GroupPresentation pres4 = cfg4.presentation();
  Matrix m4 = word_matrix(pres4, w);
  CHECK(max_entry_diff(word_exterior(pres4, w, 2, false), exterior_power(m4, 2)) <
        1e-9 * exterior_power(m4, 2).max_abs_entry());
}

TEST_CASE("cyclic ball has two elements per length plus the identity") {
  GroupPresentation pres = cyclic_pres();
  BallOptions opts;
  opts.max_word_length = 10;
  OrbitBall ball = enumerate_ball(pres, opts);
  CHECK(ball.elements.size() == 21);
  REQUIRE(ball.shell_start.size() == 12);  // lengths 0..10 plus end sentinel
  for (std::size_t l = 1; l <= 10; ++l)
    CHECK(ball.shell_start[l] == 2 * l - 1);
  CHECK(ball.shell_start.back() == ball.elements.size());
  CHECK(ball.elements[0].word.empty());
}

TEST_CASE("ball ordering and shell integrity") {
  ExperimentConfig cfg = builtin_config("schottky_sl2");
  GroupPresentation pres = cfg.presentation();
  BallOptions opts;
  opts.max_word_length = 5;
  OrbitBall ball = enumerate_ball(pres, opts);
  for (std::size_t i = 1; i < ball.elements.size(); ++i) {
    const OrbitElement& p = ball.elements[i - 1];
    const OrbitElement& q = ball.elements[i];
    bool ordered = p.length() < q.length() ||
                   (p.length() == q.length() && p.word < q.word);
    CHECK(ordered);
  }
  for (std::size_t l = 0; l + 1 < ball.shell_start.size(); ++l) {
    std::size_t idx = ball.shell_start[l];
    REQUIRE(idx < ball.elements.size());
    CHECK(ball.elements[idx].length() == l);
    if (idx > 0) CHECK(ball.elements[idx - 1].length() + 1 == l);
  }
  for (const OrbitElement& el : ball.elements) {
    // stored inverse really is the inverse, kappa is dominant and traceless
    CHECK(max_entry_diff(el.mat * el.inv, Matrix::identity(2)) < 1e-9);
    double trace = 0.0;
    for (std::size_t i = 0; i + 1 < el.kappa.size(); ++i)
      CHECK(el.kappa[i] >= el.kappa[i + 1] - 1e-12);
    for (double x : el.kappa) trace += x;
    CHECK(std::abs(trace) < 1e-9);
    CartanVector direct = cartan_projection(el.mat);
    for (std::size_t i = 0; i < el.kappa.size(); ++i)
      CHECK(el.kappa[i] == doctest::Approx(direct.h[i]).epsilon(1e-8));
  }
}

TEST_CASE("free group counts") {
  ExperimentConfig cfg = builtin_config("schottky_sl2");
  GroupPresentation pres = cfg.presentation();
  BallOptions opts;
  opts.max_word_length = 1;
  CHECK(enumerate_ball(pres, opts).elements.size() == 5);
  opts.max_word_length = 12;
  // 1 + 4 * (3^12 - 1) / 2 reduced words, none of which may collide
  OrbitBall big = enumerate_ball(pres, opts);
  CHECK(big.elements.size() == 1062881u);
}

TEST_CASE("modular ball count matches brute force and shows collisions") {
  std::size_t oracle = modular_brute_count(4);
  CHECK(oracle < 161);  // 161 would be a free group of rank two
  GroupPresentation pres = modular_pres();
  BallOptions opts;
  opts.max_word_length = 4;
  OrbitBall ball = enumerate_ball(pres, opts);
  CHECK(ball.elements.size() == oracle);
  // every element keeps a shortest witness: its word length is minimal
  // among all brute-force words reaching that matrix
  std::map<std::array<long long, 4>, std::size_t> best;
  std::vector<std::pair<Matrix, std::size_t>> frontier{{Matrix::identity(2), 0}};
  auto key = [](const Matrix& m) {
    return std::array<long long, 4>{
        (long long)std::llround(m(0, 0)), (long long)std::llround(m(0, 1)),
        (long long)std::llround(m(1, 0)), (long long)std::llround(m(1, 1))};
  };
  best[key(Matrix::identity(2))] = 0;
  for (std::size_t len = 1; len <= 4; ++len) {
    std::vector<std::pair<Matrix, std::size_t>> next;
    for (const auto& [m, l] : frontier)
      for (std::size_t s = 0; s < 4; ++s) {
        Matrix p = m * pres.gen(s);
        auto k = key(p);
        if (!best.count(k)) best[k] = len;
        next.push_back({p, len});
      }
    frontier = std::move(next);
  }
  for (const OrbitElement& el : ball.elements)
    CHECK(el.length() == best.at(key(el.mat)));
}

TEST_CASE("enumeration is deterministic") {
  ExperimentConfig cfg = builtin_config("schottky_sl2");
  GroupPresentation pres = cfg.presentation();
  BallOptions opts;
  opts.max_word_length = 6;
  OrbitBall a = enumerate_ball(pres, opts);
  OrbitBall b = enumerate_ball(pres, opts);
  REQUIRE(a.elements.size() == b.elements.size());
  for (std::size_t i = 0; i < a.elements.size(); ++i) {
    CHECK(a.elements[i].word == b.elements[i].word);
    CHECK(max_entry_diff(a.elements[i].mat, b.elements[i].mat) == 0.0);
  }
}

TEST_CASE("cap aborts enumeration") {
  ExperimentConfig cfg = builtin_config("schottky_sl2");
  GroupPresentation pres = cfg.presentation();
  BallOptions opts;
  opts.max_word_length = 8;
  opts.cap = 10;
  CHECK_THROWS_AS(enumerate_ball(pres, opts), CapExceeded);
}

TEST_CASE("lookup maps matrices back to indices") {
  GroupPresentation pres = modular_pres();
  BallOptions opts;
  opts.max_word_length = 4;
  OrbitBall ball = enumerate_ball(pres, opts);
  OrbitLookup lookup(ball);
  for (std::size_t i = 0; i < ball.elements.size(); ++i) {
    auto hit = lookup.find(ball.elements[i].mat);
    REQUIRE(hit.has_value());
    CHECK(*hit == i);
  }
  CHECK(!lookup.find(Matrix::from_rows({{100, 0}, {0, 0.01}})).has_value());
}

TEST_CASE("regularity verdicts separate divergent from bounded margins") {
  {
    ExperimentConfig cfg = builtin_config("schottky_sl2");
    BallOptions opts;
    opts.max_word_length = 8;
    OrbitBall ball = enumerate_ball(cfg.presentation(), opts);
    RegularityReport rep = regularity_report(ball, cfg.theta());
    CHECK(rep.verdict == "growing");
    CHECK(rep.slope_last_half > 0.0);
    CHECK(rep.rows.size() == 9);
    for (const RegularityRow& row : rep.rows) CHECK(row.min_margin <= row.mean_margin + 1e-12);
  }
  {
    ExperimentConfig cfg = builtin_config("example59_sl4");
    BallOptions opts;
    opts.max_word_length = 8;
    OrbitBall ball = enumerate_ball(cfg.presentation(), opts);
    RegularityReport rep = regularity_report(ball, cfg.theta());
    CHECK(rep.verdict == "bounded");
  }
}

TEST_CASE("limit flag samples") {
  {
    // a cyclic diagonal group accumulates on exactly two flags
    GroupPresentation pres = cyclic_pres();
    BallOptions opts;
    opts.max_word_length = 20;
    OrbitBall ball = enumerate_ball(pres, opts);
    ThetaSubset theta(3, {1, 2});
    auto flags = limit_set_sample(ball, pres, theta, 0.1);
    CHECK(flags.size() == 2);
    // attracting flag of a dominant diagonal: the standard one
    bool saw_standard = false;
    for (const auto& s : flags) {
      Matrix line = s.flag.subspace(1);
      if (std::abs(std::abs(line(0, 0)) - 1.0) < 1e-9) saw_standard = true;
    }
    CHECK(saw_standard);
  }
  {
    // block-diagonal embedding never clears a full-flag margin floor
    ExperimentConfig cfg = builtin_config("example59_sl4");
    BallOptions opts;
    opts.max_word_length = 6;
    OrbitBall ball = enumerate_ball(cfg.presentation(), opts);
    auto flags = limit_set_sample(ball, cfg.presentation(), cfg.theta(), 0.1);
    CHECK(flags.empty());
  }
}

TEST_CASE("orbit csv layout") {
  GroupPresentation pres = cyclic_pres();
  BallOptions opts;
  opts.max_word_length = 3;
  OrbitBall ball = enumerate_ball(pres, opts);
  ThetaSubset theta(3, {1, 2});
  Functional phi(3, {1.0, 0.0});
  std::string path = "test_orbit_tmp.csv";
  write_orbit_csv(path, ball, pres, theta, phi);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header == "word,word_length,kappa_1,kappa_2,kappa_3,theta_margin,phi_length");
  std::size_t rows = 0;
  std::string line;
  std::vector<std::string> first_cols;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++rows;
    std::size_t commas = 0;
    for (char c : line) commas += (c == ',');
    CHECK(commas == 6);
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    first_cols.push_back(cell);
  }
  CHECK(rows == ball.elements.size());
  CHECK(first_cols[0] == "e");
  CHECK(first_cols[1] == "a");
  CHECK(first_cols[2] == "a~");
  std::remove(path.c_str());
}
