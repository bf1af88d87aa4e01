#include <doctest.h>

#include <cmath>
#include <random>

#include "horops/lie.hpp"
#include "horops/svd.hpp"
#include "horops/weyl.hpp"
#include "test_support.hpp"

using namespace horops;

namespace {
const double L4 = std::log(4.0);
}

TEST_CASE("trace zero is enforced on construction") {
  CartanVector v({1.0, 1.0, 1.0});
  CHECK(std::abs(v.h[0]) < 1e-15);
  CartanVector w({3.0, 0.0, 0.0});
  CHECK(w.h[0] == doctest::Approx(2.0));
  CHECK(w.h[1] == doctest::Approx(-1.0));
}

TEST_CASE("roots and weights on a closed form") {
  CartanVector v({L4, 0.0, -L4});
  CHECK(simple_root(v, 1) == doctest::Approx(L4));
  CHECK(simple_root(v, 2) == doctest::Approx(L4));
  CHECK(fundamental_weight(v, 1) == doctest::Approx(L4));
  CHECK(fundamental_weight(v, 2) == doctest::Approx(L4));
  CartanVector zero({0.0, 0.0, 0.0});
  CHECK(simple_root(zero, 1) == 0.0);
}

TEST_CASE("weights of a Cartan projection are log singular value products") {
  std::mt19937_64 rng(21);
  for (int it = 0; it < 200; ++it) {
    Matrix g = test::random_sl(rng, 3);
    CartanVector k = cartan_projection(g);
    Vec s = singular_values(g);
    double acc = 0.0;
    for (std::size_t j = 1; j <= 2; ++j) {
      acc += std::log(s[j - 1]);
      CHECK(fundamental_weight(k, j) == doctest::Approx(acc).epsilon(1e-9));
    }
  }
}

TEST_CASE("opposition involution") {
  CartanVector v({2.0, 1.0, -3.0});
  CartanVector iv = opposition_involution(v);
  CHECK(iv.h[0] == doctest::Approx(3.0));
  CHECK(iv.h[1] == doctest::Approx(-1.0));
  CHECK(iv.h[2] == doctest::Approx(-2.0));
  CartanVector back = opposition_involution(iv);
  for (std::size_t i = 0; i < 3; ++i) CHECK(back.h[i] == doctest::Approx(v.h[i]));

  // matches kappa of the inverse element
  std::mt19937_64 rng(22);
  for (int it = 0; it < 100; ++it) {
    Matrix g = test::random_sl(rng, 3);
    CartanVector a = opposition_involution(cartan_projection(g));
    CartanVector b = cartan_projection(inverse(g));
    CHECK((a - b).norm() < 1e-8);
  }
}

TEST_CASE("index involution on theta subsets") {
  ThetaSubset t1(3, {1});
  CHECK(istar_theta(t1) == std::vector<std::size_t>{2});
  ThetaSubset sym(3, {1, 2});
  CHECK(istar_theta(sym) == std::vector<std::size_t>{1, 2});
  ThetaSubset t13(4, {1, 3});
  CHECK(istar_theta(t13) == std::vector<std::size_t>{1, 3});
}

TEST_CASE("partial projection closed form for d=3 theta={1}") {
  // image must kill alpha_2 and keep omega_1: (H1, -H1/2, -H1/2)
  ThetaSubset theta(3, {1});
  CartanVector v({1.7, 0.4, -2.1});
  CartanVector p = partial_projection(theta, v);
  CHECK(p.h[0] == doctest::Approx(1.7));
  CHECK(p.h[1] == doctest::Approx(-0.85));
  CHECK(p.h[2] == doctest::Approx(-0.85));
}

TEST_CASE("partial projection is a projection with the stated properties") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> dist(-4, 4);
  for (int it = 0; it < 100; ++it) {
    std::size_t d = 3 + (it % 3);
    std::vector<std::size_t> ks;
    for (std::size_t k = 1; k < d; ++k)
      if (rng() & 1) ks.push_back(k);
    if (ks.empty()) ks.push_back(1);
    ThetaSubset theta(d, ks);
    Vec raw(d);
    for (double& x : raw) x = dist(rng);
    CartanVector v(raw);
    CartanVector p = partial_projection(theta, v);
    for (std::size_t k : ks)
      CHECK(fundamental_weight(p, k) == doctest::Approx(fundamental_weight(v, k)));
    for (std::size_t j = 1; j < d; ++j)
      if (!theta.contains(j)) CHECK(std::abs(simple_root(p, j)) < 1e-9);
    CartanVector pp = partial_projection(theta, p);
    CHECK((pp - p).norm() < 1e-9);  // idempotent
  }
  // full theta is the identity map
  ThetaSubset full = ThetaSubset::full(4);
  CartanVector v({1.0, 0.5, -0.2, -1.3});
  CHECK((partial_projection(full, v) - v).norm() < 1e-12);
}

TEST_CASE("weight reconstruction inverts the weight map on the face") {
  ThetaSubset theta(4, {1, 3});
  Vec target{0.7, -1.1};
  CartanVector v = vector_from_weights(theta, target);
  CHECK(fundamental_weight(v, 1) == doctest::Approx(0.7));
  CHECK(fundamental_weight(v, 3) == doctest::Approx(-1.1));
  CHECK(std::abs(simple_root(v, 2)) < 1e-9);  // lies in the face
}

TEST_CASE("gram systems stay well conditioned through d=6") {
  for (std::size_t d = 2; d <= 6; ++d) {
    CHECK(theta_gram_condition(ThetaSubset::full(d)) < 1e3);
    CHECK(theta_gram_condition(ThetaSubset(d, {1})) < 1e3);
  }
}

TEST_CASE("functional evaluation and support") {
  Functional phi(3, {2.0, -1.0});  // 2 omega_1 - omega_2
  CartanVector v({L4, 0.0, -L4});
  CHECK(phi.apply(v) == doctest::Approx(2.0 * L4 - L4));
  CHECK(phi.abs_coeff_sum() == doctest::Approx(3.0));
  CHECK(phi.supported_in(ThetaSubset(3, {1, 2})));
  CHECK(!phi.supported_in(ThetaSubset(3, {1})));
  Functional w2 = Functional::single_weight(3, 2);
  CHECK(w2.apply(v) == doctest::Approx(L4));
  CHECK(w2.supported_in(ThetaSubset(3, {2})));
}

TEST_CASE("functionals see only the projected part") {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> dist(-2, 2);
  ThetaSubset theta(4, {2});
  Functional phi(4, {0.0, 1.5, 0.0});
  for (int it = 0; it < 50; ++it) {
    Vec raw(4);
    for (double& x : raw) x = dist(rng);
    CartanVector v(raw);
    CHECK(phi.apply(partial_projection(theta, v)) == doctest::Approx(phi.apply(v)));
  }
}

TEST_CASE("chamber margin") {
  CartanVector v({L4, 0.0, -L4});
  CHECK(chamber_margin(v, ThetaSubset(3, {1})) == doctest::Approx(L4));
  CHECK(chamber_margin(v, ThetaSubset(3, {1, 2})) == doctest::Approx(L4));
  CartanVector zero({0.0, 0.0, 0.0});
  CHECK(chamber_margin(zero, ThetaSubset::full(3)) == 0.0);
}
