#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spongelab/stats.hpp"

using namespace spongelab;

TEST_CASE("rational arithmetic normalizes and compares") {
  Rational a(1, 2), b(2, 4);
  CHECK(a == b);
  CHECK((a + b) == Rational(1));
  CHECK((a - b) == Rational(0));
  CHECK((a * b) == Rational(1, 4));
  CHECK((a / b) == Rational(1));
  CHECK(Rational(-1, -2) == Rational(1, 2));
  CHECK(Rational(1, -2) < Rational(0));
  CHECK(Rational(1, 3).str() == "1/3");
  CHECK_THROWS_AS(Rational(1, 0), parameter_error);
}

TEST_CASE("tv distance basics") {
  auto p = Distribution::uniform_exact(2);
  auto q = Distribution::exact_from({Rational(1), Rational(0)});
  CHECK(tv_distance(p, p) == 0.0);
  CHECK(tv_distance_exact(p, q) == Rational(1, 2));
  auto point0 = Distribution::exact_from({Rational(1), Rational(0)});
  auto point1 = Distribution::exact_from({Rational(0), Rational(1)});
  CHECK(tv_distance_exact(point0, point1) == Rational(1));
  CHECK_THROWS_AS(tv_distance(p, Distribution::uniform_exact(3)), parameter_error);
}

TEST_CASE("tv distance is symmetric and triangular on random triples") {
  DetRng rng(Seed256::from_u64(42));
  for (int trial = 0; trial < 20; ++trial) {
    auto draw = [&] {
      std::vector<double> w(8);
      double sum = 0;
      for (auto& v : w) {
        v = rng.uniform01() + 1e-9;
        sum += v;
      }
      double acc = 0;
      for (size_t i = 0; i + 1 < w.size(); ++i) {
        w[i] /= sum;
        acc += w[i];
      }
      w.back() = 1.0 - acc;
      return Distribution::from_floats(w);
    };
    auto a = draw(), b = draw(), c = draw();
    CHECK(tv_distance(a, b) == doctest::Approx(tv_distance(b, a)));
    CHECK(tv_distance(a, c) <= tv_distance(a, b) + tv_distance(b, c) + 1e-12);
  }
}

TEST_CASE("sponge truth-table law at (1,1) is {8,8,4,4}/24") {
  SpongeParams p(1, 1);
  auto law = sponge_truthtable_law(p);
  REQUIRE(law.support() == 4);
  // keys: [f(0), f(1)] packed low-to-high: 00 -> const0, 01 -> id, 10 -> not, 11 -> const1
  CHECK(law.rational_weights[0] == Rational(4, 24));   // constant 0
  CHECK(law.rational_weights[1] == Rational(8, 24));   // identity
  CHECK(law.rational_weights[2] == Rational(8, 24));   // negation
  CHECK(law.rational_weights[3] == Rational(4, 24));   // constant 1
  Rational sum(0);
  for (auto& w : law.rational_weights) sum = sum + w;
  CHECK(sum == Rational(1));
}

TEST_CASE("exhaustive laws at (1,2) meet the desk-scale distance bound") {
  SpongeParams p(1, 2);
  auto law = sponge_truthtable_law(p);
  auto tv_fn = tv_distance_exact(law, Distribution::uniform_exact(law.support()));
  auto tv_perm = symmetrized_vs_uniform_tv(p);
  // the bound 2 * 2^(-r/2) at r = 1
  double bound = 2.0 * std::pow(2.0, -0.5);
  CHECK(tv_fn.to_double() <= bound);
  CHECK(tv_perm.to_double() <= bound);
  CHECK(tv_fn > Rational(0));
  CHECK(tv_perm > Rational(0));
  MESSAGE("tv(function law, uniform) = ", tv_fn.str());
  MESSAGE("tv(permutation law, uniform) = ", tv_perm.str());
}

TEST_CASE("exact law is independent of the enumeration order") {
  SpongeParams p(1, 2);
  auto law = sponge_truthtable_law(p);
  // recompute by visiting permutations in a scrambled rank order
  std::vector<int64_t> counts(law.support(), 0);
  const uint64_t total = factorial(8);
  PointPermutation scramble(Seed256::from_u64(99), total);
  for (uint64_t i = 0; i < total; ++i) {
    SmallPerm pi = perm_unrank(8, scramble.fwd(i));
    auto t = small_sponge_table(pi, p);
    uint64_t key = 0;
    for (size_t j = t.size(); j-- > 0;) key = (key << p.r) | t[j];
    ++counts[size_t(key)];
  }
  for (size_t i = 0; i < counts.size(); ++i)
    CHECK(law.rational_weights[i] == Rational(counts[i], int64_t(total)));
}

TEST_CASE("chi-square endpoints") {
  CHECK(chi_square_uniformity({100, 100, 100, 100}) == doctest::Approx(1.0));
  std::vector<uint64_t> lopsided(24, 0);
  lopsided[0] = 1000;
  // expected count is ~41.7 per cell; all mass on one cell is astronomically unlikely
  CHECK(chi_square_uniformity(lopsided) < 1e-9);
  CHECK_THROWS_AS(chi_square_uniformity({1, 1}), parameter_error);
}

TEST_CASE("hoeffding radius convention") {
  CHECK(hoeffding_radius(10000) == doctest::Approx(std::sqrt(std::log(2e6) / 20000.0)));
  CHECK(binomial_sigma(0.5, 100) == doctest::Approx(0.05));
}

TEST_CASE("truncation curve: zero queries, monotonicity, shape") {
  const uint32_t n = 12, m = 6;  // q* = 2^9
  std::vector<uint64_t> grid{0, 32, 128, 512};
  auto curve = truncation_advantage_curve(n, m, grid, 4000, Seed256::from_u64(6));
  REQUIRE(curve.size() == 4);
  CHECK(curve[0].advantage == 0.0);
  // monotone nondecreasing within combined confidence
  for (size_t i = 0; i + 1 < curve.size(); ++i)
    CHECK(curve[i].advantage <=
          curve[i + 1].advantage + 3.0 * (curve[i].sigma + curve[i + 1].sigma));
  // at q = 2^((n+m)/2) the advantage is solidly detectable
  CHECK(curve[3].advantage > 10.0 * curve[3].sigma);
  CHECK(curve[3].advantage > 0.1);
}
