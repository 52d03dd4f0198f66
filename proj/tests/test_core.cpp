#include "helpers.hpp"
#include "oracles.hpp"

#include "lolab/ball.hpp"
#include "lolab/combinatorics.hpp"
#include "lolab/enumerate.hpp"
#include "lolab/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace lolab;
using testing::cfg;
using testing::prob;
using testing::rv;

TEST_CASE("rational parsing is exact") {
  CHECK(parse_rational("3/6") == Rational(1, 2));
  CHECK(parse_rational("-1.25") == Rational(-5, 4));
  CHECK(parse_rational("3e-2") == Rational(3, 100));
  CHECK(parse_rational("0.1") == Rational(1, 10));
  CHECK(parse_rational("0.10") == Rational(1, 10));
  CHECK(parse_rational("0.79") == Rational(79, 100));
  CHECK(parse_rational("010/08") == Rational(5, 4));
  CHECK_THROWS_AS(parse_rational("1/0"), InvalidInput);
  CHECK_THROWS_AS(parse_rational("abc"), InvalidInput);
  CHECK(rational_from_double(0.5) == Rational(1, 2));
  CHECK(to_string(Rational(-3, 2)) == "-3/2");
}

TEST_CASE("configs enforce the unit norm floor exactly") {
  CHECK_THROWS_AS(cfg(2, {{"0.6", "0.79"}}), InvalidInput);
  CHECK_NOTHROW(cfg(2, {{"0.6", "0.8"}}));
  CHECK_NOTHROW(cfg(2, {{"0.6", "0.79"}}, true));
  CHECK_THROWS_AS(cfg(2, {{"1"}}), InvalidInput);
}

TEST_CASE("enumeration of small configs") {
  SUBCASE("empty sum") {
    const auto c = enumerate_sums(VectorConfig::make(1, {}));
    REQUIRE(c.size() == 1);
    CHECK(c.rational_point(0) == rv({"0"}));
    CHECK(c.multiplicity(0) == 1);
  }
  SUBCASE("{1, 1}") {
    const auto c = enumerate_sums(cfg(1, {{"1"}, {"1"}}));
    REQUIRE(c.size() == 3);
    CHECK(c.multiplicity_of(rv({"-2"})) == 1);
    CHECK(c.multiplicity_of(rv({"0"})) == 2);
    CHECK(c.multiplicity_of(rv({"2"})) == 1);
  }
  SUBCASE("{e1, e2}") {
    const auto c = enumerate_sums(cfg(2, {{"1", "0"}, {"0", "1"}}));
    REQUIRE(c.size() == 4);
    for (const char* x : {"1", "-1"}) {
      for (const char* y : {"1", "-1"}) CHECK(c.multiplicity_of(rv({x, y})) == 1);
    }
  }
}

TEST_CASE("enumeration refuses configs above the cap") {
  std::vector<RationalVector> vs(9, rv({"1"}));
  const auto config = VectorConfig::make(1, vs);
  CHECK_THROWS_AS(enumerate_sums(config, {.max_n = 8}), CapExceeded);
  CHECK_NOTHROW(enumerate_sums(config, {.max_n = 9}));
}

TEST_CASE("Gray-code enumeration matches the naive oracle") {
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t dim = 1 + rng.below(3);
    const std::size_t n = rng.below(11);
    const auto config = oracle::random_config(rng, dim, n);
    const auto threads = static_cast<unsigned>(1 + rng.below(4));
    const auto cloud = enumerate_sums(config, {.threads = threads});
    CHECK(oracle::as_map(cloud) == oracle::naive_cloud(config));
  }
}

TEST_CASE("sum clouds are symmetric under negation") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto config = oracle::random_config(rng, 2, 1 + rng.below(9));
    const auto cloud = enumerate_sums(config);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      auto x = cloud.rational_point(i);
      for (auto& c : x) c = -c;
      CHECK(cloud.multiplicity_of(x) == cloud.multiplicity(i));
    }
  }
}

TEST_CASE("probability in a fixed ball") {
  const auto c11 = enumerate_sums(cfg(1, {{"1"}, {"1"}}));
  CHECK(prob_in_ball(c11, Ball{rv({"0"}), 0}) == prob(2, 2));
  CHECK(prob_in_ball(c11, Ball{rv({"1"}), 1}) == prob(3, 2));
  CHECK(prob_in_ball(c11, Ball{rv({"0"}), 0}).str() == "2/4");
  const auto ce = enumerate_sums(cfg(2, {{"1", "0"}, {"0", "1"}}));
  CHECK(prob_in_ball(ce, Ball{rv({"0", "0"}), 1}) == prob(0, 2));
  CHECK(prob_in_ball(ce, FloatBall{{0.0, 0.0}, std::sqrt(2.0)}) == prob(4, 2));
}

TEST_CASE("exact ball membership agrees with the rational oracle") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto config = oracle::random_config(rng, 2, 1 + rng.below(8));
    const auto cloud = enumerate_sums(config);
    const auto center = rv({"1/3", "-1/2"});
    const Rational radius(1 + static_cast<int>(rng.below(6)), 2);
    const auto p = prob_in_ball(cloud, Ball{center, radius});
    CHECK(p.numerator == oracle::naive_ball_count(config, center, radius));
    CHECK(p.numerator >= 0);
    CHECK(p.numerator <= p.denominator());
  }
}

TEST_CASE("deepest ball on the documented examples") {
  SUBCASE("{1, 1} at radius 1") {
    const auto r = max_ball_probability(enumerate_sums(cfg(1, {{"1"}, {"1"}})), 1);
    CHECK(r.probability == prob(3, 2));
    CHECK(r.witness.center == rv({"1"}));
  }
  SUBCASE("three e1 and one e2 at radius 3/2") {
    const auto cloud = enumerate_sums(cfg(2, {{"1", "0"}, {"1", "0"}, {"1", "0"}, {"0", "1"}}));
    const auto r = max_ball_probability(cloud, Rational(3, 2));
    CHECK(r.probability == prob(12, 4));
    CHECK(r.witness.center == rv({"0", "0"}));
    CHECK(r.certified);
  }
  SUBCASE("empty config") {
    const auto r = max_ball_probability(enumerate_sums(VectorConfig::make(2, {})), 5);
    CHECK(r.probability == prob(1, 0));
    CHECK(r.witness.center == rv({"0", "0"}));
  }
}

TEST_CASE("deepest ball refuses d > 3 without the heuristic flag") {
  const auto cloud = enumerate_sums(cfg(4, {{"1", "0", "0", "0"}, {"0", "1", "0", "0"}}));
  CHECK_THROWS_AS(max_ball_probability(cloud, 1), InvalidInput);
  const auto r = max_ball_probability(cloud, 1, {.allow_heuristic = true});
  CHECK(r.heuristic);
}

TEST_CASE("deepest ball refuses clouds above the atom cap") {
  const auto cloud = enumerate_sums(cfg(1, {{"1"}, {"2"}, {"4"}, {"8"}}));
  CHECK_THROWS_AS(max_ball_probability(cloud, 1, {.atom_cap = 8}), CapExceeded);
}

TEST_CASE("d = 1 deepest ball matches the window oracle and the Erdos bound") {
  Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const auto config = oracle::random_config(rng, 1, 1 + rng.below(10));
    const auto cloud = enumerate_sums(config);
    for (const char* d : {"1/2", "1", "17/10", "5/2"}) {
      const Rational delta = parse_rational(d);
      const auto r = max_ball_probability(cloud, delta);
      CHECK(r.weight == oracle::max_window_1d(oracle::naive_cloud(config), delta));
      CHECK(r.probability <= erdos_bound(static_cast<std::uint32_t>(config.size()), delta));
      CHECK(prob_in_ball(cloud, r.witness) == r.probability);
    }
  }
}

TEST_CASE("d = 2 deepest ball matches the candidate-center oracle") {
  Rng rng(9);
  for (int trial = 0; trial < 25; ++trial) {
    const auto config = oracle::random_config(rng, 2, 1 + rng.below(7));
    const auto cloud = enumerate_sums(config);
    for (const char* d : {"1", "3/2", "5/2"}) {
      const Rational delta = parse_rational(d);
      const auto r = max_ball_probability(cloud, delta);
      CHECK(r.certified);
      CHECK(r.weight == oracle::max_disk_2d(oracle::naive_cloud(config), to_double(delta)));
      CHECK(prob_in_ball(cloud, r.witness) == r.probability);
      CHECK(r.witness.radius <= delta);
    }
  }
}

TEST_CASE("deepest ball is monotone in the radius and beats random probes") {
  Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t dim = 2 + rng.below(2);
    const auto config = oracle::random_config(rng, dim, 2 + rng.below(6));
    const auto cloud = enumerate_sums(config);
    ExactProb prev;
    for (const char* d : {"1/2", "1", "6/5", "3/2", "2", "3"}) {
      const Rational delta = parse_rational(d);
      const auto r = max_ball_probability(cloud, delta);
      CHECK(prev <= r.probability);
      prev = r.probability;
      CHECK(prob_in_ball(cloud, r.witness) == r.probability);
      for (int probe = 0; probe < 100; ++probe) {
        FloatBall b{std::vector<double>(dim), to_double(delta)};
        for (auto& c : b.center) c = rng.uniform(-4.0, 4.0);
        CHECK(prob_in_ball(cloud, b, 0.0) <= r.probability);
      }
    }
  }
}

TEST_CASE("minimum enclosing ball") {
  const auto meb = minimum_enclosing_ball({rv({"0", "0"}), rv({"2", "0"}), rv({"1", "1/2"})});
  CHECK(meb.center == rv({"1", "0"}));
  CHECK(meb.squared_radius == 1);
  const auto tri = minimum_enclosing_ball({rv({"0", "0"}), rv({"2", "0"}), rv({"0", "2"})});
  CHECK(tri.center == rv({"1", "1"}));
  CHECK(tri.squared_radius == 2);
}
