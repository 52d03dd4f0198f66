#include "helpers.hpp"

#include "lolab/ball.hpp"
#include "lolab/enumerate.hpp"
#include "lolab/errors.hpp"
#include "lolab/montecarlo.hpp"

#include <doctest.h>

#include <cmath>

using namespace lolab;
using testing::cfg;
using testing::rv;

TEST_CASE("Hoeffding radius") {
  CHECK(hoeffding_radius(20000, 0.05) == doctest::Approx(std::sqrt(std::log(40.0) / 40000.0)));
  CHECK(hoeffding_radius(20000, 0.05) == doctest::Approx(0.009603).epsilon(1e-4));
  CHECK_THROWS_AS(hoeffding_radius(0, 0.05), InvalidInput);
  CHECK_THROWS_AS(hoeffding_radius(10, 1.0), InvalidInput);
}

TEST_CASE("samples of a Bernoulli sum") {
  const auto v = cfg(1, {{"1"}, {"1"}});
  Rng rng(1);
  int zeros = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const auto x = sample_sum(v, CoefficientLaw::bernoulli(), rng);
    CHECK((x[0] == -2 || x[0] == 0 || x[0] == 2));
    zeros += x[0] == 0;
  }
  CHECK(std::abs(zeros / double(draws) - 0.5) <= 0.01);

  const auto w = cfg(2, {{"1", "1/2"}, {"-3", "2"}});
  for (int i = 0; i < 10; ++i) CHECK(sample_sum(w, CoefficientLaw::point_mass(1), rng) == rv({"-2", "5/2"}));
}

TEST_CASE("Monte Carlo estimates") {
  const auto v = cfg(1, {{"1"}, {"1"}});
  const auto all = mc_probability(v, CoefficientLaw::bernoulli(), Ball{rv({"0"}), 2}, {.samples = 1000});
  CHECK(all.estimate == 1.0);
  CHECK(all.hits == 1000);

  int covered = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto e = mc_probability(v, CoefficientLaw::bernoulli(), Ball{rv({"0"}), Rational(1, 2)},
                                  {.samples = 100000, .seed = seed});
    covered += e.covers(0.5);
  }
  CHECK(covered >= 38);
}

TEST_CASE("Monte Carlo is independent of the thread count") {
  const auto v = cfg(2, {{"1", "0"}, {"1", "0"}, {"0", "1"}, {"1", "1"}});
  const Ball b{rv({"1/2", "0"}), Rational(3, 2)};
  const auto a = mc_probability(v, CoefficientLaw::bernoulli(), b, {.samples = 30000, .seed = 5, .threads = 1});
  const auto c = mc_probability(v, CoefficientLaw::bernoulli(), b, {.samples = 30000, .seed = 5, .threads = 4});
  CHECK(a.hits == c.hits);
}

TEST_CASE("Monte Carlo respects negation symmetry for symmetric laws") {
  const auto v = cfg(2, {{"1", "0"}, {"1", "0"}, {"0", "1"}, {"1", "1"}});
  const auto law = parse_law("-1:1/4,0:1/2,1:1/4");
  REQUIRE(law.symmetric());
  const auto plus = mc_probability(v, law, Ball{rv({"1", "1/2"}), 1}, {.samples = 50000, .seed = 2});
  const auto minus = mc_probability(v, law, Ball{rv({"-1", "-1/2"}), 1}, {.samples = 50000, .seed = 3});
  CHECK(std::abs(plus.estimate - minus.estimate) <= 3 * plus.radius);
}

TEST_CASE("coefficient laws") {
  CHECK_THROWS_AS(CoefficientLaw::make({0, 1}, {Rational(1, 2), Rational(1, 3)}), InvalidInput);
  CHECK_THROWS_AS(CoefficientLaw::make({1, 1}, {Rational(1, 2), Rational(1, 2)}), InvalidInput);
  const auto l = parse_law("-2:1/4,0:1/2,2:1/4");
  CHECK(l.max_abs() == 2);
  CHECK(l.max_atom() == Rational(1, 2));
  CHECK(l.epsilon_bounded(Rational(1, 2)));
  CHECK_FALSE(l.epsilon_bounded(Rational(3, 5)));
  CHECK(parse_law(to_string(l)).probabilities() == l.probabilities());
}
