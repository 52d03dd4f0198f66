#include "helpers.hpp"
#include "oracles.hpp"

#include "lolab/charfun.hpp"
#include "lolab/geometry.hpp"

#include <doctest.h>

#include <cmath>

using namespace lolab;
using testing::rv;

namespace {

VectorConfig two_directions(int a, int b) {
  return testing::repeat(2, {{rv({"2", "0"}), a}, {rv({"0", "2"}), b}});
}

std::vector<double> random_unit(Rng& rng, std::size_t dim) {
  std::vector<double> t(dim);
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (auto& x : t) {
      x = rng.normal();
      n2 += x * x;
    }
  } while (n2 < 1e-12);
  for (auto& x : t) x /= std::sqrt(n2);
  return t;
}

}  // namespace

TEST_CASE("spread count in fixed directions") {
  const auto v = two_directions(3, 2);
  const double e1[2] = {1, 0}, e2[2] = {0, 1}, diag[2] = {M_SQRT1_2, M_SQRT1_2};
  CHECK(spread_count(v, std::span(e2, 2)) == 2);
  CHECK(spread_count(v, std::span(e1, 2)) == 3);
  CHECK(spread_count(v, std::span(diag, 2)) == 5);
}

TEST_CASE("minimum spread") {
  CHECK(min_spread(two_directions(3, 2), 1e-3).empirical_min == 2);
  const auto same = testing::repeat(2, {{rv({"3", "4"}), 5}});
  CHECK(min_spread(same, 1e-3).empirical_min == 0);
  const auto unit = testing::cfg(2, {{"1", "0"}, {"0", "1"}});
  CHECK(min_spread(unit, 1e-3).empirical_min == 0);
  const auto one_d = testing::cfg(1, {{"1"}, {"-3"}, {"1/2"}}, true);
  const auto r1 = min_spread(one_d, 1e-3);
  CHECK(r1.empirical_min == 2);
  CHECK(r1.certified_lower == 2);
}

TEST_CASE("spread certificate is a valid lower bound") {
  Rng rng(17);
  for (std::size_t dim : {2u, 3u}) {
    for (int trial = 0; trial < 4; ++trial) {
      const auto config = oracle::random_config(rng, dim, 3 + rng.below(6));
      for (double net : {0.1, 0.02}) {
        const auto r = min_spread(config, net);
        CHECK(r.certified);
        CHECK(r.certified_lower <= r.empirical_min);
        for (int probe = 0; probe < 2500; ++probe) {
          const auto t = random_unit(rng, dim);
          CHECK(r.certified_lower <= spread_count(config, t));
        }
      }
    }
  }
}

TEST_CASE("two-direction family is certified at its spread") {
  for (int k = 3; k <= 8; ++k) {
    const auto r = min_spread(two_directions(k, k), 1e-3);
    CHECK(r.empirical_min == static_cast<std::size_t>(k));
    CHECK(r.certified_lower >= static_cast<std::size_t>(k));
  }
}

TEST_CASE("icosahedral net covers the sphere") {
  const auto net = icosahedral_net(0.2);
  Rng rng(4);
  for (int probe = 0; probe < 2000; ++probe) {
    const auto t = random_unit(rng, 3);
    double best = 1e9;
    for (const auto& p : net) {
      best = std::min(best, std::hypot(t[0] - p[0], t[1] - p[1], t[2] - p[2]));
    }
    CHECK(best <= 0.2);
  }
}

TEST_CASE("witness chains") {
  auto c = witness_chain(testing::cfg(2, {{"2", "0"}, {"0", "2"}}));
  REQUIRE(c.vectors.size() == 2);
  CHECK(c.residuals[0] == doctest::Approx(2.0));
  CHECK(c.residuals[1] == doctest::Approx(2.0));
  c = witness_chain(testing::cfg(2, {{"1", "0"}, {"3", "0"}, {"-2", "0"}}));
  CHECK(c.vectors.size() == 1);
  c = witness_chain(testing::cfg(2, {{"1", "0"}, {"1", "1/2"}}));
  CHECK(c.vectors.size() == 1);

  Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const auto config = oracle::random_config(rng, 3, 1 + rng.below(6));
    const auto chain = witness_chain(config);
    const auto gs = gram_schmidt_residuals(chain.vectors);
    for (std::size_t j = 0; j < gs.residuals.size(); ++j) {
      CHECK(gs.residuals[j] >= 1.0 - 1e-12);
      CHECK(gs.residuals[j] == doctest::Approx(chain.residuals[j]));
    }
  }
}
