#include "helpers.hpp"
#include "oracles.hpp"

#include "lolab/charfun.hpp"
#include "lolab/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace lolab;
using testing::cfg;

constexpr double kPi = std::numbers::pi;

TEST_CASE("distance to the nearest integer") {
  CHECK(dist_to_int(7) == 0.0);
  CHECK(dist_to_int(1.3) == doctest::Approx(0.3));
  CHECK(dist_to_int(-0.2) == doctest::Approx(0.2));
  CHECK(dist_to_int(2.5) == doctest::Approx(0.5));
}

TEST_CASE("cosine domination") {
  auto c = cos_dominated(0);
  CHECK(c.lhs == 1.0);
  CHECK(c.rhs == 1.0);
  CHECK(c.ok);
  c = cos_dominated(0.5);
  CHECK(c.lhs == doctest::Approx(0.0));
  CHECK(c.rhs == doctest::Approx(std::exp(-1.0 / 400)));
  CHECK(c.ok);
  c = cos_dominated(0.25);
  CHECK(c.lhs == doctest::Approx(0.70710678));
  CHECK(c.rhs == doctest::Approx(0.99937519));
  CHECK(c.ok);
}

TEST_CASE("characteristic function modulus") {
  const double zero = 0.0, half = 0.5, third = 1.0 / 3.0;
  CHECK(charfun_modulus(cfg(1, {{"1"}}), std::span(&zero, 1)) == 1.0);
  CHECK(charfun_modulus(cfg(1, {{"1"}}), std::span(&half, 1)) == doctest::Approx(0.0));
  CHECK(charfun_modulus(cfg(1, {{"1"}, {"1"}}), std::span(&third, 1)) == doctest::Approx(0.25));
  CHECK(charfun_modulus(cfg(1, {{"1"}}), std::span(&half, 1), PhaseConvention::TwoPi) == doctest::Approx(1.0));
}

TEST_CASE("charfun modulus is dominated by the Gaussian-type bound") {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const auto config = oracle::random_config(rng, 2, 1 + rng.below(6));
    const double z[2] = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    double s = 0.0;
    for (const auto& v : config.as_double()) {
      const double d = dist_to_int(v[0] * z[0] + v[1] * z[1]);
      s += d * d;
    }
    CHECK(charfun_modulus(config, std::span(z, 2)) <= std::exp(-s / 100.0) + 1e-15);
  }
}

TEST_CASE("Q integral reference values") {
  QuadratureSpec s1{.dim = 1};
  CHECK(q_integral(VectorConfig::make(1, {}), 0.01, s1).value == doctest::Approx(2.0).epsilon(0.01));
  QuadratureSpec s2{.dim = 2};
  CHECK(q_integral(VectorConfig::make(2, {}), 0.01, s2).value == doctest::Approx(kPi).epsilon(0.01));
  QuadratureSpec s3{.dim = 3, .points_per_axis = 16};
  CHECK(q_integral(VectorConfig::make(3, {}), 0.01, s3).value == doctest::Approx(4.0 * kPi / 3.0).epsilon(0.01));

  const auto one = cfg(1, {{"1"}});
  const double q = q_integral(one, 0.01, {.dim = 1, .max_doublings = 8, .rel_tol = 1e-6}).value;
  CHECK(q > 1.9);
  CHECK(q < 2.0);
  const double ref = oracle::reference_integral(1, [](const double* z) {
    const double d = dist_to_int(z[0]);
    return std::exp(-0.01 * d * d);
  });
  CHECK(q == doctest::Approx(ref).epsilon(1e-4));
}

TEST_CASE("Q integral agrees with a polar reference in d = 2") {
  const auto config = cfg(2, {{"1", "0"}, {"0", "3/2"}, {"1", "1"}});
  const auto vs = config.as_double();
  const double c = 2.0;
  const double ref = oracle::reference_integral(2, [&](const double* z) {
    double s = 0.0;
    for (const auto& v : vs) {
      const double d = dist_to_int(v[0] * z[0] + v[1] * z[1]);
      s += d * d;
    }
    return std::exp(-c * s);
  });
  const auto q = q_integral(config, c, {.dim = 2, .points_per_axis = 64, .rel_tol = 1e-4});
  CHECK(q.converged);
  CHECK(q.value == doctest::Approx(ref).epsilon(0.01));
}

TEST_CASE("quadrature does not depend on the thread count") {
  const auto config = cfg(2, {{"2", "0"}, {"0", "2"}, {"1", "1"}});
  const double a = q_integral(config, 1.0, {.dim = 2, .threads = 1}).value;
  const double b = q_integral(config, 1.0, {.dim = 2, .threads = 4}).value;
  CHECK(a == b);
}

TEST_CASE("non-convergence is flagged, not thrown") {
  const auto config = cfg(1, {{"40"}});
  const auto q = q_integral(config, 50.0, {.dim = 1, .points_per_axis = 4, .max_doublings = 0});
  CHECK_FALSE(q.converged);
}

TEST_CASE("Esseen-type bound") {
  const auto e0 = esseen_bound(VectorConfig::make(1, {}), {.dim = 1});
  CHECK(e0.value == doctest::Approx(2.0).epsilon(0.01));
  double prev = e0.value;
  for (int m = 1; m <= 6; ++m) {
    std::vector<RationalVector> vs(static_cast<std::size_t>(m), testing::rv({"1"}));
    const double v = esseen_bound(VectorConfig::make(1, vs), {.dim = 1, .rel_tol = 1e-4}).value;
    CHECK(v < prev);
    prev = v;
  }
  const auto e2 = esseen_bound(cfg(2, {{"1", "0"}, {"0", "1"}}), {.dim = 2});
  CHECK(e2.value < kPi);
}

TEST_CASE("Gram-Schmidt residuals") {
  auto gs = gram_schmidt_residuals({{2, 0}, {1, 3}});
  REQUIRE(gs.residuals.size() == 2);
  CHECK(gs.residuals[0] == doctest::Approx(2.0));
  CHECK(gs.residuals[1] == doctest::Approx(3.0));
  gs = gram_schmidt_residuals({{1, 0}, {2, 0}});
  CHECK(gs.residuals[0] == doctest::Approx(1.0));
  CHECK(gs.residuals[1] == 0.0);
  CHECK(gs.basis.size() == 1);
  gs = gram_schmidt_residuals({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  for (double r : gs.residuals) CHECK(r == doctest::Approx(1.0));
}

TEST_CASE("dspan integral") {
  auto inst = DspanInstance::make({{1.0}}, {0.0}, 0.0);
  CHECK(dspan_integral(inst, {.dim = 1}).integral.value == doctest::Approx(2.0).epsilon(0.01));

  inst = DspanInstance::make({{1.0}}, {0.0}, 100.0);
  const double ref = oracle::reference_integral(
      1,
      [](const double* z) {
        const double d = dist_to_int(z[0]);
        return std::exp(-100.0 * d * d);
      },
      1000000);
  CHECK(dspan_integral(inst, {.dim = 1, .points_per_axis = 256, .rel_tol = 1e-3}).integral.value ==
        doctest::Approx(ref).epsilon(0.05));

  double lo = 1e300, hi = 0.0;
  for (double lambda : {1.0, 10.0, 100.0}) {
    const auto r = dspan_integral(DspanInstance::make({{1, 0}, {0, 1}}, {0, 0}, lambda), {.dim = 2});
    lo = std::min(lo, r.scaled);
    hi = std::max(hi, r.scaled);
  }
  CHECK(hi / lo < 2.0);

  CHECK_THROWS_AS(DspanInstance::make({{1, 0}, {1, 0.5}}, {0, 0}, 1), InvalidInput);
  CHECK_THROWS_AS(DspanInstance::make({{1, 0}, {0, 1}}, {0}, 1), InvalidInput);
}

TEST_CASE("one-dimensional base integral stays bounded after rescaling") {
  double hi = 0.0;
  for (double lambda : {1.0, 10.0, 100.0, 1000.0}) {
    hi = std::max(hi, dspan_base_1d(lambda, 1 << 14) * std::sqrt(1.0 + lambda));
  }
  CHECK(hi < 4.0);
  CHECK(hi > 1.0);
}

TEST_CASE("mu-bounded check") {
  const auto zero = CoefficientLaw::point_mass(0);
  CHECK_FALSE(check_mu_bounded(zero, 0.5, 0.0, 1.0, 0.5).pass);
  const auto pm = CoefficientLaw::bernoulli();
  const auto r = check_mu_bounded(pm, 1.0, 0.0, 2.0, 0.25);
  CHECK_FALSE(r.pass);
  CHECK(r.worst_gap == doctest::Approx(2.0));
  CHECK(r.worst_t == doctest::Approx(1.0));
  const auto three = parse_law("-1:1/3,0:1/3,1:1/3");
  const auto g = check_mu_bounded(three, 0.5, 0.0, 1.0, 1e-3);
  CHECK(g.grid_points == 1001);
  CHECK(std::isfinite(g.worst_gap));
  CHECK_THROWS_AS(check_mu_bounded(pm, 0.0, 0, 1, 0.1), InvalidInput);
}
