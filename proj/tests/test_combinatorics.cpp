#include "helpers.hpp"
#include "oracles.hpp"

#include "lolab/combinatorics.hpp"

#include <doctest.h>

#include <cmath>

using namespace lolab;
using testing::prob;

TEST_CASE("sum of the largest binomial coefficients") {
  CHECK(binom_sum(4, 2).value == 10);
  CHECK(binom_sum(5, 1).value == 10);
  CHECK(binom_sum(2, 3).value == 4);
  for (std::uint64_t n = 0; n <= 40; ++n) {
    BigInt prev = 0;
    for (std::uint64_t s = 1; s <= n + 3; ++s) {
      const BigInt v = binom_sum(n, s).value;
      CHECK(v == oracle::largest_binomials(n, s));
      CHECK(v >= prev);
      prev = v;
      if (s >= n + 1) CHECK(v == BigInt(1) << n);
    }
  }
}

TEST_CASE("Erdos bound") {
  CHECK(erdos_s(Rational(3, 2)) == 2);
  CHECK(erdos_s(1) == 2);
  CHECK(erdos_s(Rational(1, 2)) == 1);
  CHECK(erdos_bound(4, Rational(3, 2)) == prob(10, 4));
  CHECK(erdos_bound(4, Rational(3, 2)).str() == "10/16");
  CHECK(erdos_bound(2, 1) == prob(3, 2));
  for (std::uint32_t n = 1; n < 30; ++n) {
    const auto p = erdos_bound(n, Rational(1, 2));
    CHECK(p.numerator == binomial(n, n / 2));
    CHECK(p.log2_den == n);
  }
}

TEST_CASE("Stirling approximation") {
  CHECK(stirling_approx(1e4, 1) == doctest::Approx(std::sqrt(2.0 / std::numbers::pi) / 100.0).epsilon(1e-12));
  CHECK(stirling_approx(1e4, 1) == doctest::Approx(0.0079788).epsilon(1e-5));
  CHECK(stirling_approx(1e6, 3) == doctest::Approx(0.0023936).epsilon(1e-4));
  CHECK(stirling_approx(50, 0) == 0.0);
}

TEST_CASE("half-sum averaging comparison") {
  for (std::uint32_t n : {1000u, 10000u}) {
    const auto m = n - static_cast<std::uint32_t>(std::floor(std::cbrt(static_cast<double>(n) * n)));
    for (std::uint64_t s = 3; s <= 6; ++s) {
      // 2^{-m-1} (S(m, s-1) + S(m, s)) < 2^{-n} S(n, s), compared exactly.
      const BigInt lhs = (binom_sum(m, s - 1).value + binom_sum(m, s).value) << (n - m);
      const BigInt rhs = binom_sum(n, s).value << 1;
      CHECK(lhs < rhs);
    }
  }
}
