#pragma once

#include "lolab/core.hpp"

#include <cstdint>

namespace lolab {

// S(n, s): the sum of the s largest binomial coefficients C(n, i).
struct BinomialSum {
  std::uint64_t n = 0;
  std::uint64_t s = 1;
  BigInt value = 0;
};

BinomialSum binom_sum(std::uint64_t n, std::uint64_t s);

BigInt binomial(std::uint64_t n, std::uint64_t k);

// s = floor(delta) + 1, the number of consecutive one-dimensional atoms a
// closed window of width 2*delta can hold.
std::uint64_t erdos_s(const Rational& delta);

// 2^{-n} S(n, floor(delta) + 1), exactly.
ExactProb erdos_bound(std::uint32_t n, const Rational& delta);

// sqrt(2/pi) * s / sqrt(n).
double stirling_approx(double n, double s);

}  // namespace lolab
