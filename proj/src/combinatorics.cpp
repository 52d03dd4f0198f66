#include "lolab/combinatorics.hpp"

#include "lolab/errors.hpp"

#include <cmath>
#include <numbers>

namespace lolab {

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt c = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    c *= n - i;
    c /= i + 1;
  }
  return c;
}

BinomialSum binom_sum(std::uint64_t n, std::uint64_t s) {
  if (s == 0) throw InvalidInput("s must be at least 1");
  BinomialSum out{n, s, 0};
  if (s >= n + 1) {
    out.value = BigInt(1) << n;
    return out;
  }
  // The row is symmetric and unimodal, so the s largest entries form the
  // contiguous block whose center is nearest n/2. For n - s odd the two
  // nearest blocks are mirror images with equal sums; take the lower one.
  const std::uint64_t first = (n - s + 1) / 2;
  BigInt c = binomial(n, first);
  for (std::uint64_t i = first; i < first + s; ++i) {
    out.value += c;
    c *= n - i;
    c /= i + 1;
  }
  return out;
}

std::uint64_t erdos_s(const Rational& delta) {
  if (delta < 0) throw InvalidInput("radius must be nonnegative");
  const BigInt f = floor(delta);
  if (f > BigInt(std::uint64_t{1} << 62)) throw InvalidInput("radius too large");
  return f.convert_to<std::uint64_t>() + 1;
}

ExactProb erdos_bound(std::uint32_t n, const Rational& delta) {
  return ExactProb::from_count(binom_sum(n, erdos_s(delta)).value, n);
}

double stirling_approx(double n, double s) {
  if (!(n >= 1)) throw InvalidInput("n must be at least 1");
  return std::sqrt(2.0 / std::numbers::pi) * s / std::sqrt(n);
}

}  // namespace lolab
