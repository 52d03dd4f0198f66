#pragma once

#include "lolab/rational.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lolab {

// The multiset V = {v_1, ..., v_n} in R^d, stored with exact rational
// coordinates, together with the optional radius parameter.
//
// Every vector must satisfy |v|^2 >= 1 (checked exactly) unless the config was
// built with `relaxed = true`; the flag travels with the value.
class VectorConfig {
 public:
  VectorConfig() = default;

  static VectorConfig make(std::size_t dim, std::vector<RationalVector> vectors,
                           std::optional<Rational> delta = std::nullopt, bool relaxed = false);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }
  bool empty() const { return vectors_.empty(); }
  const std::vector<RationalVector>& vectors() const { return vectors_; }
  const RationalVector& operator[](std::size_t i) const { return vectors_[i]; }
  const std::optional<Rational>& delta() const { return delta_; }
  bool relaxed() const { return relaxed_; }

  std::vector<std::vector<double>> as_double() const;

  VectorConfig with_vector(std::size_t i, RationalVector v) const;
  VectorConfig with_delta(Rational delta) const;

  friend bool operator==(const VectorConfig&, const VectorConfig&) = default;

 private:
  std::size_t dim_ = 1;
  std::vector<RationalVector> vectors_;
  std::optional<Rational> delta_;
  bool relaxed_ = false;
};

// Exact dyadic probability numerator / 2^log2_den.
struct ExactProb {
  BigInt numerator = 0;
  std::uint32_t log2_den = 0;

  static ExactProb from_count(const BigInt& count, std::uint32_t n);

  BigInt denominator() const { return BigInt(1) << log2_den; }
  double to_double() const { return ldexp_ratio(numerator, log2_den); }
  Rational to_rational() const { return Rational(numerator, denominator()); }
  // "num/den" with the unreduced power-of-two denominator, e.g. "12/16".
  std::string str() const;

  friend std::strong_ordering operator<=>(const ExactProb& a, const ExactProb& b);
  friend bool operator==(const ExactProb& a, const ExactProb& b) { return (a <=> b) == 0; }
};

// Closed ball with exact center and radius: |x - center| <= radius.
struct Ball {
  RationalVector center;
  Rational radius = 0;
};

// Closed ball with floating-point center; membership uses a relative
// inclusion tolerance.
struct FloatBall {
  std::vector<double> center;
  double radius = 0.0;
};

inline constexpr double kDefaultTolerance = 1e-9;

}  // namespace lolab
