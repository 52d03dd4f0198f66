#include "lolab/core.hpp"

#include "lolab/errors.hpp"

namespace lolab {

VectorConfig VectorConfig::make(std::size_t dim, std::vector<RationalVector> vectors,
                                std::optional<Rational> delta, bool relaxed) {
  if (dim == 0) throw InvalidInput("dimension must be at least 1");
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != dim) {
      throw InvalidInput("vector " + std::to_string(i) + " has " + std::to_string(vectors[i].size()) +
                         " coordinates, expected " + std::to_string(dim));
    }
    if (!relaxed && squared_norm(vectors[i]) < 1) {
      throw InvalidInput("vector " + std::to_string(i) + " has norm below 1");
    }
  }
  if (delta && *delta < 0) throw InvalidInput("radius must be nonnegative");
  VectorConfig c;
  c.dim_ = dim;
  c.vectors_ = std::move(vectors);
  c.delta_ = std::move(delta);
  c.relaxed_ = relaxed;
  return c;
}

std::vector<std::vector<double>> VectorConfig::as_double() const {
  std::vector<std::vector<double>> out;
  out.reserve(vectors_.size());
  for (const auto& v : vectors_) out.push_back(to_double(v));
  return out;
}

VectorConfig VectorConfig::with_vector(std::size_t i, RationalVector v) const {
  auto vs = vectors_;
  vs.at(i) = std::move(v);
  return make(dim_, std::move(vs), delta_, relaxed_);
}

VectorConfig VectorConfig::with_delta(Rational delta) const {
  VectorConfig c = *this;
  if (delta < 0) throw InvalidInput("radius must be nonnegative");
  c.delta_ = std::move(delta);
  return c;
}

ExactProb ExactProb::from_count(const BigInt& count, std::uint32_t n) {
  if (count < 0 || count > (BigInt(1) << n)) throw InvalidInput("probability numerator out of range");
  return ExactProb{count, n};
}

std::string ExactProb::str() const { return numerator.str() + "/" + denominator().str(); }

namespace {

std::strong_ordering order(const BigInt& x, const BigInt& y) {
  const int c = x.compare(y);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace

std::strong_ordering operator<=>(const ExactProb& a, const ExactProb& b) {
  // a.num / 2^a.k  vs  b.num / 2^b.k
  if (a.log2_den == b.log2_den) return order(a.numerator, b.numerator);
  if (a.log2_den < b.log2_den) return order(a.numerator << (b.log2_den - a.log2_den), b.numerator);
  return order(a.numerator, b.numerator << (a.log2_den - b.log2_den));
}

}  // namespace lolab
