#pragma once

#include "lolab/rational.hpp"
#include "lolab/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lolab {

// Finite distribution of an integer coefficient xi on {-K, ..., K}.
class CoefficientLaw {
 public:
  // Uniform on {-1, +1}.
  static CoefficientLaw bernoulli();
  static CoefficientLaw point_mass(std::int64_t value);
  // Throws InvalidInput unless probabilities are nonnegative, sum to exactly 1
  // and the support is nonempty with distinct values.
  static CoefficientLaw make(std::vector<std::int64_t> support, std::vector<Rational> probabilities);

  const std::vector<std::int64_t>& support() const { return support_; }
  const std::vector<Rational>& probabilities() const { return probs_; }
  std::int64_t max_abs() const;  // K
  Rational max_atom() const;     // max_j P(xi = j)

  // P(xi = j) <= 1 - epsilon for every j.
  bool epsilon_bounded(const Rational& epsilon) const { return max_atom() <= 1 - epsilon; }

  bool symmetric() const;

  std::int64_t sample(Rng& rng) const;

 private:
  std::vector<std::int64_t> support_;
  std::vector<Rational> probs_;
  std::vector<double> cumulative_;
};

// "bernoulli", or comma-separated "value:probability" pairs such as
// "-1:1/4,0:1/2,1:1/4".
CoefficientLaw parse_law(const std::string& text);
std::string to_string(const CoefficientLaw& law);

}  // namespace lolab
