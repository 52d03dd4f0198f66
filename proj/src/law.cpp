#include "lolab/law.hpp"

#include "lolab/errors.hpp"

#include <algorithm>
#include <numeric>

namespace lolab {

CoefficientLaw CoefficientLaw::bernoulli() { return make({-1, 1}, {Rational(1, 2), Rational(1, 2)}); }

CoefficientLaw CoefficientLaw::point_mass(std::int64_t value) { return make({value}, {Rational(1)}); }

CoefficientLaw CoefficientLaw::make(std::vector<std::int64_t> support, std::vector<Rational> probabilities) {
  if (support.empty()) throw InvalidInput("coefficient law has empty support");
  if (support.size() != probabilities.size()) throw InvalidInput("support and probabilities differ in length");
  Rational total = 0;
  for (const auto& p : probabilities) {
    if (p < 0) throw InvalidInput("negative probability");
    total += p;
  }
  if (total != 1) throw InvalidInput("probabilities sum to " + to_string(total) + ", expected 1");
  std::vector<std::size_t> order(support.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return support[a] < support[b]; });
  CoefficientLaw law;
  for (std::size_t i : order) {
    if (!law.support_.empty() && law.support_.back() == support[i]) throw InvalidInput("duplicate support value");
    law.support_.push_back(support[i]);
    law.probs_.push_back(probabilities[i]);
  }
  Rational run = 0;
  for (const auto& p : law.probs_) {
    run += p;
    law.cumulative_.push_back(to_double(run));
  }
  law.cumulative_.back() = 1.0;
  return law;
}

std::int64_t CoefficientLaw::max_abs() const {
  std::int64_t k = 0;
  for (auto x : support_) k = std::max(k, x < 0 ? -x : x);
  return k;
}

Rational CoefficientLaw::max_atom() const { return *std::max_element(probs_.begin(), probs_.end()); }

bool CoefficientLaw::symmetric() const {
  for (std::size_t i = 0; i < support_.size(); ++i) {
    const auto j = support_.size() - 1 - i;
    if (support_[i] != -support_[j] || probs_[i] != probs_[j]) return false;
  }
  return true;
}

std::int64_t CoefficientLaw::sample(Rng& rng) const {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), support_.size() - 1);
  return support_[idx];
}

CoefficientLaw parse_law(const std::string& text) {
  if (text == "bernoulli") return CoefficientLaw::bernoulli();
  std::vector<std::int64_t> support;
  std::vector<Rational> probs;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string item = text.substr(pos, comma - pos);
    const std::size_t colon = item.find(':');
    if (colon == std::string::npos) throw InvalidInput("law entry \"" + item + "\" is not value:probability");
    const Rational value = parse_rational(item.substr(0, colon));
    if (boost::multiprecision::denominator(value) != 1 || boost::multiprecision::abs(value) > BigInt(1) << 31) {
      throw InvalidInput("law support must consist of small integers");
    }
    support.push_back(boost::multiprecision::numerator(value).convert_to<std::int64_t>());
    probs.push_back(parse_rational(item.substr(colon + 1)));
    pos = comma + 1;
  }
  return CoefficientLaw::make(std::move(support), std::move(probs));
}

std::string to_string(const CoefficientLaw& law) {
  std::string out;
  for (std::size_t i = 0; i < law.support().size(); ++i) {
    if (i) out += ',';
    out += std::to_string(law.support()[i]) + ":" + to_string(law.probabilities()[i]);
  }
  return out;
}

}  // namespace lolab
