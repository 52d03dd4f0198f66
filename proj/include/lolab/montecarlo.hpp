#pragma once

#include "lolab/core.hpp"
#include "lolab/law.hpp"
#include "lolab/rng.hpp"

#include <cstdint>
#include <vector>

namespace lolab {

struct McEstimate {
  double estimate = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
  double confidence = 0.95;
  double radius = 0.0;  // Hoeffding half-width
  std::uint64_t seed = 0;

  // Interval [estimate - radius, estimate + radius] clipped to [0, 1].
  double lower() const;
  double upper() const;
  bool covers(double p) const { return lower() <= p && p <= upper(); }
};

// sqrt(ln(2/alpha) / (2N)).
double hoeffding_radius(std::uint64_t samples, double alpha);

// One draw of sum_i xi_i v_i with xi_i i.i.d. from `law`, exact.
RationalVector sample_sum(const VectorConfig& config, const CoefficientLaw& law, Rng& rng);

struct McOptions {
  std::uint64_t samples = 20000;
  double alpha = 0.05;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

// Fraction of draws landing in the closed ball, with exact membership.
//
// Draws are grouped in fixed batches of kMcBatch; batch b uses the stream
// derive_seed(seed, b), so the estimate does not depend on the thread count.
inline constexpr std::uint64_t kMcBatch = 4096;
McEstimate mc_probability(const VectorConfig& config, const CoefficientLaw& law, const Ball& ball,
                          const McOptions& options = {});

}  // namespace lolab
