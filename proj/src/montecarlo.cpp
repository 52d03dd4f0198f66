#include "lolab/montecarlo.hpp"

#include "lolab/ball.hpp"
#include "lolab/enumerate.hpp"
#include "lolab/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace lolab {

namespace {

// Scaled vectors multiplied by every support value stay within int64.
void check_range(const ScaledVectors& sv, const CoefficientLaw& law) {
  const __int128 k = law.max_abs();
  std::vector<__int128> reach(sv.vectors.empty() ? 0 : sv.vectors[0].size(), 0);
  for (const auto& v : sv.vectors) {
    for (std::size_t j = 0; j < v.size(); ++j) {
      reach[j] += k * (v[j] < 0 ? -static_cast<__int128>(v[j]) : v[j]);
      if (reach[j] > (static_cast<__int128>(1) << 62)) throw CapExceeded("sampled sums exceed the exact-lattice range");
    }
  }
}

void draw(const ScaledVectors& sv, const CoefficientLaw& law, Rng& rng, std::vector<std::int64_t>& out) {
  std::fill(out.begin(), out.end(), 0);
  for (const auto& v : sv.vectors) {
    const std::int64_t xi = law.sample(rng);
    if (xi == 0) continue;
    for (std::size_t j = 0; j < v.size(); ++j) out[j] += xi * v[j];
  }
}

}  // namespace

double McEstimate::lower() const { return std::clamp(estimate - radius, 0.0, 1.0); }
double McEstimate::upper() const { return std::clamp(estimate + radius, 0.0, 1.0); }

double hoeffding_radius(std::uint64_t samples, double alpha) {
  if (samples < 1) throw InvalidInput("sample count must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("alpha must lie in (0, 1)");
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(samples)));
}

RationalVector sample_sum(const VectorConfig& config, const CoefficientLaw& law, Rng& rng) {
  RationalVector out(config.dim(), Rational(0));
  for (const auto& v : config.vectors()) {
    const std::int64_t xi = law.sample(rng);
    if (xi == 0) continue;
    for (std::size_t j = 0; j < v.size(); ++j) out[j] += v[j] * xi;
  }
  return out;
}

McEstimate mc_probability(const VectorConfig& config, const CoefficientLaw& law, const Ball& ball,
                          const McOptions& options) {
  const double radius = hoeffding_radius(options.samples, options.alpha);
  if (ball.center.size() != config.dim()) throw InvalidInput("ball dimension does not match the configuration");
  if (ball.radius < 0) throw InvalidInput("ball radius must be nonnegative");
  const ScaledVectors sv = scale_to_lattice(config);
  check_range(sv, law);
  const LatticeBall test(ball, sv.scale);

  const std::uint64_t batches = (options.samples + kMcBatch - 1) / kMcBatch;
  std::vector<std::uint64_t> hits(batches, 0);
  auto run_batch = [&](std::uint64_t b) {
    Rng rng(derive_seed(options.seed, b));
    const std::uint64_t count = std::min(kMcBatch, options.samples - b * kMcBatch);
    std::vector<std::int64_t> x(config.dim());
    std::uint64_t h = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
      draw(sv, law, rng, x);
      if (test.contains(x)) ++h;
    }
    hits[b] = h;
  };
  const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, options.threads), batches));
  if (workers <= 1) {
    for (std::uint64_t b = 0; b < batches; ++b) run_batch(b);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (std::uint64_t b = next++; b < batches; b = next++) run_batch(b);
      });
    }
    for (auto& th : pool) th.join();
  }

  McEstimate est;
  for (auto h : hits) est.hits += h;
  est.samples = options.samples;
  est.estimate = static_cast<double>(est.hits) / static_cast<double>(options.samples);
  est.confidence = 1.0 - options.alpha;
  est.radius = radius;
  est.seed = options.seed;
  return est;
}

}  // namespace lolab
