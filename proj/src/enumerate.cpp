#include "lolab/enumerate.hpp"

#include "lolab/errors.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <thread>

namespace lolab {

namespace {

// Coordinates of every partial sum must stay below this magnitude so that
// squared distances between atoms fit comfortably in 128-bit integers.
constexpr std::int64_t kCoordinateLimit = std::int64_t{1} << 40;

// Open-addressing accumulator keyed by a d-dimensional integer point.
class PointTable {
 public:
  explicit PointTable(std::size_t dim, std::size_t expected = 16) : dim_(dim) {
    std::size_t cap = 16;
    while (cap < expected * 2) cap <<= 1;
    resize(cap);
  }

  void add(const std::int64_t* p, std::uint64_t w) {
    if ((size_ + 1) * 2 > counts_.size()) resize(counts_.size() * 2);
    insert(p, w);
  }

  void drain(std::vector<std::int64_t>& coords, std::vector<std::uint64_t>& weights) const {
    for (std::size_t slot = 0; slot < counts_.size(); ++slot) {
      if (counts_[slot] == 0) continue;
      coords.insert(coords.end(), keys_.begin() + slot * dim_, keys_.begin() + (slot + 1) * dim_);
      weights.push_back(counts_[slot]);
    }
  }

 private:
  std::size_t hash(const std::int64_t* p) const {
    std::uint64_t h = 0x243F6A8885A308D3ull;
    for (std::size_t k = 0; k < dim_; ++k) {
      h ^= static_cast<std::uint64_t>(p[k]);
      h *= 0x9E3779B97F4A7C15ull;
      h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
  }

  void insert(const std::int64_t* p, std::uint64_t w) {
    const std::size_t mask = counts_.size() - 1;
    for (std::size_t slot = hash(p) & mask;; slot = (slot + 1) & mask) {
      std::int64_t* key = keys_.data() + slot * dim_;
      if (counts_[slot] == 0) {
        std::copy(p, p + dim_, key);
        counts_[slot] = w;
        ++size_;
        return;
      }
      if (std::equal(p, p + dim_, key)) {
        counts_[slot] += w;
        return;
      }
    }
  }

  void resize(std::size_t cap) {
    std::vector<std::int64_t> old_keys = std::move(keys_);
    std::vector<std::uint64_t> old_counts = std::move(counts_);
    keys_.assign(cap * dim_, 0);
    counts_.assign(cap, 0);
    size_ = 0;
    for (std::size_t slot = 0; slot < old_counts.size(); ++slot) {
      if (old_counts[slot] != 0) insert(old_keys.data() + slot * dim_, old_counts[slot]);
    }
  }

  std::size_t dim_;
  std::size_t size_ = 0;
  std::vector<std::int64_t> keys_;
  std::vector<std::uint64_t> counts_;
};

// Gray-code walk over the low `free_bits` signs with the high signs fixed by
// `prefix` (bit set = +1).
void walk_block(const ScaledVectors& sv, std::size_t dim, std::uint32_t free_bits, std::uint64_t prefix,
                PointTable& table) {
  const std::size_t n = sv.vectors.size();
  std::vector<std::int64_t> sum(dim, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const bool plus = i >= free_bits && ((prefix >> (i - free_bits)) & 1u);
    for (std::size_t k = 0; k < dim; ++k) sum[k] += plus ? sv.vectors[i][k] : -sv.vectors[i][k];
  }
  table.add(sum.data(), 1);
  std::uint64_t gray = 0;
  const std::uint64_t steps = std::uint64_t{1} << free_bits;
  for (std::uint64_t step = 1; step < steps; ++step) {
    const auto bit = static_cast<std::size_t>(std::countr_zero(step));
    gray ^= std::uint64_t{1} << bit;
    const bool now_plus = (gray >> bit) & 1u;
    const auto& v = sv.vectors[bit];
    for (std::size_t k = 0; k < dim; ++k) sum[k] += now_plus ? 2 * v[k] : -2 * v[k];
    table.add(sum.data(), 1);
  }
}

}  // namespace

ScaledVectors scale_to_lattice(const VectorConfig& config) {
  BigInt scale = 1;
  for (const auto& v : config.vectors()) {
    for (const auto& x : v) scale = lcm(scale, boost::multiprecision::denominator(x));
  }
  if (scale > kCoordinateLimit) {
    throw CapExceeded("common denominator " + scale.str() + " exceeds the exact-lattice limit 2^40");
  }
  ScaledVectors out;
  out.scale = scale.convert_to<std::int64_t>();
  std::vector<BigInt> reach(config.dim(), 0);
  for (const auto& v : config.vectors()) {
    std::vector<std::int64_t> row;
    row.reserve(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
      const Rational scaled = v[k] * scale;
      const BigInt num = boost::multiprecision::numerator(scaled);
      reach[k] += boost::multiprecision::abs(num);
      if (reach[k] > kCoordinateLimit) {
        throw CapExceeded("scaled coordinate sums exceed the exact-lattice limit 2^40");
      }
      row.push_back(num.convert_to<std::int64_t>());
    }
    out.vectors.push_back(std::move(row));
  }
  return out;
}

SumCloud SumCloud::from_points(std::size_t dim, std::uint32_t n, std::int64_t scale,
                               std::vector<std::int64_t> coords, std::vector<std::uint64_t> weights) {
  if (dim == 0 || coords.size() != weights.size() * dim) throw InvalidInput("malformed point buffer");
  if (scale <= 0) throw InvalidInput("scale must be positive");
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(coords.begin() + a * dim, coords.begin() + (a + 1) * dim,
                                        coords.begin() + b * dim, coords.begin() + (b + 1) * dim);
  });
  SumCloud c;
  c.dim_ = dim;
  c.n_ = n;
  c.scale_ = scale;
  for (std::size_t idx : order) {
    const auto first = coords.begin() + idx * dim;
    if (weights[idx] == 0) continue;
    if (!c.weights_.empty() && std::equal(first, first + dim, c.coords_.end() - dim)) {
      c.weights_.back() += weights[idx];
      continue;
    }
    c.coords_.insert(c.coords_.end(), first, first + dim);
    c.weights_.push_back(weights[idx]);
  }
  return c;
}

RationalVector SumCloud::rational_point(std::size_t i) const {
  RationalVector out;
  out.reserve(dim_);
  for (auto x : point(i)) out.emplace_back(BigInt(x), BigInt(scale_));
  return out;
}

std::vector<double> SumCloud::double_point(std::size_t i) const {
  std::vector<double> out;
  out.reserve(dim_);
  for (auto x : point(i)) out.push_back(static_cast<double>(x) / static_cast<double>(scale_));
  return out;
}

std::uint64_t SumCloud::multiplicity_of(const RationalVector& x) const {
  if (x.size() != dim_) throw InvalidInput("dimension mismatch");
  std::vector<std::int64_t> key;
  key.reserve(dim_);
  for (const auto& c : x) {
    const Rational scaled = c * scale_;
    if (boost::multiprecision::denominator(scaled) != 1) return 0;
    const BigInt num = boost::multiprecision::numerator(scaled);
    if (boost::multiprecision::abs(num) > kCoordinateLimit * 64) return 0;
    key.push_back(num.convert_to<std::int64_t>());
  }
  std::size_t lo = 0, hi = size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const auto p = point(mid);
    if (std::lexicographical_compare(p.begin(), p.end(), key.begin(), key.end())) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < size() && std::equal(key.begin(), key.end(), point(lo).begin())) return weights_[lo];
  return 0;
}

bool operator==(const SumCloud& a, const SumCloud& b) {
  if (a.dim_ != b.dim_ || a.n_ != b.n_ || a.weights_ != b.weights_) return false;
  for (std::size_t i = 0; i < a.coords_.size(); ++i) {
    const auto lhs = static_cast<__int128>(a.coords_[i]) * b.scale_;
    const auto rhs = static_cast<__int128>(b.coords_[i]) * a.scale_;
    if (lhs != rhs) return false;
  }
  return true;
}

SumCloud enumerate_sums(const VectorConfig& config, const EnumerateOptions& options) {
  const std::uint32_t cap = std::min<std::uint32_t>(options.max_n, 63);
  if (config.size() > cap) {
    throw CapExceeded("n = " + std::to_string(config.size()) + " exceeds the enumeration cap " + std::to_string(cap));
  }
  return enumerate_lattice(scale_to_lattice(config), config.dim(), options);
}

SumCloud enumerate_lattice(const ScaledVectors& sv, std::size_t dim, const EnumerateOptions& options) {
  const std::size_t n = sv.vectors.size();
  const std::uint32_t cap = std::min<std::uint32_t>(options.max_n, 63);
  if (n > cap) {
    throw CapExceeded("n = " + std::to_string(n) + " exceeds the enumeration cap " + std::to_string(cap));
  }
  if (sv.scale <= 0) throw InvalidInput("scale must be positive");
  std::vector<std::int64_t> reach(dim, 0);
  for (const auto& v : sv.vectors) {
    if (v.size() != dim) throw InvalidInput("vector dimension mismatch");
    for (std::size_t k = 0; k < dim; ++k) {
      if (v[k] > kCoordinateLimit || v[k] < -kCoordinateLimit) {
        throw CapExceeded("scaled coordinate sums exceed the exact-lattice limit 2^40");
      }
      reach[k] += v[k] < 0 ? -v[k] : v[k];
      if (reach[k] > kCoordinateLimit) throw CapExceeded("scaled coordinate sums exceed the exact-lattice limit 2^40");
    }
  }
  const auto nn = static_cast<std::uint32_t>(n);

  unsigned threads = std::max(1u, options.threads);
  std::uint32_t prefix_bits = 0;
  while ((1u << prefix_bits) < threads && prefix_bits + 8 < nn) ++prefix_bits;
  const std::uint32_t free_bits = nn - prefix_bits;
  const std::uint64_t blocks = std::uint64_t{1} << prefix_bits;

  std::vector<std::int64_t> coords;
  std::vector<std::uint64_t> weights;
  if (blocks == 1) {
    PointTable table(dim, std::size_t{1} << std::min<std::uint32_t>(free_bits, 16));
    walk_block(sv, dim, free_bits, 0, table);
    table.drain(coords, weights);
  } else {
    std::vector<PointTable> tables(blocks, PointTable(dim, std::size_t{1} << std::min<std::uint32_t>(free_bits, 16)));
    std::vector<std::thread> pool;
    const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(threads, blocks));
    for (unsigned t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        for (std::uint64_t b = t; b < blocks; b += workers) walk_block(sv, dim, free_bits, b, tables[b]);
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& table : tables) table.drain(coords, weights);
  }
  return SumCloud::from_points(dim, nn, sv.scale, std::move(coords), std::move(weights));
}

}  // namespace lolab
