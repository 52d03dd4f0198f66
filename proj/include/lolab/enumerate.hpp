#pragma once

#include "lolab/core.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lolab {

// Distribution of X_V = sum_i xi_i v_i over all 2^n sign patterns, collapsed
// to distinct points with multiplicities.
//
// Points are stored on the integer lattice (1/scale) Z^d, where `scale` is the
// least common denominator of the input coordinates, so every atom is an
// exact rational point. Atoms are kept in lexicographic order.
class SumCloud {
 public:
  SumCloud() = default;

  // Builds a cloud from raw scaled points (duplicates allowed, any order).
  static SumCloud from_points(std::size_t dim, std::uint32_t n, std::int64_t scale,
                              std::vector<std::int64_t> coords, std::vector<std::uint64_t> weights);

  std::size_t dim() const { return dim_; }
  std::uint32_t n() const { return n_; }
  std::int64_t scale() const { return scale_; }
  std::size_t size() const { return weights_.size(); }
  std::uint64_t total() const { return n_ == 64 ? 0 : (std::uint64_t{1} << n_); }

  std::span<const std::int64_t> point(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  std::uint64_t multiplicity(std::size_t i) const { return weights_[i]; }
  const std::vector<std::uint64_t>& multiplicities() const { return weights_; }
  const std::vector<std::int64_t>& scaled_coords() const { return coords_; }

  RationalVector rational_point(std::size_t i) const;
  std::vector<double> double_point(std::size_t i) const;

  // Multiplicity of an exact point; 0 when it is not an atom.
  std::uint64_t multiplicity_of(const RationalVector& x) const;

  // Exact equality as weighted point sets (independent of the scale used).
  friend bool operator==(const SumCloud& a, const SumCloud& b);

 private:
  std::size_t dim_ = 1;
  std::uint32_t n_ = 0;
  std::int64_t scale_ = 1;
  std::vector<std::int64_t> coords_;
  std::vector<std::uint64_t> weights_;
};

struct EnumerateOptions {
  std::uint32_t max_n = 30;
  unsigned threads = 1;
};

// Walks all 2^n sign patterns in reflected Gray-code order; each step flips one
// sign and updates the running sum in O(d). Identical sums are merged exactly.
SumCloud enumerate_sums(const VectorConfig& config, const EnumerateOptions& options = {});

// Common denominator of all coordinates and the scaled integer vectors.
struct ScaledVectors {
  std::int64_t scale = 1;
  std::vector<std::vector<std::int64_t>> vectors;
};
ScaledVectors scale_to_lattice(const VectorConfig& config);

// Enumeration over integer vectors already on the lattice (1/scale) Z^d.
SumCloud enumerate_lattice(const ScaledVectors& vectors, std::size_t dim, const EnumerateOptions& options = {});

}  // namespace lolab
