#pragma once

#include "lolab/ball.hpp"
#include "lolab/core.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace lolab {

// Position of delta relative to the threshold sqrt((s-1)^2 + 1), s = floor(delta)+1,
// decided by exact comparison of delta^2 with (s-1)^2 + 1.
enum class Regime { Conjecture, Boundary, Counterexample };

Regime classify_regime(const Rational& delta);
std::string to_string(Regime regime);

// n copies of e_1 in R^d.
VectorConfig extremal_family(std::uint32_t n, std::size_t dim);

// n-1 copies of e_1 and one e_2 in R^d (d >= 2, n >= 2).
VectorConfig counterexample_family(std::uint32_t n, std::size_t dim);

struct SearchOptions {
  std::uint32_t n = 4;
  std::size_t dim = 2;
  Rational delta = 1;
  std::size_t restarts = 8;
  std::size_t steps = 200;
  std::uint64_t seed = 1;
  // Search coordinates are multiples of 1 / grid.
  std::int64_t grid = 64;
  // Restart 0 starts from extremal_family, restart 1 from
  // counterexample_family (when d >= 2); remaining restarts are random.
  bool seed_named_families = true;
  // Explicit starting configs, used (rounded outward to the grid) by the
  // first restarts before the named families.
  std::vector<VectorConfig> starts;
  unsigned threads = 1;
  std::uint32_t max_n = 30;
  std::size_t atom_cap = std::size_t{1} << 16;
};

struct SearchOutcome {
  VectorConfig best_config;
  Ball best_ball;
  ExactProb best_prob;
  ExactProb erdos_ref;
  bool violation = false;  // best_prob > erdos_ref, exactly
  std::vector<ExactProb> trace;  // best per restart
  std::uint64_t seed = 0;
  std::size_t evaluations = 0;
};

// Random-restart hill climbing over rational configurations on the grid
// (1/grid) Z^d. Each step replaces one vector (jitter, copy of another vector
// up to sign, alignment with another vector, shortening to norm 1, or a fresh
// random vector) and keeps the move unless it lowers the deepest-ball weight.
// Sideways moves are limited to configurations with few distinct sums, and
// candidates with more than 512 distinct sums are discarded. Restart r draws
// from stream derive_seed(seed, r); explicit starts come first, then the
// extremal and counterexample families, then random starts built from a few
// base vectors. The final best is re-verified with an independent
// enumeration and exact ball count.
SearchOutcome local_search_max(const SearchOptions& options);

struct ScanOptions {
  std::size_t dim = 2;
  std::vector<Rational> deltas;
  std::vector<std::uint32_t> ns;
  std::size_t restarts = 8;
  std::size_t steps = 200;
  std::uint64_t seed = 1;
  std::int64_t grid = 64;
  unsigned threads = 1;
  std::uint32_t max_n = 30;
};

struct ScanCell {
  std::uint32_t n = 0;
  Rational delta;
  Regime regime = Regime::Conjecture;
  SearchOutcome outcome;
  // A violation inside the conjecture regime contradicts a proven theorem
  // and therefore signals a bug.
  bool red_flag = false;
};

std::vector<ScanCell> conjecture_scan(const ScanOptions& options);

}  // namespace lolab
