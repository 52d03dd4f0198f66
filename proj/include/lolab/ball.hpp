#pragma once

#include "lolab/core.hpp"
#include "lolab/enumerate.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace lolab {

// Exact membership test for points of the lattice (1/scale) Z^d in a closed
// ball with rational center and radius.
class LatticeBall {
 public:
  LatticeBall(const RationalVector& center, const Rational& radius, std::int64_t scale);
  LatticeBall(const Ball& ball, std::int64_t scale) : LatticeBall(ball.center, ball.radius, scale) {}

  // x holds scaled integer coordinates.
  bool contains(std::span<const std::int64_t> x) const;

 private:
  BigInt e_;
  std::vector<BigInt> cd_;
  BigInt bound_;
};

// Exact membership: |x - center|^2 <= radius^2 in rational arithmetic.
std::uint64_t weight_in_ball(const SumCloud& cloud, const Ball& ball);
ExactProb prob_in_ball(const SumCloud& cloud, const Ball& ball);

// Tolerance membership: |x - center| <= radius * (1 + tolerance).
std::uint64_t weight_in_ball(const SumCloud& cloud, const FloatBall& ball, double tolerance = kDefaultTolerance);
ExactProb prob_in_ball(const SumCloud& cloud, const FloatBall& ball, double tolerance = kDefaultTolerance);

struct EnclosingBall {
  RationalVector center;
  Rational squared_radius = 0;
};

// Smallest enclosing ball of a nonempty point set, exact (Welzl's algorithm
// over rationals with a fixed shuffle).
EnclosingBall minimum_enclosing_ball(std::vector<RationalVector> points);

struct MaxBallOptions {
  double tolerance = kDefaultTolerance;
  std::size_t atom_cap = std::size_t{1} << 16;
  // Required for d > 3: candidate centers are atoms and pair midpoints only.
  bool allow_heuristic = false;
  // Candidates that provably cannot reach this weight may be skipped. The
  // result is exact whenever the returned weight is >= floor_weight.
  std::uint64_t floor_weight = 0;
  // Replace the witness center by the exact minimum enclosing ball center of
  // the covered atoms.
  bool canonical_witness = true;
  // When false, a floating candidate center is reported with its
  // tolerance-admitted weight and certified = false instead of being confirmed
  // in exact arithmetic. Meant for inner loops that re-verify their result.
  bool certify = true;
};

struct MaxBallResult {
  ExactProb probability;
  std::uint64_t weight = 0;
  Ball witness;
  bool heuristic = false;
  // False only if a tolerance-admitted candidate could not be confirmed in
  // exact arithmetic and a fallback was used.
  bool certified = true;
  double tolerance = kDefaultTolerance;
};

// sup over closed balls B of radius delta of P(X_V in B), with a witness.
//
// d = 1: exact sliding window of width 2*delta over sorted atoms.
// d = 2: atom centers, then for every anchor atom an angular sweep over the
//        centers at distance delta from the anchor and a second atom.
// d = 3: atom centers, pair midpoints, and centers at distance delta from
//        three atoms.
// Floating candidates are confirmed exactly before being reported.
MaxBallResult max_ball_probability(const SumCloud& cloud, const Rational& delta, const MaxBallOptions& options = {});

}  // namespace lolab
