#pragma once

#include "lolab/core.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace lolab {

// Directional spread of V with respect to hyperplanes through the origin: a
// hyperplane with unit normal theta is at distance |theta . v| from v.
struct SpreadReport {
  std::size_t empirical_min = 0;    // min count over the directions examined
  std::size_t certified_lower = 0;  // valid lower bound over all directions
  std::vector<double> witness_direction;
  double net_resolution = 0.0;
  bool certified = true;  // false for d > 3 (certified_lower is then 0)
  std::size_t directions_checked = 0;
};

// #{i : |theta . v_i| >= 1}. theta must be a unit vector within 1e-12.
std::size_t spread_count(const VectorConfig& config, std::span<const double> theta);

// d = 1: exact. d = 2: uniform angles at spacing delta_net plus every critical
// angle where |theta . v_i| = 1 and the midpoints between them. d = 3:
// vertices of a geodesic icosahedral net with edges <= delta_net / 2. The
// certificate counts |theta' . v_i| >= 1 + delta_net |v_i| at net points,
// which bounds the count at every theta within delta_net of the net.
SpreadReport min_spread(const VectorConfig& config, double delta_net);

struct WitnessChain {
  std::vector<std::size_t> indices;
  std::vector<std::vector<double>> vectors;
  std::vector<double> residuals;  // dist(w_j, span{w_1..w_{j-1}}) >= 1
};

// Greedy chain: repeatedly take the vector with the largest distance to the
// span of the picks so far, stopping once that distance drops below 1 or d
// vectors are chosen.
WitnessChain witness_chain(const VectorConfig& config);

// Unit vectors of the geodesic net used for d = 3 (exposed for tests).
std::vector<std::vector<double>> icosahedral_net(double max_edge);

}  // namespace lolab
