#pragma once

#include "lolab/core.hpp"
#include "lolab/law.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace lolab {

// Phase convention for e(x).
//   Pi    : e(x) = exp(i pi x), so E e(t xi) = cos(pi t) for a +-1 sign. This
//           matches the cosine product cos(pi zeta.v) used throughout.
//   TwoPi : e(x) = exp(2 pi i x), so E e(t xi) = cos(2 pi t).
enum class PhaseConvention { Pi, TwoPi };

inline constexpr double kDefaultDecay = 0.01;

// Distance from theta to the nearest integer, in [0, 1/2].
double dist_to_int(double theta);

struct CosineCheck {
  double lhs = 0.0;  // |cos(pi theta)|
  double rhs = 0.0;  // exp(-decay * ||theta||^2)
  bool ok = false;
};

CosineCheck cos_dominated(double theta, double decay = kDefaultDecay);

// prod_j |cos(pi zeta . v_j)| (or 2 pi under TwoPi).
double charfun_modulus(const VectorConfig& config, std::span<const double> zeta,
                       PhaseConvention convention = PhaseConvention::Pi);

// Midpoint rule on the tensor grid of N^d cells covering [-1, 1]^d, keeping
// cells whose midpoint lies in the closed unit ball. N doubles until two
// successive estimates differ by less than rel_tol.
struct QuadratureSpec {
  std::size_t dim = 1;
  std::size_t points_per_axis = 32;
  std::size_t max_doublings = 5;
  double rel_tol = 0.01;
  unsigned threads = 1;
};

struct QuadratureResult {
  double value = 0.0;
  std::size_t points_per_axis = 0;  // resolution of `value`
  bool converged = false;
  double last_change = 0.0;  // relative change at the final doubling
};

// Single-resolution midpoint estimate over the unit ball.
double unit_ball_midpoint(std::size_t dim, std::size_t n, const std::function<double(const double*)>& f,
                          unsigned threads = 1);

QuadratureResult integrate_unit_ball(const QuadratureSpec& spec, const std::function<double(const double*)>& f);

// Q = int_{|zeta| <= 1} exp(-c sum_v ||zeta . v||^2) d zeta.
QuadratureResult q_integral(const VectorConfig& config, double decay, const QuadratureSpec& spec);

struct EsseenBound {
  double value = 0.0;     // constant * integral
  double constant = 1.0;  // uncalibrated, scaling comparisons only
  QuadratureResult integral;
};

EsseenBound esseen_bound(const VectorConfig& config, const QuadratureSpec& spec,
                         PhaseConvention convention = PhaseConvention::Pi, double constant = 1.0);

struct GramSchmidt {
  std::vector<std::vector<double>> basis;  // orthonormal, truncated at rank deficiency
  std::vector<double> residuals;           // dist(w_j, span{w_1..w_{j-1}}); 0 if dependent
};

GramSchmidt gram_schmidt_residuals(const std::vector<std::vector<double>>& w, double tol = 1e-12);

// Vectors w_1..w_d in R^d with dist(w_j, span{w_1..w_{j-1}}) >= 1, shifts u_j
// and weight lambda >= 0.
struct DspanInstance {
  std::vector<std::vector<double>> w;
  std::vector<double> u;
  double lambda = 0.0;

  // Throws InvalidInput when the chain condition fails (residual < 1 - 1e-12).
  static DspanInstance make(std::vector<std::vector<double>> w, std::vector<double> u, double lambda);
  std::size_t dim() const { return w.size(); }
};

struct DspanResult {
  QuadratureResult integral;
  double scaled = 0.0;  // integral * (1 + lambda)^{d/2}
};

// int_{|zeta| <= 1} exp(-lambda sum_j ||zeta . w_j + u_j||^2) d zeta.
DspanResult dspan_integral(const DspanInstance& inst, const QuadratureSpec& spec);

// One-dimensional base integral int_{-1}^{1} exp(-lambda ||zeta||^2) d zeta.
double dspan_base_1d(double lambda, std::size_t points);

// Pointwise test of |E e(xi t)| <= (1 - mu) + mu cos(pi t) on a t-grid.
struct MuBoundedReport {
  double worst_gap = 0.0;  // max over the grid of lhs - rhs
  double worst_t = 0.0;
  bool pass = false;       // worst_gap <= 1e-12
  std::size_t grid_points = 0;
  PhaseConvention convention = PhaseConvention::Pi;
};

// |E e(xi t)| under the chosen convention.
double law_charfun_modulus(const CoefficientLaw& law, double t, PhaseConvention convention);

MuBoundedReport check_mu_bounded(const CoefficientLaw& law, double mu, double t_min, double t_max, double t_step,
                                 PhaseConvention convention = PhaseConvention::Pi);

}  // namespace lolab
