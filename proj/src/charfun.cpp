#include "lolab/charfun.hpp"

#include "lolab/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <thread>

namespace lolab {

namespace {

constexpr double kPi = std::numbers::pi;

double phase_factor(PhaseConvention c) { return c == PhaseConvention::Pi ? kPi : 2.0 * kPi; }

double dot(const std::vector<double>& a, const double* b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

}  // namespace

double dist_to_int(double theta) { return std::abs(theta - std::nearbyint(theta)); }

CosineCheck cos_dominated(double theta, double decay) {
  CosineCheck c;
  c.lhs = std::abs(std::cos(kPi * theta));
  const double d = dist_to_int(theta);
  c.rhs = std::exp(-decay * d * d);
  c.ok = c.lhs <= c.rhs;
  return c;
}

double charfun_modulus(const VectorConfig& config, std::span<const double> zeta, PhaseConvention convention) {
  if (zeta.size() != config.dim()) throw InvalidInput("frequency dimension does not match the config");
  const double f = phase_factor(convention);
  double prod = 1.0;
  for (const auto& v : config.vectors()) {
    double s = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) s += to_double(v[k]) * zeta[k];
    prod *= std::abs(std::cos(f * s));
  }
  return prod;
}

double unit_ball_midpoint(std::size_t dim, std::size_t n, const std::function<double(const double*)>& f,
                          unsigned threads) {
  if (dim == 0 || n < 2) throw InvalidInput("quadrature needs d >= 1 and at least 2 points per axis");
  const double h = 2.0 / static_cast<double>(n);
  std::size_t inner = 1;
  for (std::size_t k = 1; k < dim; ++k) inner *= n;

  // One partial sum per first-axis slab, added in a fixed order, so the
  // result does not depend on the thread count.
  std::vector<double> parts(n, 0.0);
  auto slab = [&](std::size_t i0) {
    std::vector<double> z(dim);
    double acc = 0.0;
    z[0] = -1.0 + (static_cast<double>(i0) + 0.5) * h;
    for (std::size_t r = 0; r < inner; ++r) {
      std::size_t rest = r;
      double r2 = z[0] * z[0];
      for (std::size_t k = 1; k < dim; ++k) {
        z[k] = -1.0 + (static_cast<double>(rest % n) + 0.5) * h;
        rest /= n;
        r2 += z[k] * z[k];
      }
      if (r2 <= 1.0) acc += f(z.data());
    }
    parts[i0] = acc;
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (workers == 1) {
    for (std::size_t i0 = 0; i0 < n; ++i0) slab(i0);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i0 = next++; i0 < n; i0 = next++) slab(i0);
      });
    }
    for (auto& th : pool) th.join();
  }
  double total = 0.0;
  for (double p : parts) total += p;
  return total * std::pow(h, static_cast<double>(dim));
}

QuadratureResult integrate_unit_ball(const QuadratureSpec& spec, const std::function<double(const double*)>& f) {
  if (spec.points_per_axis < 2) throw InvalidInput("points per axis must be at least 2");
  QuadratureResult r;
  std::size_t n = spec.points_per_axis;
  double prev = unit_ball_midpoint(spec.dim, n, f, spec.threads);
  r.value = prev;
  r.points_per_axis = n;
  for (std::size_t i = 0; i < spec.max_doublings; ++i) {
    n *= 2;
    const double cur = unit_ball_midpoint(spec.dim, n, f, spec.threads);
    const double scale = std::max(std::abs(cur), 1e-300);
    r.last_change = std::abs(cur - prev) / scale;
    r.value = cur;
    r.points_per_axis = n;
    if (r.last_change < spec.rel_tol) {
      r.converged = true;
      return r;
    }
    prev = cur;
  }
  return r;
}

QuadratureResult q_integral(const VectorConfig& config, double decay, const QuadratureSpec& spec) {
  if (!(decay > 0)) throw InvalidInput("decay constant must be positive");
  if (spec.dim != config.dim()) throw InvalidInput("quadrature dimension does not match the config");
  const auto vs = config.as_double();
  return integrate_unit_ball(spec, [&](const double* z) {
    double s = 0.0;
    for (const auto& v : vs) {
      const double d = dist_to_int(dot(v, z));
      s += d * d;
    }
    return std::exp(-decay * s);
  });
}

EsseenBound esseen_bound(const VectorConfig& config, const QuadratureSpec& spec, PhaseConvention convention,
                         double constant) {
  if (spec.dim != config.dim()) throw InvalidInput("quadrature dimension does not match the config");
  const auto vs = config.as_double();
  const double f = phase_factor(convention);
  EsseenBound b;
  b.constant = constant;
  b.integral = integrate_unit_ball(spec, [&](const double* z) {
    double prod = 1.0;
    for (const auto& v : vs) prod *= std::abs(std::cos(f * dot(v, z)));
    return prod;
  });
  b.value = constant * b.integral.value;
  return b;
}

GramSchmidt gram_schmidt_residuals(const std::vector<std::vector<double>>& w, double tol) {
  GramSchmidt gs;
  if (w.empty()) return gs;
  const std::size_t dim = w.front().size();
  if (w.size() > dim) throw InvalidInput("more vectors than the ambient dimension");
  for (const auto& v : w) {
    if (v.size() != dim) throw InvalidInput("vectors differ in dimension");
    std::vector<double> r = v;
    // Two passes of modified Gram-Schmidt for stability.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& e : gs.basis) {
        const double c = dot(e, r.data());
        for (std::size_t k = 0; k < dim; ++k) r[k] -= c * e[k];
      }
    }
    double len = 0.0;
    for (double x : r) len += x * x;
    len = std::sqrt(len);
    double scale = 0.0;
    for (double x : v) scale += x * x;
    scale = std::sqrt(scale);
    if (len <= tol * std::max(1.0, scale)) {
      gs.residuals.push_back(0.0);
      continue;
    }
    gs.residuals.push_back(len);
    for (double& x : r) x /= len;
    gs.basis.push_back(std::move(r));
  }
  return gs;
}

DspanInstance DspanInstance::make(std::vector<std::vector<double>> w, std::vector<double> u, double lambda) {
  if (w.empty()) throw InvalidInput("dspan instance needs at least one vector");
  if (u.size() != w.size()) throw InvalidInput("one shift per vector is required");
  if (!(lambda >= 0)) throw InvalidInput("lambda must be nonnegative");
  const std::size_t dim = w.front().size();
  if (w.size() != dim) throw InvalidInput("dspan instance needs exactly d vectors in R^d");
  const GramSchmidt gs = gram_schmidt_residuals(w);
  for (std::size_t j = 0; j < gs.residuals.size(); ++j) {
    if (gs.residuals[j] < 1.0 - 1e-12) {
      throw InvalidInput("w_" + std::to_string(j + 1) + " lies within distance 1 of the span of its predecessors");
    }
  }
  return DspanInstance{std::move(w), std::move(u), lambda};
}

DspanResult dspan_integral(const DspanInstance& inst, const QuadratureSpec& spec) {
  if (spec.dim != inst.dim()) throw InvalidInput("quadrature dimension does not match the instance");
  DspanResult r;
  r.integral = integrate_unit_ball(spec, [&](const double* z) {
    double s = 0.0;
    for (std::size_t j = 0; j < inst.w.size(); ++j) {
      const double d = dist_to_int(dot(inst.w[j], z) + inst.u[j]);
      s += d * d;
    }
    return std::exp(-inst.lambda * s);
  });
  r.scaled = r.integral.value * std::pow(1.0 + inst.lambda, 0.5 * static_cast<double>(inst.dim()));
  return r;
}

double dspan_base_1d(double lambda, std::size_t points) {
  return unit_ball_midpoint(1, points, [lambda](const double* z) {
    const double d = dist_to_int(z[0]);
    return std::exp(-lambda * d * d);
  });
}

double law_charfun_modulus(const CoefficientLaw& law, double t, PhaseConvention convention) {
  const double f = phase_factor(convention);
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < law.support().size(); ++i) {
    const double p = to_double(law.probabilities()[i]);
    acc += p * std::polar(1.0, f * static_cast<double>(law.support()[i]) * t);
  }
  return std::abs(acc);
}

MuBoundedReport check_mu_bounded(const CoefficientLaw& law, double mu, double t_min, double t_max, double t_step,
                                 PhaseConvention convention) {
  if (!(mu > 0.0 && mu <= 1.0)) throw InvalidInput("mu must lie in (0, 1]");
  if (!(t_step > 0.0) || t_max < t_min) throw InvalidInput("invalid t-grid");
  MuBoundedReport rep;
  rep.convention = convention;
  rep.worst_gap = -std::numeric_limits<double>::infinity();
  const auto steps = static_cast<std::size_t>(std::floor((t_max - t_min) / t_step + 1e-9));
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = t_min + static_cast<double>(i) * t_step;
    const double lhs = law_charfun_modulus(law, t, convention);
    const double rhs = (1.0 - mu) + mu * std::cos(kPi * t);
    if (lhs - rhs > rep.worst_gap) {
      rep.worst_gap = lhs - rhs;
      rep.worst_t = t;
    }
    ++rep.grid_points;
  }
  rep.pass = rep.worst_gap <= 1e-12;
  return rep;
}

}  // namespace lolab
