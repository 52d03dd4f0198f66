#include "lolab/geometry.hpp"

#include "lolab/errors.hpp"
#include "lolab/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>

namespace lolab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMaxNetVertices = std::size_t{1} << 23;

double dot(const std::vector<double>& a, const double* b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

std::size_t count_at(const std::vector<std::vector<double>>& vs, const double* theta, double slack) {
  std::size_t c = 0;
  for (const auto& v : vs) {
    if (std::abs(dot(v, theta)) >= 1.0 - slack) ++c;
  }
  return c;
}

std::size_t count_with_margin(const std::vector<std::vector<double>>& vs, const std::vector<double>& norms,
                              const double* theta, double margin) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (std::abs(dot(vs[i], theta)) >= 1.0 + margin * norms[i]) ++c;
  }
  return c;
}

}  // namespace

std::size_t spread_count(const VectorConfig& config, std::span<const double> theta) {
  if (theta.size() != config.dim()) throw InvalidInput("direction dimension does not match the config");
  double len = 0.0;
  for (double x : theta) len += x * x;
  if (std::abs(std::sqrt(len) - 1.0) > 1e-12) throw InvalidInput("direction is not a unit vector");
  return count_at(config.as_double(), theta.data(), 0.0);
}

std::vector<std::vector<double>> icosahedral_net(double max_edge) {
  if (!(max_edge > 0)) throw InvalidInput("net resolution must be positive");
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<std::array<double, 3>> verts = {
      {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0}, {0, -1, phi}, {0, 1, phi},
      {0, -1, -phi}, {0, 1, -phi}, {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& v : verts) {
    const double l = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    for (double& x : v) x /= l;
  }
  std::vector<std::array<std::size_t, 3>> faces = {
      {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8}, {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8},
      {3, 8, 9}, {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};
  auto chord = [&](std::size_t a, std::size_t b) {
    double s = 0.0;
    for (int k = 0; k < 3; ++k) s += (verts[a][k] - verts[b][k]) * (verts[a][k] - verts[b][k]);
    return std::sqrt(s);
  };
  auto longest = [&] {
    double m = 0.0;
    for (const auto& f : faces) m = std::max({m, chord(f[0], f[1]), chord(f[1], f[2]), chord(f[2], f[0])});
    return m;
  };
  while (longest() > max_edge) {
    if (verts.size() * 4 > kMaxNetVertices) {
      throw CapExceeded("net resolution requires more than " + std::to_string(kMaxNetVertices) + " directions");
    }
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> mids;
    auto mid = [&](std::size_t a, std::size_t b) {
      const auto key = std::minmax(a, b);
      auto it = mids.find(key);
      if (it != mids.end()) return it->second;
      std::array<double, 3> m{};
      for (int k = 0; k < 3; ++k) m[k] = 0.5 * (verts[a][k] + verts[b][k]);
      const double l = std::sqrt(m[0] * m[0] + m[1] * m[1] + m[2] * m[2]);
      for (double& x : m) x /= l;
      verts.push_back(m);
      mids.emplace(key, verts.size() - 1);
      return verts.size() - 1;
    };
    std::vector<std::array<std::size_t, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      const std::size_t ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }
  std::vector<std::vector<double>> out;
  out.reserve(verts.size());
  for (const auto& v : verts) out.push_back({v[0], v[1], v[2]});
  return out;
}

SpreadReport min_spread(const VectorConfig& config, double delta_net) {
  if (!(delta_net > 0)) throw InvalidInput("net resolution must be positive");
  const auto vs = config.as_double();
  std::vector<double> norms;
  for (const auto& v : vs) norms.push_back(std::sqrt(dot(v, v.data())));
  const std::size_t dim = config.dim();

  SpreadReport rep;
  rep.net_resolution = delta_net;
  rep.empirical_min = config.size() + 1;
  std::size_t cert = config.size() + 1;
  auto visit = [&](const std::vector<double>& theta, bool net_point, double slack) {
    ++rep.directions_checked;
    const std::size_t c = count_at(vs, theta.data(), slack);
    if (c < rep.empirical_min) {
      rep.empirical_min = c;
      rep.witness_direction = theta;
    }
    if (net_point) cert = std::min(cert, count_with_margin(vs, norms, theta.data(), delta_net));
  };

  if (dim == 1) {
    visit({1.0}, false, 0.0);
    cert = rep.empirical_min;
  } else if (dim == 2) {
    const auto steps = static_cast<std::size_t>(std::ceil(kPi / delta_net));
    for (std::size_t j = 0; j < steps; ++j) {
      const double a = kPi * static_cast<double>(j) / static_cast<double>(steps);
      visit({std::cos(a), std::sin(a)}, true, 0.0);
    }
    // The count is constant between consecutive critical angles.
    std::vector<double> crit;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (norms[i] < 1.0) continue;
      const double base = std::atan2(vs[i][1], vs[i][0]);
      const double off = std::acos(std::min(1.0, 1.0 / norms[i]));
      for (double a : {base - off, base + off}) {
        double r = std::fmod(a, kPi);
        if (r < 0) r += kPi;
        crit.push_back(r);
      }
    }
    std::sort(crit.begin(), crit.end());
    for (std::size_t j = 0; j < crit.size(); ++j) {
      visit({std::cos(crit[j]), std::sin(crit[j])}, false, 1e-12);
      const double next = j + 1 < crit.size() ? crit[j + 1] : crit.front() + kPi;
      const double m = 0.5 * (crit[j] + next);
      visit({std::cos(m), std::sin(m)}, false, 0.0);
    }
  } else if (dim == 3) {
    for (const auto& theta : icosahedral_net(delta_net / 2.0)) visit(theta, true, 0.0);
  } else {
    Rng rng(0x5eed5eedull);
    const std::size_t samples = 20000;
    for (std::size_t s = 0; s < samples; ++s) {
      std::vector<double> theta(dim);
      double len = 0.0;
      for (double& x : theta) {
        x = rng.normal();
        len += x * x;
      }
      len = std::sqrt(len);
      for (double& x : theta) x /= len;
      visit(theta, false, 0.0);
    }
    rep.certified = false;
    cert = 0;
  }
  if (config.empty()) {
    rep.empirical_min = 0;
    cert = 0;
  }
  rep.certified_lower = std::min(cert, rep.empirical_min);
  return rep;
}

WitnessChain witness_chain(const VectorConfig& config) {
  if (config.empty()) throw InvalidInput("witness chain needs at least one vector");
  const auto vs = config.as_double();
  const std::size_t dim = config.dim();
  WitnessChain chain;
  std::vector<std::vector<double>> basis;
  std::vector<bool> used(vs.size(), false);
  while (chain.indices.size() < dim) {
    double best = -1.0;
    std::size_t best_i = 0;
    std::vector<double> best_r;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (used[i]) continue;
      std::vector<double> r = vs[i];
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& e : basis) {
          const double c = dot(e, r.data());
          for (std::size_t k = 0; k < dim; ++k) r[k] -= c * e[k];
        }
      }
      const double len = std::sqrt(dot(r, r.data()));
      if (len > best) {
        best = len;
        best_i = i;
        best_r = std::move(r);
      }
    }
    if (best < 1.0) break;
    used[best_i] = true;
    chain.indices.push_back(best_i);
    chain.vectors.push_back(vs[best_i]);
    chain.residuals.push_back(best);
    for (double& x : best_r) x /= best;
    basis.push_back(std::move(best_r));
  }
  return chain;
}

}  // namespace lolab
