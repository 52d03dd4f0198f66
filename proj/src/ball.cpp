#include "lolab/ball.hpp"

#include "lolab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <unordered_map>

namespace lolab {

namespace {

using i128 = __int128;

constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2;

i128 saturating_i128(const BigInt& v) {
  static const BigInt kMax = (BigInt(1) << 126);
  if (v >= kMax) return static_cast<i128>(1) << 126;
  if (v < 0) return -1;
  const BigInt lo_part = v & BigInt(~std::uint64_t{0});
  const BigInt hi_part = v >> 64;
  const auto lo = lo_part.convert_to<std::uint64_t>();
  const auto hi = hi_part.convert_to<std::uint64_t>();
  return (static_cast<i128>(hi) << 64) | static_cast<i128>(lo);
}

// Exact test |x/D - C/E|^2 <= r^2 for scaled integer atoms x.
using ExactBallTest = LatticeBall;

double squared_distance(const double* a, const double* b, std::size_t dim) {
  double s = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

double norm(const double* a, std::size_t dim) {
  double s = 0.0;
  for (std::size_t k = 0; k < dim; ++k) s += a[k] * a[k];
  return std::sqrt(s);
}

// Uniform grid over atoms with cell edge `cell`, keyed by a hash of the cell
// index. Hash collisions only add spurious candidates; callers filter by
// distance.
class AtomGrid {
 public:
  AtomGrid(const std::vector<double>& pts, std::size_t dim, double cell) : pts_(pts), dim_(dim), cell_(cell) {
    const std::size_t m = pts.size() / dim;
    brute_ = m <= kBruteAtoms;
    if (brute_) return;
    for (std::size_t i = 0; i < m; ++i) buckets_[key_of(&pts[i * dim], nullptr)].push_back(static_cast<std::uint32_t>(i));
  }

  // Appends every atom within distance `radius` (<= cell) of point p.
  template <typename F>
  void for_each_near(const double* p, double radius, F&& f) const {
    if (brute_) {
      const double r2 = radius * radius;
      const std::size_t m = pts_.size() / dim_;
      for (std::size_t j = 0; j < m; ++j) {
        if (squared_distance(p, &pts_[j * dim_], dim_) <= r2) f(j);
      }
      return;
    }
    std::vector<std::int64_t> base(dim_);
    for (std::size_t k = 0; k < dim_; ++k) base[k] = static_cast<std::int64_t>(std::floor(p[k] / cell_));
    std::vector<std::int64_t> idx(dim_);
    const double r2 = radius * radius;
    std::size_t combos = 1;
    for (std::size_t k = 0; k < dim_; ++k) combos *= 3;
    seen_.clear();
    for (std::size_t c = 0; c < combos; ++c) {
      std::size_t rest = c;
      for (std::size_t k = 0; k < dim_; ++k) {
        idx[k] = base[k] + static_cast<std::int64_t>(rest % 3) - 1;
        rest /= 3;
      }
      const auto h = hash(idx.data());
      if (std::find(seen_.begin(), seen_.end(), h) != seen_.end()) continue;
      seen_.push_back(h);
      auto it = buckets_.find(h);
      if (it == buckets_.end()) continue;
      for (std::uint32_t j : it->second) {
        if (squared_distance(p, &pts_[j * dim_], dim_) <= r2) f(static_cast<std::size_t>(j));
      }
    }
  }

 private:
  std::uint64_t hash(const std::int64_t* idx) const {
    std::uint64_t h = 0x9E3779B97F4A7C15ull;
    for (std::size_t k = 0; k < dim_; ++k) {
      h ^= static_cast<std::uint64_t>(idx[k]) + 0x7F4A7C159E3779B9ull + (h << 6) + (h >> 2);
      h *= 0xBF58476D1CE4E5B9ull;
    }
    return h;
  }

  std::uint64_t key_of(const double* p, std::int64_t*) const {
    std::vector<std::int64_t> idx(dim_);
    for (std::size_t k = 0; k < dim_; ++k) idx[k] = static_cast<std::int64_t>(std::floor(p[k] / cell_));
    return hash(idx.data());
  }

  const std::vector<double>& pts_;
  std::size_t dim_;
  double cell_;
  // Below this many atoms a linear scan beats the hash lookups.
  static constexpr std::size_t kBruteAtoms = 192;
  bool brute_ = false;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets_;
  mutable std::vector<std::uint64_t> seen_;
};

// ---------------------------------------------------------------------------
// Minimum enclosing ball

struct Sphere {
  RationalVector center;
  Rational r2;
  bool valid = false;
};

// Smallest ball with every point of `boundary` on its surface; invalid if the
// points are not cospherical within their affine hull.
Sphere ball_from_boundary(const std::vector<const RationalVector*>& boundary, std::size_t dim) {
  Sphere s;
  if (boundary.empty()) return s;
  const RationalVector& p0 = *boundary.front();
  const std::size_t k = boundary.size() - 1;
  std::vector<RationalVector> a(k, RationalVector(dim));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t c = 0; c < dim; ++c) a[i][c] = (*boundary[i + 1])[c] - p0[c];
  }
  // Gram system G lambda = b with G_ij = a_i . a_j, b_i = |a_i|^2 / 2.
  std::vector<std::vector<Rational>> g(k, std::vector<Rational>(k + 1));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      Rational dot = 0;
      for (std::size_t c = 0; c < dim; ++c) dot += a[i][c] * a[j][c];
      g[i][j] = dot;
    }
    g[i][k] = g[i][i] / 2;
  }
  std::vector<int> pivot_col(k, -1);
  std::size_t row = 0;
  for (std::size_t col = 0; col < k && row < k; ++col) {
    std::size_t p = row;
    while (p < k && g[p][col] == 0) ++p;
    if (p == k) continue;
    std::swap(g[p], g[row]);
    for (std::size_t r = 0; r < k; ++r) {
      if (r == row || g[r][col] == 0) continue;
      const Rational f = g[r][col] / g[row][col];
      for (std::size_t c = col; c <= k; ++c) g[r][c] -= f * g[row][c];
    }
    pivot_col[row] = static_cast<int>(col);
    ++row;
  }
  for (std::size_t r = row; r < k; ++r) {
    if (g[r][k] != 0) return s;  // inconsistent: not cospherical
  }
  std::vector<Rational> lambda(k, Rational(0));
  for (std::size_t r = 0; r < row; ++r) {
    const auto col = static_cast<std::size_t>(pivot_col[r]);
    lambda[col] = g[r][k] / g[r][col];
  }
  s.center = p0;
  for (std::size_t i = 0; i < k; ++i) {
    if (lambda[i] == 0) continue;
    for (std::size_t c = 0; c < dim; ++c) s.center[c] += lambda[i] * a[i][c];
  }
  s.r2 = 0;
  for (std::size_t c = 0; c < dim; ++c) {
    const Rational t = s.center[c] - p0[c];
    s.r2 += t * t;
  }
  s.valid = true;
  return s;
}

bool sphere_contains(const Sphere& s, const RationalVector& p) {
  if (!s.valid) return false;
  Rational d2 = 0;
  for (std::size_t c = 0; c < p.size(); ++c) {
    const Rational t = p[c] - s.center[c];
    d2 += t * t;
    if (d2 > s.r2) return false;
  }
  return true;
}

Sphere welzl(const std::vector<RationalVector>& pts, std::size_t count, std::vector<const RationalVector*>& boundary,
             std::size_t dim) {
  if (count == 0 || boundary.size() == dim + 1) return ball_from_boundary(boundary, dim);
  const RationalVector& p = pts[count - 1];
  Sphere s = welzl(pts, count - 1, boundary, dim);
  if (sphere_contains(s, p)) return s;
  boundary.push_back(&p);
  s = welzl(pts, count - 1, boundary, dim);
  boundary.pop_back();
  return s;
}

// ---------------------------------------------------------------------------
// Deepest ball search

struct Candidate {
  bool found = false;
  bool exact = false;
  RationalVector exact_center;
  std::vector<double> center;
  std::uint64_t weight = 0;
};

class DeepestBall {
 public:
  DeepestBall(const SumCloud& cloud, const Rational& delta, const MaxBallOptions& options)
      : cloud_(cloud), delta_(delta), opt_(options), dim_(cloud.dim()), m_(cloud.size()) {
    delta_d_ = to_double(delta);
    reach_ = delta_d_ * (1.0 + opt_.tolerance);
    const std::int64_t scale = cloud.scale();
    pts_.resize(m_ * dim_);
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t k = 0; k < dim_; ++k) {
        pts_[i * dim_ + k] = static_cast<double>(cloud.point(i)[k]) / static_cast<double>(scale);
      }
    }
    t_atom_ = saturating_i128(floor(Rational(delta * delta * scale * scale)));
    t_mid_ = saturating_i128(floor(Rational(4 * delta * delta * scale * scale)));
  }

  MaxBallResult run() {
    MaxBallResult result;
    result.tolerance = opt_.tolerance;
    if (delta_ == 0) {
      atom_centers(/*use_grid=*/false);
    } else if (dim_ == 1) {
      window_1d();
    } else if (opt_.floor_weight > 0 && projection_bound() < opt_.floor_weight) {
      // No ball can reach the floor; finish() reports a valid lower bound.
    } else {
      grid_ = std::make_unique<AtomGrid>(pts_, dim_, 2.0 * reach_);
      // Every ball can be translated until an atom reaches its boundary, so
      // the planar sweep alone is complete; atom centers only supply exact
      // candidates for certification.
      if (dim_ != 2 || opt_.certify) atom_centers(/*use_grid=*/true);
      if (dim_ == 2) {
        sweep_2d();
      } else {
        midpoints();
        if (dim_ == 3) lifted_triples();
        result.heuristic = dim_ > 3;
      }
    }
    finish(result);
    return result;
  }

 private:
  std::uint64_t target() const { return std::max(best_.found ? best_.weight + 1 : 0, opt_.floor_weight); }

  void offer_exact(RationalVector center, std::uint64_t weight) {
    if (best_.found && weight <= best_.weight) return;
    best_.found = true;
    best_.exact = true;
    best_.exact_center = std::move(center);
    best_.weight = weight;
  }

  void offer_float(std::vector<double> center, std::uint64_t weight) {
    if (best_.found && weight <= best_.weight) return;
    best_.found = true;
    best_.exact = false;
    best_.center = std::move(center);
    best_.weight = weight;
  }

  // A ball of radius delta projects into an interval of length 2 delta along
  // any unit direction, so the deepest window of each projection bounds the
  // ball weight from above. Returns the smallest bound over a fixed set of
  // directions, stopping once it drops below the floor.
  std::uint64_t projection_bound() const {
    std::vector<std::vector<double>> dirs;
    if (dim_ == 2) {
      for (int k = 0; k < 8; ++k) {
        const double a = k * std::numbers::pi / 8;
        dirs.push_back({std::cos(a), std::sin(a)});
      }
    } else {
      for (std::size_t k = 0; k < dim_; ++k) {
        std::vector<double> u(dim_, 0.0);
        u[k] = 1.0;
        dirs.push_back(std::move(u));
      }
      if (dim_ == 3) {
        const double r3 = 1.0 / std::sqrt(3.0);
        for (int sy : {1, -1}) {
          for (int sz : {1, -1}) dirs.push_back({r3, sy * r3, sz * r3});
        }
      }
    }
    double extent = 0.0;
    for (double x : pts_) extent = std::max(extent, std::abs(x));
    const double width = 2.0 * reach_ * (1.0 + 1e-9) + 1e-9 * extent * static_cast<double>(dim_);
    std::uint64_t bound = cloud_.total();
    std::vector<std::pair<double, std::uint64_t>> proj(m_);
    for (const auto& u : dirs) {
      for (std::size_t i = 0; i < m_; ++i) {
        double t = 0.0;
        for (std::size_t k = 0; k < dim_; ++k) t += u[k] * pts_[i * dim_ + k];
        proj[i] = {t, cloud_.multiplicity(i)};
      }
      std::sort(proj.begin(), proj.end());
      std::uint64_t w = 0, best = 0;
      for (std::size_t i = 0, j = 0; i < m_; ++i) {
        while (j < m_ && proj[j].first - proj[i].first <= width) w += proj[j++].second;
        best = std::max(best, w);
        w -= proj[i].second;
      }
      bound = std::min(bound, best);
      if (bound < opt_.floor_weight) break;
    }
    return bound;
  }

  RationalVector atom_center(std::size_t i) const { return cloud_.rational_point(i); }

  i128 scaled_sq_dist(std::size_t i, std::size_t j) const {
    const auto a = cloud_.point(i);
    const auto b = cloud_.point(j);
    i128 s = 0;
    for (std::size_t k = 0; k < dim_; ++k) {
      const i128 t = static_cast<i128>(a[k]) - b[k];
      s += t * t;
    }
    return s;
  }

  void atom_centers(bool use_grid) {
    for (std::size_t i = 0; i < m_; ++i) {
      std::uint64_t w = 0;
      if (use_grid) {
        grid_->for_each_near(&pts_[i * dim_], reach_, [&](std::size_t j) {
          if (scaled_sq_dist(i, j) <= t_atom_) w += cloud_.multiplicity(j);
        });
      } else {
        for (std::size_t j = 0; j < m_; ++j) {
          if (scaled_sq_dist(i, j) <= t_atom_) w += cloud_.multiplicity(j);
        }
      }
      if (!best_.found || w > best_.weight) offer_exact(atom_center(i), w);
    }
  }

  void window_1d() {
    const BigInt width_big = floor(Rational(2 * delta_ * cloud_.scale()));
    const std::int64_t width = width_big > BigInt(std::int64_t{1} << 62) ? (std::int64_t{1} << 62)
                                                                         : width_big.convert_to<std::int64_t>();
    std::uint64_t best_w = 0;
    i128 best_mid2 = 0;  // X_i + X_j, i.e. twice the scaled midpoint
    bool have = false;
    std::size_t j = 0;
    std::uint64_t w = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (j < i) {
        j = i;
        w = 0;
      }
      while (j < m_ && static_cast<i128>(cloud_.point(j)[0]) - cloud_.point(i)[0] <= width) {
        w += cloud_.multiplicity(j);
        ++j;
      }
      const i128 mid2 = static_cast<i128>(cloud_.point(i)[0]) + cloud_.point(j - 1)[0];
      const auto abs_mid2 = mid2 < 0 ? -mid2 : mid2;
      const auto abs_best = best_mid2 < 0 ? -best_mid2 : best_mid2;
      // Among maximal windows prefer the one centered nearest the origin,
      // then the nonnegative side.
      const bool better = !have || w > best_w ||
                          (w == best_w && (abs_mid2 < abs_best || (abs_mid2 == abs_best && mid2 > best_mid2)));
      if (better) {
        have = true;
        best_w = w;
        best_mid2 = mid2;
      }
      w -= cloud_.multiplicity(i);
    }
    // |X| <= 2^40, so the doubled midpoint fits in 64 bits.
    Rational mid(BigInt(static_cast<std::int64_t>(best_mid2)), BigInt(2) * cloud_.scale());
    offer_exact(RationalVector{mid}, best_w);
  }

  std::uint64_t neighbourhood(std::size_t a, std::vector<std::size_t>& out) const {
    out.clear();
    std::uint64_t w = 0;
    grid_->for_each_near(&pts_[a * dim_], 2.0 * reach_, [&](std::size_t j) {
      if (j == a) return;
      out.push_back(j);
      w += cloud_.multiplicity(j);
    });
    return w + cloud_.multiplicity(a);
  }

  // Monotone substitute for the polar angle of (x, y) with values in [0, 4).
  static double pseudo_angle(double x, double y) {
    const double r = std::abs(x) + std::abs(y);
    const double p = y / r;
    return x >= 0 ? (y >= 0 ? p : 4.0 + p) : 2.0 - p;
  }

  static std::pair<double, double> from_pseudo_angle(double t) {
    // Inverse of pseudo_angle on the unit diamond, then normalized.
    double x, y;
    if (t < 1.0) {
      y = t;
      x = 1.0 - t;
    } else if (t < 3.0) {
      y = 2.0 - t;
      x = -(1.0 - std::abs(y));
    } else {
      y = t - 4.0;
      x = 1.0 - std::abs(y);
    }
    const double len = std::hypot(x, y);
    return {x / len, y / len};
  }

  void sweep_2d() {
    std::vector<std::size_t> nbrs;
    // (pseudo-angle, signed weight); entries sort before exits at equal angles.
    std::vector<std::pair<double, std::int64_t>> events;
    const double r2 = reach_ * reach_;
    const double dd = delta_d_;
    for (std::size_t a = 0; a < m_; ++a) {
      const std::uint64_t bound = neighbourhood(a, nbrs);
      if (bound < target()) continue;
      const double ax = pts_[a * 2], ay = pts_[a * 2 + 1];
      std::uint64_t base = cloud_.multiplicity(a);
      events.clear();
      for (std::size_t j : nbrs) {
        const double dx = pts_[j * 2] - ax, dy = pts_[j * 2 + 1] - ay;
        const double t2 = dx * dx + dy * dy;
        const double t = std::sqrt(t2);
        // Centers on the circle of radius delta around the anchor that cover
        // atom j form the arc of half-width acos(kappa) around direction j.
        const double kappa = (dd * dd + t2 - r2) / (2.0 * dd * t);
        if (kappa > 1.0) continue;
        const std::uint64_t w = cloud_.multiplicity(j);
        if (kappa <= -1.0) {
          base += w;
          continue;
        }
        const double ux = dx / t, uy = dy / t;
        const double perp = std::sqrt(std::max(0.0, 1.0 - kappa * kappa));
        const double start = pseudo_angle(kappa * ux + perp * uy, kappa * uy - perp * ux);
        const double end = pseudo_angle(kappa * ux - perp * uy, kappa * uy + perp * ux);
        const auto sw = static_cast<std::int64_t>(w);
        if (end < start) base += w;  // arc wraps through angle 0
        events.emplace_back(start, -sw);
        events.emplace_back(end, sw);
      }
      std::sort(events.begin(), events.end());
      std::uint64_t depth = base;
      std::uint64_t best_depth = depth;
      double best_angle = events.empty() ? 0.0 : 0.5 * events.front().first;
      for (std::size_t e = 0; e < events.size(); ++e) {
        if (events[e].second < 0) {
          depth += static_cast<std::uint64_t>(-events[e].second);
          if (depth > best_depth) {
            best_depth = depth;
            const double next = e + 1 < events.size() ? events[e + 1].first : events[e].first;
            best_angle = 0.5 * (events[e].first + next);
          }
        } else {
          depth -= static_cast<std::uint64_t>(events[e].second);
        }
      }
      if (best_depth < target()) continue;
      const auto [cx, cy] = from_pseudo_angle(best_angle);
      std::vector<double> center{ax + dd * cx, ay + dd * cy};
      // Recount at the chosen center; the sweep value and the count agree up
      // to rounding at interval ends.
      std::uint64_t w = count_float(center.data(), a, nbrs);
      offer_float(std::move(center), w);
    }
  }

  std::uint64_t count_float(const double* c, std::size_t a, const std::vector<std::size_t>& nbrs) const {
    const double r2 = reach_ * reach_;
    std::uint64_t w = 0;
    if (squared_distance(c, &pts_[a * dim_], dim_) <= r2) w += cloud_.multiplicity(a);
    for (std::size_t j : nbrs) {
      if (squared_distance(c, &pts_[j * dim_], dim_) <= r2) w += cloud_.multiplicity(j);
    }
    return w;
  }

  void midpoints() {
    std::vector<std::size_t> nbrs;
    for (std::size_t a = 0; a < m_; ++a) {
      const std::uint64_t bound = neighbourhood(a, nbrs);
      if (bound < target()) continue;
      const auto pa = cloud_.point(a);
      for (std::size_t b : nbrs) {
        if (b < a) continue;
        if (scaled_sq_dist(a, b) > t_mid_) continue;
        const auto pb = cloud_.point(b);
        // |2x - a - b|^2 <= 4 delta^2 D^2
        std::uint64_t w = 0;
        auto test = [&](std::size_t j) {
          const auto pj = cloud_.point(j);
          i128 s = 0;
          for (std::size_t k = 0; k < dim_; ++k) {
            const i128 t = 2 * static_cast<i128>(pj[k]) - pa[k] - pb[k];
            s += t * t;
          }
          if (s <= t_mid_) w += cloud_.multiplicity(j);
        };
        test(a);
        for (std::size_t j : nbrs) test(j);
        if (w >= target()) {
          RationalVector c(dim_);
          for (std::size_t k = 0; k < dim_; ++k) {
            c[k] = Rational(BigInt(pa[k]) + BigInt(pb[k]), BigInt(2) * cloud_.scale());
          }
          offer_exact(std::move(c), w);
        }
      }
    }
  }

  void lifted_triples() {
    std::vector<std::size_t> nbrs;
    const double r2 = reach_ * reach_;
    for (std::size_t a = 0; a < m_; ++a) {
      const std::uint64_t bound = neighbourhood(a, nbrs);
      if (bound < target()) continue;
      const double* A = &pts_[a * 3];
      for (std::size_t ib = 0; ib < nbrs.size(); ++ib) {
        const std::size_t b = nbrs[ib];
        if (b < a) continue;
        const double* B = &pts_[b * 3];
        for (std::size_t ic = 0; ic < nbrs.size(); ++ic) {
          const std::size_t c = nbrs[ic];
          if (c <= b) continue;
          if (bound < target()) break;
          const double* C = &pts_[c * 3];
          if (squared_distance(B, C, 3) > 4.0 * r2) continue;
          const double ab[3] = {B[0] - A[0], B[1] - A[1], B[2] - A[2]};
          const double ac[3] = {C[0] - A[0], C[1] - A[1], C[2] - A[2]};
          const double nrm[3] = {ab[1] * ac[2] - ab[2] * ac[1], ab[2] * ac[0] - ab[0] * ac[2],
                                 ab[0] * ac[1] - ab[1] * ac[0]};
          const double n2 = nrm[0] * nrm[0] + nrm[1] * nrm[1] + nrm[2] * nrm[2];
          const double scale = (ab[0] * ab[0] + ab[1] * ab[1] + ab[2] * ab[2]) *
                               (ac[0] * ac[0] + ac[1] * ac[1] + ac[2] * ac[2]);
          if (n2 <= 1e-24 * scale) continue;  // collinear
          const double ab2 = ab[0] * ab[0] + ab[1] * ab[1] + ab[2] * ab[2];
          const double ac2 = ac[0] * ac[0] + ac[1] * ac[1] + ac[2] * ac[2];
          // ac x n and n x ab
          const double u[3] = {ac[1] * nrm[2] - ac[2] * nrm[1], ac[2] * nrm[0] - ac[0] * nrm[2],
                               ac[0] * nrm[1] - ac[1] * nrm[0]};
          const double v[3] = {nrm[1] * ab[2] - nrm[2] * ab[1], nrm[2] * ab[0] - nrm[0] * ab[2],
                               nrm[0] * ab[1] - nrm[1] * ab[0]};
          double off[3];
          for (int k = 0; k < 3; ++k) off[k] = (ab2 * u[k] + ac2 * v[k]) / (2.0 * n2);
          const double rho2 = off[0] * off[0] + off[1] * off[1] + off[2] * off[2];
          if (rho2 > r2) continue;
          const double h = std::sqrt(std::max(0.0, delta_d_ * delta_d_ - rho2));
          const double inv = 1.0 / std::sqrt(n2);
          for (int sign : {1, -1}) {
            std::vector<double> center(3);
            for (int k = 0; k < 3; ++k) center[k] = A[k] + off[k] + sign * h * nrm[k] * inv;
            const std::uint64_t w = count_float(center.data(), a, nbrs);
            if (w >= target()) offer_float(std::move(center), w);
            if (h == 0.0) break;
          }
        }
      }
    }
  }

  // Atoms admitted by tolerance around a float center.
  std::vector<std::size_t> covered_float(const std::vector<double>& c) const {
    std::vector<std::size_t> out;
    const double r2 = reach_ * reach_;
    for (std::size_t i = 0; i < m_; ++i) {
      if (squared_distance(c.data(), &pts_[i * dim_], dim_) <= r2) out.push_back(i);
    }
    return out;
  }

  std::vector<std::size_t> covered_exact(const RationalVector& c) const {
    std::vector<std::size_t> out;
    ExactBallTest test(c, delta_, cloud_.scale());
    const std::vector<double> cd = to_double(c);
    const double margin = reach_ * (1.0 + 1e-6) + 1e-300;
    for (std::size_t i = 0; i < m_; ++i) {
      if (squared_distance(cd.data(), &pts_[i * dim_], dim_) > margin * margin) continue;
      if (test.contains(cloud_.point(i))) out.push_back(i);
    }
    return out;
  }

  std::uint64_t weight_of(const std::vector<std::size_t>& idx) const {
    std::uint64_t w = 0;
    for (std::size_t i : idx) w += cloud_.multiplicity(i);
    return w;
  }

  // Exact confirmation that the atoms `idx` all lie in the closed ball of
  // radius delta around the dyadic rational value of the float center.
  bool dyadic_center_covers(const std::vector<double>& c, const std::vector<std::size_t>& idx) const {
    RationalVector rc;
    for (double x : c) rc.push_back(rational_from_double(x));
    std::unique_ptr<ExactBallTest> test;
    const double cn = norm(c.data(), dim_);
    const double d2 = delta_d_ * delta_d_;
    for (std::size_t i : idx) {
      const double* p = &pts_[i * dim_];
      const double bound = cn + norm(p, dim_) + delta_d_;
      const double err = 8.0 * static_cast<double>(dim_ + 2) * kUnitRoundoff * bound * bound;
      if (squared_distance(c.data(), p, dim_) + err <= d2 * (1.0 - 4 * kUnitRoundoff)) continue;
      if (!test) test = std::make_unique<ExactBallTest>(rc, delta_, cloud_.scale());
      if (!test->contains(cloud_.point(i))) return false;
    }
    return true;
  }

  void finish(MaxBallResult& result) {
    const std::uint32_t n = cloud_.n();
    if (!best_.found) {
      // Nothing reached the floor; report the first atom as a valid lower bound.
      auto c = atom_center(0);
      const auto cov = covered_exact(c);
      result.weight = weight_of(cov);
      result.witness = Ball{std::move(c), delta_};
      result.probability = ExactProb::from_count(result.weight, n);
      return;
    }
    std::vector<std::size_t> cov;
    RationalVector center;
    if (best_.exact) {
      center = best_.exact_center;
      cov = covered_exact(center);
    } else {
      cov = covered_float(best_.center);
      if (!opt_.certify) {
        for (double x : best_.center) center.push_back(rational_from_double(x));
        result.weight = weight_of(cov);
        result.witness = Ball{std::move(center), delta_};
        result.probability = ExactProb::from_count(result.weight, n);
        result.certified = false;
        return;
      }
      if (dyadic_center_covers(best_.center, cov)) {
        for (double x : best_.center) center.push_back(rational_from_double(x));
      } else {
        // Tolerance admitted an atom outside the exact ball: fall back to the
        // exact enclosing ball of the admitted set, or to the dyadic center.
        std::vector<RationalVector> pts;
        for (std::size_t i : cov) pts.push_back(cloud_.rational_point(i));
        const EnclosingBall meb = minimum_enclosing_ball(std::move(pts));
        if (meb.squared_radius <= delta_ * delta_) {
          center = meb.center;
        } else {
          for (double x : best_.center) center.push_back(rational_from_double(x));
          result.certified = false;
        }
      }
      cov = covered_exact(center);
    }
    if (opt_.canonical_witness && !cov.empty() && dim_ >= 2) {
      std::vector<RationalVector> pts;
      for (std::size_t i : cov) pts.push_back(cloud_.rational_point(i));
      EnclosingBall meb = minimum_enclosing_ball(std::move(pts));
      if (meb.squared_radius <= delta_ * delta_) {
        auto cov2 = covered_exact(meb.center);
        if (weight_of(cov2) >= weight_of(cov)) {
          center = std::move(meb.center);
          cov = std::move(cov2);
        }
      }
    }
    result.weight = weight_of(cov);
    result.witness = Ball{std::move(center), delta_};
    result.probability = ExactProb::from_count(result.weight, n);
  }

  const SumCloud& cloud_;
  Rational delta_;
  MaxBallOptions opt_;
  std::size_t dim_;
  std::size_t m_;
  double delta_d_ = 0.0;
  double reach_ = 0.0;
  std::vector<double> pts_;
  i128 t_atom_ = 0;
  i128 t_mid_ = 0;
  std::unique_ptr<AtomGrid> grid_;
  Candidate best_;
};

}  // namespace

LatticeBall::LatticeBall(const RationalVector& center, const Rational& radius, std::int64_t scale) {
  e_ = 1;
  for (const auto& c : center) e_ = lcm(e_, boost::multiprecision::denominator(c));
  for (const auto& c : center) cd_.push_back(boost::multiprecision::numerator(Rational(c * e_)) * scale);
  bound_ = floor(Rational(radius * radius * scale * scale * e_ * e_));
}

bool LatticeBall::contains(std::span<const std::int64_t> x) const {
  BigInt s = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const BigInt diff = BigInt(x[k]) * e_ - cd_[k];
    s += diff * diff;
    if (s > bound_) return false;
  }
  return true;
}

std::uint64_t weight_in_ball(const SumCloud& cloud, const Ball& ball) {
  if (ball.center.size() != cloud.dim()) throw InvalidInput("ball dimension does not match the cloud");
  if (ball.radius < 0) throw InvalidInput("ball radius must be nonnegative");
  ExactBallTest test(ball.center, ball.radius, cloud.scale());
  std::uint64_t w = 0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (test.contains(cloud.point(i))) w += cloud.multiplicity(i);
  }
  return w;
}

ExactProb prob_in_ball(const SumCloud& cloud, const Ball& ball) {
  return ExactProb::from_count(weight_in_ball(cloud, ball), cloud.n());
}

std::uint64_t weight_in_ball(const SumCloud& cloud, const FloatBall& ball, double tolerance) {
  if (ball.center.size() != cloud.dim()) throw InvalidInput("ball dimension does not match the cloud");
  if (!(ball.radius >= 0)) throw InvalidInput("ball radius must be nonnegative");
  const double reach = ball.radius * (1.0 + tolerance);
  std::uint64_t w = 0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.double_point(i);
    if (squared_distance(p.data(), ball.center.data(), cloud.dim()) <= reach * reach) w += cloud.multiplicity(i);
  }
  return w;
}

ExactProb prob_in_ball(const SumCloud& cloud, const FloatBall& ball, double tolerance) {
  return ExactProb::from_count(weight_in_ball(cloud, ball, tolerance), cloud.n());
}

EnclosingBall minimum_enclosing_ball(std::vector<RationalVector> points) {
  if (points.empty()) throw InvalidInput("enclosing ball of an empty set");
  const std::size_t dim = points.front().size();
  std::mt19937 gen(20090406u);
  std::shuffle(points.begin(), points.end(), gen);
  std::vector<const RationalVector*> boundary;
  Sphere s = welzl(points, points.size(), boundary, dim);
  if (!s.valid) throw VerificationFailure("degenerate enclosing ball");
  return EnclosingBall{std::move(s.center), std::move(s.r2)};
}

MaxBallResult max_ball_probability(const SumCloud& cloud, const Rational& delta, const MaxBallOptions& options) {
  if (cloud.size() == 0) throw InvalidInput("empty sum cloud");
  if (delta < 0) throw InvalidInput("radius must be nonnegative");
  if (cloud.size() > options.atom_cap) {
    throw CapExceeded(std::to_string(cloud.size()) + " distinct atoms exceed the atom cap " +
                      std::to_string(options.atom_cap));
  }
  if (cloud.dim() > 3 && !options.allow_heuristic) {
    throw InvalidInput("exact deepest-ball search supports d <= 3; enable the heuristic for d = " +
                       std::to_string(cloud.dim()));
  }
  return DeepestBall(cloud, delta, options).run();
}

}  // namespace lolab
