#include "lolab/search.hpp"

#include "lolab/combinatorics.hpp"
#include "lolab/enumerate.hpp"
#include "lolab/errors.hpp"
#include "lolab/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <thread>

namespace lolab {

namespace {

using Lattice = std::vector<std::vector<std::int64_t>>;

std::int64_t squared_norm(const std::vector<std::int64_t>& v) {
  std::int64_t s = 0;
  for (auto x : v) s += x * x;
  return s;
}

// Rounds x * grid to integers and pushes coordinates away from zero until the
// exact squared norm reaches grid^2, so the rational vector has norm >= 1.
std::vector<std::int64_t> round_outward(const std::vector<double>& x, std::int64_t grid) {
  std::vector<std::int64_t> k(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) k[i] = static_cast<std::int64_t>(std::llround(x[i] * static_cast<double>(grid)));
  const std::int64_t target = grid * grid;
  if (squared_norm(k) == 0) {
    k[0] = grid;
    return k;
  }
  if (squared_norm(k) < target) {
    const double f = std::sqrt(static_cast<double>(target) / static_cast<double>(squared_norm(k)));
    for (auto& c : k) {
      const double scaled = static_cast<double>(c) * f;
      c = static_cast<std::int64_t>(c < 0 ? std::floor(scaled) : std::ceil(scaled));
    }
  }
  while (squared_norm(k) < target) {
    std::size_t big = 0;
    for (std::size_t i = 1; i < k.size(); ++i) {
      if (std::abs(k[i]) > std::abs(k[big])) big = i;
    }
    k[big] += k[big] < 0 ? -1 : 1;
  }
  return k;
}

std::vector<double> random_direction(std::size_t dim, Rng& rng) {
  std::vector<double> v(dim);
  double len = 0.0;
  do {
    len = 0.0;
    for (auto& x : v) {
      x = rng.normal();
      len += x * x;
    }
  } while (len < 1e-24);
  len = std::sqrt(len);
  for (auto& x : v) x /= len;
  return v;
}

std::vector<std::int64_t> random_vector(std::size_t dim, double max_norm, std::int64_t grid, Rng& rng) {
  auto dir = random_direction(dim, rng);
  const double r = rng.uniform(1.0, max_norm);
  for (auto& x : dir) x *= r;
  return round_outward(dir, grid);
}

Lattice to_lattice(const VectorConfig& config, std::int64_t grid) {
  Lattice out;
  for (const auto& v : config.vectors()) {
    std::vector<double> x;
    bool exact = true;
    std::vector<std::int64_t> k;
    for (const auto& c : v) {
      const Rational scaled = c * grid;
      if (boost::multiprecision::denominator(scaled) != 1) exact = false;
      x.push_back(to_double(c));
      if (exact) k.push_back(boost::multiprecision::numerator(scaled).convert_to<std::int64_t>());
    }
    out.push_back(exact && squared_norm(k) >= grid * grid ? k : round_outward(x, grid));
  }
  return out;
}

VectorConfig to_config(const Lattice& lat, std::size_t dim, std::int64_t grid, const Rational& delta) {
  std::vector<RationalVector> vs;
  for (const auto& k : lat) {
    RationalVector v;
    for (auto c : k) v.emplace_back(BigInt(c), BigInt(grid));
    vs.push_back(std::move(v));
  }
  return VectorConfig::make(dim, std::move(vs), delta);
}

struct RestartResult {
  Lattice best;
  ExactProb prob;
  std::uint64_t weight = 0;
  std::size_t evaluations = 0;
};

constexpr std::size_t kPlateauAtoms = 128;
// Candidates whose sums spread over more atoms than this are not pursued.
// Deep balls need many coincident sums, and evaluating generic clouds
// dominates the running time.
constexpr std::size_t kMaxAtoms = 512;

class Climber {
 public:
  Climber(const SearchOptions& opt, std::size_t restart)
      : opt_(opt), rng_(derive_seed(opt.seed, restart)), restart_(restart) {
    ball_opt_.canonical_witness = false;
    ball_opt_.certify = false;
    ball_opt_.atom_cap = opt.atom_cap;
    enum_opt_.max_n = opt.max_n;
    max_norm_ = 1.0 + to_double(opt.delta);
  }

  RestartResult run() {
    Lattice state = start();
    std::uint64_t cur = evaluate(state, 0);
    std::size_t cur_atoms = atoms_;
    RestartResult res{state, ExactProb::from_count(cur, opt_.n), cur, 1};
    for (std::size_t step = 0; step < opt_.steps && opt_.n > 0; ++step) {
      Lattice cand = state;
      const std::size_t i = propose(cand);
      ++res.evaluations;
      const std::uint64_t w = evaluate(cand, cur, cur_atoms, [&] {
        // Dropping v_i at most halves every ball probability, so twice the
        // deepest ball of the other n - 1 vectors bounds the candidate.
        return 2 * others_weight(state, i, (cur + 1) / 2) < cur;
      });
      if (w < cur || (w == cur && !tie_allowed(cur_atoms))) continue;
      if (cand != state) leave_one_out_.clear();
      state = std::move(cand);
      cur_atoms = atoms_;
      if (w > res.weight) {
        res.best = state;
        res.weight = w;
        res.prob = ExactProb::from_count(w, opt_.n);
      }
      cur = w;
    }
    return res;
  }

 private:
  // Deepest-ball weight of the state without vector i (out of 2^(n-1)), or
  // a value below `floor` when it is known to fall short of it.
  std::uint64_t others_weight(const Lattice& state, std::size_t i, std::uint64_t floor) {
    auto it = leave_one_out_.find(i);
    if (it != leave_one_out_.end() && (it->second.exact || it->second.floor >= floor)) return it->second.weight;
    Lattice rest;
    for (std::size_t k = 0; k < state.size(); ++k) {
      if (k != i) rest.push_back(state[k]);
    }
    if (rest.empty()) return 1;
    const SumCloud cloud = enumerate_lattice(ScaledVectors{opt_.grid, rest}, opt_.dim, enum_opt_);
    MaxBallOptions bo = ball_opt_;
    bo.floor_weight = floor;
    const std::uint64_t w = max_ball_probability(cloud, opt_.delta, bo).weight;
    const bool exact = w >= floor;
    leave_one_out_[i] = Cached{exact ? w : 0, floor, cloud.size(), exact};
    return exact ? w : 0;
  }

  Lattice start() {
    std::size_t slot = restart_;
    if (slot < opt_.starts.size()) return to_lattice(opt_.starts[slot], opt_.grid);
    slot -= opt_.starts.size();
    if (opt_.seed_named_families && opt_.n > 0) {
      if (slot == 0) return to_lattice(extremal_family(opt_.n, opt_.dim), opt_.grid);
      if (slot == 1 && opt_.dim >= 2 && opt_.n >= 2) return to_lattice(counterexample_family(opt_.n, opt_.dim), opt_.grid);
    }
    // Random starts draw every vector (up to sign) from a few random base
    // vectors; such clouds have many coincident sums, which is where large
    // ball probabilities live.
    const std::size_t bases = 1 + rng_.below(std::min<std::uint32_t>(opt_.n, 4));
    Lattice base;
    for (std::size_t b = 0; b < bases; ++b) base.push_back(random_vector(opt_.dim, max_norm_, opt_.grid, rng_));
    Lattice lat;
    for (std::uint32_t i = 0; i < opt_.n; ++i) {
      auto v = base[rng_.below(bases)];
      if (rng_.below(2) == 1) {
        for (auto& c : v) c = -c;
      }
      lat.push_back(std::move(v));
    }
    return lat;
  }

  // Sideways moves may not spread the sums beyond a modest number of atoms:
  // large probabilities live on collapsed configurations, and generic clouds
  // are by far the most expensive to evaluate.
  bool tie_allowed(std::size_t cur_atoms) const { return atoms_ <= std::max<std::size_t>(cur_atoms, kPlateauAtoms); }

  // Weight of the deepest ball; exact whenever it could be accepted.
  // `hopeless` may prove cheaply that a spread-out candidate falls below cur.
  template <typename Hopeless = bool (*)()>
  std::uint64_t evaluate(const Lattice& lat, std::uint64_t cur, std::size_t cur_atoms = 0,
                         Hopeless hopeless = [] { return false; }) {
    // The sums depend only on the multiset of vectors up to sign.
    Lattice key = lat;
    for (auto& v : key) {
      if (std::lexicographical_compare(v.begin(), v.end(), negated(v).begin(), negated(v).end())) v = negated(v);
    }
    std::sort(key.begin(), key.end());
    auto hit = cache_.find(key);
    if (hit != cache_.end()) {
      atoms_ = hit->second.atoms;
      const std::uint64_t floor = cur == 0 ? 0 : (tie_allowed(cur_atoms) ? cur : cur + 1);
      // Exact values, or known to fall short of a floor at least this high.
      if (hit->second.exact || hit->second.floor <= floor) return hit->second.weight;
    }
    ScaledVectors sv{opt_.grid, lat};
    const SumCloud cloud = enumerate_lattice(sv, opt_.dim, enum_opt_);
    atoms_ = cloud.size();
    if (cur > 0 && atoms_ > kMaxAtoms) return 0;
    if (cur > 0 && atoms_ > kPlateauAtoms && hopeless()) return 0;
    ball_opt_.floor_weight = cur == 0 ? 0 : (tie_allowed(cur_atoms) ? cur : cur + 1);
    const std::uint64_t w = max_ball_probability(cloud, opt_.delta, ball_opt_).weight;
    const bool exact = w >= ball_opt_.floor_weight;
    cache_[std::move(key)] = Cached{exact ? w : 0, ball_opt_.floor_weight, atoms_, exact};
    return exact ? w : 0;
  }

  static std::vector<std::int64_t> negated(std::vector<std::int64_t> v) {
    for (auto& c : v) c = -c;
    return v;
  }

  struct Cached {
    std::uint64_t weight;
    std::uint64_t floor;
    std::size_t atoms;
    bool exact;
  };
  std::map<Lattice, Cached> cache_;
  std::map<std::size_t, Cached> leave_one_out_;

  // Changes one vector and returns its index.
  std::size_t propose(Lattice& lat) {
    const std::size_t i = rng_.below(opt_.n);
    const double u = rng_.uniform();
    const std::size_t j = rng_.below(opt_.n);
    if (u < 0.4) {
      // Jitter at a random scale.
      static constexpr double kScales[] = {1.0, 0.25, 1.0 / 16, 1.0 / 64};
      const double sigma = kScales[rng_.below(4)];
      std::vector<double> x(opt_.dim);
      for (std::size_t k = 0; k < opt_.dim; ++k) {
        x[k] = static_cast<double>(lat[i][k]) / static_cast<double>(opt_.grid) + rng_.uniform(-sigma, sigma);
      }
      lat[i] = round_outward(x, opt_.grid);
    } else if (u < 0.6) {
      lat[i] = lat[j];
      if (rng_.below(2) == 1) {
        for (auto& c : lat[i]) c = -c;
      }
    } else if (u < 0.75) {
      // Direction of v_j with a fresh length.
      lat[i] = with_length(lat[j], rng_.uniform(1.0, max_norm_));
    } else if (u < 0.9) {
      // Shortest admissible vector in the direction of v_i.
      lat[i] = with_length(lat[i], 1.0);
    } else {
      lat[i] = random_vector(opt_.dim, max_norm_, opt_.grid, rng_);
    }
    return i;
  }

  std::vector<std::int64_t> with_length(const std::vector<std::int64_t>& v, double r) const {
    std::vector<double> x(v.begin(), v.end());
    double len = 0.0;
    for (double c : x) len += c * c;
    len = std::sqrt(len);
    for (auto& c : x) c = c / len * r;
    return round_outward(x, opt_.grid);
  }

  const SearchOptions& opt_;
  Rng rng_;
  std::size_t restart_;
  MaxBallOptions ball_opt_;
  EnumerateOptions enum_opt_;
  double max_norm_ = 2.0;
  std::size_t atoms_ = 0;
};

template <typename F>
void parallel_for(std::size_t count, unsigned threads, F&& f) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) f(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

Regime classify_regime(const Rational& delta) {
  const std::uint64_t s = erdos_s(delta);
  const Rational threshold = Rational((s - 1) * (s - 1) + 1);
  const Rational d2 = delta * delta;
  if (d2 < threshold) return Regime::Conjecture;
  if (d2 == threshold) return Regime::Boundary;
  return Regime::Counterexample;
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::Conjecture:
      return "conjecture";
    case Regime::Boundary:
      return "boundary";
    case Regime::Counterexample:
      return "counterexample";
  }
  return "unknown";
}

VectorConfig extremal_family(std::uint32_t n, std::size_t dim) {
  if (n < 1 || dim < 1) throw InvalidInput("extremal family needs n >= 1 and d >= 1");
  RationalVector e1(dim, Rational(0));
  e1[0] = 1;
  return VectorConfig::make(dim, std::vector<RationalVector>(n, e1));
}

VectorConfig counterexample_family(std::uint32_t n, std::size_t dim) {
  if (dim < 2) throw InvalidInput("counterexample family needs d >= 2");
  if (n < 2) throw InvalidInput("counterexample family needs n >= 2");
  RationalVector e1(dim, Rational(0)), e2(dim, Rational(0));
  e1[0] = 1;
  e2[1] = 1;
  std::vector<RationalVector> vs(n - 1, e1);
  vs.push_back(e2);
  return VectorConfig::make(dim, std::move(vs));
}

SearchOutcome local_search_max(const SearchOptions& options) {
  if (options.dim < 1) throw InvalidInput("dimension must be at least 1");
  if (!(options.delta > 0)) throw InvalidInput("search radius must be positive");
  if (options.grid < 1) throw InvalidInput("grid must be positive");
  if (options.restarts < 1) throw InvalidInput("at least one restart is required");
  if (options.n > std::min<std::uint32_t>(options.max_n, 63)) {
    throw CapExceeded("n = " + std::to_string(options.n) + " exceeds the enumeration cap " +
                      std::to_string(std::min<std::uint32_t>(options.max_n, 63)));
  }

  std::vector<RestartResult> results(options.restarts);
  parallel_for(options.restarts, options.threads, [&](std::size_t r) { results[r] = Climber(options, r).run(); });

  SearchOutcome out;
  out.seed = options.seed;
  std::size_t best = 0;
  for (std::size_t r = 0; r < results.size(); ++r) {
    out.trace.push_back(results[r].prob);
    out.evaluations += results[r].evaluations;
    if (results[r].weight > results[best].weight) best = r;
  }
  out.best_config = to_config(results[best].best, options.dim, options.grid, options.delta);

  // Recompute with a canonical witness and verify independently.
  EnumerateOptions eo;
  eo.max_n = options.max_n;
  const SumCloud cloud = enumerate_sums(out.best_config, eo);
  MaxBallOptions bo;
  bo.atom_cap = options.atom_cap;
  const MaxBallResult mb = max_ball_probability(cloud, options.delta, bo);
  if (mb.weight != results[best].weight) {
    throw VerificationFailure("search best " + results[best].prob.str() + " does not reproduce (got " +
                              mb.probability.str() + ")");
  }
  out.best_ball = mb.witness;
  out.best_prob = mb.probability;
  const ExactProb check = prob_in_ball(enumerate_sums(out.best_config, eo), out.best_ball);
  if (check != out.best_prob) {
    throw VerificationFailure("witness ball holds " + check.str() + ", expected " + out.best_prob.str());
  }
  out.erdos_ref = erdos_bound(options.n, options.delta);
  out.violation = out.best_prob > out.erdos_ref;
  return out;
}

std::vector<ScanCell> conjecture_scan(const ScanOptions& options) {
  std::vector<ScanCell> cells;
  std::uint64_t index = 0;
  for (std::uint32_t n : options.ns) {
    for (const auto& delta : options.deltas) {
      SearchOptions so;
      so.n = n;
      so.dim = options.dim;
      so.delta = delta;
      so.restarts = options.restarts;
      so.steps = options.steps;
      so.seed = derive_seed(options.seed, index++);
      so.grid = options.grid;
      so.threads = options.threads;
      so.max_n = options.max_n;
      ScanCell cell;
      cell.n = n;
      cell.delta = delta;
      cell.regime = classify_regime(delta);
      cell.outcome = local_search_max(so);
      cell.red_flag = cell.outcome.violation && cell.regime == Regime::Conjecture;
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

}  // namespace lolab
