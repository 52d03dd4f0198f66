// lo_lab: exact and sampled small-ball probabilities of Bernoulli sums.

#include "lolab/ball.hpp"
#include "lolab/charfun.hpp"
#include "lolab/combinatorics.hpp"
#include "lolab/enumerate.hpp"
#include "lolab/errors.hpp"
#include "lolab/geometry.hpp"
#include "lolab/law.hpp"
#include "lolab/montecarlo.hpp"
#include "lolab/report.hpp"
#include "lolab/search.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

namespace {

using namespace lolab;

constexpr int kExitInvalid = 1;
constexpr int kExitCap = 2;
constexpr int kExitVerification = 3;

// Largest n for which the exact value is computed alongside other commands.
constexpr std::uint32_t kSideExactMaxN = 20;

struct Outcome {
  Json results = Json::object();
  std::string table;
  std::vector<std::vector<std::string>> csv;  // n, delta, regime, p_exact, erdos, Q, k
  std::uint64_t seed = 0;
};

std::string fixed(double x, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string sci(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

std::string show(const ExactProb& p) { return p.str() + " (" + fixed(p.to_double()) + ")"; }

std::string line(const std::string& key, const std::string& value) {
  std::string k = key;
  if (k.size() < 18) k.resize(18, ' ');
  return k + " " + value + "\n";
}

Rational param_rational(const Json& params, const char* key) { return rational_from_json(params.at(key)); }

Rational delta_for(const Json& params, const VectorConfig& config) {
  if (params.contains("delta") && !params["delta"].is_null()) return param_rational(params, "delta");
  if (config.delta()) return *config.delta();
  throw InvalidInput("no radius given: set \"delta\" in the input or pass --delta");
}

Json rational_vector_json(const RationalVector& v) {
  Json j = Json::array();
  for (const auto& x : v) j.push_back(to_string(x));
  return j;
}

Json double_vector_json(const std::vector<double>& v) {
  Json j = Json::array();
  for (double x : v) j.push_back(x);
  return j;
}

Json ball_json(const Ball& b) {
  Json j = Json::object();
  j["center"] = rational_vector_json(b.center);
  j["radius"] = to_string(b.radius);
  return j;
}

Json quadrature_json(const QuadratureResult& q) {
  Json j = Json::object();
  j["value"] = q.value;
  j["points_per_axis"] = q.points_per_axis;
  j["converged"] = q.converged;
  j["last_change"] = q.last_change;
  return j;
}

PhaseConvention convention_of(const std::string& name) {
  if (name == "pi") return PhaseConvention::Pi;
  if (name == "two-pi") return PhaseConvention::TwoPi;
  throw InvalidInput("unknown phase convention \"" + name + "\" (use pi or two-pi)");
}

// ---------------------------------------------------------------- commands

Outcome run_exact(const Json& params, const VectorConfig& config, unsigned threads) {
  const Rational delta = delta_for(params, config);
  EnumerateOptions eo;
  eo.max_n = params.at("max_n").get<std::uint32_t>();
  eo.threads = threads;
  const SumCloud cloud = enumerate_sums(config, eo);
  MaxBallOptions bo;
  bo.atom_cap = params.at("atom_cap").get<std::size_t>();
  bo.tolerance = params.at("tolerance").get<double>();
  bo.allow_heuristic = params.at("heuristic").get<bool>();
  const MaxBallResult mb = max_ball_probability(cloud, delta, bo);
  const ExactProb recheck = prob_in_ball(cloud, mb.witness);
  if (recheck != mb.probability) {
    throw VerificationFailure("witness ball holds " + recheck.str() + " but the search reported " +
                              mb.probability.str());
  }
  const auto n = static_cast<std::uint32_t>(config.size());
  const ExactProb erdos = erdos_bound(n, delta);
  const bool violation = mb.probability > erdos;
  const Regime regime = classify_regime(delta);

  Outcome out;
  Json& r = out.results;
  r["n"] = n;
  r["dim"] = config.dim();
  r["delta"] = to_string(delta);
  r["regime"] = to_string(regime);
  r["atoms"] = cloud.size();
  r["p_exact"] = prob_to_json(mb.probability);
  r["p_value"] = mb.probability.to_double();
  r["erdos"] = prob_to_json(erdos);
  r["ratio"] = mb.probability.to_double() / erdos.to_double();
  r["violation"] = violation;
  r["witness"] = ball_json(mb.witness);
  r["certified"] = mb.certified;
  r["heuristic"] = mb.heuristic;

  out.table += line("n, d, delta", std::to_string(n) + ", " + std::to_string(config.dim()) + ", " + to_string(delta));
  out.table += line("regime", to_string(regime));
  out.table += line("distinct sums", std::to_string(cloud.size()));
  out.table += line("max ball", show(mb.probability));
  out.table += line("erdos bound", show(erdos));
  out.table += line("witness center", rational_vector_json(mb.witness.center).dump());
  if (!mb.certified) out.table += line("note", "witness center not certified in exact arithmetic");
  if (mb.heuristic) out.table += line("note", "d > 3: heuristic lower bound");
  out.table += line("status", violation ? "VIOLATION" : "ok");
  out.csv.push_back({std::to_string(n), to_string(delta), to_string(regime), mb.probability.str(), erdos.str(), "", ""});
  return out;
}

Outcome run_erdos(const Json& params) {
  const Rational delta = param_rational(params, "delta");
  if (delta < 0) throw InvalidInput("radius must be nonnegative");
  const auto n_max = params.at("n").get<std::uint32_t>();
  const auto n_min = params.value("n_min", n_max);
  if (n_min > n_max) throw InvalidInput("--n-min exceeds --n");
  if (n_max > 100000) throw InvalidInput("n is limited to 100000");
  const std::uint64_t s = erdos_s(delta);
  Outcome out;
  Json rows = Json::array();
  out.table += "n        s   bound                         stirling\n";
  for (std::uint32_t n = n_min; n <= n_max; ++n) {
    const ExactProb b = erdos_bound(n, delta);
    Json row = Json::object();
    row["n"] = n;
    row["s"] = s;
    row["count"] = binom_sum(n, s).value.str();
    row["bound"] = prob_to_json(b);
    row["bound_value"] = b.to_double();
    std::string stirling;
    if (n >= 1) {
      const double st = stirling_approx(n, static_cast<double>(s));
      row["stirling"] = st;
      stirling = fixed(st);
    }
    rows.push_back(std::move(row));
    std::string label = std::to_string(n);
    label.resize(8, ' ');
    std::string sl = std::to_string(s);
    sl.resize(3, ' ');
    std::string shown = n <= 24 ? b.str() : sci(b.to_double());
    shown.resize(29, ' ');
    out.table += label + " " + sl + " " + shown + " " + stirling + "\n";
    out.csv.push_back({std::to_string(n), to_string(delta), to_string(classify_regime(delta)), "", b.str(), "", ""});
  }
  out.results["delta"] = to_string(delta);
  out.results["s"] = s;
  out.results["rows"] = std::move(rows);
  return out;
}

Outcome run_fourier(const Json& params, const VectorConfig& config, unsigned threads) {
  QuadratureSpec spec;
  spec.dim = config.dim();
  spec.points_per_axis = params.at("points").get<std::size_t>();
  spec.max_doublings = params.at("doublings").get<std::size_t>();
  spec.rel_tol = params.at("rel_tol").get<double>();
  spec.threads = threads;
  const double decay = params.at("decay").get<double>();
  const PhaseConvention conv = convention_of(params.at("convention").get<std::string>());
  const double constant = params.at("esseen_constant").get<double>();
  const auto n = static_cast<std::uint32_t>(config.size());

  Outcome out;
  Json& r = out.results;
  r["n"] = n;
  r["dim"] = config.dim();
  const QuadratureResult q = q_integral(config, decay, spec);
  r["q"] = quadrature_json(q);
  const EsseenBound es = esseen_bound(config, spec, conv, constant);
  r["esseen"] = {{"value", es.value}, {"constant", es.constant}, {"integral", quadrature_json(es.integral)}};
  out.table += line("Q integral", sci(q.value) + (q.converged ? "" : "  (not converged)") + "  [" +
                                      std::to_string(q.points_per_axis) + " pts/axis]");
  out.table += line("Esseen bound", sci(es.value) + (es.integral.converged ? "" : "  (not converged)"));

  std::string delta_s, regime_s, p_s, erdos_s_;
  const bool have_delta = (params.contains("delta") && !params["delta"].is_null()) || config.delta();
  if (have_delta) {
    const Rational delta = delta_for(params, config);
    delta_s = to_string(delta);
    regime_s = to_string(classify_regime(delta));
    r["delta"] = delta_s;
    const ExactProb erdos = erdos_bound(n, delta);
    r["erdos"] = prob_to_json(erdos);
    erdos_s_ = erdos.str();
    if (n <= kSideExactMaxN && config.dim() <= 3) {
      EnumerateOptions eo;
      eo.threads = threads;
      const MaxBallResult mb = max_ball_probability(enumerate_sums(config, eo), delta);
      r["p_exact"] = prob_to_json(mb.probability);
      p_s = mb.probability.str();
      out.table += line("exact max ball", show(mb.probability));
    }
  }

  const Json& lambdas = params.at("lambdas");
  if (!lambdas.empty()) {
    Json ds = Json::array();
    std::vector<double> u(config.size(), 0.0);
    if (params.contains("shift") && !params["shift"].is_null()) {
      u.clear();
      for (const auto& x : params["shift"]) u.push_back(to_double(rational_from_json(x)));
    }
    for (const auto& lj : lambdas) {
      const double lambda = to_double(rational_from_json(lj));
      const DspanInstance inst = DspanInstance::make(config.as_double(), u, lambda);
      const DspanResult d = dspan_integral(inst, spec);
      ds.push_back({{"lambda", lambda}, {"integral", quadrature_json(d.integral)}, {"scaled", d.scaled}});
      out.table += line("dspan lambda=" + fixed(lambda, 3), sci(d.integral.value) + "  scaled " + sci(d.scaled));
    }
    r["dspan"] = std::move(ds);
  }
  out.csv.push_back({std::to_string(n), delta_s, regime_s, p_s, erdos_s_, sci(q.value), ""});
  return out;
}

Outcome run_spread(const Json& params, const VectorConfig& config) {
  const double net = params.at("net").get<double>();
  const SpreadReport rep = min_spread(config, net);
  const WitnessChain chain = witness_chain(config);
  Outcome out;
  Json& r = out.results;
  r["n"] = config.size();
  r["dim"] = config.dim();
  r["empirical_min"] = rep.empirical_min;
  r["certified_lower"] = rep.certified_lower;
  r["certified"] = rep.certified;
  r["witness_direction"] = double_vector_json(rep.witness_direction);
  r["net_resolution"] = rep.net_resolution;
  r["directions_checked"] = rep.directions_checked;
  Json c = Json::object();
  c["indices"] = chain.indices;
  c["residuals"] = chain.residuals;
  r["witness_chain"] = std::move(c);
  out.table += line("min spread", std::to_string(rep.empirical_min) + " over " +
                                      std::to_string(rep.directions_checked) + " directions");
  out.table += line("certified lower", rep.certified ? std::to_string(rep.certified_lower) : "none (d > 3)");
  out.table += line("witness direction", double_vector_json(rep.witness_direction).dump());
  std::string idx;
  for (std::size_t i : chain.indices) idx += (idx.empty() ? "" : " ") + std::to_string(i);
  out.table += line("witness chain", idx.empty() ? "(empty)" : idx);
  std::string delta_s, regime_s;
  if (config.delta()) {
    delta_s = to_string(*config.delta());
    regime_s = to_string(classify_regime(*config.delta()));
  }
  out.csv.push_back({std::to_string(config.size()), delta_s, regime_s, "", "", "",
                     std::to_string(rep.certified ? rep.certified_lower : rep.empirical_min)});
  return out;
}

Outcome run_scan(const Json& params, unsigned threads) {
  ScanOptions so;
  so.dim = params.at("dim").get<std::size_t>();
  for (const auto& d : params.at("deltas")) so.deltas.push_back(rational_from_json(d));
  so.ns = params.at("ns").get<std::vector<std::uint32_t>>();
  so.restarts = params.at("restarts").get<std::size_t>();
  so.steps = params.at("steps").get<std::size_t>();
  so.seed = params.at("seed").get<std::uint64_t>();
  so.grid = params.at("grid").get<std::int64_t>();
  so.max_n = params.at("max_n").get<std::uint32_t>();
  so.threads = threads;
  if (so.deltas.empty() || so.ns.empty()) throw InvalidInput("scan needs at least one n and one delta");
  const std::vector<ScanCell> cells = conjecture_scan(so);

  Outcome out;
  out.seed = so.seed;
  Json rows = Json::array();
  std::size_t flags = 0;
  out.table += "n    delta     regime          best                erdos               ratio     flag\n";
  for (const auto& cell : cells) {
    const SearchOutcome& o = cell.outcome;
    Json row = Json::object();
    row["n"] = cell.n;
    row["delta"] = to_string(cell.delta);
    row["regime"] = to_string(cell.regime);
    row["best"] = prob_to_json(o.best_prob);
    row["erdos"] = prob_to_json(o.erdos_ref);
    const double ratio = o.best_prob.to_double() / o.erdos_ref.to_double();
    row["ratio"] = ratio;
    row["violation"] = o.violation;
    row["red_flag"] = cell.red_flag;
    row["best_config"] = config_to_json(o.best_config);
    row["witness"] = ball_json(o.best_ball);
    row["evaluations"] = o.evaluations;
    rows.push_back(std::move(row));
    flags += cell.red_flag ? 1 : 0;

    auto pad = [](std::string s, std::size_t w) {
      if (s.size() < w) s.resize(w, ' ');
      return s;
    };
    out.table += pad(std::to_string(cell.n), 4) + " " + pad(to_string(cell.delta), 9) + " " +
                 pad(to_string(cell.regime), 15) + " " + pad(o.best_prob.str(), 19) + " " +
                 pad(o.erdos_ref.str(), 19) + " " + pad(fixed(ratio, 4), 9) + " " +
                 (cell.red_flag ? "RED FLAG" : (o.violation ? "violation" : "")) + "\n";
    out.csv.push_back({std::to_string(cell.n), to_string(cell.delta), to_string(cell.regime), o.best_prob.str(),
                       o.erdos_ref.str(), "", ""});
  }
  out.results["cells"] = std::move(rows);
  out.results["red_flags"] = flags;
  out.table += line("red flags", std::to_string(flags));
  return out;
}

Outcome run_mc(const Json& params, const VectorConfig& config, unsigned threads) {
  const CoefficientLaw law = parse_law(params.at("law").get<std::string>());
  McOptions mo;
  mo.samples = params.at("samples").get<std::uint64_t>();
  mo.alpha = params.at("alpha").get<double>();
  mo.seed = params.at("seed").get<std::uint64_t>();
  mo.threads = threads;
  Ball ball;
  ball.radius = delta_for(params, config);
  if (params.contains("center") && !params["center"].is_null()) {
    for (const auto& x : params["center"]) ball.center.push_back(rational_from_json(x));
  } else {
    ball.center.assign(config.dim(), Rational(0));
  }
  const McEstimate est = mc_probability(config, law, ball, mo);

  Outcome out;
  out.seed = mo.seed;
  Json& r = out.results;
  const auto n = static_cast<std::uint32_t>(config.size());
  r["n"] = n;
  r["dim"] = config.dim();
  r["law"] = to_string(law);
  r["ball"] = ball_json(ball);
  r["estimate"] = est.estimate;
  r["hits"] = est.hits;
  r["samples"] = est.samples;
  r["confidence"] = est.confidence;
  r["radius"] = est.radius;
  r["lower"] = est.lower();
  r["upper"] = est.upper();
  out.table += line("estimate", fixed(est.estimate) + "  (" + std::to_string(est.hits) + "/" +
                                    std::to_string(est.samples) + ")");
  out.table += line("interval", "[" + fixed(est.lower()) + ", " + fixed(est.upper()) + "] at confidence " +
                                    fixed(est.confidence, 3));
  std::string p_s;
  const bool bernoulli = law.support() == std::vector<std::int64_t>{-1, 1} && law.symmetric();
  if (bernoulli && n <= kSideExactMaxN) {
    EnumerateOptions eo;
    eo.threads = threads;
    const ExactProb exact = prob_in_ball(enumerate_sums(config, eo), ball);
    r["p_exact"] = prob_to_json(exact);
    r["covered"] = est.covers(exact.to_double());
    p_s = exact.str();
    out.table += line("exact", show(exact) + (est.covers(exact.to_double()) ? "  inside" : "  OUTSIDE"));
  }
  out.csv.push_back({std::to_string(n), to_string(ball.radius), to_string(classify_regime(ball.radius)), p_s, "",
                     "", ""});
  return out;
}

// ---------------------------------------------------------------- plumbing

bool needs_input(const std::string& command) { return command != "erdos" && command != "scan"; }

Outcome dispatch(const std::string& command, const Json& params, const VectorConfig* config, unsigned threads) {
  if (command == "erdos") return run_erdos(params);
  if (command == "scan") return run_scan(params, threads);
  if (!config) throw InvalidInput("command " + command + " needs an input file");
  if (command == "exact") return run_exact(params, *config, threads);
  if (command == "fourier") return run_fourier(params, *config, threads);
  if (command == "spread") return run_spread(params, *config);
  if (command == "mc") return run_mc(params, *config, threads);
  throw InvalidInput("unknown command " + command);
}

unsigned resolve_threads(unsigned flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("LO_LAB_THREADS"); env && *env) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (*end != '\0' || v == 0 || v > 4096) throw InvalidInput(std::string("bad LO_LAB_THREADS value \"") + env + "\"");
    return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void collect_probs(const Json& j, const std::string& path, std::vector<std::pair<std::string, Json>>& out) {
  if (j.is_object()) {
    if (j.size() == 2 && j.contains("num") && j.contains("log2_den")) {
      out.emplace_back(path, j);
      return;
    }
    for (const auto& [k, v] : j.items()) collect_probs(v, path + "/" + k, out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) collect_probs(j[i], path + "/" + std::to_string(i), out);
  }
}

int verify_report(const std::string& path, unsigned threads) {
  const Json report = Json::parse(read_text_file(path), nullptr, false);
  if (report.is_discarded() || !report.is_object() || !report.contains("manifest") || !report.contains("results")) {
    throw InvalidInput(path + " is not a lo_lab report");
  }
  const RunManifest m = RunManifest::from_json(report["manifest"]);
  std::optional<VectorConfig> config;
  if (report.contains("input")) config = parse_config(report["input"].dump());
  const Outcome again = dispatch(m.command, m.params, config ? &*config : nullptr, threads);

  std::vector<std::pair<std::string, Json>> before, after;
  collect_probs(report["results"], "", before);
  collect_probs(again.results, "", after);
  if (before.size() != after.size()) {
    throw VerificationFailure("report holds " + std::to_string(before.size()) + " exact probabilities, rerun gave " +
                              std::to_string(after.size()));
  }
  for (std::size_t i = 0; i < before.size(); ++i) {
    if (before[i].first != after[i].first || prob_from_json(before[i].second) != prob_from_json(after[i].second) ||
        before[i].second != after[i].second) {
      throw VerificationFailure("mismatch at " + before[i].first + ": report " + before[i].second.dump() +
                                ", rerun " + after[i].second.dump());
    }
  }
  std::cout << "verified " << before.size() << " exact probabilities in " << path << " (" << m.command << ")\n";
  return 0;
}

struct CommonArgs {
  std::string input;
  std::string report;
  std::string csv;
  bool quiet = false;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact small-ball probabilities of random signed sums"};
  app.fallthrough();
  app.set_version_flag("--version", tool_version());
  unsigned threads_flag = 0;
  std::string verify_path;
  app.add_option("--threads", threads_flag, "Worker threads (default: $LO_LAB_THREADS or all cores)");
  app.add_option("--verify", verify_path, "Re-run the command recorded in a report and compare exact values");

  CommonArgs common;
  auto add_common = [&](CLI::App* sub, bool input) {
    if (input) sub->add_option("input", common.input, "Configuration JSON file")->required();
    sub->add_option("--report", common.report, "Report path (default lo_lab_<command>.json)");
    sub->add_option("--csv", common.csv, "CSV path (default lo_lab_<command>.csv)");
    sub->add_flag("--quiet", common.quiet, "Do not print the table");
  };

  Json params = Json::object();
  std::string delta;

  auto* exact = app.add_subcommand("exact", "Enumerate all sign patterns and find the deepest ball");
  add_common(exact, true);
  std::uint32_t max_n = 30;
  std::size_t atom_cap = std::size_t{1} << 16;
  double tolerance = kDefaultTolerance;
  bool heuristic = false;
  exact->add_option("--delta", delta, "Ball radius (overrides the input)");
  exact->add_option("--max-n", max_n, "Enumeration cap on n");
  exact->add_option("--atom-cap", atom_cap, "Cap on distinct sums");
  exact->add_option("--tolerance", tolerance, "Relative tolerance for floating candidates");
  exact->add_flag("--heuristic", heuristic, "Allow d > 3 (lower bound only)");

  auto* erdos = app.add_subcommand("erdos", "Tabulate the Erdos bound 2^-n S(n, s)");
  add_common(erdos, false);
  std::uint32_t erdos_n = 0;
  std::optional<std::uint32_t> erdos_n_min;
  erdos->add_option("--n", erdos_n, "Number of vectors (table end)")->required();
  erdos->add_option("--n-min", erdos_n_min, "Table start (default: --n)");
  erdos->add_option("--delta", delta, "Radius")->required();

  auto* fourier = app.add_subcommand("fourier", "Characteristic-function integrals and bounds");
  add_common(fourier, true);
  std::size_t points = 32, doublings = 5;
  double rel_tol = 0.01, decay = kDefaultDecay, esseen_constant = 1.0;
  std::string convention = "pi";
  std::vector<std::string> lambdas, shift;
  fourier->add_option("--delta", delta, "Radius for the exact comparison");
  fourier->add_option("--points", points, "Initial midpoints per axis");
  fourier->add_option("--doublings", doublings, "Maximum grid doublings");
  fourier->add_option("--rel-tol", rel_tol, "Relative change accepted as converged");
  fourier->add_option("--decay", decay, "Gaussian decay constant c in exp(-c |<v, z>|^2)");
  fourier->add_option("--convention", convention, "Phase convention: pi or two-pi");
  fourier->add_option("--esseen-constant", esseen_constant, "Constant in front of the Esseen integral");
  fourier->add_option("--lambda", lambdas, "Evaluate the span integral at these lambdas (vectors = w)")->delimiter(',');
  fourier->add_option("--shift", shift, "Shift u for the span integral")->delimiter(',');

  auto* spread = app.add_subcommand("spread", "Minimum directional spread and witness chain");
  add_common(spread, true);
  double net = 0.01;
  spread->add_option("--net", net, "Direction net resolution");

  auto* scan = app.add_subcommand("scan", "Random-restart search against the Erdos bound");
  add_common(scan, false);
  std::size_t scan_dim = 2, restarts = 8, steps = 200;
  std::vector<std::string> deltas{"1", "6/5", "27/20", "2", "11/5"};
  std::vector<std::uint32_t> ns{8, 10, 12};
  std::uint64_t seed = 1;
  std::int64_t grid = 64;
  scan->add_option("--dim", scan_dim, "Dimension");
  scan->add_option("--deltas", deltas, "Radii to scan")->delimiter(',');
  scan->add_option("--ns", ns, "Values of n to scan")->delimiter(',');
  scan->add_option("--restarts", restarts, "Restarts per cell");
  scan->add_option("--steps", steps, "Steps per restart");
  scan->add_option("--seed", seed, "Master seed");
  scan->add_option("--grid", grid, "Coordinates are multiples of 1/grid");
  scan->add_option("--max-n", max_n, "Enumeration cap on n");

  auto* mc = app.add_subcommand("mc", "Monte Carlo estimate with a Hoeffding interval");
  add_common(mc, true);
  std::uint64_t samples = 20000;
  double alpha = 0.05;
  std::string law = "bernoulli";
  std::vector<std::string> center;
  mc->add_option("--delta", delta, "Ball radius (overrides the input)");
  mc->add_option("--center", center, "Ball center (default: origin)")->delimiter(',');
  mc->add_option("--samples", samples, "Number of draws");
  mc->add_option("--alpha", alpha, "1 - confidence");
  mc->add_option("--seed", seed, "Seed");
  mc->add_option("--law", law, "Coefficient law: bernoulli or value:prob,...");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    const unsigned threads = resolve_threads(threads_flag);
    if (!verify_path.empty()) return verify_report(verify_path, threads);

    std::string command;
    for (auto* sub : {exact, erdos, fourier, spread, scan, mc}) {
      if (sub->parsed()) command = sub->get_name();
    }
    if (command.empty()) {
      std::cerr << app.help();
      return kExitInvalid;
    }

    auto delta_param = [&]() -> Json {
      if (delta.empty()) return nullptr;
      return to_string(parse_rational(delta));
    };
    auto strings = [](const std::vector<std::string>& v) {
      Json j = Json::array();
      for (const auto& s : v) j.push_back(to_string(parse_rational(s)));
      return j;
    };
    std::uint64_t manifest_seed = 0;
    if (command == "exact") {
      params = {{"input", common.input}, {"delta", delta_param()}, {"max_n", max_n}, {"atom_cap", atom_cap},
                {"tolerance", tolerance}, {"heuristic", heuristic}};
    } else if (command == "erdos") {
      params = {{"n", erdos_n}, {"n_min", erdos_n_min.value_or(erdos_n)}, {"delta", delta_param()}};
    } else if (command == "fourier") {
      params = {{"input", common.input}, {"delta", delta_param()}, {"points", points}, {"doublings", doublings},
                {"rel_tol", rel_tol}, {"decay", decay}, {"convention", convention},
                {"esseen_constant", esseen_constant}, {"lambdas", strings(lambdas)},
                {"shift", shift.empty() ? Json(nullptr) : strings(shift)}};
    } else if (command == "spread") {
      params = {{"input", common.input}, {"net", net}};
    } else if (command == "scan") {
      params = {{"dim", scan_dim}, {"deltas", strings(deltas)}, {"ns", ns}, {"restarts", restarts},
                {"steps", steps}, {"seed", seed}, {"grid", grid}, {"max_n", max_n}};
      manifest_seed = seed;
    } else if (command == "mc") {
      params = {{"input", common.input}, {"delta", delta_param()},
                {"center", center.empty() ? Json(nullptr) : strings(center)}, {"samples", samples},
                {"alpha", alpha}, {"seed", seed}, {"law", law}};
      manifest_seed = seed;
    }

    std::optional<VectorConfig> config;
    std::string text;
    if (needs_input(command)) config = read_config_file(common.input, &text);

    const auto t0 = std::chrono::steady_clock::now();
    Outcome out = dispatch(command, params, config ? &*config : nullptr, threads);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    RunManifest manifest;
    manifest.command = command;
    manifest.params = params;
    manifest.params["threads"] = threads;
    manifest.input_digest = config ? digest(text) : "none";
    manifest.version = tool_version();
    manifest.seed = manifest_seed;
    manifest.duration_seconds = seconds;

    Json report = Json::object();
    report["manifest"] = manifest.to_json();
    if (config) report["input"] = config_to_json(*config);
    report["results"] = out.results;

    const std::string report_path = common.report.empty() ? "lo_lab_" + command + ".json" : common.report;
    const std::string csv_path = common.csv.empty() ? "lo_lab_" + command + ".csv" : common.csv;
    write_text_file(report_path, report.dump(2));
    std::string csv = csv_row({"n", "delta", "regime", "p_exact", "erdos", "Q", "k"});
    for (const auto& row : out.csv) csv += csv_row(row);
    write_text_file(csv_path, csv);

    if (!common.quiet) std::cout << out.table;
    return 0;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return kExitCap;
  } catch (const VerificationFailure& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kExitVerification;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}
