#include "lolab/ball.hpp"
#include "lolab/charfun.hpp"
#include "lolab/combinatorics.hpp"
#include "lolab/enumerate.hpp"
#include "lolab/errors.hpp"
#include "lolab/geometry.hpp"
#include "lolab/montecarlo.hpp"
#include "lolab/search.hpp"

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace lolab;

namespace {

// Rationals cross the boundary as text ("p/q", integers, decimal literals);
// the Python wrapper turns them into fractions.Fraction.
Rational to_rational(const py::handle& x) { return parse_rational(py::str(x).cast<std::string>()); }

RationalVector to_vector(const py::handle& v) {
  RationalVector out;
  for (auto x : v) out.push_back(to_rational(x));
  return out;
}

VectorConfig to_config(std::size_t dim, const py::list& vectors, bool relaxed) {
  std::vector<RationalVector> vs;
  for (auto v : vectors) vs.push_back(to_vector(v));
  return VectorConfig::make(dim, std::move(vs), std::nullopt, relaxed);
}

py::object big(const BigInt& v) { return py::module_::import("builtins").attr("int")(v.str()); }

std::vector<std::string> strings(const RationalVector& v) {
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

py::tuple prob(const ExactProb& p) { return py::make_tuple(big(p.numerator), p.log2_den); }

py::dict ball(const Ball& b) {
  py::dict d;
  d["center"] = strings(b.center);
  d["radius"] = to_string(b.radius);
  return d;
}

}  // namespace

PYBIND11_MODULE(_lolab, m) {
  m.doc() = "Exact small-ball probabilities of random signed sums";

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<CapExceeded>(m, "CapExceeded", PyExc_RuntimeError);
  py::register_exception<VerificationFailure>(m, "VerificationFailure", PyExc_RuntimeError);

  m.def(
      "enumerate_sums",
      [](std::size_t dim, const py::list& vectors, std::uint32_t max_n, unsigned threads) {
        const auto cloud = enumerate_sums(to_config(dim, vectors, true), {.max_n = max_n, .threads = threads});
        py::list out;
        for (std::size_t i = 0; i < cloud.size(); ++i) {
          out.append(py::make_tuple(strings(cloud.rational_point(i)), cloud.multiplicity(i)));
        }
        return out;
      },
      py::arg("dim"), py::arg("vectors"), py::arg("max_n") = 30, py::arg("threads") = 1);

  m.def(
      "prob_in_ball",
      [](std::size_t dim, const py::list& vectors, const py::list& center, const py::handle& radius) {
        const auto cloud = enumerate_sums(to_config(dim, vectors, true));
        return prob(prob_in_ball(cloud, Ball{to_vector(center), to_rational(radius)}));
      },
      py::arg("dim"), py::arg("vectors"), py::arg("center"), py::arg("radius"));

  m.def(
      "max_ball_probability",
      [](std::size_t dim, const py::list& vectors, const py::handle& delta, std::uint32_t max_n) {
        const auto cloud = enumerate_sums(to_config(dim, vectors, false), {.max_n = max_n});
        const auto r = max_ball_probability(cloud, to_rational(delta));
        py::dict d;
        d["probability"] = prob(r.probability);
        d["witness"] = ball(r.witness);
        d["certified"] = r.certified;
        return d;
      },
      py::arg("dim"), py::arg("vectors"), py::arg("delta"), py::arg("max_n") = 30);

  m.def("binom_sum", [](std::uint64_t n, std::uint64_t s) { return big(binom_sum(n, s).value); });
  m.def("erdos_bound", [](std::uint32_t n, const py::handle& delta) { return prob(erdos_bound(n, to_rational(delta))); });
  m.def("stirling_approx", &stirling_approx);
  m.def("dist_to_int", &dist_to_int);
  m.def(
      "cos_dominated",
      [](double theta, double decay) {
        const auto c = cos_dominated(theta, decay);
        return py::make_tuple(c.lhs, c.rhs, c.ok);
      },
      py::arg("theta"), py::arg("decay") = kDefaultDecay);

  m.def(
      "q_integral",
      [](std::size_t dim, const py::list& vectors, double decay, std::size_t points, double rel_tol) {
        const auto q = q_integral(to_config(dim, vectors, true), decay,
                                  {.dim = dim, .points_per_axis = points, .rel_tol = rel_tol});
        return py::make_tuple(q.value, q.converged);
      },
      py::arg("dim"), py::arg("vectors"), py::arg("decay") = kDefaultDecay, py::arg("points") = 32,
      py::arg("rel_tol") = 0.01);

  m.def(
      "min_spread",
      [](std::size_t dim, const py::list& vectors, double net) {
        const auto r = min_spread(to_config(dim, vectors, true), net);
        py::dict d;
        d["empirical_min"] = r.empirical_min;
        d["certified_lower"] = r.certified_lower;
        d["certified"] = r.certified;
        d["witness_direction"] = r.witness_direction;
        return d;
      },
      py::arg("dim"), py::arg("vectors"), py::arg("net") = 1e-3);

  m.def("classify_regime", [](const py::handle& delta) { return to_string(classify_regime(to_rational(delta))); });

  m.def(
      "local_search_max",
      [](std::uint32_t n, std::size_t dim, const py::handle& delta, std::size_t restarts, std::size_t steps,
         std::uint64_t seed, unsigned threads) {
        SearchOptions o;
        o.n = n;
        o.dim = dim;
        o.delta = to_rational(delta);
        o.restarts = restarts;
        o.steps = steps;
        o.seed = seed;
        o.threads = threads;
        SearchOutcome r;
        {
          py::gil_scoped_release release;
          r = local_search_max(o);
        }
        py::list config;
        for (const auto& v : r.best_config.vectors()) config.append(strings(v));
        py::dict d;
        d["best_config"] = config;
        d["best_ball"] = ball(r.best_ball);
        d["best_prob"] = prob(r.best_prob);
        d["erdos"] = prob(r.erdos_ref);
        d["violation"] = r.violation;
        return d;
      },
      py::arg("n"), py::arg("dim"), py::arg("delta"), py::arg("restarts") = 8, py::arg("steps") = 200,
      py::arg("seed") = 1, py::arg("threads") = 1);

  m.def("hoeffding_radius", &hoeffding_radius, py::arg("samples"), py::arg("alpha") = 0.05);

  m.def(
      "mc_probability",
      [](std::size_t dim, const py::list& vectors, const py::list& center, const py::handle& radius,
         std::uint64_t samples, double alpha, std::uint64_t seed, const std::string& law) {
        const auto e = mc_probability(to_config(dim, vectors, true), parse_law(law),
                                      Ball{to_vector(center), to_rational(radius)},
                                      {.samples = samples, .alpha = alpha, .seed = seed});
        py::dict d;
        d["estimate"] = e.estimate;
        d["hits"] = e.hits;
        d["samples"] = e.samples;
        d["radius"] = e.radius;
        d["lower"] = e.lower();
        d["upper"] = e.upper();
        return d;
      },
      py::arg("dim"), py::arg("vectors"), py::arg("center"), py::arg("radius"), py::arg("samples") = 20000,
      py::arg("alpha") = 0.05, py::arg("seed") = 1, py::arg("law") = "bernoulli");
}
