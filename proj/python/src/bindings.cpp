#include "thinsieve/census.hpp"
#include "thinsieve/cli.hpp"
#include "thinsieve/exp_sums.hpp"
#include "thinsieve/modular.hpp"
#include "thinsieve/sieve_constants.hpp"
#include "thinsieve/thin_groups.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace thinsieve;

namespace {

py::object to_py(const Integer& v) { return py::module_::import("builtins").attr("int")(v.str()); }

py::object to_py(const Rational& v) {
  return py::module_::import("fractions").attr("Fraction")(to_py(numerator(v)), to_py(denominator(v)));
}

Integer to_integer(const py::handle& v) { return Integer(py::str(v).cast<std::string>()); }

Form form_of(const std::string& name) {
  const auto f = parse_form(name);
  if (!f) throw std::invalid_argument("unknown form '" + name + "'");
  return *f;
}

// A bundled group name or a sequence of (a, b, c, d) generators.
GeneratorSet group_of(const py::object& g) {
  if (py::isinstance<py::str>(g)) return bundled_group(g.cast<std::string>());
  std::vector<UnimodularMatrix> gens;
  for (const auto& item : g) {
    const auto t = item.cast<py::sequence>();
    if (t.size() != 4) throw std::invalid_argument("generators are (a, b, c, d) tuples");
    gens.emplace_back(to_integer(t[0]), to_integer(t[1]), to_integer(t[2]), to_integer(t[3]));
  }
  return GeneratorSet("custom", std::move(gens));
}

UnimodularMatrix matrix_of(const py::object& m) {
  if (m.is_none()) return UnimodularMatrix::identity();
  const auto t = m.cast<py::sequence>();
  if (t.size() != 4) throw std::invalid_argument("matrices are (a, b, c, d) tuples");
  return {to_integer(t[0]), to_integer(t[1]), to_integer(t[2]), to_integer(t[3])};
}

py::tuple tuple_of(const UnimodularMatrix& g) { return py::make_tuple(to_py(g.a()), to_py(g.b()), to_py(g.c()), to_py(g.d())); }

EnumerationOptions enumeration(std::size_t cap, const std::string& walk) {
  EnumerationOptions e;
  e.element_cap = cap;
  if (walk == "descent") e.walk = Walk::Descent;
  else if (walk != "breadth") throw std::invalid_argument("walk is 'breadth' or 'descent'");
  return e;
}

const RhoModel& model_of(bool mutant) { return mutant ? mutant_rho() : standard_rho(); }

}  // namespace

PYBIND11_MODULE(_thinsieve, m) {
  m.doc() = "Orbit enumeration, exponential sums and sieve constants for thin subgroups of SL(2, Z).";
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);

  // sieve constants
  m.def("delta0", &delta0, py::arg("D"), py::arg("alpha"));
  m.def("greaves_threshold", &greaves_threshold);
  m.def("m_dhr", &m_dhr, py::arg("alpha"), py::arg("kappa"), py::arg("zeta"));
  m.def("optimize_m", [](double alpha, int kappa) {
    const DhrOptimum o = optimize_m(alpha, kappa);
    return py::dict(py::arg("zeta") = o.zeta, py::arg("m") = o.m, py::arg("R") = o.R);
  }, py::arg("alpha"), py::arg("kappa"));
  m.def("alpha_min_for_R", &alpha_min_for_R, py::arg("kappa"), py::arg("R"));
  m.def("theorem4_table", [] {
    py::list rows;
    for (const auto& r : theorem4_table()) {
      rows.append(py::dict(py::arg("form") = std::string(to_string(r.form)), py::arg("R") = r.R,
                           py::arg("kappa") = r.kappa, py::arg("D") = r.D, py::arg("alpha") = r.alpha,
                           py::arg("delta0") = r.delta0));
    }
    return rows;
  });
  m.def("find_feasible_point", [](int D, double alpha) -> py::object {
    const auto p = find_feasible_point(D, alpha);
    if (!p) return py::none();
    return py::dict(py::arg("delta") = p->delta, py::arg("x") = p->x, py::arg("y") = p->y, py::arg("alpha0") = p->alpha0);
  }, py::arg("D"), py::arg("alpha"));

  // forms
  m.def("form_value", [](const std::string& f, const py::int_& c, const py::int_& d) {
    return to_py(form_value(form_of(f), to_integer(c), to_integer(d)));
  }, py::arg("form"), py::arg("c"), py::arg("d"));
  m.def("triple_from_row", [](const py::int_& c, const py::int_& d) {
    const PythagoreanTriple t = triple_from_row(to_integer(c), to_integer(d));
    return py::make_tuple(to_py(t.x()), to_py(t.y()), to_py(t.z()));
  }, py::arg("c"), py::arg("d"));

  // groups
  m.def("generators", [](const py::object& g) {
    py::list out;
    for (const auto& x : group_of(g).generators()) out.append(tuple_of(x));
    return out;
  }, py::arg("group"));
  m.def("enumerate_ball", [](const py::object& g, double T, const std::string& walk, std::size_t cap) {
    const OrbitBall ball = enumerate_ball(group_of(g), T, enumeration(cap, walk));
    py::list out;
    for (const auto& e : ball.elements) out.append(py::make_tuple(e.a, e.b, e.c, e.d, e.sq_norm, e.word_length));
    return out;
  }, py::arg("group"), py::arg("T"), py::arg("walk") = "breadth", py::arg("cap") = 10'000'000);
  m.def("estimate_delta", [](const py::object& g, double t0, double t1, int points, const std::string& walk,
                             std::size_t cap) {
    const GrowthEstimate e = estimate_delta(group_of(g), geometric_grid(t0, t1, points), enumeration(cap, walk));
    return py::dict(py::arg("delta") = e.delta, py::arg("std_error") = e.std_error, py::arg("samples") = e.samples);
  }, py::arg("group"), py::arg("t0"), py::arg("t1"), py::arg("points") = 8, py::arg("walk") = "descent",
     py::arg("cap") = 10'000'000);
  m.def("certify_no_parabolic", [](const py::object& g, int length) {
    const ParabolicCertificate c = certify_no_parabolic(group_of(g), length);
    return py::dict(py::arg("passed") = c.passed, py::arg("words_checked") = c.words_checked,
                    py::arg("witness") = c.witness ? py::object(tuple_of(*c.witness)) : py::none());
  }, py::arg("group"), py::arg("max_length"));

  // congruence structure
  m.def("eta", &eta, py::arg("q"));
  m.def("sl2_order", &sl2_order, py::arg("q"));
  m.def("strong_approx_check", [](const py::object& g, u64 p) { return strong_approx_check(group_of(g), p); },
        py::arg("group"), py::arg("p"));
  m.def("coset_table", [](u64 q) {
    const CosetTable t = coset_table(q);
    return py::dict(py::arg("q") = t.q, py::arg("index") = t.index, py::arg("representatives") = t.representatives);
  }, py::arg("q"));
  m.def("coset_label", &coset_label, py::arg("c"), py::arg("d"), py::arg("q"));
  m.def("local_density", [](const std::string& f, u64 p) {
    const DensityReport r = local_density(form_of(f), p);
    return py::dict(py::arg("measured") = to_py(r.measured), py::arg("predicted") = to_py(r.predicted),
                    py::arg("match") = r.match);
  }, py::arg("form"), py::arg("p"));

  // exponential sums
  m.def("rho", [](u64 q, bool mutant) { return to_py(rho(q, model_of(mutant))); }, py::arg("q"), py::arg("mutant") = false);
  m.def("s1", [](u64 q, const std::string& f, const py::object& omega, bool mutant) {
    return to_py(s1(q, form_of(f), matrix_of(omega), model_of(mutant)).value);
  }, py::arg("q"), py::arg("form"), py::arg("omega") = py::none(), py::arg("mutant") = false);
  m.def("s1_direct", [](u64 q, const std::string& f, const py::object& omega, bool mutant) {
    return to_py(s1_direct(q, form_of(f), matrix_of(omega), model_of(mutant)));
  }, py::arg("q"), py::arg("form"), py::arg("omega") = py::none(), py::arg("mutant") = false);
  m.def("s4", [](u64 q, const std::string& f, i64 k, i64 l, const py::object& omega) {
    return to_py(s4(q, form_of(f), k, l, matrix_of(omega)).value);
  }, py::arg("q"), py::arg("form"), py::arg("k"), py::arg("l"), py::arg("omega") = py::none());
  m.def("s4_direct", [](u64 q, const std::string& f, i64 k, i64 l, const py::object& omega) {
    return to_py(s4_direct(q, form_of(f), k, l, matrix_of(omega)));
  }, py::arg("q"), py::arg("form"), py::arg("k"), py::arg("l"), py::arg("omega") = py::none());
  m.def("s4_closed_form", [](u64 p, const std::string& f, i64 k, i64 l, const py::object& omega) {
    return to_py(s4_closed_form(p, form_of(f), k, l, matrix_of(omega)));
  }, py::arg("p"), py::arg("form"), py::arg("k"), py::arg("l"), py::arg("omega") = py::none());
  m.def("sample_omegas", [](u64 seed, std::size_t count) {
    py::list out;
    for (const auto& w : sample_omegas(seed, count)) out.append(tuple_of(w));
    return out;
  }, py::arg("seed"), py::arg("count"));

  // census
  m.def("factorize", [](const py::int_& n) {
    const Factorization f = factorize(to_integer(n));
    py::list primes;
    for (const auto& p : f.primes) primes.append(to_py(p));
    return py::dict(py::arg("primes") = primes, py::arg("cofactor") = to_py(f.cofactor), py::arg("complete") = f.complete);
  }, py::arg("n"));
  m.def("census_summary", [](const py::object& g, double T, const std::string& f, int R, unsigned threads) {
    const OrbitBall ball = enumerate_ball(group_of(g), T);
    const CensusSummary s = census(ball, form_of(f), R, threads).summary;
    return py::dict(py::arg("rows") = s.rows, py::arg("zeros") = s.zeros, py::arg("units") = s.units,
                    py::arg("incomplete") = s.incomplete, py::arg("imprimitive") = s.imprimitive,
                    py::arg("at_most") = s.at_most);
  }, py::arg("group"), py::arg("T"), py::arg("form") = "z", py::arg("R") = 4, py::arg("threads") = 1);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"));
}
