// Python surface over the step-line laboratory: family construction, tau
// functions, recursion coefficients, weights/moments, verification suites
// and the CSV tables. High-precision values cross the boundary as decimal
// strings; convenience floats are rounded doubles.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stepline/runner.hpp"

namespace py = pybind11;
using namespace stepline;

namespace {

WeightFamily family_from(const std::string& name, long precision, const py::kwargs& kw) {
  auto pick = [&](const char* key) -> std::optional<std::string> {
    if (kw.contains(key)) return kw[key].cast<std::string>();
    return std::nullopt;
  };
  return make_family(name, precision, pick("eta1"), pick("eta2"), pick("eta"), pick("b1"),
                     pick("b2"), pick("c"));
}

long digits_for(long precision) { return (precision * 3) / 10; }

}  // namespace

PYBIND11_MODULE(_stepline, m) {
  m.doc() = "discrete multiple orthogonal polynomials on the step line: tau functions, "
            "recursion coefficients and verification suites";

  py::register_exception<GuardError>(m, "GuardError");
  py::register_exception<FactorizationBreakdown>(m, "FactorizationBreakdown");

  m.def(
      "weight",
      [](const std::string& family, int a, unsigned long k, long precision, py::kwargs kw) {
        WeightFamily f = family_from(family, precision, kw);
        return weight_eval(f, a, k).to_string(digits_for(precision));
      },
      py::arg("family"), py::arg("a"), py::arg("k"), py::arg("precision") = 256,
      "w^(a)(k) as a decimal string");

  m.def(
      "moment",
      [](const std::string& family, int a, std::size_t n, long precision, py::kwargs kw) {
        WeightFamily f = family_from(family, precision, kw);
        Jet3 j = moment(f, a, n, precision);
        return py::make_tuple(j.value().to_string(digits_for(precision)),
                              j.theta(1).to_string(digits_for(precision)));
      },
      py::arg("family"), py::arg("a"), py::arg("n"), py::arg("precision") = 256,
      "(rho^(a)_n, theta rho^(a)_n) as decimal strings");

  m.def(
      "tau_values",
      [](const std::string& family, std::size_t n_max, long precision, py::kwargs kw) {
        Lab lab(family_from(family, precision, kw));
        lab.fact(n_max + 1);
        std::vector<std::string> out;
        for (std::size_t n = 0; n <= n_max; ++n)
          out.push_back(lab.tau(n).to_string(digits_for(precision)));
        return out;
      },
      py::arg("family"), py::arg("n_max") = 8, py::arg("precision") = 256,
      "tau_0..tau_n_max as decimal strings");

  m.def(
      "recursion_coefficients",
      [](const std::string& family, std::size_t n_max, long precision, py::kwargs kw) {
        Lab lab(family_from(family, precision, kw));
        auto rc = recursion_coeffs(lab, n_max);
        py::dict out;
        auto conv = [&](const std::vector<BigReal>& v) {
          std::vector<double> d;
          for (const auto& x : v) d.push_back(x.to_double());
          return d;
        };
        out["alpha"] = conv(rc.alpha);
        out["beta"] = conv(rc.beta);
        out["gamma"] = conv(rc.gamma);
        return out;
      },
      py::arg("family"), py::arg("n_max") = 8, py::arg("precision") = 256,
      "alpha, beta, gamma arrays (rounded to double)");

  m.def(
      "orthogonality_gap",
      [](const std::string& family, std::size_t n, long precision, py::kwargs kw) {
        Lab lab(family_from(family, precision, kw));
        return orthogonality_residuals(lab, n).max_abs.to_double();
      },
      py::arg("family"), py::arg("n"), py::arg("precision") = 256,
      "largest orthogonality residual at index n");

  m.def(
      "verify",
      [](const std::string& family, const std::vector<std::string>& suites, std::size_t n_max,
         long precision, py::kwargs kw) {
        RunConfig cfg;
        cfg.family = family;
        cfg.suites = suites;
        cfg.n_max = n_max;
        cfg.precision = precision;
        auto pick = [&](const char* key) {
          if (kw.contains(key)) {
            std::string v = kw[key].cast<std::string>();
            if (std::string(key) == "eta1") cfg.eta1 = v;
            if (std::string(key) == "eta2") cfg.eta2 = v;
            if (std::string(key) == "eta") cfg.eta = v;
            if (std::string(key) == "b1") cfg.b1 = v;
            if (std::string(key) == "b2") cfg.b2 = v;
            if (std::string(key) == "c") cfg.c = v;
          }
        };
        for (const char* key : {"eta1", "eta2", "eta", "b1", "b2", "c"}) pick(key);
        Report rep = run(cfg);
        py::list records;
        for (const auto& r : rep.records) {
          py::dict d;
          d["suite"] = r.suite;
          d["id"] = r.id;
          d["anchor"] = r.anchor;
          d["site"] = r.site;
          d["residual"] = r.residual.to_double();
          d["tolerance"] = r.tolerance.to_double();
          d["pass"] = r.pass;
          records.append(d);
        }
        return py::make_tuple(rep.all_pass, records);
      },
      py::arg("family"), py::arg("suites") = std::vector<std::string>{"all"},
      py::arg("n_max") = 8, py::arg("precision") = 256,
      "(all_pass, records) for the selected verification suites");

  m.def(
      "table",
      [](const std::string& family, const std::string& quantity, std::size_t n_max,
         long precision, py::kwargs kw) {
        return emit_table(family_from(family, precision, kw), quantity, n_max);
      },
      py::arg("family"), py::arg("quantity") = "coeffs", py::arg("n_max") = 8,
      py::arg("precision") = 256, "deterministic CSV table (tau, coeffs or fields)");
}
