#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "idealcalc/classify.hpp"
#include "idealcalc/cli.hpp"
#include "idealcalc/dsl.hpp"
#include "idealcalc/ideal.hpp"
#include "idealcalc/simple_seq.hpp"

namespace py = pybind11;
using namespace idealcalc;

namespace {

py::object fraction(const Rational& r) {
  static py::object cls = py::module_::import("fractions").attr("Fraction");
  return cls(py::int_(py::str(r.get_num().get_str())), py::int_(py::str(r.get_den().get_str())));
}

py::object ext(const ExtRational& r) {
  if (r.minus_infinity) return py::float_(-std::numeric_limits<double>::infinity());
  return fraction(r.value);
}

template <class T>
std::string str(const T& x) {
  return to_string(x);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Ideals on countable sets and their c0 sequence spaces";

  // the module keeps the class alive, so a borrowed handle is enough
  static py::handle error = py::exception<Error>(m, "IdealcalcError").release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = error(e.what());
      exc.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  py::class_<Domain>(m, "Domain")
      .def(py::init([](const std::string& s) { return parse_domain(s); }))
      .def("__str__", &str<Domain>)
      .def("__repr__", [](const Domain& d) { return "Domain('" + to_string(d) + "')"; })
      .def("__eq__", [](const Domain& a, const Domain& b) { return a == b; });

  py::class_<SetExpr>(m, "Set")
      .def(py::init([](const std::string& s, std::optional<Domain> d) { return parse_set(s, d); }), py::arg("text"),
           py::arg("domain") = std::nullopt)
      .def_property_readonly("domain", &SetExpr::domain)
      .def("__str__", &str<SetExpr>)
      .def("__repr__", [](const SetExpr& a) { return "Set('" + to_string(a) + "')"; })
      .def("__eq__", [](const SetExpr& a, const SetExpr& b) { return a.domain() == b.domain() && equals(a, b); })
      .def("is_finite", [](const SetExpr& a) { return is_finite(a); });

  py::class_<IdealExpr>(m, "Ideal")
      .def(py::init([](const std::string& s, std::optional<Domain> d) { return parse_ideal(s, d); }), py::arg("text"),
           py::arg("domain") = std::nullopt)
      .def_property_readonly("domain", &IdealExpr::domain)
      .def("__str__", &str<IdealExpr>)
      .def("__repr__", [](const IdealExpr& i) { return "Ideal('" + to_string(i) + "')"; })
      .def("__eq__", [](const IdealExpr& a, const IdealExpr& b) { return a == b; });

  py::class_<SimpleSeq>(m, "Seq")
      .def(py::init([](const std::string& s, std::optional<Domain> d) { return parse_seq(s, d); }), py::arg("text"),
           py::arg("domain") = std::nullopt)
      .def_property_readonly("domain", &SimpleSeq::domain)
      .def("__str__", &str<SimpleSeq>)
      .def("__repr__", [](const SimpleSeq& x) { return "Seq('" + to_string(x) + "')"; })
      .def("__eq__", [](const SimpleSeq& a, const SimpleSeq& b) { return a.domain() == b.domain() && equals(a, b); });

  m.def("member", [](const IdealExpr& i, const SetExpr& a) { return member(i, a).holds; });
  m.def("in_c0", [](const IdealExpr& i, const SimpleSeq& x) { return in_c0I(i, x).holds; });
  m.def("char_fn", &char_fn);
  m.def("sup_norm", [](const SimpleSeq& x) { return fraction(sup_norm(x)); });
  m.def("limsup", [](const IdealExpr& i, const SimpleSeq& x) { return ext(ideal_limsup(i, x)); });
  m.def("quotient_norm", [](const IdealExpr& i, const SimpleSeq& x) { return fraction(quotient_norm(i, x)); });
  m.def("perp_normalize", &perp_normalize);
  m.def("perp", [](const IdealExpr& i) { return perp_normalize(IdealExpr::perp(i)); });
  m.def("catalog", [](const std::string& alpha) {
    const auto c = catalog(parse_ordinal(alpha));
    return py::make_tuple(c.p, c.q);
  });
  m.def("is_tall", [](const IdealExpr& i) { return is_tall(i).holds; });
  m.def("is_frechet", [](const IdealExpr& i) { return is_frechet(i).holds; });
  m.def("equivalent", [](const IdealExpr& i, const IdealExpr& j) { return to_string(equivalent(i, j).kind); });
  m.def(
      "run",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      "Run one CLI command line; returns (exit code, stdout, stderr).");
}
