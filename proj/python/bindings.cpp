#include "fbl/cli.hpp"
#include "fbl/errors.hpp"
#include "fbl/fblnorm.hpp"
#include "fbl/lifting.hpp"
#include "fbl/report.hpp"
#include "fbl/verify.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace fbl;

namespace {

py::object to_python(const nlohmann::json& j)
{
    return py::module_::import("json").attr("loads")(j.dump());
}

SearchConfig make_config(std::size_t k, std::size_t restarts, std::size_t local_steps,
                         std::uint64_t seed, std::size_t threads)
{
    return {.tuple_size = k, .restarts = restarts, .local_steps = local_steps, .seed = seed,
            .threads = threads};
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Free Banach lattice norm estimation and lattice-lifting checks";

    auto base = py::register_exception<std::invalid_argument>(m, "FblError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
    py::register_exception<NonFiniteError>(m, "NonFiniteError", PyExc_ArithmeticError);

    py::class_<Space>(m, "Space")
        .def(py::init([](const std::string& text) { return parse_space(text); }), py::arg("text"))
        .def_property_readonly("dim", &Space::dim)
        .def("norm", [](const Space& s, std::vector<double> x) { return norm(s, Vector(std::move(x))); })
        .def("dual_norm",
             [](const Space& s, std::vector<double> x) { return dual_norm(s, Functional(std::move(x))); })
        .def("__str__", &Space::to_string)
        .def("__repr__", [](const Space& s) { return "Space('" + s.to_string() + "')"; });

    py::class_<LiftParams>(m, "LiftParams")
        .def(py::init([](const std::string& rule) { return LiftParams::from_rule(rule); }),
             py::arg("rule") = "pow2")
        .def("M", &LiftParams::M)
        .def("N", &LiftParams::N)
        .def("__str__", &LiftParams::to_string);

    py::class_<HomExpr>(m, "Expr")
        .def(py::init([](const std::string& text, const LiftParams& params) { return parse_expr(text, params); }),
             py::arg("text"), py::arg("params") = LiftParams::pow2())
        .def_property_readonly("dim", &HomExpr::dim)
        .def("__call__",
             [](const HomExpr& f, const Space& s, std::vector<double> xstar) {
                 return eval(f, s, Functional(std::move(xstar)));
             },
             py::arg("space"), py::arg("xstar"))
        .def("__str__", [](const HomExpr& f) { return to_string(f); })
        .def("__repr__", [](const HomExpr& f) { return "Expr('" + to_string(f) + "')"; });

    m.def("tuple_constraint",
          [](const Space& s, const std::vector<std::vector<double>>& tuple) {
              std::vector<Functional> fs(tuple.begin(), tuple.end());
              return tuple_constraint(s, fs).value;
          },
          py::arg("space"), py::arg("tuple"));

    m.def("norm_lower_bound",
          [](const HomExpr& f, const Space& s, std::size_t k, std::size_t restarts, std::size_t local_steps,
             std::uint64_t seed, std::size_t threads) {
              NormEstimate est;
              {
                  py::gil_scoped_release release;
                  est = fbl_lower_bound(f, s, make_config(k, restarts, local_steps, seed, threads));
              }
              return to_python(to_json(est));
          },
          py::arg("expr"), py::arg("space"), py::arg("k") = 4, py::arg("restarts") = 200,
          py::arg("local_steps") = 4, py::arg("seed") = 0, py::arg("threads") = 1);

    m.def("norm_upper_bound",
          [](const HomExpr& f, const Space& s, std::vector<std::size_t> support, std::size_t grid) {
              return to_python(to_json(upper_bound_finite_coords(f, s, support, grid)));
          },
          py::arg("expr"), py::arg("space"), py::arg("support"), py::arg("grid") = 64);

    m.def("lift", [](const Space& s, std::vector<double> x, const LiftParams& params) {
              return T_apply(LiftingSystem(s, params), Vector(std::move(x)));
          },
          py::arg("space"), py::arg("x"), py::arg("params") = LiftParams::pow2());
    m.def("beta", [](const HomExpr& f, const Space& s) { const Vector b = beta_apply(f, s);
              return std::vector<double>(b.coords().begin(), b.coords().end()); },
          py::arg("expr"), py::arg("space"));

    m.def("check_lemma44",
          [](std::size_t instances, std::size_t max_l, std::uint64_t seed, const std::optional<Space>& space) {
              return to_python(
                  check_lemma44_batch({.instances = instances, .max_l = max_l, .space = space, .seed = seed})
                      .to_json());
          },
          py::arg("instances") = 10000, py::arg("max_l") = 6, py::arg("seed") = 0, py::arg("space") = py::none());
    m.def("check_normspan",
          [](const Space& s, std::vector<double> a, std::size_t k, std::size_t restarts, std::uint64_t seed) {
              return to_python(
                  check_normspan(LiftingSystem(s), a, make_config(k, restarts, 4, seed, 1)).to_json());
          },
          py::arg("space"), py::arg("coefficients"), py::arg("k") = 4, py::arg("restarts") = 20,
          py::arg("seed") = 0);
    m.def("check_freenorm",
          [](const Space& s, std::size_t n, std::size_t k, std::size_t restarts, std::uint64_t seed) {
              return to_python(
                  check_freenorm(LiftingSystem(s), n, k, make_config(4, restarts, 4, seed, 1)).to_json());
          },
          py::arg("space"), py::arg("n"), py::arg("k"), py::arg("restarts") = 100, py::arg("seed") = 0);
    m.def("check_disjoint",
          [](const Space& s, std::size_t samples, std::uint64_t seed) {
              return to_python(check_disjoint(LiftingSystem(s), samples, seed).to_json());
          },
          py::arg("space"), py::arg("samples") = 10000, py::arg("seed") = 0);
    m.def("check_biorthogonal",
          [](const Space& s) { return to_python(check_biorthogonal(LiftingSystem(s)).to_json()); },
          py::arg("space"));

    m.def("run_cli",
          [](const std::vector<std::string>& args) {
              std::ostringstream out, err;
              const int code = cli::run(args, out, err);
              return py::make_tuple(code, out.str(), err.str());
          },
          py::arg("args"), "Runs fblbench with `args`; returns (exit code, stdout, stderr).");
}
