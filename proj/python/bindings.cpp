#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "diracgap/bs_operator.hpp"
#include "diracgap/errors.hpp"
#include "diracgap/exact_1d.hpp"
#include "diracgap/lieb_thirring.hpp"
#include "diracgap/radial.hpp"
#ifdef DIRACGAP_WITH_CLI
#include "diracgap/cli.hpp"
#endif

namespace py = pybind11;
using namespace diracgap;

namespace {

bs::PotentialField field(int d, double a, int L, std::vector<double> values) {
  bs::PotentialField V{bs::GridSpec{d, a, L}, std::move(values)};
  V.validate();
  return V;
}

}  // namespace

PYBIND11_MODULE(_diracgap, mod) {
  mod.doc() = "Spectral gap eigenvalues of Dirac operators with attractive potentials";

  py::handle base = PyErr_NewException("diracgap._diracgap.DiracGapError", PyExc_RuntimeError, nullptr);
  mod.attr("DiracGapError") = base;
  py::register_exception<DomainError>(mod, "DomainError", base);
  py::register_exception<ValidationError>(mod, "ValidationError", base);
  py::register_exception<ConvergenceError>(mod, "ConvergenceError", base);
  py::register_exception<SupercriticalError>(mod, "SupercriticalError", base);
  py::register_exception<IntegrationError>(mod, "IntegrationError", base);
  py::register_exception<NoSolutionError>(mod, "NoSolutionError", base);
  py::register_exception<SingularityError>(mod, "SingularityError", base);

  mod.def(
      "alpha_D", [](double p, double lam, double m) { return exact1d::alpha_D({m, p, lam}); }, py::arg("p"),
      py::arg("lam"), py::arg("m") = 1.0, "L^p norm of the exact one-dimensional potential with eigenvalue lam.");
  mod.def("alpha_star", &exact1d::alpha_star, py::arg("p"), py::arg("m") = 1.0,
          "Norm of the one-dimensional potential whose eigenvalue reaches -m.");
  mod.def("Lambda_D_1d", &exact1d::Lambda_D_1d, py::arg("alpha"), py::arg("p"), py::arg("m") = 1.0,
          "Optimal lowest eigenvalue in one dimension for potentials of L^p norm alpha.");
  mod.def("nonrel_gap_depth", &exact1d::nonrel_gap_depth, py::arg("alpha"), py::arg("p"), py::arg("d") = 1);
  mod.def("wp_norm_p", &radial::wp_norm_p, py::arg("p"), py::arg("d"), py::arg("delta"));
  mod.def(
      "radial_critical_norm",
      [](int d, double p, double m) {
        const auto c = radial::radial_critical_norm(d, p, m);
        return py::dict(py::arg("alpha") = c.alpha, py::arg("lambda") = c.lambda,
                        py::arg("at_gap_bottom") = c.at_gap_bottom);
      },
      py::arg("d"), py::arg("p"), py::arg("m") = 1.0);
  mod.def(
      "lt_constant",
      [](double gamma, double p, int d, double m) {
        const auto c = lt::lt_constant({gamma, p, m, d});
        return py::dict(py::arg("C") = c.C, py::arg("L") = c.L, py::arg("p_used") = c.p_used,
                        py::arg("endpoint") = c.endpoint, py::arg("assembly") = c.assembly);
      },
      py::arg("gamma"), py::arg("p"), py::arg("d"), py::arg("m") = 1.0);
  mod.def(
      "lambda_D",
      [](int d, double a, int L, std::vector<double> values, double m, double tol) -> std::optional<double> {
        const auto V = field(d, a, L, std::move(values));
        py::gil_scoped_release release;
        return bs::lambda_D(dirac::clifford_rep(d), V, m, tol, {});
      },
      py::arg("d"), py::arg("a"), py::arg("L"), py::arg("values"), py::arg("m") = 1.0, py::arg("tol") = 1e-10,
      "Lowest gap eigenvalue for a potential sampled on the periodic grid [-a, a)^d with L points per axis, "
      "row-major with the first axis slowest. None when no eigenvalue lies in the gap.");
  mod.def(
      "gap_eigenvalues",
      [](int d, double a, int L, std::vector<double> values, double m) {
        const auto V = field(d, a, L, std::move(values));
        py::gil_scoped_release release;
        return bs::gap_eigenvalues(dirac::clifford_rep(d), V, m, bs::default_gap_grid(m), {});
      },
      py::arg("d"), py::arg("a"), py::arg("L"), py::arg("values"), py::arg("m") = 1.0);

#ifdef DIRACGAP_WITH_CLI
  mod.def("command_names", &cli::command_names);
  mod.def(
      "run_command",
      [](const std::string& command, const std::string& config_json, const std::string& out_dir,
         std::optional<std::uint64_t> seed, std::optional<double> tol) {
        cli::RunConfig run;
        run.command = command;
        run.config = nlohmann::json::parse(config_json);
        run.out_dir = out_dir;
        run.seed = seed;
        run.tol = tol;
        std::string out;
        {
          py::gil_scoped_release release;
          out = cli::run_command(run).dump();
        }
        return out;
      },
      py::arg("command"), py::arg("config_json") = "{}", py::arg("out_dir") = "out", py::arg("seed") = py::none(),
      py::arg("tol") = py::none(), "Runs a CLI command and returns its summary as a JSON string.");
#endif
}
