#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hypolab/cli/config.hpp"
#include "hypolab/cli/experiments.hpp"
#include "hypolab/cli/report.hpp"
#include "hypolab/error.hpp"
#include "hypolab/kernels.hpp"
#include "hypolab/opalg.hpp"
#include "hypolab/parallel.hpp"
#include "hypolab/singular.hpp"

namespace py = pybind11;
using namespace hypolab;

namespace {

py::array_t<std::complex<double>> to_array(const grid::GridField& f) {
  const auto& b = f.box();
  py::array_t<std::complex<double>> out({b.Nx, b.Ny});
  auto v = f.values();
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_hypolab, m) {
  m.doc() = "hypolab native core";

  static py::exception<Error> base(m, "Error", PyExc_RuntimeError);
  static py::exception<ParseError> parse_err(m, "ParseError", base.ptr());
  static py::exception<DomainError> domain_err(m, "DomainError", base.ptr());
  static py::exception<ConfigError> config_err(m, "ConfigError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ParseError& e) {
      PyErr_SetString(parse_err.ptr(), e.what());
    } catch (const DomainError& e) {
      PyErr_SetString(domain_err.ptr(), e.what());
    } catch (const ConfigError& e) {
      PyErr_SetString(config_err.ptr(), e.what());
    } catch (const Error& e) {
      PyErr_SetString(base.ptr(), e.what());
    }
  });

  m.def("set_threads", &set_thread_count, py::arg("n"));
  m.def("threads", &thread_count);

  // Symbolic layer; operators travel as text.
  m.def("normalize_operator", [](const std::string& s) { return opalg::to_string(opalg::parse_operator(s)); });
  m.def("commutator", [](const std::string& a, const std::string& b) {
    return opalg::to_string(opalg::commutator(opalg::parse_scalar(a), opalg::parse_scalar(b)));
  });
  m.def("principal_symbol", [](const std::string& op, int order) {
    return opalg::principal_symbol(opalg::parse_scalar(op), order).to_string();
  });
  m.def(
      "det_symbol",
      [](const std::string& op, std::array<int, 2> rows) { return opalg::det_symbol(opalg::parse_operator(op), rows).to_string(); },
      py::arg("op"), py::arg("row_orders") = std::array<int, 2>{1, 1});
  m.def(
      "hormander_rank",
      [](const std::vector<std::string>& fields, std::array<double, 2> base_point, int max_step) {
        std::vector<opalg::DiffOp> ops;
        for (const auto& f : fields) ops.push_back(opalg::parse_scalar(f));
        auto r = opalg::hormander_rank(ops, base_point, max_step);
        return py::make_tuple(r.rank, r.step ? py::cast(*r.step) : py::none());
      },
      py::arg("fields"), py::arg("base"), py::arg("max_step") = 3);

  // Counterexample.
  m.def(
      "realize_u1",
      [](double a, double b, double theta, double lx, double ly, int nx, int ny) {
        return to_array(singular::realize_u1({singular::ChiSpec::smooth_bump(a, b), theta}, grid::Box::make(lx, ly, nx, ny)));
      },
      py::arg("a"), py::arg("b"), py::arg("theta") = 0.0, py::arg("lx") = 16.0, py::arg("ly") = 50.26548245743669,
      py::arg("nx") = 256, py::arg("ny") = 256);
  m.def("l2_growth", [](const std::vector<double>& lambdas) {
    std::vector<std::tuple<double, double, double>> out;
    for (const auto& r : singular::l2_growth(lambdas)) out.emplace_back(r.lambda, r.reduced, r.quadrature);
    return out;
  });

  m.def(
      "eval_kernel",
      [](double p, double q, double delta, double x, double y, double xp, double yp) {
        kernels::KernelParams k{p, q, delta};
        k.validate();
        return kernels::eval_kernel(k, x, y, xp, yp);
      },
      py::arg("p"), py::arg("q"), py::arg("delta"), py::arg("x"), py::arg("y"), py::arg("xp"), py::arg("yp"));

  // Experiment runner. Reports cross the boundary as JSON text.
  m.def("list_experiments", [] {
    py::list out;
    for (const auto& e : cli::experiments()) {
      py::dict d;
      d["name"] = e.name;
      d["claim"] = e.claim;
      d["criteria"] = e.criteria;
      out.append(d);
    }
    return out;
  });
  m.def(
      "run_experiment_json",
      [](const std::string& name, const std::map<std::string, std::string>& overrides) {
        cli::Config c;
        for (const auto& [k, v] : overrides) c.set(k, v);
        std::string out;
        {
          py::gil_scoped_release release;
          out = cli::run_experiment(name, c).to_json().dump();
        }
        return out;
      },
      py::arg("name"), py::arg("overrides") = std::map<std::string, std::string>{});
  m.def("verify_report_json", [](const std::string& text) {
    auto v = cli::verify_report(nlohmann::json::parse(text));
    return py::make_tuple(v.consistent, v.pass, v.messages);
  });
}
