#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "phonon/analytic.hpp"
#include "phonon/config.hpp"
#include "phonon/liouville.hpp"
#include "phonon/observables.hpp"
#include "phonon/sweep.hpp"
#include "phonon/validate.hpp"

namespace py = pybind11;
using namespace phonon;

namespace {

py::dict solution_dict(const Truncation& dims, const SteadyStateReport& report) {
  const ObservableSet obs = observe(report.rho);
  py::dict d;
  d["n_a"] = dims.n_a;
  d["n_b"] = dims.n_b;
  d["rho"] = report.rho.data();
  d["residual"] = report.residual;
  d["method"] = std::string(to_string(report.method));
  d["top_level_population"] = report.top_level_population;
  d["g2"] = obs.g2 ? py::cast(*obs.g2) : py::none();
  d["mean_phonons"] = obs.mean_phonons;
  d["mean_photons"] = obs.mean_photons;
  d["fidelity"] = obs.fidelity_F;
  d["populations"] = obs.populations;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Phonon blockade in a quadratically coupled optomechanical system.";

  py::register_exception<Error>(m, "PhononError", PyExc_RuntimeError);

  py::class_<Truncation>(m, "Truncation")
      .def(py::init<int, int>(), py::arg("n_a") = 3, py::arg("n_b") = 10)
      .def_readonly("n_a", &Truncation::n_a)
      .def_readonly("n_b", &Truncation::n_b)
      .def("dim", &Truncation::dim)
      .def("index", &Truncation::index, py::arg("photons"), py::arg("phonons"))
      .def("__repr__", [](const Truncation& t) {
        return "Truncation(n_a=" + std::to_string(t.n_a) + ", n_b=" + std::to_string(t.n_b) + ")";
      });

  py::class_<SystemParams>(m, "SystemParams")
      .def(py::init([](py::kwargs kw) {
        SystemParams sp;
        for (auto item : kw) {
          const auto key = py::cast<std::string>(item.first);
          if (item.second.is_none()) {
            if (key != "cavity_detuning") throw py::type_error(key + " cannot be None");
            continue;
          }
          set_param(sp, key, py::cast<double>(item.second));
        }
        sp.validate();
        return sp;
      }))
      .def_readwrite("g", &SystemParams::g)
      .def_readwrite("kappa", &SystemParams::kappa)
      .def_readwrite("gamma", &SystemParams::gamma)
      .def_readwrite("epsilon", &SystemParams::epsilon)
      .def_readwrite("delta_p", &SystemParams::delta_p)
      .def_readwrite("n_th", &SystemParams::n_th)
      .def_readwrite("cavity_detuning", &SystemParams::cavity_detuning)
      .def("validate", &SystemParams::validate)
      .def("__repr__", [](const SystemParams& sp) {
        std::string s = "SystemParams(";
        for (const auto& name : system_param_names()) {
          if (name == "cavity_detuning" && !sp.cavity_detuning) continue;
          s += name + "=" + py::repr(py::float_(get_param(sp, name))).cast<std::string>() + ", ";
        }
        s.resize(s.size() - 2);
        return s + ")";
      });

  py::class_<AmplitudeSet>(m, "AmplitudeSet")
      .def_readonly("c00", &AmplitudeSet::c00)
      .def_readonly("c01", &AmplitudeSet::c01)
      .def_readonly("c02", &AmplitudeSet::c02)
      .def_readonly("c10", &AmplitudeSet::c10);

  m.def("build_heff", [](const SystemParams& sp, Truncation dims) { return build_heff(sp, dims).data; },
        py::arg("params"), py::arg("dims") = Truncation{});
  m.def("liouvillian", [](const SystemParams& sp, Truncation dims) {
        return build_liouvillian(build_heff(sp, dims), collapse_channels(sp, dims)).dense();
      },
      py::arg("params"), py::arg("dims") = Truncation{});
  m.def("solve_steady_state",
        [](const SystemParams& sp, Truncation dims, double tol) {
          SteadyStateReport report = [&] {
            py::gil_scoped_release release;
            return solve_steady_state(sp, dims, tol);
          }();
          return solution_dict(dims, report);
        },
        py::arg("params"), py::arg("dims") = Truncation{}, py::arg("tol") = kDefaultSteadyStateTol);
  m.def("solve",
        [](const SystemParams& sp, Truncation start, double conv_tol, int max_n_b) {
          ConvergenceOptions opts;
          opts.max_n_b = max_n_b;
          ConvergedSteadyState s = [&] {
            py::gil_scoped_release release;
            return converge_truncation(sp, start, conv_tol, opts);
          }();
          return solution_dict(s.dims, s.report);
        },
        py::arg("params"), py::arg("start") = Truncation{}, py::arg("conv_tol") = 1e-4, py::arg("max_n_b") = 64);

  m.def("g2_zero", [](const Eigen::MatrixXcd& rho, Truncation dims) { return g2_zero(DensityMatrix(dims, rho)); },
        py::arg("rho"), py::arg("dims"));
  m.def("fidelity", [](const Eigen::MatrixXcd& rho, Truncation dims) { return fidelity_F(DensityMatrix(dims, rho)); },
        py::arg("rho"), py::arg("dims"));

  m.def("steady_amplitudes", &steady_amplitudes, py::arg("params"));
  m.def("g2_analytic", &g2_analytic, py::arg("params"));
  m.def("g2_resonant", &g2_resonant, py::arg("params"));
  m.def("g2_two_phonon_resonance", &g2_two_phonon_resonance, py::arg("params"));
  m.def("g2_from_amplitudes", &g2_from_amplitudes, py::arg("amplitudes"));
  m.def("cooperativity", &cooperativity, py::arg("params"));
  m.def("thermal_occupation", &thermal_occupation, py::arg("frequency_hz"), py::arg("temperature_k"));

  m.def("device_preset", [] {
    const PresetReport r = run_device_preset();
    py::dict d;
    d["g_eff_hz"] = r.linearization.g_eff;
    d["alpha_abs"] = std::abs(r.linearization.alpha);
    d["rwa_ok"] = r.rwa == RwaStatus::ok;
    d["rwa_ratio"] = r.rwa_ratio;
    d["n_th"] = r.n_th;
    d["cooperativity"] = r.cooperativity;
    d["params"] = r.params;
    return d;
  });

  m.def("validate",
        [](const SystemParams& sp, Truncation dims) {
          ValidationOptions opts;
          opts.truncation = dims;
          py::list out;
          std::vector<CheckResult> results;
          {
            py::gil_scoped_release release;
            results = run_validation(sp, opts);
          }
          for (const CheckResult& r : results) out.append(py::make_tuple(r.name, r.passed, r.detail));
          return out;
        },
        py::arg("params"), py::arg("dims") = Truncation{});

  m.def("figure",
        [](int number, unsigned jobs, std::optional<std::vector<double>> n_th_list) {
          if (number < 2 || number > 6) throw py::value_error("figure number must be 2..6");
          const auto list = n_th_list.value_or(default_fig6_thermal_occupations());
          SweepResult result;
          {
            py::gil_scoped_release release;
            result = run_sweep(figure_recipe(static_cast<Figure>(number), list), jobs);
          }
          return to_csv(result);
        },
        py::arg("number"), py::arg("jobs") = 0, py::arg("n_th_list") = py::none(),
        "Run a figure sweep and return the CSV text.");
}
