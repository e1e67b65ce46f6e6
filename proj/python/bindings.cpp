#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "qoc/experiment.hpp"

namespace py = pybind11;
using namespace qoc;

namespace {

CorrectionOrder to_order(const py::object& order) {
  if (py::isinstance<py::str>(order)) {
    return CorrectionOrder::parse(order.cast<std::string>());
  }
  return CorrectionOrder::series(order.cast<int>());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quantum gate synthesis by commutator-corrected gradient flow.";

  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  // Matrix kernels.
  m.def("kron", &kron, py::arg("a"), py::arg("b"));
  m.def("commutator", &commutator, py::arg("a"), py::arg("b"));
  m.def("nested_commutator", &nested_commutator, py::arg("x"), py::arg("b"),
        py::arg("depth"));
  m.def("expm_hermitian_generator", &expm_hermitian_generator, py::arg("h"),
        py::arg("theta"), "exp(-i theta h) for Hermitian h.");
  m.def("overlap_trace", &overlap_trace, py::arg("a"), py::arg("b"),
        "Tr(a^dagger b).");
  m.def("unitarity_defect", &unitarity_defect, py::arg("a"));

  // System model.
  py::class_<QuantumSystem>(m, "QuantumSystem")
      .def(py::init<ComplexMatrix, std::vector<ComplexMatrix>>(),
           py::arg("drift"), py::arg("controls"))
      .def_property_readonly("dim", &QuantumSystem::dim)
      .def_property_readonly("num_controls", &QuantumSystem::num_controls)
      .def_property_readonly("drift", &QuantumSystem::drift)
      .def_property_readonly("controls", &QuantumSystem::controls);

  py::class_<ControlGrid>(m, "ControlGrid")
      .def(py::init<int, int, double>(), py::arg("num_controls"),
           py::arg("num_slices"), py::arg("final_time"))
      .def(py::init<AmplitudeMatrix, double>(), py::arg("amplitudes"),
           py::arg("final_time"))
      .def_property_readonly("num_controls", &ControlGrid::num_controls)
      .def_property_readonly("num_slices", &ControlGrid::num_slices)
      .def_property_readonly("final_time", &ControlGrid::final_time)
      .def_property_readonly("dt", &ControlGrid::dt)
      .def_property_readonly("amplitudes", &ControlGrid::amplitudes);

  py::class_<GateTarget>(m, "GateTarget")
      .def(py::init<ComplexMatrix, std::string>(), py::arg("unitary"),
           py::arg("label") = "target")
      .def_property_readonly("unitary", &GateTarget::unitary)
      .def_property_readonly("label", &GateTarget::label);

  m.def("build_two_spin_benchmark",
        [](double w1, double w2, double cx, double cy, double cz) {
          return build_two_spin_benchmark({w1, w2, cx, cy, cz});
        },
        py::arg("omega1") = 20.0, py::arg("omega2") = 30.0,
        py::arg("coupling_x") = 110.0, py::arg("coupling_y") = 120.0,
        py::arg("coupling_z") = 130.0);
  m.def("cnot_target", &cnot_target);
  m.def("swap_target", &swap_target);
  m.def("slice_hamiltonian", &slice_hamiltonian, py::arg("system"),
        py::arg("grid"), py::arg("slice"));
  m.def("propagate",
        [](const QuantumSystem& sys, const ControlGrid& grid) {
          return propagate(sys, grid).prefixes;
        },
        py::arg("system"), py::arg("grid"),
        "Prefix propagators U(t_l, 0) for l = 0..L.");

  // Gradient engine.
  m.def("objective",
        py::overload_cast<const QuantumSystem&, const ControlGrid&,
                          const GateTarget&>(&objective),
        py::arg("system"), py::arg("grid"), py::arg("target"));
  m.def("flow_rhs",
        [](const QuantumSystem& sys, const ControlGrid& grid,
           const GateTarget& target, const py::object& order) {
          return rhs_corrected(sys, grid, target, to_order(order)).values;
        },
        py::arg("system"), py::arg("grid"), py::arg("target"),
        py::arg("order") = 1,
        "Flow right-hand side; order is 0..8 or 'exact'.");
  m.def("interval_average_exact", &interval_average_exact, py::arg("system"),
        py::arg("grid"), py::arg("slice"), py::arg("k"));
  m.def("interval_average_series", &interval_average_series, py::arg("system"),
        py::arg("grid"), py::arg("slice"), py::arg("k"), py::arg("terms"));
  m.def("finite_difference_gradient", &finite_difference_gradient,
        py::arg("system"), py::arg("grid"), py::arg("target"),
        py::arg("delta") = 1e-5);

  // Flow integration.
  py::class_<FlowConfig>(m, "FlowConfig")
      .def(py::init<>())
      .def_readwrite("s_max", &FlowConfig::s_max)
      .def_readwrite("abs_tol", &FlowConfig::abs_tol)
      .def_readwrite("rel_tol", &FlowConfig::rel_tol)
      .def_readwrite("j_stop", &FlowConfig::j_stop)
      .def_readwrite("h_init", &FlowConfig::h_init)
      .def_readwrite("h_min", &FlowConfig::h_min)
      .def_readwrite("max_rhs_evals", &FlowConfig::max_rhs_evals);

  py::class_<FlowResult>(m, "FlowResult")
      .def_readonly("final_grid", &FlowResult::final_grid)
      .def_property_readonly("stop_reason",
                             [](const FlowResult& r) { return to_string(r.stop_reason); })
      .def_readonly("s_stop", &FlowResult::s_stop)
      .def_readonly("rhs_evals", &FlowResult::rhs_evals)
      .def_readonly("accepted_steps", &FlowResult::accepted_steps)
      .def_readonly("rejected_steps", &FlowResult::rejected_steps)
      .def_readonly("max_unitarity_defect", &FlowResult::max_unitarity_defect)
      .def_property_readonly("final_objective", &FlowResult::final_objective)
      .def_property_readonly("trace", [](const FlowResult& r) {
        std::vector<std::pair<double, double>> out;
        out.reserve(r.trace.size());
        for (const auto& t : r.trace) out.emplace_back(t.s, t.objective);
        return out;
      });

  m.def("integrate_flow",
        [](const QuantumSystem& sys, const ControlGrid& grid0,
           const GateTarget& target, const py::object& order,
           const FlowConfig& cfg) {
          const CorrectionOrder o = to_order(order);
          py::gil_scoped_release release;
          return integrate_flow(sys, grid0, target, o, cfg);
        },
        py::arg("system"), py::arg("grid"), py::arg("target"),
        py::arg("order") = 1, py::arg("config") = FlowConfig{});
  m.def("error_tolerance_check", &error_tolerance_check, py::arg("result"),
        py::arg("config"));

  // Benchmark harness.
  py::class_<ExperimentSpec>(m, "ExperimentSpec")
      .def_property_readonly("gate", [](const ExperimentSpec& s) { return to_string(s.gate); })
      .def_readonly("final_time", &ExperimentSpec::final_time)
      .def_readonly("num_slices", &ExperimentSpec::num_slices)
      .def_property_readonly("order", [](const ExperimentSpec& s) { return s.order.to_string(); })
      .def_readonly("flow", &ExperimentSpec::flow);

  py::class_<RunRecord>(m, "RunRecord")
      .def_readonly("spec", &RunRecord::spec)
      .def_readonly("s_stop", &RunRecord::s_stop)
      .def_readonly("s_reported", &RunRecord::s_reported)
      .def_readonly("final_objective", &RunRecord::final_objective)
      .def_readonly("rhs_evals", &RunRecord::rhs_evals)
      .def_readonly("wall_time", &RunRecord::wall_time)
      .def_property_readonly("stop_reason",
                             [](const RunRecord& r) { return to_string(r.stop_reason); })
      .def_property_readonly("converged", &RunRecord::converged);

  m.def("parse_experiments",
        [](const std::string& text) { return parse_experiments(text); },
        py::arg("text"));
  m.def("load_experiment", &load_experiment, py::arg("path"));
  m.def("run_experiments",
        [](const std::vector<ExperimentSpec>& specs, int parallel) {
          py::gil_scoped_release release;
          return run_experiments(specs, parallel);
        },
        py::arg("specs"), py::arg("parallel") = 1);
  m.def("format_csv", &format_csv, py::arg("records"));
}
