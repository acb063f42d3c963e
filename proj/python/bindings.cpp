#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lagpf/runner.hpp"

namespace py = pybind11;
using namespace lagpf;

namespace {

Eigen::MatrixXd nodes_array(const Triangulation& tri) {
  Eigen::MatrixXd out(tri.node_count(), 2);
  for (int i = 0; i < tri.node_count(); ++i) out.row(i) = tri.nodes[i].transpose();
  return out;
}

Eigen::MatrixXi elements_array(const Triangulation& tri) {
  Eigen::MatrixXi out(tri.element_count(), 3);
  for (int e = 0; e < tri.element_count(); ++e)
    for (int k = 0; k < 3; ++k) out(e, k) = tri.elements[e][k];
  return out;
}

std::vector<ConfigEntry> entries_from_dict(const py::dict& d) {
  std::vector<ConfigEntry> entries;
  for (auto item : d) {
    ConfigEntry e;
    e.key = py::str(item.first);
    e.value = py::str(item.second);
    entries.push_back(std::move(e));
  }
  return entries;
}

}  // namespace

PYBIND11_MODULE(lagpf, m) {
  m.doc() = "Variational Lagrangian phase-field solver";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<MeshParseError>(m, "MeshParseError", PyExc_ValueError);

  py::enum_<NodeConstraint>(m, "NodeConstraint")
      .value("free_node", NodeConstraint::free_node)
      .value("fix_x", NodeConstraint::fix_x)
      .value("fix_y", NodeConstraint::fix_y)
      .value("fix_both", NodeConstraint::fix_both);

  py::enum_<BoundaryRecipe>(m, "BoundaryRecipe")
      .value("none", BoundaryRecipe::none)
      .value("dirichlet_all", BoundaryRecipe::dirichlet_all)
      .value("quasi_1d", BoundaryRecipe::quasi_1d);

  py::class_<Rect>(m, "Rect")
      .def(py::init<double, double, double, double>(), py::arg("xmin"), py::arg("xmax"),
           py::arg("ymin"), py::arg("ymax"));

  py::class_<Triangulation>(m, "Triangulation")
      .def_property_readonly("nodes", &nodes_array)
      .def_property_readonly("elements", &elements_array)
      .def_property_readonly("constraints",
                             [](const Triangulation& t) { return t.constraints; })
      .def("node_count", &Triangulation::node_count)
      .def("element_count", &Triangulation::element_count)
      .def("signed_area", &Triangulation::signed_area)
      .def("validate", &Triangulation::validate);

  py::class_<PhaseSamples>(m, "PhaseSamples")
      .def(py::init([](const Eigen::VectorXd& v) {
             PhaseSamples s;
             s.values = v;
             return s;
           }),
           py::arg("values"))
      .def_property_readonly("values", [](const PhaseSamples& s) { return s.values; });

  py::class_<FlowState>(m, "FlowState")
      .def_static("identity", &FlowState::identity)
      .def(py::init([](const Eigen::VectorXd& p) {
             FlowState s;
             s.positions = p;
             return s;
           }),
           py::arg("positions"))
      .def_property_readonly("positions", [](const FlowState& s) { return s.positions; });

  m.def("build_uniform_mesh", &build_uniform_mesh, py::arg("nx"), py::arg("ny"), py::arg("rect"),
        py::arg("recipe") = BoundaryRecipe::none);
  m.def("reinitialize", &reinitialize);
  m.def("load_mesh", &load_mesh);
  m.def("save_mesh", &save_mesh);
  m.def("save_snapshot", &save_snapshot, py::arg("tri"), py::arg("state"), py::arg("phi0"),
        py::arg("time"), py::arg("path"));

  py::class_<MeshQuality>(m, "MeshQuality")
      .def_readonly("min_detF", &MeshQuality::min_detF)
      .def_readonly("min_angle", &MeshQuality::min_angle)
      .def_readonly("max_aspect", &MeshQuality::max_aspect);
  m.def("mesh_quality", &mesh_quality);

  py::class_<EnergyModel>(m, "EnergyModel")
      .def_static("base", &EnergyModel::base, py::arg("eps2"))
      .def_static("volume_constrained", &EnergyModel::volume_constrained, py::arg("eps2"),
                  py::arg("penalty_weight"), py::arg("target_volume"))
      .def_static("slightly_compressible", &EnergyModel::slightly_compressible, py::arg("eps2"),
                  py::arg("compressibility"))
      .def_readonly("eps2", &EnergyModel::eps2);

  m.def("discrete_energy", &discrete_energy);
  m.def("discrete_energy_gradient", &discrete_energy_gradient);
  m.def("volume", &volume);

  py::class_<OptimizerConfig>(m, "OptimizerConfig")
      .def(py::init<>())
      .def_readwrite("memory", &OptimizerConfig::memory)
      .def_readwrite("max_iterations", &OptimizerConfig::max_iterations)
      .def_readwrite("grad_tol", &OptimizerConfig::grad_tol);

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("model", &SolverConfig::model)
      .def_readwrite("tau", &SolverConfig::tau)
      .def_readwrite("nu", &SolverConfig::nu)
      .def_readwrite("energy_tol", &SolverConfig::energy_tol)
      .def_readwrite("max_steps", &SolverConfig::max_steps)
      .def_readwrite("eulerian_steps", &SolverConfig::eulerian_steps)
      .def_readwrite("eulerian_tau", &SolverConfig::eulerian_tau)
      .def_readwrite("opt", &SolverConfig::opt);

  py::enum_<TerminalStatus>(m, "TerminalStatus")
      .value("energy_converged", TerminalStatus::energy_converged)
      .value("step_failed", TerminalStatus::step_failed)
      .value("max_steps_reached", TerminalStatus::max_steps_reached);

  py::class_<TraceRow>(m, "TraceRow")
      .def_readonly("step", &TraceRow::step)
      .def_readonly("time", &TraceRow::time)
      .def_readonly("energy", &TraceRow::energy)
      .def_readonly("dissipation", &TraceRow::dissipation)
      .def_readonly("min_detF", &TraceRow::min_detF)
      .def_readonly("max_speed", &TraceRow::max_speed);

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("tri", &RunResult::tri)
      .def_property_readonly("phi0", [](const RunResult& r) { return r.phi0.values; })
      .def_readonly("status", &RunResult::status)
      .def_readonly("steps_taken", &RunResult::steps_taken)
      .def_readonly("initial_energy", &RunResult::initial_energy)
      .def_readonly("final_energy", &RunResult::final_energy)
      .def_readonly("max_energy_law_violation", &RunResult::max_energy_law_violation)
      .def_readonly("trace", &RunResult::trace);

  m.def(
      "run",
      [](const Triangulation& tri, const PhaseSamples& phi0, const SolverConfig& cfg) {
        return run(tri, phi0, cfg);
      },
      py::arg("tri"), py::arg("phi0"), py::arg("config"));

  m.def(
      "eulerian_step",
      [](const Triangulation& tri, const FlowState& state, const Eigen::VectorXd& gamma,
         double tau, double eps2, const std::vector<bool>& dirichlet) {
        const EulerianStepResult r =
            eulerian_step(tri, state, gamma, tau, eps2, dirichlet, OptimizerConfig{});
        if (r.status == MinimizeStatus::failed)
          throw std::runtime_error("eulerian_step: minimization failed");
        return r.gamma;
      },
      py::arg("tri"), py::arg("state"), py::arg("gamma"), py::arg("tau"), py::arg("eps2"),
      py::arg("dirichlet_mask"));
  m.def("eulerian_energy", &eulerian_energy, py::arg("tri"), py::arg("state"), py::arg("gamma"),
        py::arg("eps2"));

  m.def("quasi1d_exact", &quasi1d_exact);
  m.def("linf_interface_error", &linf_interface_error, py::arg("tri"), py::arg("phi0"),
        py::arg("state"), py::arg("eps"), py::arg("y_row") = py::none());
  py::class_<RadiusStats>(m, "RadiusStats")
      .def_readonly("mean", &RadiusStats::mean)
      .def_readonly("stddev", &RadiusStats::stddev)
      .def_readonly("crossings", &RadiusStats::crossings);
  m.def("interface_radius_stats", &interface_radius_stats);
  m.def("count_phase_regions", &count_phase_regions, py::arg("tri"), py::arg("phi0"),
        py::arg("state"), py::arg("grid_n"), py::arg("threshold") = 0.0);

  py::class_<BenchmarkCase>(m, "BenchmarkCase")
      .def_readonly("name", &BenchmarkCase::name)
      .def_readonly("tri", &BenchmarkCase::tri)
      .def_property_readonly("phi0", [](const BenchmarkCase& b) { return b.phi0.values; })
      .def_readonly("config", &BenchmarkCase::config)
      .def_readwrite("out_dir", &BenchmarkCase::out_dir);

  m.def("preset_names", &preset_names);
  m.def(
      "make_preset",
      [](const std::string& name, const py::dict& overrides) {
        return make_preset(name, entries_from_dict(overrides));
      },
      py::arg("name"), py::arg("overrides") = py::dict());
  m.def("run_benchmark", &run_benchmark, py::arg("benchmark"));
}
