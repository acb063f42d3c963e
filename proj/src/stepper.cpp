#include "lagpf/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace lagpf {

void SolverConfig::validate() const {
  model.validate();
  if (!(tau > 0)) throw std::invalid_argument("solver config: tau must be positive");
  if (!(nu > 0)) throw std::invalid_argument("solver config: nu must be positive");
  if (!(energy_tol > 0)) throw std::invalid_argument("solver config: energy_tol must be positive");
  if (max_steps < 1) throw std::invalid_argument("solver config: max_steps must be >= 1");
  if (eulerian_tau < 0) throw std::invalid_argument("solver config: eulerian_tau must be >= 0");
  for (int s : eulerian_steps)
    if (s < 1) throw std::invalid_argument("solver config: eulerian step indices start at 1");
  opt.validate();
}

namespace {

std::pair<FlowState, StepReport> step_impl(const EnergyAssembly& assembly,
                                           const Triangulation& tri, const PhaseSamples& phi0,
                                           const FlowState& state_n, const SolverConfig& config,
                                           int step_index) {
  if (!assembly.admissible(state_n.positions))
    throw std::domain_error("lagrangian_step: inadmissible input state");

  const DissipationOperator op =
      assemble_dissipation(tri, phi0, state_n, config.nu, step_index);
  const StepObjective obj(assembly, config.model, op, state_n.positions, config.tau);

  auto fg = [&obj](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
    return obj(x, grad);
  };
  const MinimizeResult r = minimize(fg, state_n.positions, config.opt);

  StepReport rep;
  rep.status = r.status;
  rep.iterations = r.iterations;
  rep.energy_before = assembly.energy(config.model, state_n.positions);
  rep.grad_residual = r.grad_inf_norm;
  rep.grad_tol_used = config.opt.grad_tol * std::max(1.0, std::abs(rep.energy_before));

  FlowState out;
  out.positions = r.x;
  if (r.status != MinimizeStatus::failed) {
    rep.energy_after = assembly.energy(config.model, r.x);
    rep.dissipation = obj.quadratic_term(r.x);
    rep.min_detF = assembly.min_detF(r.x);
    rep.max_speed = (r.x - state_n.positions).cwiseAbs().maxCoeff() / config.tau;
  } else {
    out.positions = state_n.positions;
    rep.energy_after = rep.energy_before;
  }
  return {std::move(out), rep};
}

}  // namespace

std::pair<FlowState, StepReport> lagrangian_step(const Triangulation& tri,
                                                 const PhaseSamples& phi0,
                                                 const FlowState& state_n,
                                                 const SolverConfig& config, int step_index) {
  config.validate();
  const EnergyAssembly assembly(tri, phi0);
  return step_impl(assembly, tri, phi0, state_n, config, step_index);
}

RunResult run(const Triangulation& tri0, const PhaseSamples& phi0, const SolverConfig& config,
              const StepObserver& observer) {
  config.validate();

  RunResult res;
  res.tri = tri0;
  res.phi0 = phi0;

  // Cumulative mesh quality is tracked against the t = 0 reference; the
  // per-step reference is rebased after every accepted step.
  std::vector<double> area0(tri0.element_count());
  for (int e = 0; e < tri0.element_count(); ++e) area0[e] = tri0.signed_area(e);

  std::vector<bool> dirichlet(tri0.node_count());
  for (int i = 0; i < tri0.node_count(); ++i)
    dirichlet[i] = tri0.constraints[i] == NodeConstraint::fix_both;

  double prev_energy;
  {
    const EnergyAssembly a0(res.tri, res.phi0);
    prev_energy = a0.energy(config.model, FlowState::identity(res.tri).positions);
  }
  res.initial_energy = prev_energy;
  res.final_energy = prev_energy;
  if (!std::isfinite(prev_energy))
    throw std::domain_error("run: initial state is inadmissible");
  const double tol_abs = config.energy_tol * std::max(1.0, std::abs(prev_energy));

  for (int step = 1; step <= config.max_steps; ++step) {
    const EnergyAssembly assembly(res.tri, res.phi0);
    const FlowState base = FlowState::identity(res.tri);
    auto [state, rep] = step_impl(assembly, res.tri, res.phi0, base, config, step);

    if (rep.status == MinimizeStatus::failed) {
      res.status = TerminalStatus::step_failed;
      return res;
    }
    res.steps_taken = step;

    const double violation = rep.energy_after - prev_energy + rep.dissipation;
    res.max_energy_law_violation = std::max(res.max_energy_law_violation, violation);

    res.tri = reinitialize(res.tri, state);
    double energy_now = rep.energy_after;

    const bool smooth = std::find(config.eulerian_steps.begin(), config.eulerian_steps.end(),
                                  step) != config.eulerian_steps.end();
    if (smooth) {
      const double etau = config.eulerian_tau > 0 ? config.eulerian_tau : config.tau;
      const FlowState id = FlowState::identity(res.tri);
      const EulerianStepResult er =
          eulerian_step(res.tri, id, res.phi0.values, etau, config.model.eps2, dirichlet,
                        config.opt);
      if (er.status == MinimizeStatus::failed) {
        res.status = TerminalStatus::step_failed;
        return res;
      }
      res.phi0.values = er.gamma;
      energy_now = EnergyAssembly(res.tri, res.phi0)
                       .energy(config.model, FlowState::identity(res.tri).positions);
    }

    TraceRow row;
    row.step = step;
    row.time = step * config.tau;
    row.energy = energy_now;
    row.dissipation = rep.dissipation;
    row.max_speed = rep.max_speed;
    double min_ratio = std::numeric_limits<double>::infinity();
    for (int e = 0; e < res.tri.element_count(); ++e)
      min_ratio = std::min(min_ratio, res.tri.signed_area(e) / area0[e]);
    row.min_detF = min_ratio;
    res.trace.push_back(row);
    res.reports.push_back(rep);
    res.final_energy = energy_now;

    if (observer) observer(step, row.time, res.tri, res.phi0);

    if (std::abs(energy_now - prev_energy) <= tol_abs) {
      res.status = TerminalStatus::energy_converged;
      return res;
    }
    prev_energy = energy_now;
  }
  res.status = TerminalStatus::max_steps_reached;
  return res;
}

void write_trace_csv(const std::vector<TraceRow>& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "step,time,energy,dissipation,min_detF,max_speed\n";
  char buf[256];
  for (const TraceRow& r : trace) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.step, r.time,
                  r.energy, r.dissipation, r.min_detF, r.max_speed);
    out << buf;
  }
  if (!out) throw std::runtime_error("write failure on " + path);
}

}  // namespace lagpf
