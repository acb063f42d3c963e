#pragma once

#include "lagpf/eulerian.hpp"

#include <functional>
#include <optional>

namespace lagpf {

struct SolverConfig {
  EnergyModel model;
  double tau = 1e-2;
  double nu = 1.0;
  // Termination threshold on |F(n+1) - F(n)|, relative to max(1, |F(0)|).
  double energy_tol = 1e-10;
  int max_steps = 100;
  std::vector<int> eulerian_steps;  // run a value smoothing after these accepted steps
  double eulerian_tau = 0;          // 0 means reuse tau
  OptimizerConfig opt;

  void validate() const;
};

struct StepReport {
  MinimizeStatus status = MinimizeStatus::failed;
  int iterations = 0;
  double energy_before = 0;
  double energy_after = 0;
  double dissipation = 0;     // (D dx . dx) / (2 tau), nonnegative
  double grad_residual = 0;   // achieved infinity norm of the step objective gradient
  double grad_tol_used = 0;
  double min_detF = 0;        // over elements, relative to the step's reference
  double max_speed = 0;       // |dx|_inf / tau
};

// One implicit step: freeze D at the current state, minimize the regularized
// objective. The input state must be admissible.
std::pair<FlowState, StepReport> lagrangian_step(const Triangulation& tri,
                                                 const PhaseSamples& phi0,
                                                 const FlowState& state_n,
                                                 const SolverConfig& config, int step_index);

struct TraceRow {
  int step = 0;
  double time = 0;
  double energy = 0;
  double dissipation = 0;
  double min_detF = 0;  // cumulative: current element area / area at t = 0
  double max_speed = 0;
};

enum class TerminalStatus { energy_converged, step_failed, max_steps_reached };

struct RunResult {
  Triangulation tri;   // reference has been rebased onto the final configuration
  PhaseSamples phi0;
  TerminalStatus status = TerminalStatus::max_steps_reached;
  int steps_taken = 0;
  double initial_energy = 0;
  double final_energy = 0;
  double max_energy_law_violation = 0;  // max over steps of dF + dissipation (0 when the law holds)
  std::vector<TraceRow> trace;
  std::vector<StepReport> reports;  // one per accepted step
};

// Called after each accepted step (post reinitialization and any smoothing).
using StepObserver =
    std::function<void(int step, double time, const Triangulation&, const PhaseSamples&)>;

RunResult run(const Triangulation& tri0, const PhaseSamples& phi0, const SolverConfig& config,
              const StepObserver& observer = {});

void write_trace_csv(const std::vector<TraceRow>& trace, const std::string& path);

}  // namespace lagpf
