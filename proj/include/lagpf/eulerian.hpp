#pragma once

#include "lagpf/optimize.hpp"

namespace lagpf {

// Energy of a nodal field gamma on the deformed configuration:
// exact gradient term plus the lumped double well, i.e. the nonlinear term is
// replaced by its piecewise-linear interpolant before integrating.
double eulerian_energy(const Triangulation& tri, const FlowState& state,
                       const Eigen::VectorXd& gamma, double eps2);

struct EulerianStepResult {
  Eigen::VectorXd gamma;
  MinimizeStatus status = MinimizeStatus::failed;
  int iterations = 0;
};

// One implicit step of the fixed-mesh gradient flow for the nodal values:
// minimize (M_L (g - g_n)).(g - g_n)/(2 tau) + E(g) with the consistent mass
// matrix of the deformed mesh. Entries with dirichlet[i] true stay fixed.
// No admissibility barrier exists in value space.
EulerianStepResult eulerian_step(const Triangulation& tri, const FlowState& state,
                                 const Eigen::VectorXd& gamma_n, double tau, double eps2,
                                 const std::vector<bool>& dirichlet,
                                 const OptimizerConfig& opt = {});

// Reinitialization with smoothing: rebase the reference mesh onto the current
// positions, then run one Eulerian step on the nodal phi values (fix_both
// nodes are treated as Dirichlet). Used to repair over/undershoots and allow
// topology changes between Lagrangian steps.
struct ReinitWithEulerian {
  Triangulation tri;
  PhaseSamples phi0;
  MinimizeStatus status = MinimizeStatus::failed;
};
ReinitWithEulerian apply_reinit_with_eulerian(const Triangulation& tri, const PhaseSamples& phi0,
                                              const FlowState& state, double tau, double eps2,
                                              const OptimizerConfig& opt = {});

}  // namespace lagpf
