#pragma once

#include "lagpf/energy.hpp"

#include <Eigen/SparseCore>

namespace lagpf {

using SparseMat = Eigen::SparseMatrix<double>;

// 2N x 2N phase-velocity mass form: block (alpha,beta) entry (i,j) is
// sum_e g_alpha g_beta detF_e int(psi_i psi_j) with g the deformed phi gradient.
// The local scalar mass is area/12 * [[2,1,1],[1,2,1],[1,1,2]].
SparseMat assemble_mass(const Triangulation& tri, const PhaseSamples& phi0,
                        const FlowState& state);

// N x N deformed-weighted stiffness: sum_e detF_e |tau_e| grad psi_i . grad psi_j
// (reference gradients). Row sums vanish.
SparseMat assemble_stiffness_scalar(const Triangulation& tri, const FlowState& state);

// diag(K0, K0) as a 2N x 2N operator acting on (x-block, y-block) velocities.
SparseMat assemble_stiffness(const Triangulation& tri, const FlowState& state);

struct DissipationOperator {
  SparseMat matrix;  // M + nu K with constrained rows/columns replaced by identity
  double nu = 0;
  int frozen_step = 0;  // step index whose state this operator was assembled at
};

DissipationOperator assemble_dissipation(const Triangulation& tri, const PhaseSamples& phi0,
                                         const FlowState& state, double nu, int frozen_step);

}  // namespace lagpf
