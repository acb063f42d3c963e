#include "lagpf/dissipation.hpp"

#include <vector>

namespace lagpf {

namespace {

using Triplet = Eigen::Triplet<double>;

void check_state(const Triangulation& tri, const FlowState& state) {
  if (state.positions.size() != 2 * tri.node_count())
    throw std::invalid_argument("dissipation assembly: state size differs from mesh");
  if (!is_admissible(tri, state))
    throw std::domain_error("dissipation assembly: inadmissible state");
}

}  // namespace

SparseMat assemble_mass(const Triangulation& tri, const PhaseSamples& phi0,
                        const FlowState& state) {
  check_state(tri, state);
  const int n = tri.node_count();
  const auto geo = element_geometry(tri, state, phi0);

  std::vector<Triplet> trip;
  trip.reserve(tri.element_count() * 36);
  for (int e = 0; e < tri.element_count(); ++e) {
    const auto& el = tri.elements[e];
    const ElementGeometry& g = geo[e];
    const double base = g.detF * g.ref_area / 12.0;
    const Vec2 gp = g.phase_grad;
    const double gg[2][2] = {{gp.x() * gp.x(), gp.x() * gp.y()},
                             {gp.y() * gp.x(), gp.y() * gp.y()}};
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        const double psi = base * (a == b ? 2.0 : 1.0);
        for (int alpha = 0; alpha < 2; ++alpha)
          for (int beta = 0; beta < 2; ++beta)
            trip.emplace_back(alpha * n + el[a], beta * n + el[b], gg[alpha][beta] * psi);
      }
    }
  }
  SparseMat m(2 * n, 2 * n);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

SparseMat assemble_stiffness_scalar(const Triangulation& tri, const FlowState& state) {
  PhaseSamples zero;
  zero.values = Eigen::VectorXd::Zero(tri.node_count());
  check_state(tri, state);
  const int n = tri.node_count();
  const auto geo = element_geometry(tri, state, zero);

  std::vector<Triplet> trip;
  trip.reserve(tri.element_count() * 9);
  for (int e = 0; e < tri.element_count(); ++e) {
    const auto& el = tri.elements[e];
    const ElementGeometry& g = geo[e];
    const double w = g.detF * g.ref_area;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        trip.emplace_back(el[a], el[b], w * g.ref_grad[a].dot(g.ref_grad[b]));
  }
  SparseMat k(n, n);
  k.setFromTriplets(trip.begin(), trip.end());
  return k;
}

SparseMat assemble_stiffness(const Triangulation& tri, const FlowState& state) {
  const int n = tri.node_count();
  const SparseMat k0 = assemble_stiffness_scalar(tri, state);
  std::vector<Triplet> trip;
  trip.reserve(2 * k0.nonZeros());
  for (int col = 0; col < k0.outerSize(); ++col) {
    for (SparseMat::InnerIterator it(k0, col); it; ++it) {
      trip.emplace_back(it.row(), it.col(), it.value());
      trip.emplace_back(n + it.row(), n + it.col(), it.value());
    }
  }
  SparseMat k(2 * n, 2 * n);
  k.setFromTriplets(trip.begin(), trip.end());
  return k;
}

DissipationOperator assemble_dissipation(const Triangulation& tri, const PhaseSamples& phi0,
                                         const FlowState& state, double nu, int frozen_step) {
  if (!(nu > 0)) throw std::invalid_argument("dissipation assembly: nu must be positive");
  const int n = tri.node_count();
  SparseMat d = assemble_mass(tri, phi0, state);
  d += nu * assemble_stiffness(tri, state);

  std::vector<bool> fixed(2 * n, false);
  bool any = false;
  for (int i = 0; i < n; ++i) {
    fixed[i] = x_fixed(tri.constraints[i]);
    fixed[n + i] = y_fixed(tri.constraints[i]);
    any = any || fixed[i] || fixed[n + i];
  }
  if (any) {
    // Constrained coordinates carry identity rows/columns so the operator
    // stays SPD while those velocities are pinned to zero.
    std::vector<Triplet> trip;
    trip.reserve(d.nonZeros());
    for (int col = 0; col < d.outerSize(); ++col) {
      for (SparseMat::InnerIterator it(d, col); it; ++it) {
        if (fixed[it.row()] || fixed[it.col()]) continue;
        trip.emplace_back(it.row(), it.col(), it.value());
      }
    }
    for (int c = 0; c < 2 * n; ++c)
      if (fixed[c]) trip.emplace_back(c, c, 1.0);
    d.setZero();
    d.setFromTriplets(trip.begin(), trip.end());
  }

  DissipationOperator op;
  op.matrix = std::move(d);
  op.nu = nu;
  op.frozen_step = frozen_step;
  return op;
}

}  // namespace lagpf
