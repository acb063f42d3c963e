#include "lagpf/eulerian.hpp"

#include <cmath>

namespace lagpf {

namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// P1 structure of the deformed configuration.
struct CurrentMesh {
  SparseMat mass;       // consistent psi_i psi_j
  SparseMat stiffness;  // grad psi_i . grad psi_j
  Eigen::VectorXd lump; // int psi_i, i.e. sum of adjacent areas / 3

  CurrentMesh(const Triangulation& tri, const FlowState& state) {
    if (state.positions.size() != 2 * tri.node_count())
      throw std::invalid_argument("eulerian: state size differs from mesh");
    const int n = tri.node_count();
    std::vector<Eigen::Triplet<double>> mt, kt;
    mt.reserve(tri.element_count() * 9);
    kt.reserve(tri.element_count() * 9);
    lump = Eigen::VectorXd::Zero(n);
    for (int e = 0; e < tri.element_count(); ++e) {
      const auto& el = tri.elements[e];
      const Vec2 p0 = state.node(el[0]), p1 = state.node(el[1]), p2 = state.node(el[2]);
      const double two_area = cross2(p1 - p0, p2 - p0);
      if (!(two_area > 0)) throw std::domain_error("eulerian: inadmissible current mesh");
      const double area = 0.5 * two_area;
      const Vec2 grad[3] = {Vec2(p1.y() - p2.y(), p2.x() - p1.x()) / two_area,
                            Vec2(p2.y() - p0.y(), p0.x() - p2.x()) / two_area,
                            Vec2(p0.y() - p1.y(), p1.x() - p0.x()) / two_area};
      for (int a = 0; a < 3; ++a) {
        lump[el[a]] += area / 3.0;
        for (int b = 0; b < 3; ++b) {
          mt.emplace_back(el[a], el[b], area / 12.0 * (a == b ? 2.0 : 1.0));
          kt.emplace_back(el[a], el[b], area * grad[a].dot(grad[b]));
        }
      }
    }
    mass.resize(n, n);
    mass.setFromTriplets(mt.begin(), mt.end());
    stiffness.resize(n, n);
    stiffness.setFromTriplets(kt.begin(), kt.end());
  }
};

double field_energy(const CurrentMesh& cm, const Eigen::VectorXd& gamma, double eps2) {
  double e = 0.5 * gamma.dot(cm.stiffness * gamma);
  for (int i = 0; i < gamma.size(); ++i) {
    const double q = gamma[i] * gamma[i] - 1.0;
    e += cm.lump[i] * q * q / (4.0 * eps2);
  }
  return e;
}

}  // namespace

double eulerian_energy(const Triangulation& tri, const FlowState& state,
                       const Eigen::VectorXd& gamma, double eps2) {
  if (!(eps2 > 0)) throw std::invalid_argument("eulerian_energy: eps2 must be positive");
  if (gamma.size() != tri.node_count())
    throw std::invalid_argument("eulerian_energy: field size differs from mesh");
  return field_energy(CurrentMesh(tri, state), gamma, eps2);
}

EulerianStepResult eulerian_step(const Triangulation& tri, const FlowState& state,
                                 const Eigen::VectorXd& gamma_n, double tau, double eps2,
                                 const std::vector<bool>& dirichlet, const OptimizerConfig& opt) {
  if (!(tau > 0)) throw std::invalid_argument("eulerian_step: tau must be positive");
  if (!(eps2 > 0)) throw std::invalid_argument("eulerian_step: eps2 must be positive");
  if (gamma_n.size() != tri.node_count())
    throw std::invalid_argument("eulerian_step: field size differs from mesh");
  if (dirichlet.size() != static_cast<size_t>(tri.node_count()))
    throw std::invalid_argument("eulerian_step: mask size differs from mesh");

  const CurrentMesh cm(tri, state);

  auto fg = [&](const Eigen::VectorXd& g, Eigen::VectorXd* grad) -> double {
    const Eigen::VectorXd dg = g - gamma_n;
    const Eigen::VectorXd mdg = cm.mass * dg;
    if (grad) {
      *grad = mdg / tau + cm.stiffness * g;
      for (int i = 0; i < g.size(); ++i) {
        (*grad)[i] += cm.lump[i] * g[i] * (g[i] * g[i] - 1.0) / eps2;
        if (dirichlet[i]) (*grad)[i] = 0;
      }
    }
    return dg.dot(mdg) / (2.0 * tau) + field_energy(cm, g, eps2);
  };

  const MinimizeResult r = minimize(fg, gamma_n, opt);
  EulerianStepResult out;
  out.gamma = r.x;
  out.status = r.status;
  out.iterations = r.iterations;
  return out;
}

ReinitWithEulerian apply_reinit_with_eulerian(const Triangulation& tri, const PhaseSamples& phi0,
                                              const FlowState& state, double tau, double eps2,
                                              const OptimizerConfig& opt) {
  ReinitWithEulerian out;
  out.tri = reinitialize(tri, state);
  std::vector<bool> dirichlet(tri.node_count());
  for (int i = 0; i < tri.node_count(); ++i)
    dirichlet[i] = tri.constraints[i] == NodeConstraint::fix_both;
  const FlowState id = FlowState::identity(out.tri);
  const EulerianStepResult step = eulerian_step(out.tri, id, phi0.values, tau, eps2, dirichlet, opt);
  out.phi0.values = step.gamma;
  out.status = step.status;
  return out;
}

}  // namespace lagpf
