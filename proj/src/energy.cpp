#include "lagpf/energy.hpp"

#include <cmath>
#include <limits>

namespace lagpf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double well(double phi, double eps2) {
  const double q = phi * phi - 1.0;
  return q * q / (4.0 * eps2);
}

}  // namespace

double density_W(double phi, const Vec2& grad_phi, double eps2) {
  if (!(eps2 > 0)) throw std::invalid_argument("density_W: eps2 must be positive");
  return 0.5 * grad_phi.squaredNorm() + well(phi, eps2);
}

EnergyModel EnergyModel::base(double eps2) {
  EnergyModel m;
  m.kind = Kind::base;
  m.eps2 = eps2;
  m.validate();
  return m;
}

EnergyModel EnergyModel::volume_constrained(double eps2, double penalty_weight,
                                            double target_volume) {
  EnergyModel m;
  m.kind = Kind::volume_constrained;
  m.eps2 = eps2;
  m.penalty_weight = penalty_weight;
  m.target_volume = target_volume;
  m.validate();
  return m;
}

EnergyModel EnergyModel::slightly_compressible(double eps2, double eta) {
  EnergyModel m;
  m.kind = Kind::slightly_compressible;
  m.eps2 = eps2;
  m.compressibility = eta;
  m.validate();
  return m;
}

void EnergyModel::validate() const {
  if (!(eps2 > 0)) throw std::invalid_argument("energy model: eps2 must be positive");
  if (penalty_weight < 0) throw std::invalid_argument("energy model: penalty weight must be >= 0");
  if (compressibility < 0)
    throw std::invalid_argument("energy model: compressibility must be >= 0");
}

EnergyAssembly::EnergyAssembly(const Triangulation& tri, const PhaseSamples& phi0) {
  tri.validate();
  if (phi0.values.size() != tri.node_count())
    throw std::invalid_argument("energy assembly: phi0 size differs from node count");
  n_ = tri.node_count();
  elems_.resize(tri.element_count());
  for (int e = 0; e < tri.element_count(); ++e) {
    const auto& el = tri.elements[e];
    ElemRef& r = elems_[e];
    r.v = el;
    const Vec2 X0 = tri.nodes[el[0]], X1 = tri.nodes[el[1]], X2 = tri.nodes[el[2]];
    const double two_area = cross2(X1 - X0, X2 - X0);
    r.area = 0.5 * two_area;
    r.grad[0] = Vec2(X1.y() - X2.y(), X2.x() - X1.x()) / two_area;
    r.grad[1] = Vec2(X2.y() - X0.y(), X0.x() - X2.x()) / two_area;
    r.grad[2] = Vec2(X0.y() - X1.y(), X1.x() - X0.x()) / two_area;
    for (int k = 0; k < 3; ++k) r.phi[k] = phi0.values[el[k]];
    r.phase_grad = r.phi[0] * r.grad[0] + r.phi[1] * r.grad[1] + r.phi[2] * r.grad[2];
    r.phi_mean = (r.phi[0] + r.phi[1] + r.phi[2]) / 3.0;
  }
  fixed_.assign(2 * n_, false);
  for (int i = 0; i < n_; ++i) {
    fixed_[i] = x_fixed(tri.constraints[i]);
    fixed_[n_ + i] = y_fixed(tri.constraints[i]);
  }
}

double EnergyAssembly::energy(const EnergyModel& model, const Eigen::VectorXd& x) const {
  model.validate();
  if (x.size() != 2 * n_) throw std::invalid_argument("energy: state size differs from mesh");

  double total = 0;
  double vol = 0;
  for (const ElemRef& r : elems_) {
    const Vec2 p0(x[r.v[0]], x[n_ + r.v[0]]);
    const Vec2 p1(x[r.v[1]], x[n_ + r.v[1]]);
    const Vec2 p2(x[r.v[2]], x[n_ + r.v[2]]);
    const Vec2 e1 = p1 - p0, e2 = p2 - p0;
    const double detF = cross2(e1, e2) / (2.0 * r.area);
    if (!(detF > 0)) return kInf;

    // g = F^{-T} G with F = [e1 e2] * [E1 E2]^{-1}; fold the reference edge
    // inverse into G once per call via the hat-gradient representation:
    // F^{-T} = (1/detF) * adj(F)^T and F = sum_a p_a grad_a^T.
    Mat2 F;
    F.setZero();
    F += p0 * r.grad[0].transpose();
    F += p1 * r.grad[1].transpose();
    F += p2 * r.grad[2].transpose();
    const Vec2 g = Vec2(F(1, 1) * r.phase_grad.x() - F(1, 0) * r.phase_grad.y(),
                        -F(0, 1) * r.phase_grad.x() + F(0, 0) * r.phase_grad.y()) /
                   detF;

    const double vbar =
        (well(r.phi[0], model.eps2) + well(r.phi[1], model.eps2) + well(r.phi[2], model.eps2)) /
        3.0;
    total += r.area * detF * (0.5 * g.squaredNorm() + vbar);

    if (model.kind == EnergyModel::Kind::volume_constrained) {
      vol += detF * r.area * r.phi_mean;
    } else if (model.kind == EnergyModel::Kind::slightly_compressible) {
      total += model.compressibility * r.area * (1.0 / detF - 2.0 + detF);
    }
  }
  if (model.kind == EnergyModel::Kind::volume_constrained) {
    const double d = vol - model.target_volume;
    total += model.penalty_weight * d * d;
  }
  return total;
}

void EnergyAssembly::gradient(const EnergyModel& model, const Eigen::VectorXd& x,
                              Eigen::VectorXd& out) const {
  model.validate();
  if (x.size() != 2 * n_) throw std::invalid_argument("gradient: state size differs from mesh");

  double vol_factor = 0;
  if (model.kind == EnergyModel::Kind::volume_constrained) {
    double vol = 0;
    for (const ElemRef& r : elems_) {
      const Vec2 p0(x[r.v[0]], x[n_ + r.v[0]]);
      const Vec2 p1(x[r.v[1]], x[n_ + r.v[1]]);
      const Vec2 p2(x[r.v[2]], x[n_ + r.v[2]]);
      const double detF = cross2(p1 - p0, p2 - p0) / (2.0 * r.area);
      if (!(detF > 0)) throw std::domain_error("gradient: inadmissible state");
      vol += detF * r.area * r.phi_mean;
    }
    vol_factor = 2.0 * model.penalty_weight * (vol - model.target_volume);
  }

  out.setZero(2 * n_);
  for (const ElemRef& r : elems_) {
    const Vec2 p0(x[r.v[0]], x[n_ + r.v[0]]);
    const Vec2 p1(x[r.v[1]], x[n_ + r.v[1]]);
    const Vec2 p2(x[r.v[2]], x[n_ + r.v[2]]);
    const double detF = cross2(p1 - p0, p2 - p0) / (2.0 * r.area);
    if (!(detF > 0)) throw std::domain_error("gradient: inadmissible state");

    Mat2 F;
    F.setZero();
    F += p0 * r.grad[0].transpose();
    F += p1 * r.grad[1].transpose();
    F += p2 * r.grad[2].transpose();
    Mat2 finvT;  // F^{-T} = adj(F)^T / detF
    finvT << F(1, 1), -F(1, 0), -F(0, 1), F(0, 0);
    finvT /= detF;
    const Vec2 g = finvT * r.phase_grad;

    const double vbar =
        (well(r.phi[0], model.eps2) + well(r.phi[1], model.eps2) + well(r.phi[2], model.eps2)) /
        3.0;
    const double wbar = 0.5 * g.squaredNorm() + vbar;

    // dE_e/dF = area * detF * (wbar I - g g^T) F^{-T}; contribution to node a
    // is that matrix applied to the reference hat gradient.
    Mat2 P = Mat2::Identity() * wbar - g * g.transpose();
    double iso = 0;  // coefficient of area * detF * F^{-T} grad_a from volume-like terms
    if (model.kind == EnergyModel::Kind::volume_constrained) {
      iso = vol_factor * r.phi_mean;
    } else if (model.kind == EnergyModel::Kind::slightly_compressible) {
      iso = model.compressibility * (1.0 - 1.0 / (detF * detF));
    }
    P += Mat2::Identity() * iso;
    P = (r.area * detF) * (P * finvT);

    for (int a = 0; a < 3; ++a) {
      const Vec2 f = P * r.grad[a];
      out[r.v[a]] += f.x();
      out[n_ + r.v[a]] += f.y();
    }
  }

  for (int c = 0; c < 2 * n_; ++c)
    if (fixed_[c]) out[c] = 0;
}

double EnergyAssembly::volume(const Eigen::VectorXd& x) const {
  if (x.size() != 2 * n_) throw std::invalid_argument("volume: state size differs from mesh");
  double vol = 0;
  for (const ElemRef& r : elems_) {
    const Vec2 p0(x[r.v[0]], x[n_ + r.v[0]]);
    const Vec2 p1(x[r.v[1]], x[n_ + r.v[1]]);
    const Vec2 p2(x[r.v[2]], x[n_ + r.v[2]]);
    vol += 0.5 * cross2(p1 - p0, p2 - p0) * r.phi_mean;
  }
  return vol;
}

bool EnergyAssembly::admissible(const Eigen::VectorXd& x) const {
  if (x.size() != 2 * n_) throw std::invalid_argument("admissible: state size differs from mesh");
  for (const ElemRef& r : elems_) {
    const Vec2 p0(x[r.v[0]], x[n_ + r.v[0]]);
    const Vec2 p1(x[r.v[1]], x[n_ + r.v[1]]);
    const Vec2 p2(x[r.v[2]], x[n_ + r.v[2]]);
    if (!(cross2(p1 - p0, p2 - p0) / (2.0 * r.area) > 0)) return false;
  }
  return true;
}

double EnergyAssembly::min_detF(const Eigen::VectorXd& x) const {
  double m = kInf;
  for (const ElemRef& r : elems_) {
    const Vec2 p0(x[r.v[0]], x[n_ + r.v[0]]);
    const Vec2 p1(x[r.v[1]], x[n_ + r.v[1]]);
    const Vec2 p2(x[r.v[2]], x[n_ + r.v[2]]);
    m = std::min(m, cross2(p1 - p0, p2 - p0) / (2.0 * r.area));
  }
  return m;
}

double discrete_energy(const EnergyModel& model, const Triangulation& tri,
                       const PhaseSamples& phi0, const FlowState& state) {
  return EnergyAssembly(tri, phi0).energy(model, state.positions);
}

Eigen::VectorXd discrete_energy_gradient(const EnergyModel& model, const Triangulation& tri,
                                         const PhaseSamples& phi0, const FlowState& state) {
  Eigen::VectorXd g;
  EnergyAssembly(tri, phi0).gradient(model, state.positions, g);
  return g;
}

double volume(const Triangulation& tri, const PhaseSamples& phi0, const FlowState& state) {
  return EnergyAssembly(tri, phi0).volume(state.positions);
}

}  // namespace lagpf
