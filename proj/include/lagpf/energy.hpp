#pragma once

#include "lagpf/mesh.hpp"

namespace lagpf {

// W(phi, grad) = |grad|^2/2 + (phi^2 - 1)^2 / (4 eps2)
double density_W(double phi, const Vec2& grad_phi, double eps2);

struct EnergyModel {
  enum class Kind { base, volume_constrained, slightly_compressible };

  Kind kind = Kind::base;
  double eps2 = 1e-4;
  double penalty_weight = 0;  // W_b, volume_constrained only
  double target_volume = 0;   // A, volume_constrained only
  double compressibility = 0; // eta, slightly_compressible only

  static EnergyModel base(double eps2);
  static EnergyModel volume_constrained(double eps2, double penalty_weight, double target_volume);
  static EnergyModel slightly_compressible(double eps2, double eta);

  void validate() const;  // eps2 > 0, weights >= 0
};

// Reference-side data frozen under a fixed (tri, phi0); evaluating energies
// along an optimizer trajectory only touches the deformed positions.
class EnergyAssembly {
 public:
  EnergyAssembly(const Triangulation& tri, const PhaseSamples& phi0);

  int node_count() const { return n_; }
  int element_count() const { return static_cast<int>(elems_.size()); }

  // +infinity outside the admissible set (any det F_e <= 0); never throws on
  // inadmissible input so line searches can probe freely.
  double energy(const EnergyModel& model, const Eigen::VectorXd& x) const;

  // Requires an admissible state. Constrained coordinates are zeroed.
  void gradient(const EnergyModel& model, const Eigen::VectorXd& x, Eigen::VectorXd& out) const;

  double volume(const Eigen::VectorXd& x) const;  // lumped integral of phi over the deformed mesh
  bool admissible(const Eigen::VectorXd& x) const;
  double min_detF(const Eigen::VectorXd& x) const;

 private:
  struct ElemRef {
    std::array<int, 3> v;
    std::array<Vec2, 3> grad;  // reference hat gradients
    double area;               // positive reference area
    Vec2 phase_grad;           // reference gradient of phi0
    std::array<double, 3> phi;
    double phi_mean;
  };

  int n_ = 0;
  std::vector<ElemRef> elems_;
  std::vector<bool> fixed_;  // 2N coordinate mask
};

// Convenience wrappers over a one-shot assembly.
double discrete_energy(const EnergyModel& model, const Triangulation& tri,
                       const PhaseSamples& phi0, const FlowState& state);
Eigen::VectorXd discrete_energy_gradient(const EnergyModel& model, const Triangulation& tri,
                                         const PhaseSamples& phi0, const FlowState& state);
double volume(const Triangulation& tri, const PhaseSamples& phi0, const FlowState& state);

}  // namespace lagpf
