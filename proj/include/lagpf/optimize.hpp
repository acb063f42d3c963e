#pragma once

#include "lagpf/dissipation.hpp"

#include <functional>

namespace lagpf {

enum class MinimizeStatus { converged, decrease_only, failed };

struct OptimizerConfig {
  int memory = 10;
  int max_iterations = 500;
  double grad_tol = 1e-8;  // scaled by max(1, |f(x0)|) before use
  double armijo_c = 1e-4;
  double backtrack_factor = 0.5;
  int max_backtracks = 60;

  void validate() const;
};

struct MinimizeResult {
  Eigen::VectorXd x;
  double value = 0;
  double grad_inf_norm = 0;
  int iterations = 0;
  MinimizeStatus status = MinimizeStatus::failed;
};

// Objective callback: returns the value at x (+infinity allowed outside the
// feasible region) and, when grad is non-null and the point is feasible,
// writes the gradient. Gradients are only requested at accepted points.
using Objective = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd*)>;

// Limited-memory BFGS with Armijo backtracking. Non-finite trial values are
// treated as line-search rejections, which realizes the admissibility barrier.
// decrease_only: budget exhausted after at least one accepted decrease.
// failed: no feasible decreasing point found at all.
MinimizeResult minimize(const Objective& fg, const Eigen::VectorXd& x0,
                        const OptimizerConfig& cfg);

// One implicit step as a minimization target:
//   J(x) = (D (x - x_n)) . (x - x_n) / (2 tau) + F_h(x)
class StepObjective {
 public:
  StepObjective(const EnergyAssembly& assembly, const EnergyModel& model,
                const DissipationOperator& op, Eigen::VectorXd base_state, double tau);

  double value(const Eigen::VectorXd& x) const;  // +infinity outside the admissible set
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  double operator()(const Eigen::VectorXd& x, Eigen::VectorXd* grad) const;

  const Eigen::VectorXd& base_state() const { return base_; }
  double quadratic_term(const Eigen::VectorXd& x) const;  // (D dx . dx) / (2 tau)

 private:
  const EnergyAssembly* assembly_;
  EnergyModel model_;
  const DissipationOperator* op_;
  Eigen::VectorXd base_;
  double tau_;
};

}  // namespace lagpf
