#include "lagpf/optimize.hpp"

#include <cmath>
#include <deque>
#include <limits>

namespace lagpf {

void OptimizerConfig::validate() const {
  if (memory < 1) throw std::invalid_argument("optimizer: memory must be >= 1");
  if (max_iterations < 1) throw std::invalid_argument("optimizer: max_iterations must be >= 1");
  if (!(grad_tol > 0)) throw std::invalid_argument("optimizer: grad_tol must be positive");
  if (!(armijo_c > 0 && armijo_c < 1))
    throw std::invalid_argument("optimizer: armijo_c must lie in (0,1)");
  if (!(backtrack_factor > 0 && backtrack_factor < 1))
    throw std::invalid_argument("optimizer: backtrack factor must lie in (0,1)");
  if (max_backtracks < 1) throw std::invalid_argument("optimizer: max_backtracks must be >= 1");
}

MinimizeResult minimize(const Objective& fg, const Eigen::VectorXd& x0,
                        const OptimizerConfig& cfg) {
  cfg.validate();

  MinimizeResult res;
  res.x = x0;

  Eigen::VectorXd g(x0.size());
  double f = fg(res.x, &g);
  if (!std::isfinite(f)) {
    res.value = f;
    res.status = MinimizeStatus::failed;
    return res;
  }
  const double tol = cfg.grad_tol * std::max(1.0, std::abs(f));
  res.value = f;
  res.grad_inf_norm = g.size() ? g.cwiseAbs().maxCoeff() : 0.0;
  if (res.grad_inf_norm <= tol) {
    res.status = MinimizeStatus::converged;
    return res;
  }

  struct Pair {
    Eigen::VectorXd s, y;
    double rho;
  };
  std::deque<Pair> hist;

  Eigen::VectorXd d(x0.size()), x_try(x0.size()), g_new(x0.size());
  std::vector<double> alpha_buf;
  bool moved = false;

  for (int it = 0; it < cfg.max_iterations; ++it) {
    // two-loop recursion; initial Hessian scale from the latest pair
    d = -g;
    alpha_buf.assign(hist.size(), 0.0);
    for (int k = static_cast<int>(hist.size()) - 1; k >= 0; --k) {
      alpha_buf[k] = hist[k].rho * hist[k].s.dot(d);
      d -= alpha_buf[k] * hist[k].y;
    }
    if (!hist.empty()) {
      const Pair& last = hist.back();
      d *= last.s.dot(last.y) / last.y.dot(last.y);
    }
    for (size_t k = 0; k < hist.size(); ++k) {
      const double beta = hist[k].rho * hist[k].y.dot(d);
      d += (alpha_buf[k] - beta) * hist[k].s;
    }

    double dir_deriv = g.dot(d);
    bool raw_descent = hist.empty();
    if (!(dir_deriv < 0) || !d.allFinite()) {
      d = -g;
      dir_deriv = g.dot(d);
      raw_descent = true;
    }

    // A raw -g direction carries the gradient's scale, which can be enormous
    // near the feasibility barrier; cap the first trial displacement at 1.
    double t = raw_descent ? 1.0 / std::max(1.0, d.cwiseAbs().maxCoeff()) : 1.0;
    double f_new = std::numeric_limits<double>::infinity();
    bool accepted = false;
    for (int bt = 0; bt <= cfg.max_backtracks; ++bt) {
      x_try = res.x + t * d;
      f_new = fg(x_try, nullptr);
      if (std::isfinite(f_new) && f_new <= f + cfg.armijo_c * t * dir_deriv) {
        accepted = true;
        break;
      }
      t *= cfg.backtrack_factor;
    }
    if (!accepted) {
      res.iterations = it;
      res.status = moved ? MinimizeStatus::decrease_only : MinimizeStatus::failed;
      return res;
    }

    f_new = fg(x_try, &g_new);
    const Eigen::VectorXd s = x_try - res.x;
    const Eigen::VectorXd y = g_new - g;
    const double ys = y.dot(s);
    if (ys > 1e-12 * y.norm() * s.norm()) {
      hist.push_back({s, y, 1.0 / ys});
      if (static_cast<int>(hist.size()) > cfg.memory) hist.pop_front();
    }

    res.x.swap(x_try);
    f = f_new;
    g.swap(g_new);
    moved = true;
    res.value = f;
    res.grad_inf_norm = g.cwiseAbs().maxCoeff();
    res.iterations = it + 1;
    if (res.grad_inf_norm <= tol) {
      res.status = MinimizeStatus::converged;
      return res;
    }
  }

  res.status = MinimizeStatus::decrease_only;
  return res;
}

StepObjective::StepObjective(const EnergyAssembly& assembly, const EnergyModel& model,
                             const DissipationOperator& op, Eigen::VectorXd base_state,
                             double tau)
    : assembly_(&assembly), model_(model), op_(&op), base_(std::move(base_state)), tau_(tau) {
  if (!(tau > 0)) throw std::invalid_argument("step objective: tau must be positive");
  if (base_.size() != op_->matrix.rows())
    throw std::invalid_argument("step objective: state and operator sizes differ");
}

double StepObjective::quadratic_term(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd dx = x - base_;
  return dx.dot(op_->matrix * dx) / (2.0 * tau_);
}

double StepObjective::value(const Eigen::VectorXd& x) const {
  const double e = assembly_->energy(model_, x);
  if (!std::isfinite(e)) return e;
  return quadratic_term(x) + e;
}

Eigen::VectorXd StepObjective::gradient(const Eigen::VectorXd& x) const {
  Eigen::VectorXd g;
  assembly_->gradient(model_, x, g);
  g += (op_->matrix * (x - base_)) / tau_;
  return g;
}

double StepObjective::operator()(const Eigen::VectorXd& x, Eigen::VectorXd* grad) const {
  const double e = assembly_->energy(model_, x);
  if (!std::isfinite(e)) return e;
  const Eigen::VectorXd dx = x - base_;
  const Eigen::VectorXd ddx = op_->matrix * dx;
  if (grad) {
    assembly_->gradient(model_, x, *grad);
    *grad += ddx / tau_;
  }
  return dx.dot(ddx) / (2.0 * tau_) + e;
}

}  // namespace lagpf
