#include "lagpf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace lagpf {

double quasi1d_exact(double x, double eps) {
  if (!(eps > 0)) throw std::invalid_argument("quasi1d_exact: eps must be positive");
  return -std::tanh(x / (std::sqrt(2.0) * eps));
}

double linf_interface_error(const Triangulation& tri, const PhaseSamples& phi0,
                            const FlowState& state, double eps, std::optional<double> y_row) {
  if (!(eps > 0)) throw std::invalid_argument("linf_interface_error: eps must be positive");
  if (phi0.values.size() != tri.node_count())
    throw std::invalid_argument("linf_interface_error: phi0 size differs from node count");
  double worst = -1;
  for (int i = 0; i < tri.node_count(); ++i) {
    if (y_row && std::abs(tri.nodes[i].y() - *y_row) > 1e-12) continue;
    const Vec2 p = state.node(i);
    if (std::abs(p.x()) > 3.0 * eps) continue;
    worst = std::max(worst, std::abs(phi0.values[i] - quasi1d_exact(p.x(), eps)));
  }
  if (worst < 0)
    throw std::invalid_argument("linf_interface_error: no nodes inside the interface band");
  return worst;
}

std::vector<Vec2> interface_points(const Triangulation& tri, const PhaseSamples& phi0,
                                   const FlowState& state) {
  if (phi0.values.size() != tri.node_count())
    throw std::invalid_argument("interface_points: phi0 size differs from node count");
  std::set<std::pair<int, int>> seen;
  std::vector<Vec2> pts;
  for (const auto& el : tri.elements) {
    for (int k = 0; k < 3; ++k) {
      int a = el[k], b = el[(k + 1) % 3];
      if (a > b) std::swap(a, b);
      if (!seen.insert({a, b}).second) continue;
      const double fa = phi0.values[a], fb = phi0.values[b];
      if (!(fa * fb < 0)) continue;
      const double t = fa / (fa - fb);
      pts.push_back(state.node(a) + t * (state.node(b) - state.node(a)));
    }
  }
  return pts;
}

std::optional<double> interface_radius(const Triangulation& tri, const PhaseSamples& phi0,
                                       const FlowState& state) {
  const auto s = interface_radius_stats(tri, phi0, state);
  if (!s) return std::nullopt;
  return s->mean;
}

std::optional<RadiusStats> interface_radius_stats(const Triangulation& tri,
                                                  const PhaseSamples& phi0,
                                                  const FlowState& state) {
  const std::vector<Vec2> pts = interface_points(tri, phi0, state);
  if (pts.empty()) return std::nullopt;
  RadiusStats s;
  s.crossings = static_cast<int>(pts.size());
  for (const Vec2& p : pts) s.mean += p.norm();
  s.mean /= s.crossings;
  for (const Vec2& p : pts) {
    const double d = p.norm() - s.mean;
    s.stddev += d * d;
  }
  s.stddev = std::sqrt(s.stddev / s.crossings);
  return s;
}

std::vector<ConvergenceRow> convergence_table(const std::vector<std::array<double, 3>>& runs) {
  if (runs.size() < 2) throw std::invalid_argument("convergence_table: need at least two runs");
  std::vector<ConvergenceRow> out;
  for (size_t k = 0; k < runs.size(); ++k) {
    ConvergenceRow row;
    row.h = runs[k][0];
    row.tau = runs[k][1];
    row.error = runs[k][2];
    if (!(row.h > 0) || !(row.error > 0))
      throw std::invalid_argument("convergence_table: h and error must be positive");
    if (k > 0) {
      if (std::abs(runs[k - 1][0] / row.h - 2.0) > 1e-12)
        throw std::invalid_argument("convergence_table: h must halve between rows");
      row.order = std::log2(runs[k - 1][2] / row.error);
      row.has_order = true;
    }
    out.push_back(row);
  }
  return out;
}

int count_sign_components(const Triangulation& tri, const Eigen::VectorXd& values,
                          double threshold) {
  if (values.size() != tri.node_count())
    throw std::invalid_argument("count_sign_components: values size differs from node count");
  const int n = tri.node_count();
  std::vector<std::vector<int>> adj(n);
  for (const auto& el : tri.elements) {
    for (int k = 0; k < 3; ++k) {
      adj[el[k]].push_back(el[(k + 1) % 3]);
      adj[el[(k + 1) % 3]].push_back(el[k]);
    }
  }
  std::vector<char> mark(n, 0);
  int comps = 0;
  std::vector<int> stack;
  for (int i = 0; i < n; ++i) {
    if (mark[i] || !(values[i] > threshold)) continue;
    ++comps;
    stack.push_back(i);
    mark[i] = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w : adj[v]) {
        if (!mark[w] && values[w] > threshold) {
          mark[w] = 1;
          stack.push_back(w);
        }
      }
    }
  }
  return comps;
}

int count_phase_regions(const Triangulation& tri, const PhaseSamples& phi0,
                        const FlowState& state, int grid_n, double threshold) {
  if (grid_n < 2) throw std::invalid_argument("count_phase_regions: grid must be at least 2x2");
  if (phi0.values.size() != tri.node_count())
    throw std::invalid_argument("count_phase_regions: phi0 size differs from node count");

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (int i = 0; i < tri.node_count(); ++i) {
    const Vec2 p = state.node(i);
    xmin = std::min(xmin, p.x());
    xmax = std::max(xmax, p.x());
    ymin = std::min(ymin, p.y());
    ymax = std::max(ymax, p.y());
  }
  const double dx = (xmax - xmin) / grid_n, dy = (ymax - ymin) / grid_n;

  // Rasterize each element over the pixel centers inside its bounding box;
  // pixels outside every element keep -infinity and never join a region.
  std::vector<double> field(static_cast<size_t>(grid_n) * grid_n,
                            -std::numeric_limits<double>::infinity());
  for (const auto& el : tri.elements) {
    const Vec2 a = state.node(el[0]), b = state.node(el[1]), c = state.node(el[2]);
    const double det = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
    if (det == 0) continue;
    const double exmin = std::min({a.x(), b.x(), c.x()}), exmax = std::max({a.x(), b.x(), c.x()});
    const double eymin = std::min({a.y(), b.y(), c.y()}), eymax = std::max({a.y(), b.y(), c.y()});
    const int i0 = std::max(0, static_cast<int>(std::floor((exmin - xmin) / dx - 0.5)));
    const int i1 = std::min(grid_n - 1, static_cast<int>(std::ceil((exmax - xmin) / dx)));
    const int j0 = std::max(0, static_cast<int>(std::floor((eymin - ymin) / dy - 0.5)));
    const int j1 = std::min(grid_n - 1, static_cast<int>(std::ceil((eymax - ymin) / dy)));
    for (int j = j0; j <= j1; ++j) {
      const double py = ymin + (j + 0.5) * dy;
      for (int i = i0; i <= i1; ++i) {
        const double px = xmin + (i + 0.5) * dx;
        const double l1 = ((b.x() - px) * (c.y() - py) - (b.y() - py) * (c.x() - px)) / det;
        const double l2 = ((px - a.x()) * (c.y() - py) - (py - a.y()) * (c.x() - px)) / det;
        const double l0 = 1.0 - l1 - l2;
        const double tol = -1e-12;
        if (l0 < tol || l1 < tol || l2 < tol) continue;
        const double v = l1 * phi0.values[el[0]] + l2 * phi0.values[el[1]] +
                         (1.0 - l1 - l2) * phi0.values[el[2]];
        field[static_cast<size_t>(j) * grid_n + i] = v;
      }
    }
  }

  std::vector<char> mark(field.size(), 0);
  int comps = 0;
  std::vector<int> stack;
  auto inside = [&](int i, int j) { return i >= 0 && i < grid_n && j >= 0 && j < grid_n; };
  for (int j = 0; j < grid_n; ++j) {
    for (int i = 0; i < grid_n; ++i) {
      const int idx = j * grid_n + i;
      if (mark[idx] || !(field[idx] > threshold)) continue;
      ++comps;
      mark[idx] = 1;
      stack.push_back(idx);
      while (!stack.empty()) {
        const int cur = stack.back();
        stack.pop_back();
        const int ci = cur % grid_n, cj = cur / grid_n;
        const int ni[4] = {ci + 1, ci - 1, ci, ci};
        const int nj[4] = {cj, cj, cj + 1, cj - 1};
        for (int k = 0; k < 4; ++k) {
          if (!inside(ni[k], nj[k])) continue;
          const int nidx = nj[k] * grid_n + ni[k];
          if (!mark[nidx] && field[nidx] > threshold) {
            mark[nidx] = 1;
            stack.push_back(nidx);
          }
        }
      }
    }
  }
  return comps;
}

}  // namespace lagpf
