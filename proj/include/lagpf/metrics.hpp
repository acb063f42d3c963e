#pragma once

#include "lagpf/mesh.hpp"

#include <optional>

namespace lagpf {

// Steady planar interface profile centered at x = 0: -tanh(x / (sqrt(2) eps)).
double quasi1d_exact(double x, double eps);

// Max nodal deviation from the planar profile over nodes whose deformed x lies
// in [-3 eps, 3 eps]. When y_row is given, only nodes whose reference y equals
// it (within 1e-12) participate. Throws if the band contains no nodes.
double linf_interface_error(const Triangulation& tri, const PhaseSamples& phi0,
                            const FlowState& state, double eps,
                            std::optional<double> y_row = std::nullopt);

// Zero crossings of the nodal field along deformed mesh edges, by linear
// interpolation on edges whose endpoint values change sign strictly.
std::vector<Vec2> interface_points(const Triangulation& tri, const PhaseSamples& phi0,
                                   const FlowState& state);

// Mean crossing distance from the origin; empty when no edge changes sign.
std::optional<double> interface_radius(const Triangulation& tri, const PhaseSamples& phi0,
                                       const FlowState& state);

struct RadiusStats {
  double mean = 0;
  double stddev = 0;
  int crossings = 0;
};
std::optional<RadiusStats> interface_radius_stats(const Triangulation& tri,
                                                  const PhaseSamples& phi0,
                                                  const FlowState& state);

struct ConvergenceRow {
  double h = 0;
  double tau = 0;
  double error = 0;
  double order = 0;     // log2(previous error / error); first row has none
  bool has_order = false;
};

// Requires h halving between consecutive rows.
std::vector<ConvergenceRow> convergence_table(const std::vector<std::array<double, 3>>& runs);

// Connected components of {node : values > threshold} in the mesh adjacency
// graph. Purely combinatorial: invariant under any node motion.
int count_sign_components(const Triangulation& tri, const Eigen::VectorXd& values,
                          double threshold = 0);

// Components of the region {phi_h > threshold} of the deformed interpolant,
// rasterized on a grid_n x grid_n pixel grid over the deformed mesh's bounding
// box (4-connectivity). Structures thinner than a pixel disappear, which is
// the intended reading of interface separation at finite resolution.
int count_phase_regions(const Triangulation& tri, const PhaseSamples& phi0,
                        const FlowState& state, int grid_n, double threshold = 0);

}  // namespace lagpf
