#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lagpf {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

// Per-coordinate constraints on flow-map nodes. fix_x pins the x coordinate
// to its reference value, fix_y the y coordinate, fix_both is Dirichlet.
enum class NodeConstraint : std::uint8_t { free_node = 0, fix_x = 1, fix_y = 2, fix_both = 3 };

inline bool x_fixed(NodeConstraint c) {
  return c == NodeConstraint::fix_x || c == NodeConstraint::fix_both;
}
inline bool y_fixed(NodeConstraint c) {
  return c == NodeConstraint::fix_y || c == NodeConstraint::fix_both;
}

struct Rect {
  double xmin = -1.0, xmax = 1.0, ymin = -1.0, ymax = 1.0;
};

struct MeshParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reference triangulation. Elements are counterclockwise node index triples;
// validate() rejects out-of-range indices and non-positive reference areas.
struct Triangulation {
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 3>> elements;
  std::vector<NodeConstraint> constraints;  // one entry per node

  int node_count() const { return static_cast<int>(nodes.size()); }
  int element_count() const { return static_cast<int>(elements.size()); }

  double signed_area(int e) const;  // of the reference element
  void validate() const;
};

// Node positions of the deformed configuration, flattened as
// (x_1..x_N, y_1..y_N) so the dissipation operator is a 2x2 block matrix.
struct FlowState {
  Eigen::VectorXd positions;

  static FlowState identity(const Triangulation& tri);

  int node_count() const { return static_cast<int>(positions.size()) / 2; }
  Vec2 node(int i) const {
    const int n = node_count();
    return Vec2(positions[i], positions[n + i]);
  }
};

// Boundary flag recipes used by the benchmark presets.
enum class BoundaryRecipe {
  none,           // free boundary
  dirichlet_all,  // fix_both on every boundary node
  quasi_1d        // fix_both on x = xmin/xmax, fix_y on the remaining y = ymin/ymax nodes
};

// Structured mesh on rect with nx*ny cells, each split along the
// lower-left-to-upper-right diagonal: nx*ny*2 ccw elements.
Triangulation build_uniform_mesh(int nx, int ny, const Rect& rect,
                                 BoundaryRecipe recipe = BoundaryRecipe::none);

// Per-element geometry of the piecewise-linear flow map at a given state.
struct ElementGeometry {
  std::array<Vec2, 3> ref_grad;  // reference hat-function gradients
  double ref_area = 0;           // positive reference area
  Mat2 F = Mat2::Identity();     // deformation tensor, constant per element
  double detF = 1;
  Vec2 phase_grad = Vec2::Zero();  // F^{-T} * (reference gradient of phi0)
};

struct PhaseSamples {
  Eigen::VectorXd values;  // nodal phi0, transported unchanged by the flow map
};

std::vector<ElementGeometry> element_geometry(const Triangulation& tri, const FlowState& state,
                                              const PhaseSamples& phi0);

// True iff det F_e > 0 on every element (orientation preserved nowhere degenerate).
bool is_admissible(const Triangulation& tri, const FlowState& state);

// Rebase the reference configuration onto the deformed one: node positions
// become the current positions, connectivity and constraints are kept, and
// nodal phi values ride along unchanged. Requires an admissible state.
Triangulation reinitialize(const Triangulation& tri, const FlowState& state);

struct MeshQuality {
  double min_detF = 0;
  double min_angle = 0;    // radians, over deformed elements
  double max_aspect = 0;   // longest edge / (2 * inradius)
};

MeshQuality mesh_quality(const Triangulation& tri, const FlowState& state);

// Text formats. Mesh:
//   $nodes N        followed by N lines "x y"
//   $elements M     followed by M lines "i j k" (0-based, ccw)
//   $constraints    optional, followed by N tokens from {F,X,Y,XY}
// Snapshot:
//   $snapshot t=<time>   followed by N lines "x y phi", then an $elements block.
// Floats are written with 17 significant digits so round-trips are exact.
Triangulation load_mesh(const std::string& path);
void save_mesh(const Triangulation& tri, const std::string& path);

void save_snapshot(const Triangulation& tri, const FlowState& state, const PhaseSamples& phi0,
                   double time, const std::string& path);

struct SnapshotData {
  double time = 0;
  Triangulation tri;       // nodes are the deformed positions
  Eigen::VectorXd values;  // nodal phi
};
SnapshotData load_snapshot(const std::string& path);

}  // namespace lagpf
