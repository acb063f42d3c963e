#include "lagpf/mesh.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace lagpf {

namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

double Triangulation::signed_area(int e) const {
  const auto& el = elements[e];
  const Vec2 d1 = nodes[el[1]] - nodes[el[0]];
  const Vec2 d2 = nodes[el[2]] - nodes[el[0]];
  return 0.5 * cross2(d1, d2);
}

void Triangulation::validate() const {
  if (constraints.size() != nodes.size())
    throw std::invalid_argument("triangulation: constraints size differs from node count");
  const int n = node_count();
  for (int e = 0; e < element_count(); ++e) {
    for (int k = 0; k < 3; ++k) {
      const int id = elements[e][k];
      if (id < 0 || id >= n)
        throw std::invalid_argument("triangulation: element " + std::to_string(e) +
                                    " references node " + std::to_string(id));
    }
    if (!(signed_area(e) > 0))
      throw std::invalid_argument("triangulation: element " + std::to_string(e) +
                                  " has non-positive reference area");
  }
}

FlowState FlowState::identity(const Triangulation& tri) {
  const int n = tri.node_count();
  FlowState s;
  s.positions.resize(2 * n);
  for (int i = 0; i < n; ++i) {
    s.positions[i] = tri.nodes[i].x();
    s.positions[n + i] = tri.nodes[i].y();
  }
  return s;
}

Triangulation build_uniform_mesh(int nx, int ny, const Rect& rect, BoundaryRecipe recipe) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("build_uniform_mesh: nx and ny must be >= 1");
  if (!(rect.xmax > rect.xmin) || !(rect.ymax > rect.ymin))
    throw std::invalid_argument("build_uniform_mesh: empty domain");

  Triangulation tri;
  const int nxv = nx + 1, nyv = ny + 1;
  tri.nodes.reserve(static_cast<size_t>(nxv) * nyv);
  const double hx = (rect.xmax - rect.xmin) / nx;
  const double hy = (rect.ymax - rect.ymin) / ny;
  for (int j = 0; j < nyv; ++j) {
    const double y = (j == ny) ? rect.ymax : rect.ymin + j * hy;
    for (int i = 0; i < nxv; ++i) {
      const double x = (i == nx) ? rect.xmax : rect.xmin + i * hx;
      tri.nodes.emplace_back(x, y);
    }
  }

  tri.elements.reserve(static_cast<size_t>(nx) * ny * 2);
  auto id = [nxv](int i, int j) { return j * nxv + i; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int ll = id(i, j), lr = id(i + 1, j), ur = id(i + 1, j + 1), ul = id(i, j + 1);
      tri.elements.push_back({ll, lr, ur});
      tri.elements.push_back({ll, ur, ul});
    }
  }

  tri.constraints.assign(tri.nodes.size(), NodeConstraint::free_node);
  if (recipe != BoundaryRecipe::none) {
    for (int j = 0; j < nyv; ++j) {
      for (int i = 0; i < nxv; ++i) {
        const bool on_x = (i == 0 || i == nx);
        const bool on_y = (j == 0 || j == ny);
        if (!on_x && !on_y) continue;
        NodeConstraint c;
        if (recipe == BoundaryRecipe::dirichlet_all) {
          c = NodeConstraint::fix_both;
        } else {  // quasi_1d
          c = on_x ? NodeConstraint::fix_both : NodeConstraint::fix_y;
        }
        tri.constraints[id(i, j)] = c;
      }
    }
  }
  return tri;
}

std::vector<ElementGeometry> element_geometry(const Triangulation& tri, const FlowState& state,
                                              const PhaseSamples& phi0) {
  if (phi0.values.size() != tri.node_count())
    throw std::invalid_argument("element_geometry: phi0 size differs from node count");
  std::vector<ElementGeometry> out(tri.element_count());
  for (int e = 0; e < tri.element_count(); ++e) {
    const auto& el = tri.elements[e];
    ElementGeometry& g = out[e];
    const Vec2 X0 = tri.nodes[el[0]], X1 = tri.nodes[el[1]], X2 = tri.nodes[el[2]];
    const double two_area = cross2(X1 - X0, X2 - X0);
    g.ref_area = 0.5 * two_area;
    // hat gradient of vertex k: rotate the opposite edge by 90 degrees / (2A)
    g.ref_grad[0] = Vec2(X1.y() - X2.y(), X2.x() - X1.x()) / two_area;
    g.ref_grad[1] = Vec2(X2.y() - X0.y(), X0.x() - X2.x()) / two_area;
    g.ref_grad[2] = Vec2(X0.y() - X1.y(), X1.x() - X0.x()) / two_area;

    Mat2 ref_edges;
    ref_edges.col(0) = X1 - X0;
    ref_edges.col(1) = X2 - X0;
    const Vec2 x0 = state.node(el[0]), x1 = state.node(el[1]), x2 = state.node(el[2]);
    Mat2 cur_edges;
    cur_edges.col(0) = x1 - x0;
    cur_edges.col(1) = x2 - x0;
    g.F = cur_edges * ref_edges.inverse();
    g.detF = cross2(x1 - x0, x2 - x0) / two_area;

    const Vec2 ref_phase_grad = phi0.values[el[0]] * g.ref_grad[0] +
                                phi0.values[el[1]] * g.ref_grad[1] +
                                phi0.values[el[2]] * g.ref_grad[2];
    if (g.detF > 0) {
      Mat2 finv;
      finv << g.F(1, 1), -g.F(0, 1), -g.F(1, 0), g.F(0, 0);
      finv /= g.detF;
      g.phase_grad = finv.transpose() * ref_phase_grad;
    } else {
      g.phase_grad = Vec2(std::numeric_limits<double>::quiet_NaN(),
                          std::numeric_limits<double>::quiet_NaN());
    }
  }
  return out;
}

bool is_admissible(const Triangulation& tri, const FlowState& state) {
  if (state.positions.size() != 2 * tri.node_count())
    throw std::invalid_argument("is_admissible: state size differs from mesh");
  for (int e = 0; e < tri.element_count(); ++e) {
    const auto& el = tri.elements[e];
    const Vec2 x0 = state.node(el[0]), x1 = state.node(el[1]), x2 = state.node(el[2]);
    const double cur = cross2(x1 - x0, x2 - x0);
    if (!(cur / (2.0 * tri.signed_area(e)) > 0)) return false;
  }
  return true;
}

Triangulation reinitialize(const Triangulation& tri, const FlowState& state) {
  if (!is_admissible(tri, state))
    throw std::domain_error("reinitialize: inadmissible state");
  Triangulation out = tri;
  for (int i = 0; i < tri.node_count(); ++i) out.nodes[i] = state.node(i);
  return out;
}

MeshQuality mesh_quality(const Triangulation& tri, const FlowState& state) {
  MeshQuality q;
  q.min_detF = std::numeric_limits<double>::infinity();
  q.min_angle = std::numeric_limits<double>::infinity();
  q.max_aspect = 0;
  for (int e = 0; e < tri.element_count(); ++e) {
    const auto& el = tri.elements[e];
    const Vec2 p[3] = {state.node(el[0]), state.node(el[1]), state.node(el[2])};
    const double cur = cross2(p[1] - p[0], p[2] - p[0]);
    q.min_detF = std::min(q.min_detF, cur / (2.0 * tri.signed_area(e)));

    double edge[3];  // edge k is opposite vertex k
    edge[0] = (p[2] - p[1]).norm();
    edge[1] = (p[0] - p[2]).norm();
    edge[2] = (p[1] - p[0]).norm();
    for (int k = 0; k < 3; ++k) {
      const Vec2 a = p[(k + 1) % 3] - p[k];
      const Vec2 b = p[(k + 2) % 3] - p[k];
      const double ang = std::atan2(std::abs(cross2(a, b)), a.dot(b));
      q.min_angle = std::min(q.min_angle, ang);
    }
    const double area = 0.5 * std::abs(cur);
    const double s = 0.5 * (edge[0] + edge[1] + edge[2]);
    const double inradius = area / s;
    const double longest = std::max({edge[0], edge[1], edge[2]});
    q.max_aspect = std::max(q.max_aspect, longest / (2.0 * inradius));
  }
  return q;
}

namespace {

struct LineReader {
  std::istream& in;
  int line_no = 0;
  std::string current;

  bool next() {
    while (std::getline(in, current)) {
      ++line_no;
      const auto pos = current.find_first_not_of(" \t\r");
      if (pos == std::string::npos) continue;  // skip blank lines
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw MeshParseError("line " + std::to_string(line_no) + ": " + what);
  }
};

}  // namespace

Triangulation load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshParseError("cannot open " + path);
  LineReader r{in};

  if (!r.next()) r.fail("missing $nodes header");
  std::istringstream hdr(r.current);
  std::string tag;
  int n = 0;
  if (!(hdr >> tag >> n) || tag != "$nodes" || n <= 0) r.fail("malformed $nodes header");

  Triangulation tri;
  tri.nodes.resize(n);
  for (int i = 0; i < n; ++i) {
    if (!r.next()) r.fail("unexpected end of file in node list");
    std::istringstream ls(r.current);
    if (!(ls >> tri.nodes[i].x() >> tri.nodes[i].y())) r.fail("malformed node line");
  }

  if (!r.next()) r.fail("missing $elements header");
  std::istringstream ehdr(r.current);
  int m = 0;
  if (!(ehdr >> tag >> m) || tag != "$elements" || m <= 0) r.fail("malformed $elements header");
  tri.elements.resize(m);
  for (int e = 0; e < m; ++e) {
    if (!r.next()) r.fail("unexpected end of file in element list");
    std::istringstream ls(r.current);
    auto& el = tri.elements[e];
    if (!(ls >> el[0] >> el[1] >> el[2])) r.fail("malformed element line");
    for (int k = 0; k < 3; ++k)
      if (el[k] < 0 || el[k] >= n) r.fail("element node index out of range");
    const Vec2 d1 = tri.nodes[el[1]] - tri.nodes[el[0]];
    const Vec2 d2 = tri.nodes[el[2]] - tri.nodes[el[0]];
    if (!(cross2(d1, d2) > 0)) r.fail("non-positive reference area");
  }

  tri.constraints.assign(n, NodeConstraint::free_node);
  if (r.next()) {
    std::istringstream chdr(r.current);
    chdr >> tag;
    if (tag != "$constraints") r.fail("unexpected content after element list");
    std::string rest;
    std::getline(chdr, rest);
    std::istringstream tokens(rest);
    int got = 0;
    std::string tok;
    while (got < n) {
      if (!(tokens >> tok)) {
        if (!r.next()) r.fail("unexpected end of file in constraint list");
        tokens = std::istringstream(r.current);
        continue;
      }
      NodeConstraint c;
      if (tok == "F") c = NodeConstraint::free_node;
      else if (tok == "X") c = NodeConstraint::fix_x;
      else if (tok == "Y") c = NodeConstraint::fix_y;
      else if (tok == "XY") c = NodeConstraint::fix_both;
      else r.fail("unknown constraint token '" + tok + "'");
      tri.constraints[got++] = c;
    }
  }
  return tri;
}

void save_mesh(const Triangulation& tri, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw MeshParseError("cannot write " + path);
  out << "$nodes " << tri.node_count() << "\n";
  for (const auto& p : tri.nodes) out << fmt17(p.x()) << " " << fmt17(p.y()) << "\n";
  out << "$elements " << tri.element_count() << "\n";
  for (const auto& el : tri.elements) out << el[0] << " " << el[1] << " " << el[2] << "\n";
  out << "$constraints";
  for (const auto c : tri.constraints) {
    switch (c) {
      case NodeConstraint::free_node: out << " F"; break;
      case NodeConstraint::fix_x: out << " X"; break;
      case NodeConstraint::fix_y: out << " Y"; break;
      case NodeConstraint::fix_both: out << " XY"; break;
    }
  }
  out << "\n";
  if (!out) throw MeshParseError("write failure on " + path);
}

void save_snapshot(const Triangulation& tri, const FlowState& state, const PhaseSamples& phi0,
                   double time, const std::string& path) {
  if (phi0.values.size() != tri.node_count())
    throw std::invalid_argument("save_snapshot: phi0 size differs from node count");
  std::ofstream out(path);
  if (!out) throw MeshParseError("cannot write " + path);
  out << "$snapshot t=" << fmt17(time) << "\n";
  for (int i = 0; i < tri.node_count(); ++i) {
    const Vec2 p = state.node(i);
    out << fmt17(p.x()) << " " << fmt17(p.y()) << " " << fmt17(phi0.values[i]) << "\n";
  }
  out << "$elements " << tri.element_count() << "\n";
  for (const auto& el : tri.elements) out << el[0] << " " << el[1] << " " << el[2] << "\n";
  if (!out) throw MeshParseError("write failure on " + path);
}

SnapshotData load_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshParseError("cannot open " + path);
  LineReader r{in};
  if (!r.next()) r.fail("missing $snapshot header");
  std::istringstream hdr(r.current);
  std::string tag;
  if (!(hdr >> tag) || tag != "$snapshot") r.fail("malformed $snapshot header");
  std::string teq;
  if (!(hdr >> teq) || teq.rfind("t=", 0) != 0) r.fail("malformed $snapshot header");
  SnapshotData snap;
  try {
    snap.time = std::stod(teq.substr(2));
  } catch (const std::exception&) {
    r.fail("malformed snapshot time");
  }

  std::vector<Vec2> pts;
  std::vector<double> vals;
  int elements_line = -1;
  int m = 0;
  while (r.next()) {
    if (r.current.find("$elements") != std::string::npos) {
      std::istringstream ehdr(r.current);
      if (!(ehdr >> tag >> m) || tag != "$elements" || m <= 0) r.fail("malformed $elements header");
      elements_line = r.line_no;
      break;
    }
    std::istringstream ls(r.current);
    Vec2 p;
    double v;
    if (!(ls >> p.x() >> p.y() >> v)) r.fail("malformed snapshot row");
    pts.push_back(p);
    vals.push_back(v);
  }
  if (elements_line < 0) r.fail("missing $elements block");
  if (pts.empty()) r.fail("snapshot has no nodes");

  snap.tri.nodes = std::move(pts);
  snap.tri.elements.resize(m);
  const int n = snap.tri.node_count();
  for (int e = 0; e < m; ++e) {
    if (!r.next()) r.fail("unexpected end of file in element list");
    std::istringstream ls(r.current);
    auto& el = snap.tri.elements[e];
    if (!(ls >> el[0] >> el[1] >> el[2])) r.fail("malformed element line");
    for (int k = 0; k < 3; ++k)
      if (el[k] < 0 || el[k] >= n) r.fail("element node index out of range");
    const Vec2 d1 = snap.tri.nodes[el[1]] - snap.tri.nodes[el[0]];
    const Vec2 d2 = snap.tri.nodes[el[2]] - snap.tri.nodes[el[0]];
    if (!(cross2(d1, d2) > 0)) r.fail("non-positive reference area");
  }
  snap.tri.constraints.assign(n, NodeConstraint::free_node);
  snap.values = Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<int>(vals.size()));
  return snap;
}

}  // namespace lagpf
