#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "lagpf/mesh.hpp"
#include "testutil.hpp"

using namespace lagpf;

namespace {

std::filesystem::path temp_file(const char* stem) {
  static int counter = 0;
  return std::filesystem::temp_directory_path() /
         (std::string("lagpf_mesh_") + stem + "_" + std::to_string(counter++) + ".txt");
}

int find_node(const Triangulation& tri, double x, double y) {
  for (int i = 0; i < tri.node_count(); ++i)
    if (std::abs(tri.nodes[i].x() - x) < 1e-14 && std::abs(tri.nodes[i].y() - y) < 1e-14)
      return i;
  return -1;
}

}  // namespace

TEST_SUITE("mesh") {

TEST_CASE("uniform mesh counts, coordinates, orientation") {
  const Rect rect{-1, 1, -0.5, 0.5};
  const Triangulation tri = build_uniform_mesh(4, 3, rect);
  CHECK(tri.node_count() == 5 * 4);
  CHECK(tri.element_count() == 2 * 4 * 3);
  CHECK_NOTHROW(tri.validate());

  for (int e = 0; e < tri.element_count(); ++e) CHECK(tri.signed_area(e) > 0);

  double total = 0;
  for (int e = 0; e < tri.element_count(); ++e) total += tri.signed_area(e);
  CHECK(total == doctest::Approx(2.0 * 1.0).epsilon(1e-14));

  // All four corners are mesh nodes; every node lies on the grid lattice.
  CHECK(find_node(tri, -1, -0.5) >= 0);
  CHECK(find_node(tri, 1, 0.5) >= 0);
  const double hx = 0.5, hy = 1.0 / 3.0;
  for (const auto& p : tri.nodes) {
    const double ix = (p.x() - rect.xmin) / hx;
    const double iy = (p.y() - rect.ymin) / hy;
    CHECK(std::abs(ix - std::lround(ix)) < 1e-12);
    CHECK(std::abs(iy - std::lround(iy)) < 1e-12);
  }

  // Default recipe leaves every node free.
  for (auto c : tri.constraints) CHECK(c == NodeConstraint::free_node);
}

TEST_CASE("boundary recipes assign the documented flags") {
  const Rect rect{-1, 1, -1, 1};
  const int nx = 5, ny = 4;

  const Triangulation all = build_uniform_mesh(nx, ny, rect, BoundaryRecipe::dirichlet_all);
  int fixed = 0;
  for (int i = 0; i < all.node_count(); ++i) {
    const auto& p = all.nodes[i];
    const bool boundary = std::abs(std::abs(p.x()) - 1) < 1e-14 ||
                          std::abs(std::abs(p.y()) - 1) < 1e-14;
    CHECK(all.constraints[i] == (boundary ? NodeConstraint::fix_both : NodeConstraint::free_node));
    fixed += boundary;
  }
  CHECK(fixed == 2 * (nx + 1) + 2 * (ny + 1) - 4);

  const Triangulation q1 = build_uniform_mesh(nx, ny, rect, BoundaryRecipe::quasi_1d);
  for (int i = 0; i < q1.node_count(); ++i) {
    const auto& p = q1.nodes[i];
    const bool side = std::abs(std::abs(p.x()) - 1) < 1e-14;
    const bool lid = std::abs(std::abs(p.y()) - 1) < 1e-14;
    if (side)
      CHECK(q1.constraints[i] == NodeConstraint::fix_both);
    else if (lid)
      CHECK(q1.constraints[i] == NodeConstraint::fix_y);
    else
      CHECK(q1.constraints[i] == NodeConstraint::free_node);
  }
}

TEST_CASE("element geometry at identity") {
  const Triangulation tri = build_uniform_mesh(3, 2, Rect{0, 3, 0, 1});
  PhaseSamples phi;
  phi.values.resize(tri.node_count());
  for (int i = 0; i < tri.node_count(); ++i) phi.values[i] = tri.nodes[i].x();

  const auto geo = element_geometry(tri, FlowState::identity(tri), phi);
  REQUIRE(static_cast<int>(geo.size()) == tri.element_count());
  double total = 0;
  for (const auto& g : geo) {
    CHECK(g.detF == doctest::Approx(1.0).epsilon(1e-14));
    CHECK((g.F - Mat2::Identity()).norm() < 1e-14);
    CHECK(g.ref_area == doctest::Approx(0.5 * 1.0 * 0.5).epsilon(1e-14));
    CHECK(g.phase_grad.x() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(g.phase_grad.y()) < 1e-12);
    // Hat gradients: partition of unity differentiates to zero.
    CHECK((g.ref_grad[0] + g.ref_grad[1] + g.ref_grad[2]).norm() < 1e-13);
    total += g.ref_area;
  }
  CHECK(total == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("element geometry under an affine map") {
  std::mt19937 rng(91);
  const Triangulation tri = testutil::random_mesh(rng, 3, false);
  const PhaseSamples phi = testutil::random_phase(rng, tri);

  Mat2 A;
  A << 1.2, 0.3, -0.1, 0.9;  // det = 1.11
  const Vec2 b(0.4, -0.7);
  FlowState mapped;
  mapped.positions.resize(2 * tri.node_count());
  for (int i = 0; i < tri.node_count(); ++i) {
    const Vec2 y = A * tri.nodes[i] + b;
    mapped.positions[i] = y.x();
    mapped.positions[tri.node_count() + i] = y.y();
  }

  const auto ref = element_geometry(tri, FlowState::identity(tri), phi);
  const auto geo = element_geometry(tri, mapped, phi);
  const Mat2 AinvT = A.inverse().transpose();
  for (std::size_t e = 0; e < geo.size(); ++e) {
    CHECK((geo[e].F - A).norm() < 1e-12);
    CHECK(geo[e].detF == doctest::Approx(A.determinant()).epsilon(1e-12));
    // phase_grad = F^{-T} grad_X phi; the identity geometry hands us grad_X phi.
    const Vec2 expected = AinvT * ref[e].phase_grad;
    CHECK((geo[e].phase_grad - expected).norm() < 1e-10);
  }
}

TEST_CASE("admissibility and mesh quality") {
  const Triangulation tri = build_uniform_mesh(4, 4, Rect{-1, 1, -1, 1});
  const FlowState id = FlowState::identity(tri);
  CHECK(is_admissible(tri, id));

  const MeshQuality q = mesh_quality(tri, id);
  CHECK(q.min_detF == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(q.min_angle > 0.6);  // right isoceles: 45 degrees = 0.785
  CHECK(q.min_angle < 0.8);
  CHECK(q.max_aspect >= 1.0);

  // Drag one interior node across the mesh: at least one element flips.
  FlowState bad = id;
  const int i = find_node(tri, -0.5, -0.5);
  REQUIRE(i >= 0);
  bad.positions[i] += 1.3;
  CHECK(!is_admissible(tri, bad));
  CHECK(mesh_quality(tri, bad).min_detF < 0);
}

TEST_CASE("reinitialize rebases the reference configuration") {
  std::mt19937 rng(7);
  const Triangulation tri = testutil::random_mesh(rng);
  const FlowState state = testutil::random_admissible_state(rng, tri);

  const Triangulation next = reinitialize(tri, state);
  REQUIRE(next.node_count() == tri.node_count());
  CHECK(next.elements == tri.elements);
  CHECK(next.constraints == tri.constraints);
  for (int i = 0; i < next.node_count(); ++i)
    CHECK((next.nodes[i] - state.node(i)).norm() < 1e-15);
  CHECK_NOTHROW(next.validate());
  // Rebasing an admissible state keeps positive orientation.
  for (int e = 0; e < next.element_count(); ++e) CHECK(next.signed_area(e) > 0);
}

TEST_CASE("mesh file round trip is exact") {
  std::mt19937 rng(23);
  const Triangulation tri = testutil::random_mesh(rng, 4, true);
  const auto path = temp_file("roundtrip");
  save_mesh(tri, path.string());

  const Triangulation back = load_mesh(path.string());
  REQUIRE(back.node_count() == tri.node_count());
  REQUIRE(back.element_count() == tri.element_count());
  for (int i = 0; i < tri.node_count(); ++i) {
    CHECK(back.nodes[i].x() == tri.nodes[i].x());  // 17 digits: bitwise round trip
    CHECK(back.nodes[i].y() == tri.nodes[i].y());
  }
  CHECK(back.elements == tri.elements);
  CHECK(back.constraints == tri.constraints);
  std::filesystem::remove(path);
}

TEST_CASE("mesh parse failures carry MeshParseError") {
  CHECK_THROWS_AS(load_mesh("/nonexistent/really/not/here.txt"), MeshParseError);

  auto write_and_try = [](const char* stem, const std::string& body) {
    const auto path = temp_file(stem);
    std::ofstream(path) << body;
    CHECK_THROWS_AS(load_mesh(path.string()), MeshParseError);
    std::filesystem::remove(path);
  };
  write_and_try("garbage", "not a mesh at all\n");
  write_and_try("truncated", "$nodes 3\n0 0\n1 0\n");  // one coordinate line short
  write_and_try("badelem", "$nodes 3\n0 0\n1 0\n0 1\n$elements 1\n0 1 7\n");
  write_and_try("flipped", "$nodes 3\n0 0\n1 0\n0 1\n$elements 1\n0 2 1\n");  // cw orientation
}

TEST_CASE("snapshot round trip") {
  std::mt19937 rng(41);
  const Triangulation tri = testutil::random_mesh(rng);
  const PhaseSamples phi = testutil::random_phase(rng, tri);
  const FlowState state = testutil::random_admissible_state(rng, tri);

  const auto path = temp_file("snap");
  save_snapshot(tri, state, phi, 0.375, path.string());
  const SnapshotData snap = load_snapshot(path.string());

  CHECK(snap.time == 0.375);
  REQUIRE(snap.tri.node_count() == tri.node_count());
  for (int i = 0; i < tri.node_count(); ++i) {
    CHECK((snap.tri.nodes[i] - state.node(i)).norm() == 0.0);
    CHECK(snap.values[i] == phi.values[i]);
  }
  CHECK(snap.tri.elements == tri.elements);
  std::filesystem::remove(path);
}

TEST_CASE("validate rejects broken triangulations") {
  Triangulation tri = build_uniform_mesh(2, 2, Rect{0, 1, 0, 1});

  Triangulation dup = tri;
  dup.elements[0] = {0, 1, 1};
  CHECK_THROWS(dup.validate());

  Triangulation range = tri;
  range.elements[0] = {0, 1, 99};
  CHECK_THROWS(range.validate());

  Triangulation flipped = tri;
  std::swap(flipped.elements[0][1], flipped.elements[0][2]);
  CHECK_THROWS(flipped.validate());

  Triangulation counts = tri;
  counts.constraints.pop_back();
  CHECK_THROWS(counts.validate());
}

}  // TEST_SUITE
