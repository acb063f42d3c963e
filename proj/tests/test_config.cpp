#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "lagpf/presets.hpp"

using namespace lagpf;

namespace {

std::filesystem::path write_temp(const char* stem, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() /
                    (std::string("lagpf_cfg_") + stem + ".cfg");
  std::ofstream(path) << body;
  return path;
}

ConfigEntry ov(const std::string& key, const std::string& value) { return {key, value, 0}; }

}  // namespace

TEST_SUITE("config") {

TEST_CASE("config file parsing: comments, blanks, whitespace, line numbers") {
  const auto path = write_temp("parse",
                               "# header comment\n"
                               "preset=circle\n"
                               "\n"
                               "  tau = 5e-3   # trailing comment\n"
                               "out_dir=/tmp/some where\n");
  const auto entries = parse_config_file(path.string());
  REQUIRE(entries.size() == 3);
  CHECK(entries[0].key == "preset");
  CHECK(entries[0].value == "circle");
  CHECK(entries[0].line == 2);
  CHECK(entries[1].key == "tau");
  CHECK(entries[1].value == "5e-3");
  CHECK(entries[1].line == 4);
  CHECK(entries[2].value == "/tmp/some where");  // inner spaces survive
  std::filesystem::remove(path);

  CHECK_THROWS_AS(parse_config_file("/no/such/file.cfg"), ConfigError);

  const auto bad = write_temp("noeq", "preset circle\n");
  CHECK_THROWS_AS(parse_config_file(bad.string()), ConfigError);
  std::filesystem::remove(bad);

  const auto nokey = write_temp("nokey", "=5\n");
  CHECK_THROWS_AS(parse_config_file(nokey.string()), ConfigError);
  std::filesystem::remove(nokey);
}

TEST_CASE("override token parsing") {
  const auto entries = parse_overrides({"tau=1e-3", "max_steps=7"});
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].key == "tau");
  CHECK(entries[0].line == 0);
  CHECK(entries[1].value == "7");
  CHECK_THROWS_AS(parse_overrides({"justakey"}), ConfigError);
}

TEST_CASE("typed readers") {
  CHECK(entry_as_double(ov("a", "2.5e-3")) == 2.5e-3);
  CHECK(entry_as_int(ov("a", "-12")) == -12);
  CHECK(entry_as_int_list(ov("a", "5, 10,15")) == std::vector<int>{5, 10, 15});
  CHECK(entry_as_double_list(ov("a", "0.2,0.1")) == std::vector<double>{0.2, 0.1});

  CHECK_THROWS_AS(entry_as_double(ov("a", "fast")), ConfigError);
  CHECK_THROWS_AS(entry_as_double(ov("a", "1.5x")), ConfigError);
  CHECK_THROWS_AS(entry_as_int(ov("a", "1.5")), ConfigError);
  CHECK_THROWS_AS(entry_as_int_list(ov("a", "")), ConfigError);

  // Failures carry the key and, for file entries, the line.
  try {
    entry_as_double({"tau", "soon", 17});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("tau") != std::string::npos);
    CHECK(msg.find("17") != std::string::npos);
  }
}

TEST_CASE("preset catalogue") {
  const auto names = preset_names();
  REQUIRE(names.size() == 6);
  for (const char* expected :
       {"quasi1d", "circle", "volume_single", "volume_four", "compressible", "failcase"})
    CHECK(std::find(names.begin(), names.end(), expected) != names.end());
  CHECK_THROWS_AS(make_preset("warpdrive"), ConfigError);
}

TEST_CASE("quasi1d preset pins the planar relaxation setup") {
  const BenchmarkCase bc = make_preset("quasi1d");
  CHECK(bc.tri.node_count() == 21 * 11);
  CHECK(bc.tri.element_count() == 400);
  CHECK(bc.config.model.kind == EnergyModel::Kind::base);
  CHECK(bc.config.model.eps2 == 1e-4);
  CHECK(bc.config.nu == 0.05);
  CHECK(bc.config.tau == 1e-2);
  CHECK(bc.config.max_steps == 20);
  // Initial data is the smeared planar front, odd in x.
  for (int i = 0; i < bc.tri.node_count(); ++i)
    CHECK(bc.phi0.values[i] ==
          doctest::Approx(-std::tanh(5.0 * bc.tri.nodes[i].x())).epsilon(1e-15));
  // Side columns pinned, lids y-pinned.
  bool saw_fix_y = false;
  for (int i = 0; i < bc.tri.node_count(); ++i) {
    if (std::abs(std::abs(bc.tri.nodes[i].x()) - 1) < 1e-14)
      CHECK(bc.tri.constraints[i] == NodeConstraint::fix_both);
    saw_fix_y = saw_fix_y || bc.tri.constraints[i] == NodeConstraint::fix_y;
  }
  CHECK(saw_fix_y);
}

TEST_CASE("circle and failure presets") {
  const BenchmarkCase c = make_preset("circle");
  CHECK(c.tri.element_count() == 1600);
  CHECK(c.config.model.eps2 == 1e-3);
  CHECK(c.config.nu == 1.0);
  CHECK(c.config.max_steps == 200);
  // Zero level set of the initial data sits at radius 1/2.
  int inside = 0;
  for (int i = 0; i < c.tri.node_count(); ++i) {
    const double r = c.tri.nodes[i].norm();
    if (r < 0.45) { CHECK(c.phi0.values[i] < 0); ++inside; }
    if (r > 0.55) CHECK(c.phi0.values[i] > 0);
  }
  CHECK(inside > 0);

  const BenchmarkCase f = make_preset("failcase");
  CHECK(f.config.model.eps2 == 1e-3);
  CHECK(f.config.nu == 10.0);
  // The data overshoots the wells: max value 1.5 at the center.
  CHECK(f.phi0.values.maxCoeff() > 1.4);
  CHECK(f.phi0.values.maxCoeff() <= 1.5);
  CHECK(f.phi0.values.minCoeff() >= -1.0 - 1e-15);
}

TEST_CASE("volume and compressible presets") {
  const BenchmarkCase v = make_preset("volume_single");
  CHECK(v.config.model.kind == EnergyModel::Kind::volume_constrained);
  CHECK(v.config.model.penalty_weight == 1000.0);
  CHECK(v.config.model.target_volume == -3.0);
  CHECK(v.config.nu == 10.0);

  const BenchmarkCase v4 = make_preset("volume_four");
  CHECK(v4.config.max_steps == 50);
  // Four bumps: positive at the lattice nodes nearest each bubble center,
  // negative at the corners.
  const auto at = [&](double x, double y) {
    for (int i = 0; i < v4.tri.node_count(); ++i)
      if ((v4.tri.nodes[i] - Vec2(x, y)).norm() < 1e-9) return v4.phi0.values[i];
    FAIL("node not found");
    return 0.0;
  };
  CHECK(at(0.4375, 0.04) > 0.5);
  CHECK(at(-0.4375, 0.04) > 0.5);
  CHECK(at(0.0, 0.44) > 0.5);
  CHECK(at(0.0, -0.44) > 0.5);
  CHECK(at(-1.0, -1.0) < -0.5);

  const BenchmarkCase comp = make_preset("compressible");
  CHECK(comp.config.model.kind == EnergyModel::Kind::slightly_compressible);
  CHECK(comp.config.model.compressibility == 5000.0);
  // Free boundary: nothing pinned anywhere.
  for (auto c : comp.tri.constraints) CHECK(c == NodeConstraint::free_node);
}

TEST_CASE("preset overrides") {
  const BenchmarkCase bc = make_preset(
      "circle", {ov("max_steps", "3"), ov("tau", "2e-2"), ov("nu", "0.1"),
                 ov("eps2", "1e-2"), ov("nx", "8"), ov("ny", "7"), ov("out_dir", "elsewhere"),
                 ov("eulerian_steps", "2,4"), ov("grad_tol", "1e-6")});
  CHECK(bc.config.max_steps == 3);
  CHECK(bc.config.tau == 2e-2);
  CHECK(bc.config.nu == 0.1);
  CHECK(bc.config.model.eps2 == 1e-2);
  CHECK(bc.tri.element_count() == 2 * 8 * 7);
  CHECK(bc.out_dir == "elsewhere");
  CHECK(bc.config.eulerian_steps == std::vector<int>{2, 4});
  CHECK(bc.config.opt.grad_tol == 1e-6);

  CHECK_THROWS_AS(make_preset("circle", {ov("volume", "2")}), ConfigError);
  CHECK_THROWS_AS(make_preset("circle", {ov("eta", "5")}), ConfigError);       // wrong model
  CHECK_THROWS_AS(make_preset("quasi1d", {ov("wb", "10")}), ConfigError);      // wrong model
  CHECK_THROWS_AS(make_preset("circle", {ov("eps2", "-1")}), ConfigError);
  CHECK_THROWS_AS(make_preset("circle", {ov("max_steps", "zero")}), ConfigError);
  CHECK_THROWS_AS(make_preset("circle", {ov("tau", "0")}), std::invalid_argument);
}

TEST_CASE("volume overrides reach the model") {
  const BenchmarkCase bc = make_preset(
      "volume_single", {ov("wb", "250"), ov("target_volume", "-2.5")});
  CHECK(bc.config.model.penalty_weight == 250.0);
  CHECK(bc.config.model.target_volume == -2.5);

  const BenchmarkCase comp = make_preset("compressible", {ov("eta", "100")});
  CHECK(comp.config.model.compressibility == 100.0);
}

}  // TEST_SUITE
