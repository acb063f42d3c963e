#pragma once

#include <string>
#include <vector>

#include "lagpf/config.hpp"
#include "lagpf/mesh.hpp"
#include "lagpf/stepper.hpp"

namespace lagpf {

// A fully instantiated benchmark: mesh, initial phase field, solver settings,
// and output plumbing. Produced from a named preset plus key=value overrides.
struct BenchmarkCase {
  std::string name;
  Triangulation tri;
  PhaseSamples phi0;
  SolverConfig config;
  int snapshot_stride = 0;  // 0 = no intermediate snapshots
  std::string out_dir;
};

std::vector<std::string> preset_names();

// Throws ConfigError for unknown presets, unknown keys, or values that do
// not apply to the preset's energy model.
BenchmarkCase make_preset(const std::string& name,
                          const std::vector<ConfigEntry>& overrides = {});

}  // namespace lagpf
