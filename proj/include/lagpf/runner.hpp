#pragma once

#include <string>
#include <vector>

#include "lagpf/metrics.hpp"
#include "lagpf/presets.hpp"

namespace lagpf {

// Runs a benchmark and writes trace.csv, metrics.csv and snapshots into
// bc.out_dir (created if missing).
RunResult run_benchmark(const BenchmarkCase& bc);

struct ConvergenceStudy {
  double eps2 = 1e-3;
  std::vector<double> h_list{0.2, 0.1, 0.05};
  std::vector<double> tau_list{1.0 / 100, 1.0 / 400, 1.0 / 1600};
  double nu = 0.05;
  double final_time = 0.2;
  std::string out_dir = "out/converge";
};

// Strip refinement study: uniform meshes on [-1,1] x [-0.1,0.1] with cell
// size h, runs to final_time, errors on the y = -0.1 node row. Writes
// convergence.csv when out_dir is nonempty.
std::vector<ConvergenceRow> run_convergence(const ConvergenceStudy& study);

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, const std::string& path);

}  // namespace lagpf
