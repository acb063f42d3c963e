#include "lagpf/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace lagpf {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

std::string snap_name(const std::string& dir, int step) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "snap_%06d.txt", step);
  return dir + "/" + buf;
}

const char* status_name(TerminalStatus s) {
  switch (s) {
    case TerminalStatus::energy_converged: return "energy_converged";
    case TerminalStatus::step_failed: return "step_failed";
    default: return "max_steps_reached";
  }
}

}  // namespace

RunResult run_benchmark(const BenchmarkCase& bc) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(bc.out_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + bc.out_dir);

  const bool circle_family = bc.name == "circle";
  const bool volume_family = bc.config.model.kind == EnergyModel::Kind::volume_constrained;
  const double eps = std::sqrt(bc.config.model.eps2);

  struct Row { int step; double time, value; };
  std::vector<Row> radius_rows, volume_rows;

  if (circle_family) {
    const auto r0 = interface_radius(bc.tri, bc.phi0, FlowState::identity(bc.tri));
    if (r0) radius_rows.push_back({0, 0.0, *r0});
  }
  if (volume_family) {
    const EnergyAssembly a0(bc.tri, bc.phi0);
    volume_rows.push_back({0, 0.0, a0.volume(FlowState::identity(bc.tri).positions)});
  }
  if (bc.snapshot_stride > 0)
    save_snapshot(bc.tri, FlowState::identity(bc.tri), bc.phi0, 0.0, snap_name(bc.out_dir, 0));

  const StepObserver observer = [&](int step, double time, const Triangulation& tri_now,
                                    const PhaseSamples& phi_now) {
    const FlowState id = FlowState::identity(tri_now);
    if (circle_family) {
      const auto r = interface_radius(tri_now, phi_now, id);
      if (r) radius_rows.push_back({step, time, *r});
    }
    if (volume_family) {
      const EnergyAssembly a(tri_now, phi_now);
      volume_rows.push_back({step, time, a.volume(id.positions)});
    }
    if (bc.snapshot_stride > 0 && step % bc.snapshot_stride == 0)
      save_snapshot(tri_now, id, phi_now, time, snap_name(bc.out_dir, step));
  };

  const RunResult res = run(bc.tri, bc.phi0, bc.config, observer);

  write_trace_csv(res.trace, bc.out_dir + "/trace.csv");

  const double final_time = res.steps_taken * bc.config.tau;
  save_snapshot(res.tri, FlowState::identity(res.tri), res.phi0, final_time,
                bc.out_dir + "/snap_final.txt");

  if (circle_family) {
    auto out = open_out(bc.out_dir + "/radius.csv");
    out << "step,time,radius,reference\n";
    for (const Row& r : radius_rows) {
      const double ref = std::sqrt(std::max(0.0, 0.25 - 2.0 * r.time));
      out << r.step << "," << fmt17(r.time) << "," << fmt17(r.value) << "," << fmt17(ref)
          << "\n";
    }
  }
  if (volume_family) {
    auto out = open_out(bc.out_dir + "/volume.csv");
    out << "step,time,volume\n";
    for (const Row& r : volume_rows)
      out << r.step << "," << fmt17(r.time) << "," << fmt17(r.value) << "\n";
  }

  auto out = open_out(bc.out_dir + "/metrics.csv");
  out << "name,value\n";
  out << "status," << status_name(res.status) << "\n";
  out << "steps," << res.steps_taken << "\n";
  out << "initial_energy," << fmt17(res.initial_energy) << "\n";
  out << "final_energy," << fmt17(res.final_energy) << "\n";
  out << "max_energy_law_violation," << fmt17(res.max_energy_law_violation) << "\n";
  out << "min_detF_ratio," << fmt17(res.trace.empty() ? 1.0 : res.trace.back().min_detF) << "\n";

  const FlowState id = FlowState::identity(res.tri);
  if (bc.name == "quasi1d")
    out << "linf_interface_error," << fmt17(linf_interface_error(res.tri, res.phi0, id, eps))
        << "\n";
  if (circle_family && !radius_rows.empty())
    out << "radius_final," << fmt17(radius_rows.back().value) << "\n";
  if (volume_family) {
    out << "volume_final," << fmt17(volume_rows.back().value) << "\n";
    if (const auto stats = interface_radius_stats(res.tri, res.phi0, id)) {
      out << "radius_mean," << fmt17(stats->mean) << "\n";
      out << "radius_std," << fmt17(stats->stddev) << "\n";
    }
    out << "phase_regions," << count_phase_regions(res.tri, res.phi0, id, 128) << "\n";
  }
  if (!res.trace.empty() && res.trace.size() >= 2) {
    // Displacement decay diagnostic (stationarity): last vs first step.
    out << "speed_ratio,"
        << fmt17(res.trace.back().max_speed / std::max(res.trace.front().max_speed, 1e-300))
        << "\n";
  }
  if (!out) throw std::runtime_error("write failure on " + bc.out_dir + "/metrics.csv");
  return res;
}

std::vector<ConvergenceRow> run_convergence(const ConvergenceStudy& study) {
  if (study.h_list.size() != study.tau_list.size() || study.h_list.empty())
    throw std::invalid_argument("convergence study: h and tau lists must match and be nonempty");
  if (!(study.eps2 > 0)) throw std::invalid_argument("convergence study: eps2 must be > 0");

  const Rect strip{-1.0, 1.0, -0.1, 0.1};
  const double eps = std::sqrt(study.eps2);

  std::vector<std::array<double, 3>> raw;
  for (std::size_t k = 0; k < study.h_list.size(); ++k) {
    const double h = study.h_list[k];
    const double tau = study.tau_list[k];
    const int nx = static_cast<int>(std::lround((strip.xmax - strip.xmin) / h));
    const int ny = std::max(1, static_cast<int>(std::lround((strip.ymax - strip.ymin) / h)));

    Triangulation tri = build_uniform_mesh(nx, ny, strip, BoundaryRecipe::quasi_1d);
    PhaseSamples phi0;
    phi0.values.resize(tri.node_count());
    for (int i = 0; i < tri.node_count(); ++i)
      phi0.values[i] = -std::tanh(5.0 * tri.nodes[i].x());

    SolverConfig cfg;
    cfg.model = EnergyModel::base(study.eps2);
    cfg.tau = tau;
    cfg.nu = study.nu;
    cfg.energy_tol = 1e-15;
    cfg.max_steps = static_cast<int>(std::lround(study.final_time / tau));

    const RunResult res = run(tri, phi0, cfg);
    if (res.status == TerminalStatus::step_failed)
      throw std::runtime_error("convergence study: step failure at h = " + fmt17(h));
    const double err =
        linf_interface_error(res.tri, res.phi0, FlowState::identity(res.tri), eps, -0.1);
    raw.push_back({h, tau, err});
  }

  std::vector<ConvergenceRow> rows = convergence_table(raw);
  if (!study.out_dir.empty()) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(study.out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + study.out_dir);
    write_convergence_csv(rows, study.out_dir + "/convergence.csv");
  }
  return rows;
}

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, const std::string& path) {
  auto out = open_out(path);
  out << "h,tau,error,order\n";
  for (const ConvergenceRow& r : rows) {
    out << fmt17(r.h) << "," << fmt17(r.tau) << "," << fmt17(r.error) << ",";
    if (r.has_order) out << fmt17(r.order);
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failure on " + path);
}

}  // namespace lagpf
