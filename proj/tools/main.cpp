#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lagpf/runner.hpp"

namespace {

// Exit codes: 0 success, 2 configuration, 3 step failure, 4 I/O.
constexpr int kExitConfig = 2;
constexpr int kExitStepFailure = 3;
constexpr int kExitIo = 4;

void print_summary(const lagpf::BenchmarkCase& bc, const lagpf::RunResult& res) {
  const char* status = res.status == lagpf::TerminalStatus::energy_converged
                           ? "energy_converged"
                           : (res.status == lagpf::TerminalStatus::step_failed
                                  ? "step_failed"
                                  : "max_steps_reached");
  std::printf("preset          %s\n", bc.name.c_str());
  std::printf("nodes/elements  %d / %d\n", bc.tri.node_count(), bc.tri.element_count());
  std::printf("status          %s\n", status);
  std::printf("steps           %d\n", res.steps_taken);
  std::printf("energy          %.17g -> %.17g\n", res.initial_energy, res.final_energy);
  if (!res.trace.empty())
    std::printf("min detF ratio  %.17g\n", res.trace.back().min_detF);
  std::printf("artifacts       %s\n", bc.out_dir.c_str());
}

int do_benchmark(const std::string& preset, const std::vector<lagpf::ConfigEntry>& overrides) {
  const lagpf::BenchmarkCase bc = lagpf::make_preset(preset, overrides);
  const lagpf::RunResult res = lagpf::run_benchmark(bc);
  print_summary(bc, res);
  return res.status == lagpf::TerminalStatus::step_failed ? kExitStepFailure : 0;
}

int do_run(const std::string& config_path) {
  auto entries = lagpf::parse_config_file(config_path);
  std::string preset;
  for (const auto& e : entries)
    if (e.key == "preset") preset = e.value;
  if (preset.empty())
    throw lagpf::ConfigError(config_path + ": missing required key 'preset'");
  return do_benchmark(preset, entries);
}

int do_converge(const std::string& config_path) {
  lagpf::ConvergenceStudy study;
  for (const auto& e : lagpf::parse_config_file(config_path)) {
    if (e.key == "eps2") study.eps2 = lagpf::entry_as_double(e);
    else if (e.key == "h_list") study.h_list = lagpf::entry_as_double_list(e);
    else if (e.key == "tau_list") study.tau_list = lagpf::entry_as_double_list(e);
    else if (e.key == "nu") study.nu = lagpf::entry_as_double(e);
    else if (e.key == "final_time") study.final_time = lagpf::entry_as_double(e);
    else if (e.key == "out_dir") study.out_dir = e.value;
    else lagpf::config_fail(e, "unknown key");
  }
  const auto rows = lagpf::run_convergence(study);
  std::printf("%-10s %-12s %-24s %s\n", "h", "tau", "error", "order");
  for (const auto& r : rows) {
    if (r.has_order)
      std::printf("%-10g %-12g %-24.17g %.4f\n", r.h, r.tau, r.error, r.order);
    else
      std::printf("%-10g %-12g %-24.17g -\n", r.h, r.tau, r.error);
  }
  std::printf("artifacts       %s\n", study.out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variational Lagrangian phase-field solver"};
  app.require_subcommand(1);

  std::string run_config;
  auto* cmd_run = app.add_subcommand("run", "Execute a run described by a key=value config file");
  cmd_run->add_option("config", run_config, "config file (must set 'preset')")->required();

  std::string preset;
  std::vector<std::string> override_tokens;
  auto* cmd_bench = app.add_subcommand("bench", "Run a named benchmark preset");
  cmd_bench->add_option("preset", preset, "one of: quasi1d, circle, volume_single, volume_four, "
                                          "compressible, failcase")->required();
  cmd_bench->add_option("overrides", override_tokens, "key=value overrides");

  std::string conv_config;
  auto* cmd_conv = app.add_subcommand("converge", "Strip refinement study from a config file");
  cmd_conv->add_option("config", conv_config, "config file (eps2, h_list, tau_list, ...)")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (cmd_run->parsed()) return do_run(run_config);
    if (cmd_bench->parsed()) return do_benchmark(preset, lagpf::parse_overrides(override_tokens));
    return do_converge(conv_config);
  } catch (const lagpf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const lagpf::MeshParseError& e) {
    std::cerr << "mesh error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
}
