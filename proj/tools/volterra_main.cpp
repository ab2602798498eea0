#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "volterra/scenario.hpp"

namespace {

struct CommonOpts {
  std::string scenario_path;
  std::string out_trajectory;
  std::string out_indicator;
  std::string out_sweep;
  std::string norm;
  double dt = 0.0;
  double t_end = 0.0;
  double epsilon = 0.0;
  int sweep_count = 0;
};

void add_common_options(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--scenario", opts.scenario_path, "scenario file (key = value lines)");
  cmd->add_option("--out-trajectory", opts.out_trajectory, "trajectory CSV path");
  cmd->add_option("--out-indicator", opts.out_indicator, "indicator CSV path");
  cmd->add_option("--out-sweep", opts.out_sweep, "sweep summary CSV path");
  cmd->add_option("--norm", opts.norm, "vector norm: l1, max or l2 (Euclidean)")
      ->check(CLI::IsMember({"l1", "max", "l2"}));
  cmd->add_option("--dt", opts.dt, "time step")->check(CLI::PositiveNumber);
  cmd->add_option("--t-end", opts.t_end, "integration horizon")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--epsilon", opts.epsilon, "perturbation budget for the indicator")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--sweep-count", opts.sweep_count, "number of unit-circle start points")
      ->check(CLI::PositiveNumber);
}

// Flags override scenario-file values.
volterra::Scenario resolve_scenario(const CommonOpts& opts) {
  volterra::Scenario s;
  if (!opts.scenario_path.empty()) {
    std::ifstream in(opts.scenario_path);
    if (!in) throw std::runtime_error("cannot read scenario file '" + opts.scenario_path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    s = volterra::parse_scenario(text.str());
  }
  if (!opts.norm.empty()) s.norm = volterra::norm_kind_from_string(opts.norm);
  if (opts.dt > 0.0) s.dt = opts.dt;
  if (opts.t_end > 0.0) s.t_end = opts.t_end;
  if (opts.epsilon > 0.0) s.epsilon = opts.epsilon;
  if (opts.sweep_count > 0) s.sweep_count = opts.sweep_count;
  if (!opts.out_trajectory.empty()) s.out_trajectory = opts.out_trajectory;
  if (!opts.out_indicator.empty()) s.out_indicator = opts.out_indicator;
  if (!opts.out_sweep.empty()) s.out_sweep = opts.out_sweep;
  return s;
}

int run_mode(const CommonOpts& opts, volterra::RunMode mode) {
  const volterra::Scenario s = resolve_scenario(opts);
  const volterra::RunOutput out = volterra::run_scenario(s, mode);
  volterra::write_outputs(out, s);
  std::cout << out.summary;
  return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Solver and stability certifier for systems of linear Volterra integral "
      "and integro-differential equations"};
  app.require_subcommand(1);

  CommonOpts solve_opts, indicate_opts, certify_opts, sweep_opts;
  auto* solve = app.add_subcommand("solve", "integrate and emit the trajectory");
  add_common_options(solve, solve_opts);
  auto* indicate = app.add_subcommand("indicate", "evaluate the stability indicator");
  add_common_options(indicate, indicate_opts);
  auto* certify =
      app.add_subcommand("certify", "trajectory + indicator + stability verdict");
  add_common_options(certify, certify_opts);
  auto* sweep = app.add_subcommand("sweep", "unit-circle trajectory study");
  add_common_options(sweep, sweep_opts);

  std::string preset;
  std::string out_dir = ".";
  double alpha = 0.0;
  auto* reproduce = app.add_subcommand("reproduce", "run a built-in preset");
  reproduce->add_option("preset", preset, "fig1a, fig1c or fig2")->required();
  reproduce->add_option("--out-dir", out_dir, "directory for the emitted CSV files");
  reproduce->add_option("--alpha", alpha, "override the fig2 coupling strength");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Keep the documented exit contract: --help is 0, any usage error is 2.
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (solve->parsed()) return run_mode(solve_opts, volterra::RunMode::Solve);
    if (indicate->parsed()) return run_mode(indicate_opts, volterra::RunMode::Indicate);
    if (certify->parsed()) return run_mode(certify_opts, volterra::RunMode::Certify);
    if (sweep->parsed()) return run_mode(sweep_opts, volterra::RunMode::Sweep);
    if (reproduce->parsed()) {
      std::optional<double> alpha_override;
      if (alpha > 0.0) alpha_override = alpha;
      return volterra::run_reproduce_preset(preset, out_dir, alpha_override, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
