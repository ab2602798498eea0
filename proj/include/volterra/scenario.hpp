#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>

#include "volterra/integrator.hpp"
#include "volterra/model.hpp"
#include "volterra/stability.hpp"

namespace volterra {

/// Flat key-value scenario document. Unset optionals fall back to defaults
/// at run time (epsilon: sup||F'|| on the grid for integral-equation
/// problems, 1.0 otherwise).
struct Scenario {
  std::string problem = "fig1";  // fig1 | fig2 | registry key
  int set = 1;                   // fig1 parameter set
  double alpha = 1.33;           // fig2 coupling
  double t_end = 20.0;
  double dt = 0.025;
  NormKind norm = NormKind::Max;
  std::optional<double> epsilon;
  std::optional<double> delta1;
  std::optional<double> delta2;
  std::optional<int> sweep_count;
  double max_total_margin = 0.0;
  std::string out_trajectory;
  std::string out_indicator;
  std::string out_sweep;
};

class ScenarioParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parse a scenario document. Lines are `key = value`; blank lines and
/// lines starting with # are skipped. Unknown keys, malformed values and
/// constraint violations raise ScenarioParseError naming the key and line.
Scenario parse_scenario(const std::string& text);

/// Custom problems are registered programmatically and referenced from the
/// scenario's `problem` key; the config format itself cannot express kernels.
using ProblemRegistry = std::map<std::string, std::variant<IEProblem, IDEProblem>>;

struct SweepResult {
  std::vector<Trajectory> trajectories;
  std::vector<Vector> starts;
  std::vector<double> sup_ratio;    // sup_t ||X(t)|| / ||X(0)||
  std::vector<double> final_ratio;  // ||X(T)|| / ||X(0)||
  std::size_t min_index = 0;        // extremes of the final deviation
  std::size_t max_index = 0;
  bool any_overflow = false;
};

/// Integrate from count points of the unit sphere: (cos, sin) angles for
/// n = 2; for larger n the +-unit coordinate vectors followed by seeded
/// random directions. Start points are processed in index order, so the
/// result is reproducible run to run.
SweepResult sweep_unit_circle(const IDEProblem& p, const GridSpec& grid, int count,
                              NormKind kind);

enum class RunMode { Solve, Indicate, Certify, Sweep };

struct RunOutput {
  Trajectory trajectory;
  std::optional<IndicatorTrace> indicator;
  std::optional<StabilityReport> report;
  std::optional<SweepResult> sweep;
  std::string summary;
  int exit_code = 0;  // 0 ok/certified, 1 not certified, 2 runtime failure
};

RunOutput run_scenario(const Scenario& s, RunMode mode,
                       const ProblemRegistry* registry = nullptr);

/// CSV emission; headers are stable: `t,x1..xn,norm`,
/// `t,lognorm,memory,forcing,total` and
/// `index,x0_1..x0_n,sup_ratio,final_ratio,overflow`.
/// Numbers carry 15 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_indicator_csv(std::ostream& os, const IndicatorTrace& trace);
void write_sweep_csv(std::ostream& os, const SweepResult& sweep);

/// Write whichever outputs the scenario names and the run produced.
void write_outputs(const RunOutput& out, const Scenario& s);

/// Built-in reproduction presets: fig1a (set 1, epsilon 0.1), fig1c (set 2,
/// epsilon 0.4) and fig2 (alpha 1.33, 64-point sweep). Files are written
/// under out_dir with the preset name as prefix. Returns the process exit
/// code per the 0/1/2 contract.
int run_reproduce_preset(const std::string& preset, const std::string& out_dir,
                         std::optional<double> alpha_override, std::ostream& log);

}  // namespace volterra
