#include "volterra/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

namespace volterra {

namespace {

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 15);
  return std::string(buf, res.ptr);
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void parse_fail(const std::string& key, int line, const std::string& what) {
  std::ostringstream os;
  os << "scenario parse error: key '" << key << "' at line " << line << ": " << what;
  throw ScenarioParseError(os.str());
}

double parse_double(const std::string& key, int line, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) parse_fail(key, line, "trailing characters in '" + value + "'");
    return v;
  } catch (const ScenarioParseError&) {
    throw;
  } catch (const std::exception&) {
    parse_fail(key, line, "not a number: '" + value + "'");
  }
}

int parse_int(const std::string& key, int line, const std::string& value) {
  try {
    std::size_t used = 0;
    const long v = std::stol(value, &used);
    if (used != value.size()) parse_fail(key, line, "trailing characters in '" + value + "'");
    return static_cast<int>(v);
  } catch (const ScenarioParseError&) {
    throw;
  } catch (const std::exception&) {
    parse_fail(key, line, "not an integer: '" + value + "'");
  }
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  Scenario s;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string stripped = trim(raw);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) parse_fail(stripped, line, "expected key = value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (value.empty()) parse_fail(key, line, "empty value");

    if (key == "problem") {
      s.problem = value;
    } else if (key == "set") {
      s.set = parse_int(key, line, value);
      if (s.set != 1 && s.set != 2) parse_fail(key, line, "set must be 1 or 2");
    } else if (key == "alpha") {
      s.alpha = parse_double(key, line, value);
      if (!(s.alpha > 0.0)) parse_fail(key, line, "alpha must be > 0");
    } else if (key == "t_end") {
      s.t_end = parse_double(key, line, value);
      if (!(s.t_end > 0.0)) parse_fail(key, line, "t_end must be > 0");
    } else if (key == "dt") {
      s.dt = parse_double(key, line, value);
      if (!(s.dt > 0.0)) parse_fail(key, line, "dt must be > 0");
    } else if (key == "norm") {
      try {
        s.norm = norm_kind_from_string(value);
      } catch (const std::exception& e) {
        parse_fail(key, line, e.what());
      }
    } else if (key == "epsilon") {
      const double v = parse_double(key, line, value);
      if (!(v > 0.0)) parse_fail(key, line, "epsilon must be > 0");
      s.epsilon = v;
    } else if (key == "delta1") {
      const double v = parse_double(key, line, value);
      if (!(v > 0.0)) parse_fail(key, line, "delta1 must be > 0");
      s.delta1 = v;
    } else if (key == "delta2") {
      const double v = parse_double(key, line, value);
      if (!(v > 0.0)) parse_fail(key, line, "delta2 must be > 0");
      s.delta2 = v;
    } else if (key == "sweep_count") {
      const int v = parse_int(key, line, value);
      if (v < 1) parse_fail(key, line, "sweep_count must be >= 1");
      s.sweep_count = v;
    } else if (key == "max_total_margin") {
      const double v = parse_double(key, line, value);
      if (v < 0.0) parse_fail(key, line, "max_total_margin must be >= 0");
      s.max_total_margin = v;
    } else if (key == "out_trajectory") {
      s.out_trajectory = value;
    } else if (key == "out_indicator") {
      s.out_indicator = value;
    } else if (key == "out_sweep") {
      s.out_sweep = value;
    } else {
      parse_fail(key, line, "unknown key");
    }
  }
  return s;
}

namespace {

// Deterministic uniform double in [0, 1) from two 32-bit draws.
double uniform01(std::mt19937& rng) {
  const std::uint64_t hi = rng();
  const std::uint64_t lo = rng();
  return static_cast<double>(((hi << 32) | lo) >> 11) * 0x1.0p-53;
}

std::vector<Vector> sweep_start_points(std::size_t n, int count) {
  std::vector<Vector> starts;
  starts.reserve(static_cast<std::size_t>(count));
  if (n == 2) {
    for (int m = 0; m < count; ++m) {
      const double theta = 2.0 * M_PI * static_cast<double>(m) / static_cast<double>(count);
      starts.push_back({std::cos(theta), std::sin(theta)});
    }
    return starts;
  }
  for (std::size_t i = 0; i < n && starts.size() < static_cast<std::size_t>(count); ++i) {
    Vector e(n, 0.0);
    e[i] = 1.0;
    starts.push_back(e);
    if (starts.size() < static_cast<std::size_t>(count)) {
      e[i] = -1.0;
      starts.push_back(e);
    }
  }
  std::mt19937 rng(42);
  while (starts.size() < static_cast<std::size_t>(count)) {
    Vector v(n);
    double norm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      // Box-Muller; the standard library's normal_distribution is not
      // bit-reproducible across implementations.
      const double u1 = 1.0 - uniform01(rng);
      const double u2 = uniform01(rng);
      v[i] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
      norm2 += v[i] * v[i];
    }
    if (norm2 < 1e-24) continue;
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& x : v) x *= inv;
    starts.push_back(v);
  }
  return starts;
}

}  // namespace

SweepResult sweep_unit_circle(const IDEProblem& p, const GridSpec& grid, int count,
                              NormKind kind) {
  if (p.forcing_dt)
    throw std::invalid_argument("sweep_unit_circle: problem must be unforced");
  if (count < 1) throw std::invalid_argument("sweep_unit_circle: count must be >= 1");

  SweepResult res;
  res.starts = sweep_start_points(p.dimension, count);
  res.trajectories.reserve(res.starts.size());
  for (const Vector& x0 : res.starts) {
    IDEProblem q = p;
    q.initial = x0;
    Trajectory traj = integrate(q, grid, kind);
    const double n0 = traj.norms.front();
    double sup = 0.0;
    for (double v : traj.norms) sup = std::max(sup, v);
    res.sup_ratio.push_back(sup / n0);
    res.final_ratio.push_back(traj.norms.back() / n0);
    res.any_overflow = res.any_overflow || traj.overflow;
    res.trajectories.push_back(std::move(traj));
  }
  res.min_index = 0;
  res.max_index = 0;
  for (std::size_t m = 1; m < res.final_ratio.size(); ++m) {
    if (res.final_ratio[m] < res.final_ratio[res.min_index]) res.min_index = m;
    if (res.final_ratio[m] > res.final_ratio[res.max_index]) res.max_index = m;
  }
  return res;
}

namespace {

struct BuiltProblem {
  std::optional<IEProblem> ie;
  std::optional<IDEProblem> ide;
};

BuiltProblem build_problem(const Scenario& s, const ProblemRegistry* registry) {
  BuiltProblem b;
  if (s.problem == "fig1") {
    b.ie = builtin_fig1_problem(s.set);
  } else if (s.problem == "fig2") {
    b.ide = builtin_fig2_problem(s.alpha);
  } else {
    if (registry == nullptr)
      throw std::invalid_argument("unknown problem '" + s.problem + "'");
    const auto it = registry->find(s.problem);
    if (it == registry->end())
      throw std::invalid_argument("unknown problem '" + s.problem + "'");
    if (std::holds_alternative<IEProblem>(it->second))
      b.ie = std::get<IEProblem>(it->second);
    else
      b.ide = std::get<IDEProblem>(it->second);
  }
  return b;
}

double resolve_epsilon(const Scenario& s, const BuiltProblem& b, const GridSpec& grid,
                       NormKind kind) {
  if (s.epsilon) return *s.epsilon;
  if (b.ie) {
    double sup = 0.0;
    for (std::size_t i = 0; i <= grid.step_count(); ++i)
      sup = std::max(sup, vector_norm(time_function_dt(b.ie->forcing, grid.time_at(i)), kind));
    if (sup > 0.0) return sup;
  }
  return 1.0;
}

const char* verdict_str(bool certified) { return certified ? "certified" : "not certified"; }

}  // namespace

RunOutput run_scenario(const Scenario& s, RunMode mode, const ProblemRegistry* registry) {
  const GridSpec grid(s.t_end, s.dt);
  const BuiltProblem built = build_problem(s, registry);
  const double eps = resolve_epsilon(s, built, grid, s.norm);
  if (s.delta2 && *s.delta2 > eps)
    throw std::invalid_argument("delta2 must not exceed epsilon");
  if (s.delta1.has_value() != s.delta2.has_value())
    throw std::invalid_argument("delta1 and delta2 must be supplied together");

  StabilityConfig cfg(grid, s.norm, eps);
  cfg.delta1 = s.delta1;
  cfg.delta2 = s.delta2;
  cfg.max_total_margin = s.max_total_margin;

  RunOutput out;
  std::ostringstream log;
  log << "problem: " << s.problem;
  if (s.problem == "fig1") log << " set " << s.set;
  if (s.problem == "fig2") log << " alpha " << format_double(s.alpha);
  log << "\ngrid: t_end=" << format_double(grid.t_end) << " dt=" << format_double(grid.dt)
      << " steps=" << grid.step_count() << "\nnorm: " << to_string(s.norm)
      << "\nepsilon: " << format_double(eps) << "\n";

  const bool want_trajectory = mode != RunMode::Indicate;
  const bool want_report = mode == RunMode::Indicate || mode == RunMode::Certify ||
                           mode == RunMode::Sweep;

  if (want_report) {
    if (built.ie) {
      out.report = (s.delta1 && s.delta2) ? theorem2_verdict(*built.ie, cfg)
                                          : theorem1_report(*built.ie, cfg);
    } else {
      out.report = theorem3_report(*built.ide, cfg);
    }
    out.indicator = out.report->trace;
    const auto& r = *out.report;
    log << "pointwise: " << verdict_str(r.pointwise.certified)
        << " (max total = " << format_double(r.pointwise.max_total);
    if (!r.pointwise.certified)
      log << ", first violation at t = " << format_double(r.pointwise.violated_at);
    log << ")\naveraged: " << verdict_str(r.averaged.certified)
        << " (worst window value = " << format_double(r.averaged.worst_value) << " over ["
        << format_double(r.averaged.window_start) << ", "
        << format_double(r.averaged.window_end) << "])\n";
    if (!r.hypotheses_hold) log << "hypotheses: violated\n";
    log << "certified: " << (r.certified() ? "yes" : "no") << "\nnotes: " << r.notes << "\n";
  }

  if (want_trajectory) {
    out.trajectory = built.ie ? solve_ie(*built.ie, grid, s.norm)
                              : integrate(*built.ide, grid, s.norm);
    double sup = 0.0, at = 0.0;
    for (std::size_t i = 0; i < out.trajectory.norms.size(); ++i)
      if (out.trajectory.norms[i] > sup) {
        sup = out.trajectory.norms[i];
        at = out.trajectory.times[i];
      }
    log << "sup ||X|| = " << format_double(sup) << " at t = " << format_double(at) << "\n";
    if (built.ie) {
      double supf = 0.0;
      for (std::size_t i = 0; i <= grid.step_count(); ++i)
        supf = std::max(supf,
                        vector_norm(built.ie->forcing.eval(grid.time_at(i)), s.norm));
      log << "sup ||F|| = " << format_double(supf) << "\n";
    }
    if (out.trajectory.overflow)
      log << "integration overflowed at t > "
          << format_double(out.trajectory.times.back()) << "; partial trajectory kept\n";
  }

  if (mode == RunMode::Certify && out.report && !out.trajectory.overflow) {
    const double bound =
        built.ie ? eps : (out.trajectory.norms.empty() ? 0.0 : out.trajectory.norms.front());
    const ConsistencyResult c = verify_against_trajectory(*out.report, out.trajectory, bound);
    log << "trajectory check (bound " << format_double(bound)
        << "): " << (c.consistent ? "consistent" : "INCONSISTENT");
    if (!c.consistent) log << " at t = " << format_double(c.inconsistent_at);
    log << "\n";
  }

  if (mode == RunMode::Sweep) {
    if (!built.ide)
      throw std::invalid_argument("sweep requires an integro-differential problem");
    const int count = s.sweep_count.value_or(64);
    out.sweep = sweep_unit_circle(*built.ide, grid, count, s.norm);
    const auto& sw = *out.sweep;
    log << "sweep: " << sw.starts.size() << " start points\n"
        << "min final deviation = " << format_double(sw.final_ratio[sw.min_index])
        << " (index " << sw.min_index << ")\n"
        << "max final deviation = " << format_double(sw.final_ratio[sw.max_index])
        << " (index " << sw.max_index << ")\n"
        << "max sup deviation = "
        << format_double(*std::max_element(sw.sup_ratio.begin(), sw.sup_ratio.end()))
        << "\n";
    if (sw.any_overflow) log << "some sweep trajectories overflowed\n";
  }

  // Exit status: certification result when one was requested, 2 on overflow.
  out.exit_code = 0;
  if ((mode == RunMode::Certify || mode == RunMode::Sweep) && out.report &&
      !out.report->certified())
    out.exit_code = 1;
  if (out.trajectory.overflow || (out.sweep && out.sweep->any_overflow)) out.exit_code = 2;
  log << "exit: " << out.exit_code << "\n";
  out.summary = log.str();
  return out;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  const std::size_t n = traj.states.empty() ? 0 : traj.states.front().size();
  os << "t";
  for (std::size_t c = 1; c <= n; ++c) os << ",x" << c;
  os << ",norm\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    os << format_double(traj.times[i]);
    for (std::size_t c = 0; c < n; ++c) os << ',' << format_double(traj.states[i][c]);
    os << ',' << format_double(traj.norms[i]) << '\n';
  }
}

void write_indicator_csv(std::ostream& os, const IndicatorTrace& trace) {
  os << "t,lognorm,memory,forcing,total\n";
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    os << format_double(trace.times[i]) << ',' << format_double(trace.lognorm_part[i])
       << ',' << format_double(trace.memory_part[i]) << ','
       << format_double(trace.forcing_part[i]) << ',' << format_double(trace.total[i])
       << '\n';
  }
}

void write_sweep_csv(std::ostream& os, const SweepResult& sweep) {
  const std::size_t n = sweep.starts.empty() ? 0 : sweep.starts.front().size();
  os << "index";
  for (std::size_t c = 1; c <= n; ++c) os << ",x0_" << c;
  os << ",sup_ratio,final_ratio,overflow\n";
  for (std::size_t m = 0; m < sweep.starts.size(); ++m) {
    os << m;
    for (std::size_t c = 0; c < n; ++c) os << ',' << format_double(sweep.starts[m][c]);
    os << ',' << format_double(sweep.sup_ratio[m]) << ','
       << format_double(sweep.final_ratio[m]) << ','
       << (sweep.trajectories[m].overflow ? 1 : 0) << '\n';
  }
}

namespace {

void write_file(const std::string& path, const std::function<void(std::ostream&)>& fn) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open output file '" + path + "'");
  fn(os);
  if (!os) throw std::runtime_error("failed writing output file '" + path + "'");
}

}  // namespace

void write_outputs(const RunOutput& out, const Scenario& s) {
  if (!s.out_trajectory.empty() && !out.trajectory.times.empty())
    write_file(s.out_trajectory, [&](std::ostream& os) { write_trajectory_csv(os, out.trajectory); });
  if (!s.out_indicator.empty() && out.indicator)
    write_file(s.out_indicator, [&](std::ostream& os) { write_indicator_csv(os, *out.indicator); });
  if (!s.out_sweep.empty() && out.sweep)
    write_file(s.out_sweep, [&](std::ostream& os) { write_sweep_csv(os, *out.sweep); });
}

int run_reproduce_preset(const std::string& preset, const std::string& out_dir,
                         std::optional<double> alpha_override, std::ostream& log) {
  const std::string dir = out_dir.empty() ? std::string(".") : out_dir;
  std::filesystem::create_directories(dir);
  const std::string prefix = dir + "/" + preset;
  Scenario s;
  RunMode mode;
  if (preset == "fig1a" || preset == "fig1c") {
    s.problem = "fig1";
    s.set = preset == "fig1a" ? 1 : 2;
    // Set 2 needs a larger perturbation budget for the indicator to start
    // negative; with epsilon = sup||F'|| the forcing part alone reaches 1.
    s.epsilon = preset == "fig1a" ? 0.1 : 0.4;
    s.out_trajectory = prefix + "_trajectory.csv";
    s.out_indicator = prefix + "_indicator.csv";
    mode = RunMode::Certify;
  } else if (preset == "fig2") {
    s.problem = "fig2";
    s.alpha = alpha_override.value_or(1.33);
    s.sweep_count = 64;
    s.out_indicator = prefix + "_indicator.csv";
    s.out_sweep = prefix + "_sweep.csv";
    s.out_trajectory = prefix + "_trajectory.csv";
    mode = RunMode::Sweep;
  } else {
    throw std::invalid_argument("unknown preset '" + preset +
                                "' (expected fig1a, fig1c or fig2)");
  }

  const RunOutput out = run_scenario(s, mode);
  write_outputs(out, s);
  if (preset == "fig2" && out.sweep) {
    write_file(prefix + "_trajectory_min.csv", [&](std::ostream& os) {
      write_trajectory_csv(os, out.sweep->trajectories[out.sweep->min_index]);
    });
    write_file(prefix + "_trajectory_max.csv", [&](std::ostream& os) {
      write_trajectory_csv(os, out.sweep->trajectories[out.sweep->max_index]);
    });
  }
  log << out.summary;
  return out.exit_code;
}

}  // namespace volterra
