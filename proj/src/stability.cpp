#include "volterra/stability.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace volterra {

namespace {

// int_0^{t_i} ||K(t_i, .)|| over the grid prefix, trapezoid weights.
double kernel_norm_integral(const KernelFunction& k, const GridSpec& grid,
                            std::size_t i, NormKind kind) {
  if (i == 0) return 0.0;
  const double ti = grid.time_at(i);
  double acc = 0.0;
  for (std::size_t j = 0; j <= i; ++j) {
    const double w = (j == 0 || j == i) ? 0.5 * grid.dt : grid.dt;
    acc += w * matrix_operator_norm(k.eval(ti, grid.time_at(j)), kind);
  }
  return acc;
}

IndicatorTrace make_trace(const MatrixTimeFunction& local,
                          const std::optional<KernelFunction>& memory,
                          const std::optional<TimeFunction>& forcing_dt,
                          const StabilityConfig& cfg) {
  const std::size_t n = cfg.grid.step_count();
  IndicatorTrace trace;
  trace.times.resize(n + 1);
  trace.lognorm_part.resize(n + 1);
  trace.memory_part.resize(n + 1);
  trace.forcing_part.resize(n + 1);
  trace.total.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double s = cfg.grid.time_at(i);
    trace.times[i] = s;
    trace.lognorm_part[i] = log_norm(local.eval(s), cfg.kind);
    trace.memory_part[i] =
        memory ? kernel_norm_integral(*memory, cfg.grid, i, cfg.kind) : 0.0;
    trace.forcing_part[i] =
        forcing_dt ? vector_norm(forcing_dt->eval(s), cfg.kind) / cfg.epsilon : 0.0;
    trace.total[i] = trace.lognorm_part[i] + trace.memory_part[i] + trace.forcing_part[i];
  }
  return trace;
}

}  // namespace

IndicatorTrace theorem1_trace(const IEProblem& p, const StabilityConfig& cfg) {
  if (!(cfg.epsilon > 0.0))
    throw std::invalid_argument("theorem1_trace: epsilon must be > 0");
  const IDEProblem reduced = ie_to_cauchy(p);
  return make_trace(reduced.local_matrix, reduced.memory_kernel, reduced.forcing_dt, cfg);
}

IndicatorTrace theorem3_trace(const IDEProblem& p, const StabilityConfig& cfg) {
  if (p.forcing_dt)
    throw std::invalid_argument(
        "theorem3_trace: trivial-solution analysis requires an unforced problem");
  return make_trace(p.local_matrix, p.memory_kernel, std::nullopt, cfg);
}

PointwiseVerdict pointwise_check(const IndicatorTrace& trace, double margin) {
  PointwiseVerdict v;
  v.certified = true;
  v.max_total = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < trace.total.size(); ++i) {
    if (trace.total[i] > v.max_total) v.max_total = trace.total[i];
    if (v.certified && !(trace.total[i] < -margin)) {
      v.certified = false;
      v.violated_at = trace.times[i];
    }
  }
  return v;
}

AveragedVerdict averaged_check(const IndicatorTrace& trace, double margin) {
  const std::size_t count = trace.times.size();
  if (count < 2) throw std::invalid_argument("averaged_check: trace too short");

  // Prefix trapezoid integral of memory + forcing.
  std::vector<double> prefix(count, 0.0);
  for (std::size_t i = 1; i < count; ++i) {
    const double mi = trace.memory_part[i] + trace.forcing_part[i];
    const double mj = trace.memory_part[i - 1] + trace.forcing_part[i - 1];
    prefix[i] = prefix[i - 1] + 0.5 * (trace.times[i] - trace.times[i - 1]) * (mi + mj);
  }

  AveragedVerdict v;
  v.worst_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < count; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double q = trace.lognorm_part[i] +
                       (prefix[i] - prefix[j]) / (trace.times[i] - trace.times[j]);
      if (q > v.worst_value) {
        v.worst_value = q;
        v.window_start = trace.times[j];
        v.window_end = trace.times[i];
      }
    }
  }
  v.certified = v.worst_value < -margin;
  return v;
}

StabilityReport theorem1_report(const IEProblem& p, const StabilityConfig& cfg) {
  StabilityReport r;
  r.theorem = TheoremKind::Theorem1;
  r.trace = theorem1_trace(p, cfg);
  r.pointwise = pointwise_check(r.trace, cfg.max_total_margin);
  r.averaged = averaged_check(r.trace, cfg.max_total_margin);
  r.notes = "sufficient condition only: a non-negative indicator yields no verdict";
  return r;
}

StabilityReport theorem2_verdict(const IEProblem& p, const StabilityConfig& cfg) {
  if (!cfg.delta1 || !cfg.delta2)
    throw std::invalid_argument("theorem2_verdict: delta1 and delta2 are required");
  if (!(*cfg.delta2 <= cfg.epsilon))
    throw std::invalid_argument("theorem2_verdict: delta2 must not exceed epsilon");

  StabilityReport r;
  r.theorem = TheoremKind::Theorem2;
  r.trace = theorem1_trace(p, cfg);
  r.pointwise = pointwise_check(r.trace, cfg.max_total_margin);
  r.averaged = averaged_check(r.trace, cfg.max_total_margin);

  const IDEProblem reduced = ie_to_cauchy(p);
  double sup_fprime = 0.0;
  for (std::size_t i = 0; i <= cfg.grid.step_count(); ++i)
    sup_fprime = std::max(
        sup_fprime, vector_norm(reduced.forcing_dt->eval(cfg.grid.time_at(i)), cfg.kind));
  const double f0 = vector_norm(p.forcing.eval(0.0), cfg.kind);

  r.notes = "sufficient condition only: a non-negative indicator yields no verdict";
  if (sup_fprime > *cfg.delta1) {
    r.hypotheses_hold = false;
    r.notes += "; sup||F'|| exceeds delta1";
  }
  if (f0 > *cfg.delta2) {
    r.hypotheses_hold = false;
    r.notes += "; initial perturbation exceeds delta2";
  }
  return r;
}

StabilityReport theorem3_report(const IDEProblem& p, const StabilityConfig& cfg) {
  StabilityReport r;
  r.theorem = TheoremKind::Theorem3;
  r.trace = theorem3_trace(p, cfg);
  r.pointwise = pointwise_check(r.trace, cfg.max_total_margin);
  r.averaged = averaged_check(r.trace, cfg.max_total_margin);
  r.notes = "sufficient condition only: a non-negative indicator yields no verdict";
  return r;
}

ConsistencyResult verify_against_trajectory(const StabilityReport& report,
                                            const Trajectory& traj, double bound) {
  if (report.trace.times != traj.times)
    throw std::invalid_argument("verify_against_trajectory: grids differ");

  ConsistencyResult res;
  if (!report.certified()) return res;  // vacuously consistent

  const double cap = bound * (1.0 + 1e-6);
  for (std::size_t i = 0; i < traj.norms.size(); ++i) {
    if (traj.norms[i] > cap) return {false, traj.times[i]};
  }
  if (report.theorem == TheoremKind::Theorem3 && !traj.norms.empty()) {
    const double slack = 1e-6 * traj.norms.front();
    for (std::size_t i = 1; i < traj.norms.size(); ++i) {
      if (traj.norms[i] > traj.norms[i - 1] + slack) return {false, traj.times[i]};
    }
  }
  return res;
}

}  // namespace volterra
