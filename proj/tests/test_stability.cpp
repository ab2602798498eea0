#include "volterra/stability.hpp"

#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "volterra/model.hpp"

using namespace volterra;

namespace {

IEProblem scalar_ie(double kernel_value, std::function<Vector(double)> forcing,
                    std::function<Vector(double)> forcing_dt) {
  IEProblem p;
  p.kernel = {[kernel_value](double, double) { return Matrix{{kernel_value}}; },
              [](double, double) { return Matrix{{0.0}}; }, 1};
  p.forcing = {std::move(forcing), std::move(forcing_dt), 1};
  p.dimension = 1;
  p.horizon = 5.0;
  return p;
}

IEProblem zero_forcing_ie(double kernel_value) {
  return scalar_ie(
      kernel_value, [](double) { return Vector{0.0}; },
      [](double) { return Vector{0.0}; });
}

IndicatorTrace constant_trace(std::size_t points, double dt, double lognorm,
                              double memory, double forcing) {
  IndicatorTrace t;
  for (std::size_t i = 0; i < points; ++i) {
    t.times.push_back(static_cast<double>(i) * dt);
    t.lognorm_part.push_back(lognorm);
    t.memory_part.push_back(memory);
    t.forcing_part.push_back(forcing);
    t.total.push_back(lognorm + memory + forcing);
  }
  return t;
}

StabilityReport synthetic_report(TheoremKind theorem, const IndicatorTrace& trace) {
  StabilityReport r;
  r.theorem = theorem;
  r.trace = trace;
  r.pointwise = pointwise_check(trace);
  r.averaged = averaged_check(trace);
  return r;
}

Trajectory trajectory_with_norms(const std::vector<double>& times,
                                 const std::vector<double>& norms) {
  Trajectory t;
  t.times = times;
  t.norms = norms;
  for (double nrm : norms) t.states.push_back(Vector{nrm});
  return t;
}

}  // namespace

TEST_CASE("indicator at the initial point of the first built-in problem") {
  const IEProblem p = builtin_fig1_problem(1);
  StabilityConfig cfg(GridSpec(20.0, 0.025), NormKind::Max, 0.1);
  const IndicatorTrace trace = theorem1_trace(p, cfg);

  CHECK(trace.lognorm_part[0] == doctest::Approx(-1.5).epsilon(1e-14));
  CHECK(trace.memory_part[0] == 0.0);
  CHECK(trace.forcing_part[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(trace.total[0] == doctest::Approx(-0.5).epsilon(1e-13));
}

TEST_CASE("zero kernel and forcing give an identically zero indicator") {
  IEProblem p;
  p.kernel = {[](double, double) { return Matrix(2, 0.0); }, nullptr, 2};
  p.forcing = {[](double) { return Vector{0.0, 0.0}; }, nullptr, 2};
  p.dimension = 2;

  StabilityConfig cfg(GridSpec(1.0, 0.1), NormKind::Max, 0.5);
  const IndicatorTrace trace = theorem1_trace(p, cfg);
  for (std::size_t i = 0; i < trace.total.size(); ++i) CHECK(trace.total[i] == 0.0);
}

TEST_CASE("constant scalar kernel: indicator equals the kernel value") {
  const IEProblem p = zero_forcing_ie(-2.0);
  StabilityConfig cfg(GridSpec(2.0, 0.1), NormKind::Max, 1.0);
  const IndicatorTrace trace = theorem1_trace(p, cfg);
  for (double total : trace.total) CHECK(total == doctest::Approx(-2.0).epsilon(1e-14));
}

TEST_CASE("theorem1_trace rejects a non-positive epsilon") {
  StabilityConfig cfg(GridSpec(1.0, 0.1), NormKind::Max, 0.0);
  CHECK_THROWS_AS(theorem1_trace(builtin_fig1_problem(1), cfg), std::invalid_argument);
}

TEST_CASE("memory-decay indicator") {
  SUBCASE("second built-in problem at t = 0") {
    StabilityConfig cfg(GridSpec(20.0, 0.025), NormKind::Max);
    const IndicatorTrace trace = theorem3_trace(builtin_fig2_problem(1.0), cfg);
    CHECK(trace.lognorm_part[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(trace.memory_part[0] == 0.0);
    CHECK(trace.total[0] == doctest::Approx(-1.0).epsilon(1e-14));
  }
  SUBCASE("constant diagonal system without memory") {
    IDEProblem p;
    p.local_matrix = {[](double) {
                        Matrix m(2, 0.0);
                        m(0, 0) = m(1, 1) = -3.0;
                        return m;
                      },
                      2};
    p.initial = {1.0, 0.0};
    p.dimension = 2;
    StabilityConfig cfg(GridSpec(2.0, 0.1), NormKind::Max);
    const IndicatorTrace trace = theorem3_trace(p, cfg);
    for (double total : trace.total) CHECK(total == -3.0);
  }
  SUBCASE("strictly negative on the whole grid at alpha = 1.33") {
    StabilityConfig cfg(GridSpec(20.0, 0.025), NormKind::Max);
    const IndicatorTrace trace = theorem3_trace(builtin_fig2_problem(1.33), cfg);
    for (double total : trace.total) CHECK(total < 0.0);
  }
  SUBCASE("forced problems are rejected") {
    IDEProblem p = builtin_fig2_problem(1.0);
    p.forcing_dt = TimeFunction{[](double) { return Vector{0.0, 0.0}; }, nullptr, 2};
    StabilityConfig cfg(GridSpec(1.0, 0.1), NormKind::Max);
    CHECK_THROWS_AS(theorem3_trace(p, cfg), std::invalid_argument);
  }
}

TEST_CASE("windowed average check") {
  SUBCASE("constant negative balance certifies") {
    const IndicatorTrace t = constant_trace(21, 0.1, -2.0, 0.6, 0.4);
    const AveragedVerdict v = averaged_check(t);
    CHECK(v.certified);
    CHECK(v.worst_value == doctest::Approx(-1.0).epsilon(1e-13));
  }
  SUBCASE("constant positive balance does not") {
    const IndicatorTrace t = constant_trace(21, 0.1, -1.0, 1.2, 0.8);
    const AveragedVerdict v = averaged_check(t);
    CHECK_FALSE(v.certified);
    CHECK(v.worst_value == doctest::Approx(1.0).epsilon(1e-13));
  }
  SUBCASE("second parameter set is not certified") {
    StabilityConfig cfg(GridSpec(20.0, 0.025), NormKind::Max, 0.1);
    const IndicatorTrace trace = theorem1_trace(builtin_fig1_problem(2), cfg);
    CHECK_FALSE(averaged_check(trace).certified);
    CHECK_FALSE(pointwise_check(trace).certified);
  }
  SUBCASE("margin knob tightens both checks") {
    StabilityConfig cfg(GridSpec(20.0, 0.025), NormKind::Max, 0.1);
    const IndicatorTrace trace = theorem1_trace(builtin_fig1_problem(1), cfg);
    CHECK(pointwise_check(trace, 0.1).certified);
    CHECK(averaged_check(trace, 0.1).certified);
    CHECK_FALSE(pointwise_check(trace, 0.5).certified);
    CHECK_FALSE(averaged_check(trace, 0.2).certified);
  }
  SUBCASE("trace too short") {
    const IndicatorTrace t = constant_trace(1, 0.1, -1.0, 0.0, 0.0);
    CHECK_THROWS_AS(averaged_check(t), std::invalid_argument);
  }
}

TEST_CASE("nonzero-initial-data verdict") {
  SUBCASE("zero forcing with a stable kernel certifies") {
    const IEProblem p = zero_forcing_ie(-1.0);
    StabilityConfig cfg(GridSpec(2.0, 0.1), NormKind::Max, 0.1);
    cfg.delta1 = 0.1;
    cfg.delta2 = 0.05;
    const StabilityReport r = theorem2_verdict(p, cfg);
    CHECK(r.theorem == TheoremKind::Theorem2);
    CHECK(r.hypotheses_hold);
    CHECK(r.certified());
  }
  SUBCASE("initial perturbation beyond delta2 fails the hypotheses") {
    const IEProblem p = scalar_ie(
        -1.0, [](double) { return Vector{0.2}; }, [](double) { return Vector{0.0}; });
    StabilityConfig cfg(GridSpec(2.0, 0.1), NormKind::Max, 0.1);
    cfg.delta1 = 0.1;
    cfg.delta2 = 0.1;
    const StabilityReport r = theorem2_verdict(p, cfg);
    CHECK_FALSE(r.hypotheses_hold);
    CHECK_FALSE(r.certified());
    CHECK(r.notes.find("initial perturbation exceeds delta2") != std::string::npos);
  }
  SUBCASE("forcing derivative beyond delta1 fails the hypotheses") {
    const IEProblem p = scalar_ie(
        -4.0, [](double t) { return Vector{0.05 * t}; },
        [](double) { return Vector{0.05}; });
    StabilityConfig cfg(GridSpec(2.0, 0.1), NormKind::Max, 0.5);
    cfg.delta1 = 0.01;
    cfg.delta2 = 0.5;
    const StabilityReport r = theorem2_verdict(p, cfg);
    CHECK_FALSE(r.hypotheses_hold);
    CHECK(r.notes.find("sup||F'|| exceeds delta1") != std::string::npos);
  }
  SUBCASE("first built-in problem certifies with tight deltas") {
    StabilityConfig cfg(GridSpec(20.0, 0.025), NormKind::Max, 0.1);
    cfg.delta1 = 0.1;
    cfg.delta2 = 0.1;
    const StabilityReport r = theorem2_verdict(builtin_fig1_problem(1), cfg);
    CHECK(r.hypotheses_hold);
    CHECK(r.certified());
  }
  SUBCASE("missing deltas are a contract violation") {
    StabilityConfig cfg(GridSpec(2.0, 0.1), NormKind::Max, 0.1);
    CHECK_THROWS_AS(theorem2_verdict(zero_forcing_ie(-1.0), cfg), std::invalid_argument);
    cfg.delta1 = 0.1;
    cfg.delta2 = 0.2;  // exceeds epsilon
    CHECK_THROWS_AS(theorem2_verdict(zero_forcing_ie(-1.0), cfg), std::invalid_argument);
  }
}

TEST_CASE("trajectory consistency checks") {
  const std::vector<double> times{0.0, 0.5, 1.0};

  SUBCASE("certified report with decaying norms is consistent") {
    const StabilityReport r =
        synthetic_report(TheoremKind::Theorem1, constant_trace(3, 0.5, -2.0, 0.0, 0.0));
    REQUIRE(r.certified());
    const Trajectory traj = trajectory_with_norms(times, {1.0, 0.9, 0.8});
    CHECK(verify_against_trajectory(r, traj, 1.0).consistent);
  }
  SUBCASE("norm above the bound is flagged") {
    const StabilityReport r =
        synthetic_report(TheoremKind::Theorem1, constant_trace(3, 0.5, -2.0, 0.0, 0.0));
    const Trajectory traj = trajectory_with_norms(times, {1.0, 1.2, 0.8});
    const ConsistencyResult c = verify_against_trajectory(r, traj, 1.0);
    CHECK_FALSE(c.consistent);
    CHECK(c.inconsistent_at == 0.5);
  }
  SUBCASE("memory-decay reports additionally demand monotone norms") {
    const StabilityReport r =
        synthetic_report(TheoremKind::Theorem3, constant_trace(3, 0.5, -2.0, 0.0, 0.0));
    const Trajectory rising = trajectory_with_norms(times, {1.0, 0.5, 0.6});
    const ConsistencyResult c = verify_against_trajectory(r, rising, 1.0);
    CHECK_FALSE(c.consistent);
    CHECK(c.inconsistent_at == 1.0);

    const Trajectory within_slack =
        trajectory_with_norms(times, {1.0, 0.5, 0.5 + 5e-7});
    CHECK(verify_against_trajectory(r, within_slack, 1.0).consistent);
  }
  SUBCASE("non-certifying reports are vacuously consistent") {
    const StabilityReport r =
        synthetic_report(TheoremKind::Theorem1, constant_trace(3, 0.5, 1.0, 0.0, 0.0));
    REQUIRE_FALSE(r.certified());
    const Trajectory traj = trajectory_with_norms(times, {1.0, 5.0, 25.0});
    CHECK(verify_against_trajectory(r, traj, 1.0).consistent);
  }
  SUBCASE("grid mismatch is a contract violation") {
    const StabilityReport r =
        synthetic_report(TheoremKind::Theorem1, constant_trace(3, 0.5, -2.0, 0.0, 0.0));
    const Trajectory traj = trajectory_with_norms({0.0, 0.5}, {1.0, 0.9});
    CHECK_THROWS_AS(verify_against_trajectory(r, traj, 1.0), std::invalid_argument);
  }
}

TEST_CASE("second built-in problem: certified run is consistent from unit starts") {
  const GridSpec grid(20.0, 0.025);
  StabilityConfig cfg(grid, NormKind::Max);
  IDEProblem p = builtin_fig2_problem(1.33);
  const StabilityReport r = theorem3_report(p, cfg);
  REQUIRE(r.certified());

  for (const Vector& x0 : {Vector{1.0, 0.0}, Vector{0.0, 1.0}}) {
    p.initial = x0;
    const Trajectory traj = integrate(p, grid, NormKind::Max);
    const ConsistencyResult c = verify_against_trajectory(r, traj, traj.norms.front());
    CHECK(c.consistent);
  }
}

TEST_CASE("forcing part scales inversely with epsilon") {
  const IEProblem p = builtin_fig1_problem(1);
  StabilityConfig tight(GridSpec(20.0, 0.025), NormKind::Max, 0.1);
  StabilityConfig loose(GridSpec(20.0, 0.025), NormKind::Max, 0.2);
  const IndicatorTrace a = theorem1_trace(p, tight);
  const IndicatorTrace b = theorem1_trace(p, loose);
  for (std::size_t i = 0; i < a.times.size(); ++i) {
    CHECK(b.forcing_part[i] <= a.forcing_part[i]);
    CHECK(b.total[i] <= a.total[i]);
    CHECK(b.forcing_part[i] == doctest::Approx(0.5 * a.forcing_part[i]).epsilon(1e-13));
  }
}

TEST_CASE("trace decomposition is exact") {
  StabilityConfig cfg(GridSpec(20.0, 0.025), NormKind::Max, 0.1);
  const IndicatorTrace trace = theorem1_trace(builtin_fig1_problem(1), cfg);
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    CHECK(trace.total[i] ==
          trace.lognorm_part[i] + trace.memory_part[i] + trace.forcing_part[i]);
    CHECK(trace.memory_part[i] >= 0.0);
    CHECK(trace.forcing_part[i] >= 0.0);
  }
  CHECK(trace.memory_part[0] == 0.0);
}

TEST_CASE("coupling strength scales only the local part") {
  StabilityConfig cfg(GridSpec(5.0, 0.05), NormKind::Max);
  const IndicatorTrace base = theorem3_trace(builtin_fig2_problem(1.0), cfg);
  const IndicatorTrace scaled = theorem3_trace(builtin_fig2_problem(1.33), cfg);
  for (std::size_t i = 0; i < base.times.size(); ++i) {
    CHECK(scaled.lognorm_part[i] ==
          doctest::Approx(1.33 * base.lognorm_part[i]).epsilon(1e-12));
    CHECK(scaled.memory_part[i] == base.memory_part[i]);
  }
}

TEST_CASE("pointwise certification implies the windowed one on built-in traces") {
  StabilityConfig cfg1(GridSpec(20.0, 0.025), NormKind::Max, 0.1);
  const IndicatorTrace t1 = theorem1_trace(builtin_fig1_problem(1), cfg1);
  if (pointwise_check(t1).certified) CHECK(averaged_check(t1).certified);

  StabilityConfig cfg3(GridSpec(20.0, 0.025), NormKind::Max);
  const IndicatorTrace t3 = theorem3_trace(builtin_fig2_problem(1.33), cfg3);
  if (pointwise_check(t3).certified) CHECK(averaged_check(t3).certified);
}
