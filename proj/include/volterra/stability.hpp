#pragma once

#include <optional>
#include <string>
#include <vector>

#include "volterra/integrator.hpp"
#include "volterra/linalg.hpp"
#include "volterra/model.hpp"

namespace volterra {

/// Parameters of a stability check. epsilon is the perturbation budget the
/// forcing part of the indicator is measured against; delta1/delta2 are the
/// optional bounds on sup||F'|| and ||F(0)|| used by theorem2_verdict.
/// max_total_margin demands the indicator stay below -margin instead of 0.
struct StabilityConfig {
  StabilityConfig(GridSpec grid_in, NormKind kind_in = NormKind::Max,
                  double epsilon_in = 1.0)
      : epsilon(epsilon_in), kind(kind_in), grid(grid_in) {}

  double epsilon;
  std::optional<double> delta1;
  std::optional<double> delta2;
  NormKind kind;
  GridSpec grid;
  double max_total_margin = 0.0;
};

/// Grid evaluation of the stability-indicating functional, split into its
/// components: total[i] = lognorm_part[i] + memory_part[i] + forcing_part[i].
struct IndicatorTrace {
  std::vector<double> times;
  std::vector<double> lognorm_part;
  std::vector<double> memory_part;
  std::vector<double> forcing_part;
  std::vector<double> total;
};

enum class TheoremKind { Theorem1, Theorem2, Theorem3 };

struct PointwiseVerdict {
  bool certified = false;
  double violated_at = 0.0;  // meaningful when !certified
  double max_total = 0.0;
};

struct AveragedVerdict {
  bool certified = false;
  double window_start = 0.0;  // worst pair (t', t)
  double window_end = 0.0;
  double worst_value = 0.0;
};

/// All verdicts are grid-only statements: the continuous quantifier
/// "for all t > t'" is checked over grid pairs.
struct StabilityReport {
  TheoremKind theorem = TheoremKind::Theorem1;
  IndicatorTrace trace;
  PointwiseVerdict pointwise;
  AveragedVerdict averaged;
  bool hypotheses_hold = true;  // theorem2's delta conditions
  std::string notes;

  bool certified() const {
    return pointwise.certified && averaged.certified && hypotheses_hold;
  }
};

/// Indicator for the reduced integral-equation system:
/// lognorm_part = Lambda(B(s,s)), memory_part = int_0^s ||dB/dt(s,tau)|| dtau
/// (trapezoid on the grid), forcing_part = ||F'(s)||/epsilon.
IndicatorTrace theorem1_trace(const IEProblem& p, const StabilityConfig& cfg);

/// Indicator for an unforced integro-differential system:
/// lognorm_part = Lambda(A(t)), memory_part = int_0^t ||B(t,s)|| ds.
IndicatorTrace theorem3_trace(const IDEProblem& p, const StabilityConfig& cfg);

PointwiseVerdict pointwise_check(const IndicatorTrace& trace, double margin = 0.0);

/// Windowed check over all grid pairs (t_j, t_i), i > j:
///   lognorm_part[i] + (1/(t_i - t_j)) int_{t_j}^{t_i} (memory + forcing)
/// via prefix sums of the trapezoid weights. Certified iff the maximum over
/// all pairs is < -margin; reports the worst pair.
AveragedVerdict averaged_check(const IndicatorTrace& trace, double margin = 0.0);

StabilityReport theorem1_report(const IEProblem& p, const StabilityConfig& cfg);

/// Theorem-1 trace plus the nonzero-initial-data conditions:
/// sup_grid ||F'|| <= delta1, ||F(0)|| <= delta2, delta2 <= epsilon.
/// Requires delta1 and delta2 in the config.
StabilityReport theorem2_verdict(const IEProblem& p, const StabilityConfig& cfg);

StabilityReport theorem3_report(const IDEProblem& p, const StabilityConfig& cfg);

struct ConsistencyResult {
  bool consistent = true;
  double inconsistent_at = 0.0;  // meaningful when !consistent
};

/// Cross-check a certifying report against a computed trajectory on the same
/// grid: norms must stay within bound * (1 + 1e-6) (bound = epsilon for the
/// integral-equation theorems, ||X(0)|| for the memory-decay one), and for
/// Theorem 3 the norm sequence must be non-increasing within 1e-6 * norms[0]
/// per step. A non-certifying report is vacuously consistent.
ConsistencyResult verify_against_trajectory(const StabilityReport& report,
                                            const Trajectory& traj, double bound);

}  // namespace volterra
