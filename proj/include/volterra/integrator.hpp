#pragma once

#include <span>
#include <vector>

#include "volterra/linalg.hpp"
#include "volterra/model.hpp"

namespace volterra {

/// Uniform time grid on [0, t_end]. t_end is snapped to N * dt with
/// N = round(t_end / dt); grid times are t_i = i * dt.
struct GridSpec {
  GridSpec(double t_end, double dt);

  double t_end;
  double dt;

  std::size_t step_count() const { return steps_; }
  double time_at(std::size_t i) const { return static_cast<double>(i) * dt; }

 private:
  std::size_t steps_;
};

/// Solution path on a grid. norms[i] is vector_norm(states[i], kind).
/// overflow is set when the integration hit a non-finite state and stopped;
/// the stored prefix is still valid.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<double> norms;
  NormKind kind = NormKind::Max;
  bool overflow = false;
};

/// Trapezoidal evaluation of the history integral at step i:
///   Y_i = dt * sum_{k=0..i} B(t_i, t_k) X_k - (dt/2) (B(t_i,t_0) X_0 + B(t_i,t_i) X_i).
/// Y_0 = 0 (degenerate single-node trapezoid). history must hold at least
/// i + 1 states.
Vector memory_integral(const IDEProblem& p, std::span<const Vector> history,
                       std::size_t i, double dt);

/// Explicit Euler with trapezoidal memory quadrature:
///   X_{i+1} = X_i + dt (A(t_i) X_i + Y_i + F'((t_i + t_{i+1})/2)),
/// the forcing term present only when the problem carries one.
Trajectory integrate(const IDEProblem& p, const GridSpec& grid, NormKind kind);

/// Solve an integral-equation system by reducing it to its initial-value
/// form and integrating. Equivalent to integrate(ie_to_cauchy(p), ...).
Trajectory solve_ie(const IEProblem& p, const GridSpec& grid, NormKind kind);

}  // namespace volterra
