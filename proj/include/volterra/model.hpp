#pragma once

#include <functional>
#include <optional>

#include "volterra/linalg.hpp"

namespace volterra {

/// Matrix-valued kernel of a history integral, defined for 0 <= tau <= t.
/// eval_dt, when supplied, is the analytic partial derivative with respect
/// to t; kernel_dt falls back to a finite difference otherwise.
struct KernelFunction {
  std::function<Matrix(double t, double tau)> eval;
  std::function<Matrix(double t, double tau)> eval_dt;  // may be empty
  std::size_t dimension = 0;
};

/// Vector-valued function of time, with an optional analytic derivative.
struct TimeFunction {
  std::function<Vector(double t)> eval;
  std::function<Vector(double t)> eval_dt;  // may be empty
  std::size_t dimension = 0;
};

struct MatrixTimeFunction {
  std::function<Matrix(double t)> eval;
  std::size_t dimension = 0;
};

/// System of integral equations X(t) = int_0^t B(t,tau) X(tau) dtau + F(t).
struct IEProblem {
  KernelFunction kernel;  // B
  TimeFunction forcing;   // F
  std::size_t dimension = 0;
  double horizon = 0.0;
};

/// Initial-value problem X'(t) = A(t) X(t) + int_0^t B(t,tau) X(tau) dtau
/// (+ F'(t) when the problem arose from an integral equation), X(0) = X_0.
/// An absent memory_kernel means the history integral is identically zero.
struct IDEProblem {
  MatrixTimeFunction local_matrix;             // A(t)
  std::optional<KernelFunction> memory_kernel; // B(t,tau)
  std::optional<TimeFunction> forcing_dt;      // F'(t)
  Vector initial;
  std::size_t dimension = 0;
  double horizon = 0.0;
};

/// d/dt of the kernel at (t, tau). Analytic when supplied; otherwise a
/// second-order central difference with step h = max(1e-6, 1e-6 t), switching
/// to a one-sided forward difference of the same order where t - h < tau.
Matrix kernel_dt(const KernelFunction& k, double t, double tau);

/// d/dt of a time function, same differentiation scheme (one-sided near 0).
Vector time_function_dt(const TimeFunction& f, double t);

/// Reduce an integral-equation system to the equivalent initial-value
/// problem: A(t) = B(t,t), memory kernel dB/dt, forcing F', X_0 = F(0).
IDEProblem ie_to_cauchy(const IEProblem& p);

/// Built-in 2x2 integral-equation testbed with exponentially decaying kernel
/// entries and a smooth inhomogeneous term; set 1 is stably dominated by the
/// diagonal, set 2 has faster kernel decay and loses the stabilising shift.
IEProblem builtin_fig1_problem(int set);

/// Built-in 2x2 integro-differential testbed x' = alpha A(t) x + int H x;
/// alpha balances the negative local log norm against the memory term.
IDEProblem builtin_fig2_problem(double alpha);

}  // namespace volterra
