#include "volterra/integrator.hpp"

#include <cmath>
#include <stdexcept>

namespace volterra {

GridSpec::GridSpec(double t_end_in, double dt_in) : t_end(t_end_in), dt(dt_in) {
  if (!(dt > 0.0)) throw std::invalid_argument("GridSpec: dt must be > 0");
  if (!(t_end > 0.0)) throw std::invalid_argument("GridSpec: t_end must be > 0");
  if (dt > t_end) throw std::invalid_argument("GridSpec: dt must not exceed t_end");
  const long long n = std::llround(t_end / dt);
  if (n < 2) throw std::invalid_argument("GridSpec: need at least 2 steps");
  steps_ = static_cast<std::size_t>(n);
  t_end = static_cast<double>(steps_) * dt;
}

Vector memory_integral(const IDEProblem& p, std::span<const Vector> history,
                       std::size_t i, double dt) {
  if (history.size() < i + 1)
    throw std::invalid_argument("memory_integral: history shorter than i + 1");
  Vector y(p.dimension, 0.0);
  if (!p.memory_kernel || i == 0) return y;

  const double ti = static_cast<double>(i) * dt;
  for (std::size_t k = 0; k <= i; ++k) {
    const double w = (k == 0 || k == i) ? 0.5 * dt : dt;
    const Matrix b = p.memory_kernel->eval(ti, static_cast<double>(k) * dt);
    const Vector& x = history[k];
    for (std::size_t r = 0; r < p.dimension; ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < p.dimension; ++c) s += b(r, c) * x[c];
      y[r] += w * s;
    }
  }
  return y;
}

Trajectory integrate(const IDEProblem& p, const GridSpec& grid, NormKind kind) {
  if (p.initial.size() != p.dimension)
    throw std::invalid_argument("integrate: initial state dimension mismatch");

  const std::size_t n = p.dimension;
  const std::size_t steps = grid.step_count();
  const double dt = grid.dt;

  Trajectory traj;
  traj.kind = kind;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.norms.reserve(steps + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(p.initial);
  traj.norms.push_back(vector_norm(p.initial, kind));

  for (std::size_t i = 0; i < steps; ++i) {
    const double ti = grid.time_at(i);
    const Vector& xi = traj.states.back();

    Vector rhs = p.local_matrix.eval(ti) * xi;
    const Vector y = memory_integral(p, traj.states, i, dt);
    for (std::size_t r = 0; r < n; ++r) rhs[r] += y[r];
    if (p.forcing_dt) {
      const Vector f = p.forcing_dt->eval(0.5 * (ti + grid.time_at(i + 1)));
      for (std::size_t r = 0; r < n; ++r) rhs[r] += f[r];
    }

    Vector next(n);
    bool finite = true;
    for (std::size_t r = 0; r < n; ++r) {
      next[r] = xi[r] + dt * rhs[r];
      finite = finite && std::isfinite(next[r]);
    }
    if (!finite) {
      // Blow-up of an unstable problem: keep the finite prefix, flag it.
      traj.overflow = true;
      return traj;
    }
    traj.times.push_back(grid.time_at(i + 1));
    traj.norms.push_back(vector_norm(next, kind));
    traj.states.push_back(std::move(next));
  }
  return traj;
}

Trajectory solve_ie(const IEProblem& p, const GridSpec& grid, NormKind kind) {
  return integrate(ie_to_cauchy(p), grid, kind);
}

}  // namespace volterra
