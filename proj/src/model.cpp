#include "volterra/model.hpp"

#include <cmath>
#include <stdexcept>

namespace volterra {

namespace {

double diff_step(double t) { return std::max(1e-6, 1e-6 * t); }

}  // namespace

Matrix kernel_dt(const KernelFunction& k, double t, double tau) {
  if (!(tau >= 0.0 && tau <= t))
    throw std::invalid_argument("kernel_dt: require 0 <= tau <= t");
  if (k.eval_dt) return k.eval_dt(t, tau);

  const double h = diff_step(t);
  if (t - h >= tau) {
    Matrix d = k.eval(t + h, tau);
    d -= k.eval(t - h, tau);
    d *= 1.0 / (2.0 * h);
    return d;
  }
  // Too close to the diagonal for a central difference; one-sided forward
  // difference of the same order.
  Matrix d = k.eval(t, tau);
  d *= -3.0;
  Matrix f1 = k.eval(t + h, tau);
  f1 *= 4.0;
  d += f1;
  d -= k.eval(t + 2.0 * h, tau);
  d *= 1.0 / (2.0 * h);
  return d;
}

Vector time_function_dt(const TimeFunction& f, double t) {
  if (t < 0.0) throw std::invalid_argument("time_function_dt: require t >= 0");
  if (f.eval_dt) return f.eval_dt(t);

  const double h = diff_step(t);
  if (t - h >= 0.0) {
    Vector hi = f.eval(t + h);
    Vector lo = f.eval(t - h);
    for (std::size_t i = 0; i < hi.size(); ++i) hi[i] = (hi[i] - lo[i]) / (2.0 * h);
    return hi;
  }
  Vector f0 = f.eval(t);
  Vector f1 = f.eval(t + h);
  Vector f2 = f.eval(t + 2.0 * h);
  for (std::size_t i = 0; i < f0.size(); ++i)
    f0[i] = (-3.0 * f0[i] + 4.0 * f1[i] - f2[i]) / (2.0 * h);
  return f0;
}

IDEProblem ie_to_cauchy(const IEProblem& p) {
  if (p.kernel.dimension != p.dimension || p.forcing.dimension != p.dimension)
    throw std::invalid_argument("ie_to_cauchy: kernel/forcing dimension mismatch");

  IDEProblem q;
  q.dimension = p.dimension;
  q.horizon = p.horizon;
  // The diagonal path takes the kernel value directly, no differentiation.
  q.local_matrix = {[k = p.kernel](double t) { return k.eval(t, t); }, p.dimension};
  q.memory_kernel = KernelFunction{
      [k = p.kernel](double t, double tau) { return kernel_dt(k, t, tau); },
      nullptr, p.dimension};
  q.forcing_dt = TimeFunction{
      [f = p.forcing](double t) { return time_function_dt(f, t); },
      nullptr, p.dimension};
  q.initial = p.forcing.eval(0.0);
  return q;
}

IEProblem builtin_fig1_problem(int set) {
  if (set != 1 && set != 2)
    throw std::invalid_argument("builtin_fig1_problem: set must be 1 or 2");

  const double a11 = -5.0, a12 = 1.0, a21 = 0.5, a22 = -1.0;
  double b11, b12, b21, b22, gamma;
  if (set == 1) {
    b11 = 0.001; b12 = 0.001; b21 = 0.002; b22 = 0.001; gamma = 1.0;
  } else {
    b11 = 0.1; b12 = 0.1; b21 = 0.2; b22 = 0.1; gamma = 0.0;
  }
  const double ln2 = std::log(2.0);

  auto kernel = [=](double t, double tau) {
    Matrix m(2);
    m(0, 0) = a11 * std::exp(-b11 * (t + tau)) / (1.0 + tau * tau) -
              gamma * std::exp(-tau / 100.0);
    m(0, 1) = a12 * std::exp2(-b12 * t) / (1.0 + tau * tau * tau);
    m(1, 0) = a21 * std::exp(-b21 * (t + tau * tau)) / (1.0 + tau * tau * tau * tau);
    m(1, 1) = a22 * std::pow(3.0, -b22 * tau) / (1.0 + tau * tau) -
              gamma * std::exp(-tau / 100.0);
    return m;
  };
  auto kernel_t = [=](double t, double tau) {
    Matrix m(2);
    m(0, 0) = -b11 * a11 * std::exp(-b11 * (t + tau)) / (1.0 + tau * tau);
    m(0, 1) = -b12 * ln2 * a12 * std::exp2(-b12 * t) / (1.0 + tau * tau * tau);
    m(1, 0) = -b21 * a21 * std::exp(-b21 * (t + tau * tau)) /
              (1.0 + tau * tau * tau * tau);
    m(1, 1) = 0.0;
    return m;
  };

  auto forcing = [](double t) {
    return Vector{std::exp(-t / 10.0) - 1.0, 2.0 * std::exp(-t / 50.0) - 2.0};
  };
  auto forcing_t = [](double t) {
    return Vector{-0.1 * std::exp(-t / 10.0), -0.04 * std::exp(-t / 50.0)};
  };

  IEProblem p;
  p.kernel = {kernel, kernel_t, 2};
  p.forcing = {forcing, forcing_t, 2};
  p.dimension = 2;
  p.horizon = 20.0;
  return p;
}

IDEProblem builtin_fig2_problem(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("builtin_fig2_problem: alpha must be > 0");

  auto local = [alpha](double t) {
    Matrix m(2);
    m(0, 0) = -2.0 * alpha;
    m(0, 1) = alpha / (1.0 + t * t);
    m(1, 0) = alpha / (2.0 + t * t);
    m(1, 1) = -2.0 * alpha;
    return m;
  };
  auto memory = [](double t, double tau) {
    Matrix m(2);
    m(0, 0) = 1.0 / (1.0 + t * t + tau * tau);
    m(0, 1) = 1.0 / (1.0 + tau * tau * tau);
    m(1, 0) = t / (2.0 + t * t * t + tau * tau * tau * tau);
    m(1, 1) = 1.0 / (1.0 + tau * tau * tau * tau);
    return m;
  };

  IDEProblem p;
  p.local_matrix = {local, 2};
  p.memory_kernel = KernelFunction{memory, nullptr, 2};
  p.initial = {1.0, 0.0};
  p.dimension = 2;
  p.horizon = 20.0;
  return p;
}

}  // namespace volterra
