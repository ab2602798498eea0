#include "volterra/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace volterra {

NormKind norm_kind_from_string(const std::string& name) {
  if (name == "l1") return NormKind::L1;
  if (name == "max") return NormKind::Max;
  if (name == "l2") return NormKind::Euclid;
  throw std::invalid_argument("unknown norm kind '" + name + "' (expected l1, max or l2)");
}

std::string to_string(NormKind kind) {
  switch (kind) {
    case NormKind::L1: return "l1";
    case NormKind::Max: return "max";
    case NormKind::Euclid: return "l2";
  }
  return "?";
}

Matrix::Matrix(std::size_t n, double value) : n_(n), a_(n * n, value) {
  if (n == 0) throw std::invalid_argument("matrix dimension must be >= 1");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : n_(rows.size()), a_() {
  if (n_ == 0) throw std::invalid_argument("matrix dimension must be >= 1");
  a_.reserve(n_ * n_);
  for (const auto& row : rows) {
    if (row.size() != n_) throw std::invalid_argument("matrix initializer is not square");
    a_.insert(a_.end(), row.begin(), row.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool Matrix::is_finite() const {
  return std::all_of(a_.begin(), a_.end(), [](double x) { return std::isfinite(x); });
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
  if (rhs.n_ != n_) throw std::invalid_argument("matrix dimension mismatch");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += rhs.a_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
  if (rhs.n_ != n_) throw std::invalid_argument("matrix dimension mismatch");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= rhs.a_[k];
  return *this;
}

Matrix& Matrix::operator*=(double c) {
  for (double& x : a_) x *= c;
  return *this;
}

Vector operator*(const Matrix& m, const Vector& x) {
  const std::size_t n = m.dim();
  if (x.size() != n) throw std::invalid_argument("matrix-vector dimension mismatch");
  Vector y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += m(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

double vector_norm(const Vector& v, NormKind kind) {
  switch (kind) {
    case NormKind::L1: {
      double s = 0.0;
      for (double x : v) s += std::abs(x);
      return s;
    }
    case NormKind::Max: {
      double s = 0.0;
      for (double x : v) s = std::max(s, std::abs(x));
      return s;
    }
    case NormKind::Euclid: {
      double s = 0.0;
      for (double x : v) s += x * x;
      return std::sqrt(s);
    }
  }
  return 0.0;
}

namespace {

double frobenius_norm(const Matrix& m) {
  double s = 0.0;
  const std::size_t n = m.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s += m(i, j) * m(i, j);
  return std::sqrt(s);
}

double offdiag_frobenius(const Matrix& m) {
  double s = 0.0;
  const std::size_t n = m.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) s += m(i, j) * m(i, j);
  return std::sqrt(s);
}

}  // namespace

double symmetric_eigen_max(const Matrix& m) {
  const std::size_t n = m.dim();
  const double frob = frobenius_norm(m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(m(i, j) - m(j, i)) > 1e-12 * std::max(1.0, frob))
        throw std::invalid_argument("symmetric_eigen_max: matrix is not symmetric");

  if (n == 1) return m(0, 0);

  Matrix a = m;
  const double tol = 1e-12 * frob;
  constexpr int kMaxSweeps = 100;

  for (int sweep = 0; sweep <= kMaxSweeps; ++sweep) {
    if (offdiag_frobenius(a) <= tol) {
      double lmax = a(0, 0);
      for (std::size_t i = 1; i < n; ++i) lmax = std::max(lmax, a(i, i));
      return lmax;
    }
    if (sweep == kMaxSweeps) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        const double app = a(p, p), aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (i == p || i == q) continue;
          const double aip = a(i, p), aiq = a(i, q);
          a(i, p) = a(p, i) = c * aip - s * aiq;
          a(i, q) = a(q, i) = s * aip + c * aiq;
        }
      }
    }
  }
  throw std::runtime_error("symmetric_eigen_max: Jacobi iteration did not converge");
}

double matrix_operator_norm(const Matrix& m, NormKind kind) {
  const std::size_t n = m.dim();
  switch (kind) {
    case NormKind::L1: {
      double best = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += std::abs(m(i, j));
        best = std::max(best, s);
      }
      return best;
    }
    case NormKind::Max: {
      double best = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += std::abs(m(i, j));
        best = std::max(best, s);
      }
      return best;
    }
    case NormKind::Euclid: {
      // Largest singular value via the Gram matrix; m^T m is symmetric by
      // construction, entry (i,j) and (j,i) are the same sum.
      Matrix gram(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          double s = 0.0;
          for (std::size_t k = 0; k < n; ++k) s += m(k, i) * m(k, j);
          gram(i, j) = s;
        }
      return std::sqrt(std::max(0.0, symmetric_eigen_max(gram)));
    }
  }
  return 0.0;
}

double log_norm(const Matrix& m, NormKind kind) {
  const std::size_t n = m.dim();
  switch (kind) {
    case NormKind::L1: {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < n; ++j) {
        double s = m(j, j);
        for (std::size_t i = 0; i < n; ++i)
          if (i != j) s += std::abs(m(i, j));
        best = std::max(best, s);
      }
      return best;
    }
    case NormKind::Max: {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i) {
        double s = m(i, i);
        for (std::size_t j = 0; j < n; ++j)
          if (j != i) s += std::abs(m(i, j));
        best = std::max(best, s);
      }
      return best;
    }
    case NormKind::Euclid: {
      Matrix sym(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) sym(i, j) = 0.5 * (m(i, j) + m(j, i));
      return symmetric_eigen_max(sym);
    }
  }
  return 0.0;
}

double log_norm_limit_estimate(const Matrix& m, NormKind kind, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("log_norm_limit_estimate: h must be positive");
  const std::size_t n = m.dim();
  Matrix shifted = m;
  shifted *= h;
  for (std::size_t i = 0; i < n; ++i) shifted(i, i) += 1.0;
  return (matrix_operator_norm(shifted, kind) - 1.0) / h;
}

}  // namespace volterra
