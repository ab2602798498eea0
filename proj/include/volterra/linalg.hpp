#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace volterra {

/// Dense real vector. Dimension is its size; entries are expected finite.
using Vector = std::vector<double>;

/// Vector norm selector.
///
/// Some references on logarithmic norms number the max norm as no. 2 and the
/// Euclidean norm as no. 3; to avoid that ambiguity the max norm is named Max
/// here. The CLI spells the kinds l1 | max | l2, where l2 is the Euclidean
/// norm.
enum class NormKind { L1, Max, Euclid };

NormKind norm_kind_from_string(const std::string& name);
std::string to_string(NormKind kind);

/// Dense square matrix, row-major. Small dimensions (n <= ~50) are assumed;
/// no attempt is made at blocking or sparsity.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n, double value = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t dim() const { return n_; }

  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  Matrix transpose() const;
  bool is_finite() const;

  Matrix& operator+=(const Matrix& rhs);
  Matrix& operator-=(const Matrix& rhs);
  Matrix& operator*=(double c);

  friend Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
  friend Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
  friend Matrix operator*(Matrix m, double c) { return m *= c; }
  friend Matrix operator*(double c, Matrix m) { return m *= c; }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.n_ == b.n_ && a.a_ == b.a_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

/// y = m x.
Vector operator*(const Matrix& m, const Vector& x);

double vector_norm(const Vector& v, NormKind kind);

/// Induced (operator) matrix norm compatible with vector_norm: max column
/// abs-sum (L1), max row abs-sum (Max), largest singular value (Euclid).
double matrix_operator_norm(const Matrix& m, NormKind kind);

/// Logarithmic norm of a square matrix. May be negative. Closed forms for
/// L1 and Max; for Euclid the largest eigenvalue of the symmetric part.
double log_norm(const Matrix& m, NormKind kind);

/// Largest eigenvalue of a symmetric matrix via cyclic Jacobi rotations.
/// Requires symmetry within 1e-12 relative; stops once the off-diagonal
/// Frobenius norm falls below 1e-12 * ||m||_F, capped at 100 sweeps.
double symmetric_eigen_max(const Matrix& m);

/// Finite-h evaluation (||I + h m|| - 1)/h of the limit that defines the
/// logarithmic norm. Converges to log_norm(m, kind) as h decreases; used as
/// an independent cross-check of the closed forms.
double log_norm_limit_estimate(const Matrix& m, NormKind kind, double h);

}  // namespace volterra
