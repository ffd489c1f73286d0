#ifndef STABCERT_MATRIX_HPP
#define STABCERT_MATRIX_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "stabcert/errors.hpp"

namespace stabcert {

/// Relative pivot threshold for LU factorization and Schur elimination,
/// applied against the matrix infinity norm.
inline constexpr double kPivotRelTol = 1e-12;

/// Dense real square matrix, row-major, value semantics. Entries must be
/// finite; construction rejects NaN and infinities.
class SquareMatrix {
 public:
  explicit SquareMatrix(std::size_t n);
  SquareMatrix(std::size_t n, std::vector<double> entries);

  static SquareMatrix identity(std::size_t n);
  static SquareMatrix diagonal(std::span<const double> d);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  std::span<const double> data() const noexcept { return a_; }

  /// max_i sum_j |a_ij|
  double inf_norm() const;

  SquareMatrix negated() const;
  SquareMatrix transposed() const;

  bool operator==(const SquareMatrix&) const = default;

 private:
  std::size_t n_;
  std::vector<double> a_;
};

/// A square matrix whose off-diagonal entries were all verified nonnegative
/// (exact comparison, no tolerance). Construct via validate_metzler.
class MetzlerMatrix {
 public:
  const SquareMatrix& base() const noexcept { return m_; }
  std::size_t size() const noexcept { return m_.size(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

  friend MetzlerMatrix validate_metzler(SquareMatrix m);

 private:
  explicit MetzlerMatrix(SquareMatrix m) : m_(std::move(m)) {}
  SquareMatrix m_;
};

/// Throws NotMetzlerError (1-based indices) on the first negative
/// off-diagonal entry, scanning in row-major order.
MetzlerMatrix validate_metzler(SquareMatrix m);

/// Top-left prefix x prefix block; prefix is 1-based and must lie in [1, n].
SquareMatrix leading_submatrix(const SquareMatrix& m, std::size_t prefix);

/// Principal submatrix picking the given rows/columns (0-based, strictly
/// increasing).
SquareMatrix principal_submatrix(const SquareMatrix& m, std::span<const std::size_t> idx);

/// Determinant via Gaussian elimination with partial pivoting. Returns an
/// exact 0.0 when some pivot column falls entirely below the pivot threshold.
double determinant_lu(const SquareMatrix& m);

/// One Schur elimination step: for a k x k working matrix (k >= 2) with last
/// diagonal entry d, returns the (k-1) x (k-1) complement  M_{k-1} - b c^T / d.
/// Throws ZeroPivotError(k) when |d| is below the pivot threshold.
SquareMatrix schur_reduce(const SquareMatrix& working);

/// Dense solve a x = b via LU with partial pivoting. Throws
/// Error(SingularMatrix) when a pivot degenerates or the residual exceeds
/// 1e-8 * (1 + |b|_inf).
std::vector<double> solve_linear(const SquareMatrix& a, std::span<const double> b);

/// Same contract for a^T x = b, without forming the transpose.
std::vector<double> solve_linear_transposed(const SquareMatrix& a, std::span<const double> b);

}  // namespace stabcert

#endif
