#include "stabcert/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stabcert/config.hpp"

namespace stabcert {

NotMetzlerError::NotMetzlerError(std::size_t row, std::size_t col, double value)
    : Error(ErrorCode::NotMetzler,
            "off-diagonal entry (" + std::to_string(row) + "," + std::to_string(col) +
                ") = " + std::to_string(value) + " is negative"),
      row_(row),
      col_(col),
      value_(value) {}

ZeroPivotError::ZeroPivotError(std::size_t dimension)
    : Error(ErrorCode::ZeroPivot,
            "elimination pivot below tolerance at working dimension " + std::to_string(dimension)),
      dimension_(dimension) {}

TooManyCyclesError::TooManyCyclesError(std::size_t cap)
    : Error(ErrorCode::TooManyCycles,
            "simple-cycle count exceeds cap " + std::to_string(cap)),
      cap_(cap) {}

FileParseError::FileParseError(std::string message, std::size_t line, std::size_t col)
    : Error(ErrorCode::ParseError,
            message + " (line " + std::to_string(line) + ", column " + std::to_string(col) + ")"),
      line_(line),
      col_(col) {}

void AnalysisConfig::validate() const {
  if (tolerance <= 0.0 || tolerance >= 1e-3)
    throw Error(ErrorCode::InvalidArgument, "tolerance must lie in (0, 1e-3)");
  if (cycle_cap < 1) throw Error(ErrorCode::InvalidArgument, "cycle cap must be >= 1");
  if (family_cap < 1) throw Error(ErrorCode::InvalidArgument, "family cap must be >= 1");
}

SquareMatrix::SquareMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {
  if (n == 0) throw Error(ErrorCode::InvalidMatrix, "matrix dimension must be >= 1");
}

SquareMatrix::SquareMatrix(std::size_t n, std::vector<double> entries)
    : n_(n), a_(std::move(entries)) {
  if (n == 0) throw Error(ErrorCode::InvalidMatrix, "matrix dimension must be >= 1");
  if (a_.size() != n * n)
    throw Error(ErrorCode::InvalidMatrix, "entry count does not match dimension");
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      if (!std::isfinite(a_[i * n_ + j]))
        throw Error(ErrorCode::InvalidMatrix, "entry (" + std::to_string(i + 1) + "," +
                                                  std::to_string(j + 1) + ") is not finite");
}

SquareMatrix SquareMatrix::identity(std::size_t n) {
  SquareMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

SquareMatrix SquareMatrix::diagonal(std::span<const double> d) {
  SquareMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

double SquareMatrix::inf_norm() const {
  double best = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n_; ++j) row += std::abs(a_[i * n_ + j]);
    best = std::max(best, row);
  }
  return best;
}

SquareMatrix SquareMatrix::negated() const {
  SquareMatrix r(n_);
  for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = -a_[k];
  return r;
}

SquareMatrix SquareMatrix::transposed() const {
  SquareMatrix r(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) r(j, i) = a_[i * n_ + j];
  return r;
}

MetzlerMatrix validate_metzler(SquareMatrix m) {
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && m(i, j) < 0.0) throw NotMetzlerError(i + 1, j + 1, m(i, j));
  return MetzlerMatrix(std::move(m));
}

SquareMatrix leading_submatrix(const SquareMatrix& m, std::size_t prefix) {
  if (prefix < 1 || prefix > m.size())
    throw Error(ErrorCode::IndexOutOfRange,
                "leading prefix " + std::to_string(prefix) + " outside [1, " +
                    std::to_string(m.size()) + "]");
  SquareMatrix r(prefix);
  for (std::size_t i = 0; i < prefix; ++i)
    for (std::size_t j = 0; j < prefix; ++j) r(i, j) = m(i, j);
  return r;
}

SquareMatrix principal_submatrix(const SquareMatrix& m, std::span<const std::size_t> idx) {
  if (idx.empty()) throw Error(ErrorCode::InvalidArgument, "empty index set");
  SquareMatrix r(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= m.size()) throw Error(ErrorCode::IndexOutOfRange, "index outside matrix");
    for (std::size_t j = 0; j < idx.size(); ++j) r(i, j) = m(idx[i], idx[j]);
  }
  return r;
}

namespace {

struct LuFactors {
  std::size_t n = 0;
  std::vector<double> a;        // packed L (unit diagonal) and U
  std::vector<std::size_t> piv; // row swaps applied at each column
  int sign = 1;
  bool singular = false;
};

LuFactors lu_factor(const SquareMatrix& m) {
  LuFactors f;
  f.n = m.size();
  f.a.assign(m.data().begin(), m.data().end());
  f.piv.resize(f.n);
  const double tol = kPivotRelTol * m.inf_norm();

  for (std::size_t k = 0; k < f.n; ++k) {
    std::size_t p = k;
    double best = std::abs(f.a[k * f.n + k]);
    for (std::size_t i = k + 1; i < f.n; ++i) {
      const double v = std::abs(f.a[i * f.n + k]);
      if (v > best) {
        best = v;
        p = i;
      }
    }
    f.piv[k] = p;
    if (best <= tol) {
      f.singular = true;
      return f;
    }
    if (p != k) {
      for (std::size_t j = 0; j < f.n; ++j) std::swap(f.a[k * f.n + j], f.a[p * f.n + j]);
      f.sign = -f.sign;
    }
    const double d = f.a[k * f.n + k];
    for (std::size_t i = k + 1; i < f.n; ++i) {
      const double l = f.a[i * f.n + k] / d;
      f.a[i * f.n + k] = l;
      for (std::size_t j = k + 1; j < f.n; ++j) f.a[i * f.n + j] -= l * f.a[k * f.n + j];
    }
  }
  return f;
}

std::vector<double> lu_solve(const LuFactors& f, std::span<const double> b) {
  std::vector<double> x(b.begin(), b.end());
  // The packed factors carry every row swap, so permute b before the sweeps.
  for (std::size_t k = 0; k < f.n; ++k)
    if (f.piv[k] != k) std::swap(x[k], x[f.piv[k]]);
  for (std::size_t k = 0; k < f.n; ++k)
    for (std::size_t i = k + 1; i < f.n; ++i) x[i] -= f.a[i * f.n + k] * x[k];
  for (std::size_t k = f.n; k-- > 0;) {
    for (std::size_t j = k + 1; j < f.n; ++j) x[k] -= f.a[k * f.n + j] * x[j];
    x[k] /= f.a[k * f.n + k];
  }
  return x;
}

void check_residual(const SquareMatrix& a, std::span<const double> x, std::span<const double> b,
                    bool transposed) {
  const std::size_t n = a.size();
  double bnorm = 0.0;
  for (double v : b) bnorm = std::max(bnorm, std::abs(v));
  double resid = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += (transposed ? a(j, i) : a(i, j)) * x[j];
    resid = std::max(resid, std::abs(s - b[i]));
  }
  if (resid > 1e-8 * (1.0 + bnorm))
    throw Error(ErrorCode::SingularMatrix,
                "solve residual " + std::to_string(resid) + " exceeds bound; matrix is "
                "singular or too ill-conditioned");
}

}  // namespace

double determinant_lu(const SquareMatrix& m) {
  LuFactors f = lu_factor(m);
  if (f.singular) return 0.0;
  double det = f.sign;
  for (std::size_t k = 0; k < f.n; ++k) det *= f.a[k * f.n + k];
  return det;
}

SquareMatrix schur_reduce(const SquareMatrix& working) {
  const std::size_t k = working.size();
  if (k < 2)
    throw Error(ErrorCode::InvalidArgument, "Schur reduction needs dimension >= 2");
  const double d = working(k - 1, k - 1);
  if (std::abs(d) <= kPivotRelTol * working.inf_norm()) throw ZeroPivotError(k);
  SquareMatrix r(k - 1);
  for (std::size_t i = 0; i + 1 < k; ++i)
    for (std::size_t j = 0; j + 1 < k; ++j)
      r(i, j) = working(i, j) - working(i, k - 1) * working(k - 1, j) / d;
  return r;
}

std::vector<double> solve_linear(const SquareMatrix& a, std::span<const double> b) {
  if (b.size() != a.size())
    throw Error(ErrorCode::InvalidArgument, "right-hand side length mismatch");
  LuFactors f = lu_factor(a);
  if (f.singular) throw Error(ErrorCode::SingularMatrix, "pivot below tolerance");
  std::vector<double> x = lu_solve(f, b);
  check_residual(a, x, b, false);
  return x;
}

std::vector<double> solve_linear_transposed(const SquareMatrix& a, std::span<const double> b) {
  if (b.size() != a.size())
    throw Error(ErrorCode::InvalidArgument, "right-hand side length mismatch");
  LuFactors f = lu_factor(a.transposed());
  if (f.singular) throw Error(ErrorCode::SingularMatrix, "pivot below tolerance");
  std::vector<double> x = lu_solve(f, b);
  check_residual(a, x, b, true);
  return x;
}

}  // namespace stabcert
