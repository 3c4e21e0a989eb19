#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qkly {

/// Exact rational scalar. GMP keeps it canonical (reduced, positive denominator).
using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

/// Parses "a", "-a" or "a/b"; the result is canonicalized. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// "n/d", or "n" when the denominator is 1.
std::string to_string(const Rational& r);

Rational rational_pow(const Rational& base, unsigned exponent);

/// Dense row-major matrix of rationals.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols);
  RationalMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

  static RationalMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  RationalVector column(std::size_t c) const;
  RationalMatrix transpose() const;
  bool is_symmetric() const;

  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b);
  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
  friend RationalVector operator*(const RationalMatrix& a, const RationalVector& x);

  /// Builds a matrix whose columns are the given vectors (all of equal length).
  static RationalMatrix from_columns(const std::vector<RationalVector>& columns, std::size_t rows);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError() : std::runtime_error("matrix is singular") {}
};

class NotSymmetricError : public std::invalid_argument {
 public:
  NotSymmetricError() : std::invalid_argument("matrix is not symmetric") {}
};

enum class SolveStatus { ok, inconsistent, singular };

struct SolveResult {
  SolveStatus status = SolveStatus::ok;
  RationalVector x;  // empty unless status == ok

  explicit operator bool() const { return status == SolveStatus::ok; }
};

/// Solves M x = b exactly. Square matrices must be nonsingular (status `singular` otherwise,
/// or `inconsistent` when no solution exists at all). Rectangular systems return a particular
/// solution (free variables set to zero) or `inconsistent`.
SolveResult solve(const RationalMatrix& m, const RationalVector& b);

/// Solves M X = B for square nonsingular M. Throws SingularMatrixError.
RationalMatrix solve(const RationalMatrix& m, const RationalMatrix& b);

/// Fraction-free (Bareiss) determinant.
Rational det(const RationalMatrix& m);

/// Throws SingularMatrixError.
RationalMatrix inverse(const RationalMatrix& m);

std::size_t rank(const RationalMatrix& m);

/// Basis of the right kernel, one column per vector, in RREF-derived canonical form.
std::vector<RationalVector> nullspace(const RationalMatrix& m);

/// Reduced row echelon form; `pivots` receives the pivot column of each nonzero row.
RationalMatrix rref(const RationalMatrix& m, std::vector<std::size_t>* pivots = nullptr);

enum class Definiteness {
  positive_definite,
  positive_semidefinite,
  negative_definite,
  negative_semidefinite,
  indefinite,
  zero,
};

std::string_view to_string(Definiteness d);

/// Exact inertia classification by symmetric (congruence) elimination. Throws NotSymmetricError.
Definiteness definiteness(const RationalMatrix& s);

/// Number of positive, negative and zero squares in a diagonalization of S by congruence.
struct Inertia {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t zero = 0;
};

Inertia inertia(const RationalMatrix& s);

}  // namespace qkly
