#pragma once

#include "qkly/exactla.hpp"

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace qkly {

/// Number of generators n and the deformation parameter q > 0.
class QContext {
 public:
  QContext(int n, Rational q);

  int n() const { return n_; }
  const Rational& q() const { return q_; }

  friend bool operator==(const QContext& a, const QContext& b) { return a.n_ == b.n_ && a.q_ == b.q_; }

 private:
  int n_;
  Rational q_;
};

/// Upper bound on n for anything that enumerates all subsets of [n].
inline constexpr int kMaxSubsetN = 12;

class SizeGuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A subset of [n] = {1, ..., n}; bit i-1 holds element i.
struct Subset {
  std::uint32_t bits = 0;

  static Subset of(std::initializer_list<int> elements);
  static Subset full(int n) { return {n == 0 ? 0u : ((1u << n) - 1u)}; }

  bool contains(int i) const { return (bits >> (i - 1)) & 1u; }
  int size() const { return std::popcount(bits); }
  bool empty() const { return bits == 0; }
  std::vector<int> elements() const;

  Subset with(int i) const { return {bits | (1u << (i - 1))}; }
  friend Subset operator|(Subset a, Subset b) { return {a.bits | b.bits}; }
  friend Subset operator&(Subset a, Subset b) { return {a.bits & b.bits}; }
  friend bool operator==(Subset a, Subset b) = default;
  friend auto operator<=>(Subset a, Subset b) = default;
};

/// All subsets of [n], or those of a fixed size, in increasing bit order. Refuses n > kMaxSubsetN.
std::vector<Subset> all_subsets(int n);
std::vector<Subset> subsets_of_size(int n, int k);

/// (m)_q = 1 + q + ... + q^(m-1), evaluated as a sum.
Rational q_int(int m, const Rational& q);
Rational q_factorial(int m, const Rational& q);

/// Tridiagonal n x n matrix: q+1 on the diagonal, -1 above, -q below.
RationalMatrix build_A(const QContext& ctx);

/// Principal submatrix A_J, rows and columns in increasing order of J.
RationalMatrix principal_submatrix(const RationalMatrix& a, Subset j);

struct AMatrixReport {
  Rational det;
  bool det_ok = false;
  bool submatrices_nonsingular = false;
  bool inverse_positive = false;
  bool submatrix_inverses_nonnegative = false;

  bool all() const {
    return det_ok && submatrices_nonsingular && inverse_positive && submatrix_inverses_nonnegative;
  }
};

/// Exhaustive over all 2^n principal submatrices.
AMatrixReport check_A_properties(const QContext& ctx);

}  // namespace qkly
