#pragma once

#include "qkly/absorption.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace qkly {

class KlyElement;

/// The algebra Kly_{n,q}: Q[u_1..u_n] modulo (q+1)u_i^2 = u_i u_{i+1} + q u_i u_{i-1}, u_0 = u_{n+1} = 0.
/// Squarefree monomials u_S form a basis; products of basis elements are memoized.
class KlyachkoAlgebra : public std::enable_shared_from_this<KlyachkoAlgebra> {
 public:
  static std::shared_ptr<const KlyachkoAlgebra> create(QContext ctx);

  const QContext& ctx() const { return ctx_; }
  int n() const { return ctx_.n(); }

  KlyElement zero() const;
  KlyElement one() const;
  KlyElement basis(Subset s) const;
  /// u_i, 1 <= i <= n.
  KlyElement generator(int i) const;
  /// sum_i coeffs[i-1] u_i
  KlyElement linear(const RationalVector& coeffs) const;

  /// u_S * u_T in the squarefree basis.
  const std::map<Subset, Rational>& product(Subset s, Subset t) const;

  /// (n)_q!
  const Rational& top_degree() const { return top_degree_; }

 private:
  explicit KlyachkoAlgebra(QContext ctx);

  QContext ctx_;
  Rational top_degree_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<std::uint32_t, std::uint32_t>, std::map<Subset, Rational>> products_;
};

/// Element of Kly_{n,q} in the squarefree basis; zero coefficients are never stored.
class KlyElement {
 public:
  explicit KlyElement(std::shared_ptr<const KlyachkoAlgebra> algebra) : algebra_(std::move(algebra)) {}

  const KlyachkoAlgebra& algebra() const { return *algebra_; }
  const std::shared_ptr<const KlyachkoAlgebra>& algebra_ptr() const { return algebra_; }
  const std::map<Subset, Rational>& terms() const { return terms_; }

  Rational coefficient(Subset s) const;
  bool is_zero() const { return terms_.empty(); }
  /// All terms have the same size; the zero element counts as homogeneous.
  bool is_homogeneous() const;

  void add_term(Subset s, const Rational& c);

  friend KlyElement operator+(const KlyElement& a, const KlyElement& b);
  friend KlyElement operator-(const KlyElement& a, const KlyElement& b);
  friend KlyElement operator*(const Rational& c, const KlyElement& a);
  friend KlyElement operator*(const KlyElement& a, const KlyElement& b);
  friend bool operator==(const KlyElement& a, const KlyElement& b);

 private:
  std::shared_ptr<const KlyachkoAlgebra> algebra_;
  std::map<Subset, Rational> terms_;
};

KlyElement kly_multiply(const KlyElement& a, const KlyElement& b);
KlyElement kly_power(const KlyElement& a, int exponent);

class WrongDegreeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Coefficient of u_{[n]} times (n)_q!. Throws WrongDegreeError unless a is homogeneous of degree n
/// (the zero element is accepted and has degree 0).
Rational kly_degree(const KlyElement& a);

/// deg of u^eta, computed from one reduction of eta. Requires sum eta = n.
Rational monomial_degree(const QContext& ctx, const ExponentVector& eta);

/// The same degree computed by multiplying generators one at a time inside the algebra.
Rational monomial_degree_via_algebra(const KlyachkoAlgebra& alg, const ExponentVector& eta);

/// p([n]; eta) = deg(u^eta) / (n)_q!.
Rational prob_exact(const QContext& ctx, const ExponentVector& eta);

/// u_S * u_T expanded in the squarefree basis.
KlyElement structure_constants(const KlyachkoAlgebra& alg, Subset s, Subset t);

/// All exponent vectors of length n with the given total mass, lexicographically descending.
std::vector<ExponentVector> compositions(int n, int mass);

}  // namespace qkly
