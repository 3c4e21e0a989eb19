#pragma once

#include "qkly/klyachko.hpp"

#include <vector>

namespace qkly {

/// A class sum a_i u_i with every a_i > 0, i.e. a point of the open cone K_{n,q}.
class LefschetzClass {
 public:
  /// Throws std::invalid_argument if some coefficient is not strictly positive.
  explicit LefschetzClass(RationalVector coefficients);

  static LefschetzClass uniform(int n) { return LefschetzClass(RationalVector(n, Rational(1))); }

  const RationalVector& coefficients() const { return coeffs_; }
  LefschetzClass scaled(const Rational& c) const;

 private:
  RationalVector coeffs_;
};

/// Squarefree basis of Kly^k, subsets in increasing bit order.
std::vector<Subset> degree_basis(int n, int k);

/// Matrix of (m_i, m_j) -> deg(ell^{n-2k} m_i m_j) over the size-k basis.
RationalMatrix pairing_matrix(const KlyachkoAlgebra& alg, int k, const LefschetzClass& ell);

/// Matrix of deg(m_i m'_j), m_i in Kly^k, m'_j in Kly^{n-k}.
RationalMatrix poincare_matrix(const KlyachkoAlgebra& alg, int k);

/// Matrix of multiplication by `factor`: Kly^k -> Kly^{k + deg factor}, columns indexed by the
/// degree-k basis.
RationalMatrix multiplication_matrix(const KlyachkoAlgebra& alg, int k, int factor_degree,
                                     const KlyElement& factor);

struct DegreeCheck {
  int k = 0;
  bool pass = false;
  Rational witness;  // determinant of the matrix or form that was tested
  std::size_t primitive_dim = 0;  // HR only
};

std::vector<DegreeCheck> check_poincare(const KlyachkoAlgebra& alg);
std::vector<DegreeCheck> check_hl(const KlyachkoAlgebra& alg, const LefschetzClass& ell);
std::vector<DegreeCheck> check_hr(const KlyachkoAlgebra& alg, const LefschetzClass& ell);

/// Basis of the primitive subspace ker(x ell^{n-2k+1}) inside Kly^k, as coordinate columns.
std::vector<RationalVector> primitive_basis(const KlyachkoAlgebra& alg, int k, const LefschetzClass& ell);

/// Gram matrix of (-1)^k deg(ell^{n-2k} a b) on the primitive subspace.
RationalMatrix hodge_riemann_form(const KlyachkoAlgebra& alg, int k, const LefschetzClass& ell);

/// Coefficient of x^eta in deg((x_1 u_1 + ... + x_n u_n)^n), keyed by eta.
using VolumePolynomial = std::map<ExponentVector, Rational>;

VolumePolynomial volume_polynomial(const KlyachkoAlgebra& alg);

/// sum_eta p([n]; eta) x^eta over all eta of mass n on [n].
VolumePolynomial probability_polynomial(const KlyachkoAlgebra& alg);

/// n! / prod eta(i)!
Rational multinomial(const ExponentVector& eta);

struct LogConcavityViolation {
  ExponentVector eta;
  int site = 0;
  int other_site = 0;  // exchange form only
  Rational lhs;  // p(eta)^2
  Rational rhs;  // p(eta - d_i + d_{i-1}) * p(eta - d_i + d_{i+1}), or the exchange product
};

/// p(eta)^2 >= p(eta - d_i + d_{i-1}) p(eta - d_i + d_{i+1}), exhaustive over eta of mass n on
/// [n] and sites with eta(i) >= 2; neighbours outside [n] count as 0.
std::vector<LogConcavityViolation> check_log_concavity(const KlyachkoAlgebra& alg);

/// p(eta)^2 >= p(eta + d_i - d_j) p(eta - d_i + d_j) for all i != j with eta(i), eta(j) >= 1
/// (the Alexandrov-Fenchel shape of the same data).
std::vector<LogConcavityViolation> check_exchange_log_concavity(const KlyachkoAlgebra& alg);

}  // namespace qkly
