#pragma once

#include "qkly/exactla.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace qkly {

/// Arithmetic in the field with q elements, q in {2, 3, 4, 5}. Elements are 0..q-1; for q = 4
/// the element b1*2 + b0 stands for b1*w + b0 with w^2 = w + 1.
class FiniteField {
 public:
  explicit FiniteField(int q);

  int order() const { return q_; }
  std::uint8_t add(std::uint8_t a, std::uint8_t b) const { return add_[a][b]; }
  std::uint8_t mul(std::uint8_t a, std::uint8_t b) const { return mul_[a][b]; }
  std::uint8_t neg(std::uint8_t a) const { return neg_[a]; }
  std::uint8_t inv(std::uint8_t a) const;
  std::uint8_t sub(std::uint8_t a, std::uint8_t b) const { return add(a, neg(b)); }

 private:
  int q_;
  std::uint8_t add_[5][5]{};
  std::uint8_t mul_[5][5]{};
  std::uint8_t neg_[5]{};
};

/// A nonzero proper subspace of F_q^{n+1}, i.e. a projective subspace of PG(n,q), stored by its
/// reduced row echelon basis.
struct Flat {
  int rank = 0;  // linear dimension; points have rank 1, hyperplanes rank n
  std::vector<std::vector<std::uint8_t>> rows;

  friend auto operator<=>(const Flat&, const Flat&) = default;
};

/// Proper nonzero subspaces of F_q^{n+1}, ordered by rank, with the containment relation.
class FlatLattice {
 public:
  int n() const { return n_; }
  int q() const { return field_.order(); }
  const FiniteField& field() const { return field_; }

  std::size_t size() const { return flats_.size(); }
  const Flat& flat(std::size_t i) const { return flats_[i]; }
  const std::vector<std::size_t>& of_rank(int r) const { return by_rank_.at(r); }
  /// Flat i is contained in flat j (reflexive).
  bool contains(std::size_t i, std::size_t j) const { return le_[i][j]; }
  bool comparable(std::size_t i, std::size_t j) const { return le_[i][j] || le_[j][i]; }
  /// codim in P^n: n + 1 - rank, so points have codim n and hyperplanes codim 1.
  int codim(std::size_t i) const { return n_ + 1 - flats_[i].rank; }

  std::vector<std::size_t> hyperplanes() const { return by_rank_.at(n_); }

  friend FlatLattice enumerate_flats(int n, int q);

 private:
  FlatLattice(int n, int q) : n_(n), field_(q) {}

  int n_;
  FiniteField field_;
  std::vector<Flat> flats_;
  std::map<int, std::vector<std::size_t>> by_rank_;
  std::vector<std::vector<bool>> le_;
};

/// Refuses anything outside q in {2,3,4,5}, 1 <= n <= 3.
FlatLattice enumerate_flats(int n, int q);

/// Gaussian binomial [m choose r]_q.
mpz_class gaussian_binomial(int m, int r, int q);

/// A monomial in the x_F: sorted flat indices with repetition.
using ChowMonomial = std::vector<std::size_t>;
using ChowPolynomial = std::map<ChowMonomial, Rational>;

/// Element of CH^k, as coordinates in the basis chosen by ChowRing::piece(k).
struct ChowClass {
  int degree = 0;
  RationalVector coords;

  bool is_zero() const;
  friend bool operator==(const ChowClass&, const ChowClass&) = default;
};

/// Chow ring of PG(n,q): Q[x_F] modulo sum_{F in H} x_F - sum_{F in H'} x_F and x_F x_G for
/// incomparable F, G. Each graded piece is built as chain-supported monomials modulo the
/// projected degree-k part of the linear relations, by exact sparse elimination.
class ChowRing {
 public:
  explicit ChowRing(FlatLattice lattice);

  const FlatLattice& lattice() const { return lattice_; }
  int n() const { return lattice_.n(); }

  struct GradedPiece {
    std::vector<ChowMonomial> monomials;
    std::map<ChowMonomial, std::size_t> index;
    /// Pivot column -> reduced relation row (leading entry 1 at the pivot).
    std::map<std::size_t, std::map<std::size_t, Rational>> relations;
    /// Non-pivot columns; their monomials form a basis of CH^k.
    std::vector<std::size_t> basis_columns;
  };

  /// CH^k data; built on first use. 0 <= k <= n.
  const GradedPiece& piece(int k) const;
  std::size_t dim(int k) const { return piece(k).basis_columns.size(); }

  bool is_chain(const ChowMonomial& m) const;

  /// Normal form of a homogeneous degree-k polynomial (non-chain terms are dropped).
  ChowClass normal_form(int k, const ChowPolynomial& p) const;
  /// Polynomial built from the basis monomials of `c`.
  ChowPolynomial representative(const ChowClass& c) const;

  ChowClass multiply(const ChowClass& a, const ChowClass& b) const;
  ChowClass add(const ChowClass& a, const ChowClass& b) const;
  ChowClass scale(const Rational& s, const ChowClass& a) const;
  ChowClass power(const ChowClass& a, int e) const;
  ChowClass zero(int k) const;
  ChowClass one() const;

  /// x_F
  ChowClass variable(std::size_t flat) const;

  /// sum_{F subset H} x_F.
  ChowClass alpha_for_hyperplane(std::size_t hyperplane) const;

 private:
  FlatLattice lattice_;
  mutable std::map<int, std::unique_ptr<GradedPiece>> pieces_;
};

/// alpha for the first hyperplane; use alpha_hyperplane_independent to confirm the choice is moot.
ChowClass class_alpha(const ChowRing& ring);
bool alpha_hyperplane_independent(const ChowRing& ring);

/// L_i = (n+1-i)_q alpha - sum_{codim F >= i} (codim F - i)_q x_F, 1 <= i <= n.
ChowClass class_L(const ChowRing& ring, int i);
/// gamma_i = ((n+1)_q - (i)_q) alpha - sum_{codim F >= i} ((codim F)_q - (i)_q) x_F, 1 <= i <= n.
ChowClass class_gamma(const ChowRing& ring, int i);

/// gamma_i == q^i L_i, per i = 1..n.
std::vector<bool> verify_gamma_L(const ChowRing& ring);
/// (q+1) g_i^2 == g_i g_{i+1} + q g_i g_{i-1} with g_0 = g_{n+1} = 0, per i.
std::vector<bool> verify_klyachko_relation(const ChowRing& ring);
/// (q+1) L_i^2 == q L_i L_{i+1} + L_i L_{i-1} with L_0 = L_{n+1} = 0, per i.
std::vector<bool> verify_L_relation(const ChowRing& ring);

class ChowWrongDegreeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Degree on CH^n normalized so that deg(alpha^n) = 1.
Rational chow_degree(const ChowRing& ring, const ChowClass& c);

struct AssignmentReport {
  std::string name;                // "u_i -> L_i", ...
  std::vector<int> target_index;   // u_i -> L_{target_index[i-1]}; 0 or n+1 means the zero class
  bool relations_hold = false;
  std::vector<std::size_t> subalgebra_dims;
  bool dims_ok = false;
  bool degrees_proportional = false;
  Rational degree_constant;        // chow_degree(image of u^eta) / deg_{n,q}(u^eta)
  bool passes() const { return relations_hold && dims_ok && degrees_proportional; }
};

struct Theorem1Report {
  std::vector<AssignmentReport> candidates;
  std::vector<bool> L_relation;
  std::vector<std::string> passing;
};

/// Tests u_i -> L_i, u_i -> L_{n-i}, u_i -> L_{n+1-i} against the q-Klyachko relations, the
/// graded dimensions of the generated subalgebra, and degree agreement up to one constant.
Theorem1Report verify_theorem1(const ChowRing& ring);

}  // namespace qkly
