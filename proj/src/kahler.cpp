#include "qkly/kahler.hpp"

namespace qkly {

LefschetzClass::LefschetzClass(RationalVector coefficients) : coeffs_(std::move(coefficients)) {
  if (coeffs_.empty()) throw std::invalid_argument("Lefschetz class needs at least one coefficient");
  for (const auto& a : coeffs_)
    if (sgn(a) <= 0) throw std::invalid_argument("Lefschetz class must lie in the open cone: all a_i > 0");
}

LefschetzClass LefschetzClass::scaled(const Rational& c) const {
  RationalVector v = coeffs_;
  for (auto& a : v) a *= c;
  return LefschetzClass(std::move(v));
}

std::vector<Subset> degree_basis(int n, int k) { return subsets_of_size(n, k); }

namespace {

void require_k(const KlyachkoAlgebra& alg, int k) {
  if (k < 0 || 2 * k > alg.n()) throw std::out_of_range("degree k must satisfy 0 <= k <= n/2");
}

KlyElement as_element(const KlyachkoAlgebra& alg, const LefschetzClass& ell) {
  if (static_cast<int>(ell.coefficients().size()) != alg.n())
    throw std::invalid_argument("Lefschetz class has wrong length");
  return alg.linear(ell.coefficients());
}

// Coordinates of a homogeneous element in the degree-k basis.
RationalVector coordinates(const KlyElement& e, const std::vector<Subset>& basis) {
  RationalVector v(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) v[i] = e.coefficient(basis[i]);
  return v;
}

}  // namespace

RationalMatrix pairing_matrix(const KlyachkoAlgebra& alg, int k, const LefschetzClass& ell) {
  require_k(alg, k);
  const KlyElement power = kly_power(as_element(alg, ell), alg.n() - 2 * k);
  const auto basis = degree_basis(alg.n(), k);
  std::vector<KlyElement> scaled;
  scaled.reserve(basis.size());
  for (Subset s : basis) scaled.push_back(kly_multiply(power, alg.basis(s)));
  RationalMatrix m(basis.size(), basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i; j < basis.size(); ++j) {
      m(i, j) = kly_degree(kly_multiply(scaled[i], alg.basis(basis[j])));
      m(j, i) = m(i, j);
    }
  return m;
}

RationalMatrix poincare_matrix(const KlyachkoAlgebra& alg, int k) {
  const auto low = degree_basis(alg.n(), k);
  const auto high = degree_basis(alg.n(), alg.n() - k);
  RationalMatrix m(low.size(), high.size());
  for (std::size_t i = 0; i < low.size(); ++i)
    for (std::size_t j = 0; j < high.size(); ++j)
      m(i, j) = kly_degree(structure_constants(alg, low[i], high[j]));
  return m;
}

RationalMatrix multiplication_matrix(const KlyachkoAlgebra& alg, int k, int factor_degree,
                                     const KlyElement& factor) {
  const auto source = degree_basis(alg.n(), k);
  const int target_degree = k + factor_degree;
  const auto target = target_degree <= alg.n() ? degree_basis(alg.n(), target_degree) : std::vector<Subset>{};
  RationalMatrix m(target.size(), source.size());
  for (std::size_t j = 0; j < source.size(); ++j) {
    KlyElement image = kly_multiply(factor, alg.basis(source[j]));
    if (!image.is_homogeneous()) throw std::logic_error("multiplication factor is not homogeneous");
    RationalVector col = coordinates(image, target);
    for (std::size_t i = 0; i < target.size(); ++i) m(i, j) = col[i];
  }
  return m;
}

std::vector<DegreeCheck> check_poincare(const KlyachkoAlgebra& alg) {
  std::vector<DegreeCheck> out;
  for (int k = 0; 2 * k <= alg.n(); ++k) {
    RationalMatrix m = poincare_matrix(alg, k);
    DegreeCheck c;
    c.k = k;
    if (m.is_square()) {
      c.witness = det(m);
      c.pass = sgn(c.witness) != 0;
    }
    out.push_back(c);
  }
  return out;
}

std::vector<DegreeCheck> check_hl(const KlyachkoAlgebra& alg, const LefschetzClass& ell) {
  std::vector<DegreeCheck> out;
  for (int k = 0; 2 * k <= alg.n(); ++k) {
    DegreeCheck c;
    c.k = k;
    c.witness = det(pairing_matrix(alg, k, ell));
    c.pass = sgn(c.witness) != 0;
    out.push_back(c);
  }
  return out;
}

std::vector<RationalVector> primitive_basis(const KlyachkoAlgebra& alg, int k, const LefschetzClass& ell) {
  require_k(alg, k);
  const int power = alg.n() - 2 * k + 1;
  const KlyElement factor = kly_power(as_element(alg, ell), power);
  RationalMatrix m = multiplication_matrix(alg, k, power, factor);
  if (m.rows() == 0) {
    // Target degree exceeds n: the whole of Kly^k is primitive.
    const std::size_t dim = degree_basis(alg.n(), k).size();
    std::vector<RationalVector> basis;
    for (std::size_t i = 0; i < dim; ++i) {
      RationalVector v(dim);
      v[i] = 1;
      basis.push_back(std::move(v));
    }
    return basis;
  }
  return nullspace(m);
}

RationalMatrix hodge_riemann_form(const KlyachkoAlgebra& alg, int k, const LefschetzClass& ell) {
  const RationalMatrix q = pairing_matrix(alg, k, ell);
  const auto prim = primitive_basis(alg, k, ell);
  RationalMatrix p = RationalMatrix::from_columns(prim, q.rows());
  RationalMatrix form = p.transpose() * q * p;
  if (k % 2 == 1)
    for (std::size_t i = 0; i < form.rows(); ++i)
      for (std::size_t j = 0; j < form.cols(); ++j) form(i, j) = -form(i, j);
  return form;
}

std::vector<DegreeCheck> check_hr(const KlyachkoAlgebra& alg, const LefschetzClass& ell) {
  std::vector<DegreeCheck> out;
  for (int k = 0; 2 * k <= alg.n(); ++k) {
    RationalMatrix form = hodge_riemann_form(alg, k, ell);
    DegreeCheck c;
    c.k = k;
    c.primitive_dim = form.rows();
    c.witness = det(form);
    c.pass = form.rows() == 0 || definiteness(form) == Definiteness::positive_definite;
    out.push_back(c);
  }
  return out;
}

Rational multinomial(const ExponentVector& eta) {
  mpz_class num;
  mpz_fac_ui(num.get_mpz_t(), static_cast<unsigned long>(total_mass(eta)));
  Rational r(num);
  for (int c : eta) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(c));
    r /= f;
  }
  return r;
}

VolumePolynomial volume_polynomial(const KlyachkoAlgebra& alg) {
  VolumePolynomial v;
  for (const auto& eta : compositions(alg.n(), alg.n()))
    v[eta] = multinomial(eta) * monomial_degree(alg.ctx(), eta);
  return v;
}

VolumePolynomial probability_polynomial(const KlyachkoAlgebra& alg) {
  VolumePolynomial v;
  for (const auto& eta : compositions(alg.n(), alg.n())) v[eta] = prob_exact(alg.ctx(), eta);
  return v;
}

std::vector<LogConcavityViolation> check_log_concavity(const KlyachkoAlgebra& alg) {
  const int n = alg.n();
  const VolumePolynomial p = probability_polynomial(alg);
  auto prob = [&](const ExponentVector& eta) {
    auto it = p.find(eta);
    return it == p.end() ? Rational(0) : it->second;
  };
  std::vector<LogConcavityViolation> out;
  for (const auto& [eta, pe] : p) {
    for (int i = 0; i < n; ++i) {
      if (eta[i] < 2) continue;
      Rational left = 0;
      Rational right = 0;
      if (i - 1 >= 0) {
        ExponentVector e = eta;
        --e[i];
        ++e[i - 1];
        left = prob(e);
      }
      if (i + 1 < n) {
        ExponentVector e = eta;
        --e[i];
        ++e[i + 1];
        right = prob(e);
      }
      Rational lhs = pe * pe;
      Rational rhs = left * right;
      if (lhs < rhs) out.push_back({eta, i + 1, 0, lhs, rhs});
    }
  }
  return out;
}

std::vector<LogConcavityViolation> check_exchange_log_concavity(const KlyachkoAlgebra& alg) {
  const int n = alg.n();
  const VolumePolynomial p = probability_polynomial(alg);
  auto prob = [&](const ExponentVector& eta) {
    auto it = p.find(eta);
    return it == p.end() ? Rational(0) : it->second;
  };
  std::vector<LogConcavityViolation> out;
  for (const auto& eta : compositions(n, n)) {
    const Rational pe = prob(eta);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        if (eta[i] < 1 || eta[j] < 1) continue;
        ExponentVector a = eta, b = eta;
        ++a[i];
        --a[j];
        --b[i];
        ++b[j];
        Rational lhs = pe * pe;
        Rational rhs = prob(a) * prob(b);
        if (lhs < rhs) out.push_back({eta, i + 1, j + 1, lhs, rhs});
      }
  }
  return out;
}

}  // namespace qkly
