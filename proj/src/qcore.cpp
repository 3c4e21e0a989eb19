#include "qkly/qcore.hpp"

#include <string>

namespace qkly {

QContext::QContext(int n, Rational q) : n_(n), q_(std::move(q)) {
  if (n_ < 1) throw std::invalid_argument("n must be >= 1");
  if (sgn(q_) <= 0) throw std::invalid_argument("q must be > 0");
}

Subset Subset::of(std::initializer_list<int> elements) {
  Subset s;
  for (int i : elements) {
    if (i < 1 || i > 32) throw std::out_of_range("subset element out of range");
    s = s.with(i);
  }
  return s;
}

std::vector<int> Subset::elements() const {
  std::vector<int> out;
  for (std::uint32_t b = bits; b != 0; b &= b - 1) out.push_back(std::countr_zero(b) + 1);
  return out;
}

std::vector<Subset> all_subsets(int n) {
  if (n < 0 || n > kMaxSubsetN)
    throw SizeGuardError("subset enumeration refused for n = " + std::to_string(n));
  std::vector<Subset> out;
  out.reserve(std::size_t{1} << n);
  for (std::uint32_t b = 0; b < (1u << n); ++b) out.push_back({b});
  return out;
}

std::vector<Subset> subsets_of_size(int n, int k) {
  std::vector<Subset> out;
  for (Subset s : all_subsets(n))
    if (s.size() == k) out.push_back(s);
  return out;
}

Rational q_int(int m, const Rational& q) {
  if (m < 0) throw std::invalid_argument("q_int: m must be >= 0");
  Rational sum = 0;
  Rational power = 1;
  for (int i = 0; i < m; ++i) {
    sum += power;
    power *= q;
  }
  return sum;
}

Rational q_factorial(int m, const Rational& q) {
  Rational prod = 1;
  for (int i = 1; i <= m; ++i) prod *= q_int(i, q);
  return prod;
}

RationalMatrix build_A(const QContext& ctx) {
  const auto n = static_cast<std::size_t>(ctx.n());
  RationalMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = ctx.q() + 1;
    if (i + 1 < n) {
      a(i, i + 1) = -1;
      a(i + 1, i) = -ctx.q();
    }
  }
  return a;
}

RationalMatrix principal_submatrix(const RationalMatrix& a, Subset j) {
  auto idx = j.elements();
  RationalMatrix sub(idx.size(), idx.size());
  for (std::size_t r = 0; r < idx.size(); ++r)
    for (std::size_t c = 0; c < idx.size(); ++c) sub(r, c) = a(idx[r] - 1, idx[c] - 1);
  return sub;
}

AMatrixReport check_A_properties(const QContext& ctx) {
  const RationalMatrix a = build_A(ctx);
  AMatrixReport rep;
  rep.det = det(a);
  rep.det_ok = rep.det == q_int(ctx.n() + 1, ctx.q());

  rep.inverse_positive = true;
  const RationalMatrix inv = inverse(a);
  for (std::size_t r = 0; r < inv.rows(); ++r)
    for (std::size_t c = 0; c < inv.cols(); ++c)
      if (sgn(inv(r, c)) <= 0) rep.inverse_positive = false;

  rep.submatrices_nonsingular = true;
  rep.submatrix_inverses_nonnegative = true;
  for (Subset j : all_subsets(ctx.n())) {
    if (j.empty()) continue;
    RationalMatrix sub = principal_submatrix(a, j);
    if (sgn(det(sub)) == 0) {
      rep.submatrices_nonsingular = false;
      rep.submatrix_inverses_nonnegative = false;
      continue;
    }
    RationalMatrix sub_inv = inverse(sub);
    for (std::size_t r = 0; r < sub_inv.rows(); ++r)
      for (std::size_t c = 0; c < sub_inv.cols(); ++c)
        if (sgn(sub_inv(r, c)) < 0) rep.submatrix_inverses_nonnegative = false;
  }
  return rep;
}

}  // namespace qkly
