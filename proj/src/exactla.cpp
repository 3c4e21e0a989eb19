#include "qkly/exactla.hpp"

#include <algorithm>
#include <utility>

namespace qkly {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  bool seen_slash = false;
  bool digits_before = false;
  bool digits_after = false;
  for (std::size_t i = start; i < s.size(); ++i) {
    char c = s[i];
    if (c == '/') {
      if (seen_slash) throw std::invalid_argument("malformed rational: " + s);
      seen_slash = true;
    } else if (c >= '0' && c <= '9') {
      (seen_slash ? digits_after : digits_before) = true;
    } else {
      throw std::invalid_argument("malformed rational: " + s);
    }
  }
  if (!digits_before || (seen_slash && !digits_after)) {
    throw std::invalid_argument("malformed rational: " + s);
  }
  if (s[0] == '+') s.erase(0, 1);
  Rational r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational: " + s);
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(10); }

Rational rational_pow(const Rational& base, unsigned exponent) {
  mpz_class num;
  mpz_class den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exponent);
  return Rational(num, den);
}

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

RationalMatrix::RationalMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw std::invalid_argument("ragged matrix literal");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalVector RationalMatrix::column(std::size_t c) const {
  RationalVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

bool RationalMatrix::is_symmetric() const {
  if (!is_square()) return false;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = r + 1; c < cols_; ++c)
      if ((*this)(r, c) != (*this)(c, r)) return false;
  return true;
}

bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product: shape mismatch");
  RationalMatrix p(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Rational& aik = a(i, k);
      if (sgn(aik) == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) p(i, j) += aik * b(k, j);
    }
  return p;
}

RationalVector operator*(const RationalMatrix& a, const RationalVector& x) {
  if (a.cols_ != x.size()) throw std::invalid_argument("matrix-vector product: shape mismatch");
  RationalVector y(a.rows_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k)
      if (sgn(x[k]) != 0) y[i] += a(i, k) * x[k];
  return y;
}

RationalMatrix RationalMatrix::from_columns(const std::vector<RationalVector>& columns,
                                            std::size_t rows) {
  RationalMatrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) throw std::invalid_argument("column length mismatch");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
  }
  return m;
}

namespace {

using IntegerMatrix = std::vector<std::vector<mpz_class>>;

// Scales each row by the lcm of its denominators. Returns the product of the scale factors.
mpz_class integerize_rows(const RationalMatrix& m, std::size_t extra_cols,
                          const RationalMatrix* rhs, IntegerMatrix& out) {
  const std::size_t n = m.rows();
  const std::size_t width = m.cols() + extra_cols;
  out.assign(n, std::vector<mpz_class>(width));
  mpz_class scale_product = 1;
  for (std::size_t r = 0; r < n; ++r) {
    mpz_class l = 1;
    for (std::size_t c = 0; c < m.cols(); ++c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(r, c).get_den_mpz_t());
    for (std::size_t c = 0; c < extra_cols; ++c)
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), (*rhs)(r, c).get_den_mpz_t());
    for (std::size_t c = 0; c < m.cols(); ++c) {
      out[r][c] = m(r, c).get_num() * (l / m(r, c).get_den());
    }
    for (std::size_t c = 0; c < extra_cols; ++c) {
      out[r][m.cols() + c] = (*rhs)(r, c).get_num() * (l / (*rhs)(r, c).get_den());
    }
    scale_product *= l;
  }
  return scale_product;
}

// Bareiss forward elimination on the first `n` columns of a square-left integer system.
// Returns false if a zero pivot column is found. `sign` tracks row swaps.
bool bareiss_forward(IntegerMatrix& a, std::size_t n, int& sign) {
  sign = 1;
  mpz_class prev = 1;
  const std::size_t width = n == 0 ? 0 : a[0].size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a[p][k] == 0) ++p;
    if (p == n) return false;
    if (p != k) {
      std::swap(a[p], a[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < width; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]);
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  return true;
}

// Back substitution on an upper-triangular Bareiss system with several right-hand sides.
RationalMatrix back_substitute(const IntegerMatrix& a, std::size_t n, std::size_t nrhs) {
  RationalMatrix x(n, nrhs);
  for (std::size_t c = 0; c < nrhs; ++c) {
    for (std::size_t ii = n; ii-- > 0;) {
      Rational acc(a[ii][n + c]);
      for (std::size_t j = ii + 1; j < n; ++j) acc -= Rational(a[ii][j]) * x(j, c);
      x(ii, c) = acc / Rational(a[ii][ii]);
    }
  }
  return x;
}

}  // namespace

Rational det(const RationalMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("det: matrix must be square");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntegerMatrix a;
  mpz_class scale = integerize_rows(m, 0, nullptr, a);
  int sign = 1;
  if (!bareiss_forward(a, n, sign)) return 0;
  Rational d(a[n - 1][n - 1] * sign, scale);
  d.canonicalize();
  return d;
}

RationalMatrix solve(const RationalMatrix& m, const RationalMatrix& b) {
  if (!m.is_square() || b.rows() != m.rows()) throw std::invalid_argument("solve: shape mismatch");
  const std::size_t n = m.rows();
  IntegerMatrix a;
  integerize_rows(m, b.cols(), &b, a);
  int sign = 1;
  if (!bareiss_forward(a, n, sign)) throw SingularMatrixError();
  return back_substitute(a, n, b.cols());
}

RationalMatrix rref(const RationalMatrix& m, std::vector<std::size_t>* pivots) {
  RationalMatrix a = m;
  std::vector<std::size_t> piv;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t p = row;
    while (p < a.rows() && sgn(a(p, col)) == 0) ++p;
    if (p == a.rows()) continue;
    if (p != row)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(row, j));
    Rational inv = 1 / a(row, col);
    for (std::size_t j = col; j < a.cols(); ++j) a(row, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row || sgn(a(i, col)) == 0) continue;
      Rational f = a(i, col);
      for (std::size_t j = col; j < a.cols(); ++j) a(i, j) -= f * a(row, j);
    }
    piv.push_back(col);
    ++row;
  }
  if (pivots) *pivots = std::move(piv);
  return a;
}

SolveResult solve(const RationalMatrix& m, const RationalVector& b) {
  if (b.size() != m.rows()) throw std::invalid_argument("solve: M.rows != b.length");
  if (m.is_square()) {
    RationalMatrix bm(b.size(), 1);
    for (std::size_t i = 0; i < b.size(); ++i) bm(i, 0) = b[i];
    try {
      return {SolveStatus::ok, solve(m, bm).column(0)};
    } catch (const SingularMatrixError&) {
      // fall through to the general path to tell inconsistency from singularity
    }
  }
  RationalMatrix aug(m.rows(), m.cols() + 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) aug(r, c) = m(r, c);
    aug(r, m.cols()) = b[r];
  }
  std::vector<std::size_t> piv;
  RationalMatrix red = rref(aug, &piv);
  if (!piv.empty() && piv.back() == m.cols()) return {SolveStatus::inconsistent, {}};
  if (m.is_square()) return {SolveStatus::singular, {}};
  RationalVector x(m.cols());
  for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = red(r, m.cols());
  return {SolveStatus::ok, std::move(x)};
}

RationalMatrix inverse(const RationalMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("inverse: matrix must be square");
  return solve(m, RationalMatrix::identity(m.rows()));
}

std::size_t rank(const RationalMatrix& m) {
  std::vector<std::size_t> piv;
  rref(m, &piv);
  return piv.size();
}

std::vector<RationalVector> nullspace(const RationalMatrix& m) {
  std::vector<std::size_t> piv;
  RationalMatrix red = rref(m, &piv);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : piv) is_pivot[p] = true;
  std::vector<RationalVector> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    RationalVector v(m.cols());
    v[free] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -red(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

Inertia inertia(const RationalMatrix& s) {
  if (!s.is_symmetric()) throw NotSymmetricError();
  RationalMatrix a = s;
  std::size_t n = a.rows();
  Inertia result;
  std::vector<bool> done(n, false);
  std::size_t remaining = n;
  while (remaining > 0) {
    std::size_t p = n;
    for (std::size_t i = 0; i < n; ++i)
      if (!done[i] && sgn(a(i, i)) != 0) {
        p = i;
        break;
      }
    if (p == n) {
      // Zero diagonal: a nonzero off-diagonal entry (i,j) is moved onto the diagonal by the
      // congruence e_i -> e_i + e_j, which gives a(i,i) = 2 a(i,j).
      std::size_t bi = n;
      std::size_t bj = n;
      for (std::size_t i = 0; i < n && bi == n; ++i) {
        if (done[i]) continue;
        for (std::size_t j = i + 1; j < n; ++j)
          if (!done[j] && sgn(a(i, j)) != 0) {
            bi = i;
            bj = j;
            break;
          }
      }
      if (bi == n) {
        result.zero += remaining;
        break;
      }
      for (std::size_t k = 0; k < n; ++k) a(bi, k) += a(bj, k);
      for (std::size_t k = 0; k < n; ++k) a(k, bi) += a(k, bj);
      p = bi;
    }
    const Rational d = a(p, p);
    (sgn(d) > 0 ? result.positive : result.negative) += 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i] || i == p || sgn(a(i, p)) == 0) continue;
      Rational f = a(i, p) / d;
      for (std::size_t j = 0; j < n; ++j) {
        if (done[j]) continue;
        a(i, j) -= f * a(p, j);
      }
    }
    for (std::size_t j = 0; j < n; ++j)
      if (!done[j] && j != p) a(p, j) = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (!done[i] && i != p) a(i, p) = 0;
    done[p] = true;
    --remaining;
  }
  return result;
}

Definiteness definiteness(const RationalMatrix& s) {
  Inertia in = inertia(s);
  const std::size_t n = s.rows();
  if (in.zero == n) return Definiteness::zero;
  if (in.positive > 0 && in.negative > 0) return Definiteness::indefinite;
  if (in.positive == n) return Definiteness::positive_definite;
  if (in.negative == n) return Definiteness::negative_definite;
  return in.positive > 0 ? Definiteness::positive_semidefinite : Definiteness::negative_semidefinite;
}

std::string_view to_string(Definiteness d) {
  switch (d) {
    case Definiteness::positive_definite: return "positive-definite";
    case Definiteness::positive_semidefinite: return "positive-semidefinite";
    case Definiteness::negative_definite: return "negative-definite";
    case Definiteness::negative_semidefinite: return "negative-semidefinite";
    case Definiteness::indefinite: return "indefinite";
    case Definiteness::zero: return "zero";
  }
  return "unknown";
}

}  // namespace qkly
