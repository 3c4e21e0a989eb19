#include "qkly/matroidchow.hpp"

#include "qkly/klyachko.hpp"

#include <algorithm>
#include <functional>

namespace qkly {

FiniteField::FiniteField(int q) : q_(q) {
  if (q != 2 && q != 3 && q != 4 && q != 5) throw std::invalid_argument("supported field orders: 2, 3, 4, 5");
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b) {
      if (q == 4) {
        add_[a][b] = static_cast<std::uint8_t>(a ^ b);
        // (a1 w + a0)(b1 w + b0) with w^2 = w + 1
        const int a1 = a >> 1, a0 = a & 1, b1 = b >> 1, b0 = b & 1;
        const int w2 = a1 & b1;
        const int w1 = ((a1 & b0) ^ (a0 & b1)) ^ w2;
        const int w0 = (a0 & b0) ^ w2;
        mul_[a][b] = static_cast<std::uint8_t>((w1 << 1) | w0);
      } else {
        add_[a][b] = static_cast<std::uint8_t>((a + b) % q);
        mul_[a][b] = static_cast<std::uint8_t>((a * b) % q);
      }
    }
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b)
      if (add_[a][b] == 0) neg_[a] = static_cast<std::uint8_t>(b);
}

std::uint8_t FiniteField::inv(std::uint8_t a) const {
  for (int b = 1; b < q_; ++b)
    if (mul_[a][b] == 1) return static_cast<std::uint8_t>(b);
  throw std::domain_error("zero has no inverse");
}

mpz_class gaussian_binomial(int m, int r, int q) {
  if (r < 0 || r > m) return 0;
  mpz_class num = 1;
  mpz_class den = 1;
  for (int i = 0; i < r; ++i) {
    mpz_class a;
    mpz_class b;
    mpz_ui_pow_ui(a.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(m - i));
    mpz_ui_pow_ui(b.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(i + 1));
    num *= a - 1;
    den *= b - 1;
  }
  return num / den;
}

namespace {

// Is v in the row space of the RREF matrix `rows`?
bool in_row_space(const FiniteField& f, const std::vector<std::vector<std::uint8_t>>& rows,
                  std::vector<std::uint8_t> v) {
  for (const auto& row : rows) {
    std::size_t pivot = 0;
    while (row[pivot] == 0) ++pivot;
    const std::uint8_t c = v[pivot];
    if (c == 0) continue;
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = f.sub(v[j], f.mul(c, row[j]));
  }
  return std::all_of(v.begin(), v.end(), [](std::uint8_t x) { return x == 0; });
}

}  // namespace

FlatLattice enumerate_flats(int n, int q) {
  if (n < 1 || n > 3) throw std::length_error("PG(n,q) enumeration supports 1 <= n <= 3");
  FlatLattice lat(n, q);
  const int dim = n + 1;
  for (int r = 1; r <= n; ++r) {
    // Choose pivot columns, then every assignment of the free entries.
    std::vector<bool> pick(dim, false);
    std::fill(pick.begin(), pick.begin() + r, true);
    do {
      std::vector<int> pivots;
      for (int c = 0; c < dim; ++c)
        if (pick[c]) pivots.push_back(c);
      std::vector<std::pair<int, int>> free_slots;
      for (int t = 0; t < r; ++t)
        for (int c = pivots[t] + 1; c < dim; ++c)
          if (!pick[c]) free_slots.emplace_back(t, c);
      std::vector<int> digits(free_slots.size(), 0);
      while (true) {
        Flat f;
        f.rank = r;
        f.rows.assign(r, std::vector<std::uint8_t>(dim, 0));
        for (int t = 0; t < r; ++t) f.rows[t][pivots[t]] = 1;
        for (std::size_t s = 0; s < free_slots.size(); ++s)
          f.rows[free_slots[s].first][free_slots[s].second] = static_cast<std::uint8_t>(digits[s]);
        lat.flats_.push_back(std::move(f));
        std::size_t s = 0;
        while (s < digits.size() && ++digits[s] == q) digits[s++] = 0;
        if (s == digits.size()) break;
      }
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  std::sort(lat.flats_.begin(), lat.flats_.end());
  for (std::size_t i = 0; i < lat.flats_.size(); ++i) lat.by_rank_[lat.flats_[i].rank].push_back(i);
  const std::size_t count = lat.flats_.size();
  lat.le_.assign(count, std::vector<bool>(count, false));
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < count; ++j) {
      if (lat.flats_[i].rank > lat.flats_[j].rank) continue;
      bool inside = true;
      for (const auto& row : lat.flats_[i].rows)
        if (!in_row_space(lat.field_, lat.flats_[j].rows, row)) {
          inside = false;
          break;
        }
      lat.le_[i][j] = inside;
    }
  return lat;
}

bool ChowClass::is_zero() const {
  return std::all_of(coords.begin(), coords.end(), [](const Rational& c) { return sgn(c) == 0; });
}

ChowRing::ChowRing(FlatLattice lattice) : lattice_(std::move(lattice)) {}

bool ChowRing::is_chain(const ChowMonomial& m) const {
  for (std::size_t a = 0; a < m.size(); ++a)
    for (std::size_t b = a + 1; b < m.size(); ++b)
      if (!lattice_.comparable(m[a], m[b])) return false;
  return true;
}

namespace {

ChowPolynomial alpha_polynomial(const FlatLattice& lat, std::size_t h) {
  ChowPolynomial p;
  for (std::size_t f = 0; f < lat.size(); ++f)
    if (lat.contains(f, h)) p[{f}] = 1;
  return p;
}

ChowMonomial times(const ChowMonomial& a, const ChowMonomial& b) {
  ChowMonomial m = a;
  m.insert(m.end(), b.begin(), b.end());
  std::sort(m.begin(), m.end());
  return m;
}

void reduce_in_place(std::map<std::size_t, Rational>& v,
                     const std::map<std::size_t, std::map<std::size_t, Rational>>& relations) {
  auto it = v.begin();
  while (it != v.end()) {
    auto rel = relations.find(it->first);
    if (rel == relations.end()) {
      ++it;
      continue;
    }
    const std::size_t col = it->first;
    const Rational coef = it->second;
    it = v.erase(it);
    for (const auto& [c, val] : rel->second) {
      if (c == col) continue;
      Rational& slot = v[c];
      slot -= coef * val;
      if (sgn(slot) == 0) v.erase(c);
    }
    it = v.upper_bound(col);
  }
}

}  // namespace

const ChowRing::GradedPiece& ChowRing::piece(int k) const {
  if (k < 0 || k > n()) throw std::out_of_range("Chow degree out of range");
  if (auto it = pieces_.find(k); it != pieces_.end()) return *it->second;
  auto gp = std::make_unique<GradedPiece>();

  // Chain-supported monomials of degree k, as nondecreasing index sequences.
  ChowMonomial cur;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (static_cast<int>(cur.size()) == k) {
      gp->monomials.push_back(cur);
      return;
    }
    for (std::size_t f = start; f < lattice_.size(); ++f) {
      bool ok = true;
      for (std::size_t g : cur)
        if (!lattice_.comparable(f, g)) {
          ok = false;
          break;
        }
      if (!ok) continue;
      cur.push_back(f);
      rec(f);
      cur.pop_back();
    }
  };
  rec(0);
  for (std::size_t i = 0; i < gp->monomials.size(); ++i) gp->index.emplace(gp->monomials[i], i);

  if (k >= 1) {
    const auto hyper = lattice_.hyperplanes();
    const ChowPolynomial base = alpha_polynomial(lattice_, hyper.front());
    std::vector<ChowPolynomial> diffs;
    for (std::size_t h = 1; h < hyper.size(); ++h) {
      ChowPolynomial d = base;
      for (const auto& [m, c] : alpha_polynomial(lattice_, hyper[h])) {
        d[m] -= c;
        if (sgn(d[m]) == 0) d.erase(m);
      }
      diffs.push_back(std::move(d));
    }
    // Multipliers: chain monomials of degree k-1 (non-chain multipliers only produce J terms).
    std::vector<ChowMonomial> multipliers;
    if (k == 1) {
      multipliers.push_back({});
    } else {
      const GradedPiece& lower = piece(k - 1);
      multipliers = lower.monomials;
    }
    for (const auto& mult : multipliers)
      for (const auto& d : diffs) {
        std::map<std::size_t, Rational> row;
        for (const auto& [m, c] : d) {
          ChowMonomial prod = times(mult, m);
          auto idx = gp->index.find(prod);
          if (idx == gp->index.end()) continue;  // non-chain: lies in J
          Rational& slot = row[idx->second];
          slot += c;
          if (sgn(slot) == 0) row.erase(idx->second);
        }
        reduce_in_place(row, gp->relations);
        if (row.empty()) continue;
        const Rational lead = row.begin()->second;
        for (auto& [c, v] : row) v /= lead;
        gp->relations.emplace(row.begin()->first, std::move(row));
      }
  }
  for (std::size_t c = 0; c < gp->monomials.size(); ++c)
    if (!gp->relations.count(c)) gp->basis_columns.push_back(c);
  return *pieces_.emplace(k, std::move(gp)).first->second;
}

ChowClass ChowRing::normal_form(int k, const ChowPolynomial& p) const {
  const GradedPiece& gp = piece(k);
  std::map<std::size_t, Rational> v;
  for (const auto& [m, c] : p) {
    if (static_cast<int>(m.size()) != k) throw ChowWrongDegreeError("polynomial is not homogeneous of degree k");
    auto idx = gp.index.find(m);
    if (idx == gp.index.end()) continue;
    Rational& slot = v[idx->second];
    slot += c;
    if (sgn(slot) == 0) v.erase(idx->second);
  }
  reduce_in_place(v, gp.relations);
  ChowClass out{k, RationalVector(gp.basis_columns.size())};
  for (std::size_t b = 0; b < gp.basis_columns.size(); ++b) {
    auto it = v.find(gp.basis_columns[b]);
    if (it != v.end()) out.coords[b] = it->second;
  }
  return out;
}

ChowPolynomial ChowRing::representative(const ChowClass& c) const {
  const GradedPiece& gp = piece(c.degree);
  ChowPolynomial p;
  for (std::size_t b = 0; b < gp.basis_columns.size(); ++b)
    if (sgn(c.coords[b]) != 0) p[gp.monomials[gp.basis_columns[b]]] = c.coords[b];
  return p;
}

ChowClass ChowRing::multiply(const ChowClass& a, const ChowClass& b) const {
  const int k = a.degree + b.degree;
  if (k > n()) return ChowClass{k, {}};
  ChowPolynomial prod;
  for (const auto& [ma, ca] : representative(a))
    for (const auto& [mb, cb] : representative(b)) {
      ChowMonomial m = times(ma, mb);
      if (!is_chain(m)) continue;
      prod[m] += ca * cb;
    }
  return normal_form(k, prod);
}

ChowClass ChowRing::add(const ChowClass& a, const ChowClass& b) const {
  if (a.degree != b.degree) throw ChowWrongDegreeError("cannot add classes of different degree");
  ChowClass c = a;
  for (std::size_t i = 0; i < c.coords.size(); ++i) c.coords[i] += b.coords[i];
  return c;
}

ChowClass ChowRing::scale(const Rational& s, const ChowClass& a) const {
  ChowClass c = a;
  for (auto& x : c.coords) x *= s;
  return c;
}

ChowClass ChowRing::zero(int k) const {
  return ChowClass{k, RationalVector(k <= n() ? dim(k) : 0)};
}

ChowClass ChowRing::one() const { return normal_form(0, {{ChowMonomial{}, Rational(1)}}); }

ChowClass ChowRing::power(const ChowClass& a, int e) const {
  ChowClass r = one();
  for (int i = 0; i < e; ++i) r = multiply(r, a);
  return r;
}

ChowClass ChowRing::variable(std::size_t flat) const { return normal_form(1, {{ChowMonomial{flat}, Rational(1)}}); }

ChowClass ChowRing::alpha_for_hyperplane(std::size_t hyperplane) const {
  return normal_form(1, alpha_polynomial(lattice_, hyperplane));
}

ChowClass class_alpha(const ChowRing& ring) {
  return ring.alpha_for_hyperplane(ring.lattice().hyperplanes().front());
}

bool alpha_hyperplane_independent(const ChowRing& ring) {
  const ChowClass a = class_alpha(ring);
  for (std::size_t h : ring.lattice().hyperplanes())
    if (!(ring.alpha_for_hyperplane(h) == a)) return false;
  return true;
}

namespace {

void require_index(const ChowRing& ring, int i) {
  if (i < 1 || i > ring.n()) throw std::out_of_range("divisor index must satisfy 1 <= i <= n");
}

// c_alpha * alpha - sum_{codim F >= i} weight(codim F) x_F
ChowClass divisor(const ChowRing& ring, int i, const Rational& alpha_coeff,
                  const std::function<Rational(int)>& weight) {
  const FlatLattice& lat = ring.lattice();
  ChowPolynomial p;
  for (std::size_t f = 0; f < lat.size(); ++f)
    if (lat.contains(f, lat.hyperplanes().front())) p[{f}] += alpha_coeff;
  for (std::size_t f = 0; f < lat.size(); ++f) {
    const int c = lat.codim(f);
    if (c >= i) p[{f}] -= weight(c);
  }
  return ring.normal_form(1, p);
}

ChowClass relation_defect(const ChowRing& ring, const std::vector<ChowClass>& v, int i,
                          const Rational& up_weight, const Rational& down_weight, const Rational& q) {
  // (q+1) v_i^2 - up_weight v_i v_{i+1} - down_weight v_i v_{i-1}; v[0] and v[n+1] are zero.
  ChowClass d = ring.scale(q + 1, ring.multiply(v[i], v[i]));
  d = ring.add(d, ring.scale(-up_weight, ring.multiply(v[i], v[i + 1])));
  d = ring.add(d, ring.scale(-down_weight, ring.multiply(v[i], v[i - 1])));
  return d;
}

}  // namespace

ChowClass class_L(const ChowRing& ring, int i) {
  require_index(ring, i);
  const Rational q = ring.lattice().q();
  const int n = ring.n();
  return divisor(ring, i, q_int(n + 1 - i, q), [&](int c) -> Rational { return q_int(c - i, q); });
}

ChowClass class_gamma(const ChowRing& ring, int i) {
  require_index(ring, i);
  const Rational q = ring.lattice().q();
  const int n = ring.n();
  return divisor(ring, i, q_int(n + 1, q) - q_int(i, q), [&](int c) -> Rational { return q_int(c, q) - q_int(i, q); });
}

std::vector<bool> verify_gamma_L(const ChowRing& ring) {
  const Rational q = ring.lattice().q();
  std::vector<bool> out;
  for (int i = 1; i <= ring.n(); ++i)
    out.push_back(class_gamma(ring, i) == ring.scale(rational_pow(q, static_cast<unsigned>(i)), class_L(ring, i)));
  return out;
}

namespace {

std::vector<ChowClass> padded(const ChowRing& ring, const std::function<ChowClass(int)>& make) {
  std::vector<ChowClass> v;
  v.push_back(ring.zero(1));
  for (int i = 1; i <= ring.n(); ++i) v.push_back(make(i));
  v.push_back(ring.zero(1));
  return v;
}

}  // namespace

std::vector<bool> verify_klyachko_relation(const ChowRing& ring) {
  const Rational q = ring.lattice().q();
  const auto g = padded(ring, [&](int i) { return class_gamma(ring, i); });
  std::vector<bool> out;
  for (int i = 1; i <= ring.n(); ++i) out.push_back(relation_defect(ring, g, i, 1, q, q).is_zero());
  return out;
}

std::vector<bool> verify_L_relation(const ChowRing& ring) {
  const Rational q = ring.lattice().q();
  const auto l = padded(ring, [&](int i) { return class_L(ring, i); });
  std::vector<bool> out;
  for (int i = 1; i <= ring.n(); ++i) out.push_back(relation_defect(ring, l, i, q, 1, q).is_zero());
  return out;
}

Rational chow_degree(const ChowRing& ring, const ChowClass& c) {
  if (c.degree != ring.n()) throw ChowWrongDegreeError("degree map is defined on CH^n only");
  if (ring.dim(ring.n()) != 1) throw std::logic_error("top graded piece is not one-dimensional");
  const ChowClass top = ring.power(class_alpha(ring), ring.n());
  return c.coords[0] / top.coords[0];
}

Theorem1Report verify_theorem1(const ChowRing& ring) {
  const int n = ring.n();
  const Rational q = ring.lattice().q();
  const auto alg = KlyachkoAlgebra::create(QContext(n, q));
  Theorem1Report rep;
  rep.L_relation = verify_L_relation(ring);

  std::vector<ChowClass> L;  // L[0] = L[n+1] = 0
  L.push_back(ring.zero(1));
  for (int i = 1; i <= n; ++i) L.push_back(class_L(ring, i));
  L.push_back(ring.zero(1));

  struct Candidate {
    std::string name;
    std::function<int(int)> index;
  };
  const std::vector<Candidate> candidates{
      {"u_i -> L_i", [](int i) { return i; }},
      {"u_i -> L_{n-i}", [n](int i) { return n - i; }},
      {"u_i -> L_{n+1-i}", [n](int i) { return n + 1 - i; }},
  };

  for (const auto& cand : candidates) {
    AssignmentReport ar;
    ar.name = cand.name;
    std::vector<ChowClass> v;
    v.push_back(ring.zero(1));
    for (int i = 1; i <= n; ++i) {
      const int t = cand.index(i);
      ar.target_index.push_back(t);
      v.push_back(L[static_cast<std::size_t>(std::clamp(t, 0, n + 1))]);
    }
    v.push_back(ring.zero(1));

    ar.relations_hold = true;
    for (int i = 1; i <= n; ++i)
      if (!relation_defect(ring, v, i, 1, q, q).is_zero()) ar.relations_hold = false;
    if (!ar.relations_hold) {
      rep.candidates.push_back(std::move(ar));
      continue;
    }

    // Monomials in the images, per degree.
    ar.dims_ok = true;
    std::map<ExponentVector, ChowClass> top_images;
    for (int k = 0; k <= n; ++k) {
      std::vector<RationalVector> cols;
      for (const auto& eta : compositions(n, k)) {
        ChowClass c = ring.one();
        for (int i = 1; i <= n; ++i)
          for (int e = 0; e < eta[i - 1]; ++e) c = ring.multiply(c, v[i]);
        cols.push_back(c.coords);
        if (k == n) top_images.emplace(eta, c);
      }
      const std::size_t dim = cols.empty() || cols[0].empty()
                                  ? 0
                                  : rank(RationalMatrix::from_columns(cols, cols[0].size()));
      ar.subalgebra_dims.push_back(dim);
      mpz_class binom;
      mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
      if (binom != static_cast<unsigned long>(dim)) ar.dims_ok = false;
    }

    ar.degrees_proportional = true;
    bool have_constant = false;
    for (const auto& [eta, c] : top_images) {
      const Rational chow = chow_degree(ring, c);
      const Rational kly = monomial_degree(alg->ctx(), eta);
      if (sgn(kly) == 0) {
        if (sgn(chow) != 0) ar.degrees_proportional = false;
        continue;
      }
      const Rational ratio = chow / kly;
      if (!have_constant) {
        ar.degree_constant = ratio;
        have_constant = true;
      } else if (ratio != ar.degree_constant) {
        ar.degrees_proportional = false;
      }
    }
    if (!have_constant || sgn(ar.degree_constant) == 0) ar.degrees_proportional = false;
    if (ar.passes()) rep.passing.push_back(ar.name);
    rep.candidates.push_back(std::move(ar));
  }
  return rep;
}

}  // namespace qkly
