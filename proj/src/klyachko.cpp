#include "qkly/klyachko.hpp"

namespace qkly {

KlyachkoAlgebra::KlyachkoAlgebra(QContext ctx)
    : ctx_(std::move(ctx)), top_degree_(q_factorial(ctx_.n(), ctx_.q())) {
  if (ctx_.n() > kMaxSubsetN) throw SizeGuardError("Kly_{n,q} supports n <= 12");
}

std::shared_ptr<const KlyachkoAlgebra> KlyachkoAlgebra::create(QContext ctx) {
  return std::shared_ptr<const KlyachkoAlgebra>(new KlyachkoAlgebra(std::move(ctx)));
}

KlyElement KlyachkoAlgebra::zero() const { return KlyElement(shared_from_this()); }

KlyElement KlyachkoAlgebra::one() const { return basis(Subset{}); }

KlyElement KlyachkoAlgebra::basis(Subset s) const {
  if ((s.bits & ~Subset::full(n()).bits) != 0) throw std::out_of_range("subset not contained in [n]");
  KlyElement e(shared_from_this());
  e.add_term(s, 1);
  return e;
}

KlyElement KlyachkoAlgebra::generator(int i) const {
  if (i < 1 || i > n()) throw std::out_of_range("generator index out of range");
  return basis(Subset::of({i}));
}

KlyElement KlyachkoAlgebra::linear(const RationalVector& coeffs) const {
  if (static_cast<int>(coeffs.size()) != n()) throw std::invalid_argument("need n coefficients");
  KlyElement e(shared_from_this());
  for (int i = 1; i <= n(); ++i) e.add_term(Subset::of({i}), coeffs[i - 1]);
  return e;
}

const std::map<Subset, Rational>& KlyachkoAlgebra::product(Subset s, Subset t) const {
  if (t < s) std::swap(s, t);
  std::lock_guard lock(mutex_);
  auto key = std::pair{s.bits, t.bits};
  if (auto it = products_.find(key); it != products_.end()) return it->second;
  std::map<Subset, Rational> out;
  if (s.size() + t.size() <= n()) {
    ExponentVector eta = indicator(n(), s);
    for (int i : t.elements()) ++eta[i - 1];
    out = reduce_measure(ctx_, eta).probabilities;
  }
  return products_.emplace(key, std::move(out)).first->second;
}

Rational KlyElement::coefficient(Subset s) const {
  auto it = terms_.find(s);
  return it == terms_.end() ? Rational(0) : it->second;
}

bool KlyElement::is_homogeneous() const {
  if (terms_.empty()) return true;
  const int k = terms_.begin()->first.size();
  for (const auto& [s, c] : terms_)
    if (s.size() != k) return false;
  return true;
}

void KlyElement::add_term(Subset s, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.emplace(s, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

namespace {
void require_same_algebra(const KlyElement& a, const KlyElement& b) {
  if (&a.algebra() != &b.algebra() && !(a.algebra().ctx() == b.algebra().ctx()))
    throw std::invalid_argument("elements belong to different algebras");
}
}  // namespace

KlyElement operator+(const KlyElement& a, const KlyElement& b) {
  require_same_algebra(a, b);
  KlyElement r = a;
  for (const auto& [s, c] : b.terms_) r.add_term(s, c);
  return r;
}

KlyElement operator-(const KlyElement& a, const KlyElement& b) {
  return a + Rational(-1) * b;
}

KlyElement operator*(const Rational& c, const KlyElement& a) {
  KlyElement r(a.algebra_);
  for (const auto& [s, v] : a.terms_) r.add_term(s, c * v);
  return r;
}

KlyElement operator*(const KlyElement& a, const KlyElement& b) { return kly_multiply(a, b); }

bool operator==(const KlyElement& a, const KlyElement& b) {
  return a.algebra().ctx() == b.algebra().ctx() && a.terms_ == b.terms_;
}

KlyElement kly_multiply(const KlyElement& a, const KlyElement& b) {
  require_same_algebra(a, b);
  KlyElement r(a.algebra_ptr());
  for (const auto& [s, cs] : a.terms())
    for (const auto& [t, ct] : b.terms()) {
      const Rational c = cs * ct;
      for (const auto& [u, cu] : a.algebra().product(s, t)) r.add_term(u, c * cu);
    }
  return r;
}

KlyElement kly_power(const KlyElement& a, int exponent) {
  if (exponent < 0) throw std::invalid_argument("negative exponent");
  KlyElement r = a.algebra().one();
  for (int i = 0; i < exponent; ++i) r = kly_multiply(r, a);
  return r;
}

Rational kly_degree(const KlyElement& a) {
  const int n = a.algebra().n();
  for (const auto& [s, c] : a.terms())
    if (s.size() != n) throw WrongDegreeError("degree map is defined on Kly^n only");
  return a.coefficient(Subset::full(n)) * a.algebra().top_degree();
}

namespace {
void require_mass_n(const QContext& ctx, const ExponentVector& eta) {
  if (static_cast<int>(eta.size()) != ctx.n() || total_mass(eta) != ctx.n())
    throw WrongDegreeError("exponent vector must have length n and total mass n");
}
}  // namespace

Rational monomial_degree(const QContext& ctx, const ExponentVector& eta) {
  require_mass_n(ctx, eta);
  AbsorptionResult r = reduce_measure(ctx, eta);
  return r.probability_of(Subset::full(ctx.n())) * q_factorial(ctx.n(), ctx.q());
}

Rational monomial_degree_via_algebra(const KlyachkoAlgebra& alg, const ExponentVector& eta) {
  require_mass_n(alg.ctx(), eta);
  KlyElement acc = alg.one();
  for (int i = 1; i <= alg.n(); ++i)
    for (int k = 0; k < eta[i - 1]; ++k) acc = kly_multiply(acc, alg.generator(i));
  return kly_degree(acc);
}

Rational prob_exact(const QContext& ctx, const ExponentVector& eta) {
  require_mass_n(ctx, eta);
  return reduce_measure(ctx, eta).probability_of(Subset::full(ctx.n()));
}

KlyElement structure_constants(const KlyachkoAlgebra& alg, Subset s, Subset t) {
  return kly_multiply(alg.basis(s), alg.basis(t));
}

std::vector<ExponentVector> compositions(int n, int mass) {
  std::vector<ExponentVector> out;
  ExponentVector cur(n, 0);
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == n - 1) {
      cur[pos] = left;
      out.push_back(cur);
      return;
    }
    for (int c = left; c >= 0; --c) {
      cur[pos] = c;
      self(self, pos + 1, left - c);
    }
  };
  if (n > 0) rec(rec, 0, mass);
  return out;
}

}  // namespace qkly
