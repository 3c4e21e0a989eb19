#include "qkly/toric.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

namespace qkly {

std::string Ray::label() const {
  return (kind == Kind::e ? "e" : "-a") + std::to_string(index);
}

RationalVector ray_vector(const RationalMatrix& a, const Ray& r) {
  const std::size_t n = a.rows();
  RationalVector v(n);
  if (r.index < 1 || static_cast<std::size_t>(r.index) > n) throw std::out_of_range("ray index out of range");
  if (r.kind == Ray::Kind::e) {
    v[r.index - 1] = 1;
  } else {
    for (std::size_t i = 0; i < n; ++i) v[i] = -a(i, r.index - 1);
  }
  return v;
}

ConeId::ConeId(Subset j, Subset k) : j_(j), k_(k) {
  if (!(j & k).empty()) throw std::invalid_argument("cone index sets J and K must be disjoint");
}

std::vector<Ray> ConeId::rays() const {
  std::vector<Ray> out;
  for (int i : j_.elements()) out.push_back(Ray::e(i));
  for (int i : k_.elements()) out.push_back(Ray::neg_alpha(i));
  return out;
}

std::string ConeId::label() const {
  auto list = [](Subset s) {
    std::string out = "{";
    bool first = true;
    for (int i : s.elements()) {
      if (!first) out += ",";
      out += std::to_string(i);
      first = false;
    }
    return out + "}";
  };
  return "sigma_" + list(j_) + "," + list(k_);
}

std::vector<ConeId> all_cones(int n) {
  std::vector<ConeId> out;
  for (Subset j : all_subsets(n))
    for (Subset k : all_subsets(n))
      if ((j & k).empty()) out.emplace_back(j, k);
  return out;
}

std::vector<ConeId> cones_of_dim(int n, int dim) {
  std::vector<ConeId> out;
  for (const ConeId& c : all_cones(n))
    if (c.dim() == dim) out.push_back(c);
  return out;
}

namespace {

RationalMatrix generator_matrix(const RationalMatrix& a, const std::vector<Ray>& rays) {
  std::vector<RationalVector> cols;
  cols.reserve(rays.size());
  for (const Ray& r : rays) cols.push_back(ray_vector(a, r));
  return RationalMatrix::from_columns(cols, a.rows());
}

void check_cone_in_range(const QContext& ctx, const ConeId& c) {
  if (((c.j() | c.k()).bits & ~Subset::full(ctx.n()).bits) != 0)
    throw std::out_of_range("cone index sets must lie in [n]");
}

Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-1000000, 1000000);
  std::uniform_int_distribution<long> den(1, 1000);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

// Scales v to a primitive integer vector (gcd 1).
void make_primitive(std::vector<Rational>& v) {
  mpz_class l = 1;
  for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  mpz_class g = 0;
  for (const auto& x : v) {
    mpz_class num = x.get_num() * (l / x.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), num.get_mpz_t());
  }
  if (g == 0) return;
  for (auto& x : v) {
    x = Rational(x.get_num() * (l / x.get_den()), g);
    x.canonicalize();
  }
}

}  // namespace

RationalMatrix cone_generators(const QContext& ctx, const ConeId& c) {
  check_cone_in_range(ctx, c);
  return generator_matrix(build_A(ctx), c.rays());
}

bool cone_contains(const QContext& ctx, const ConeId& c, const RationalVector& point) {
  if (static_cast<int>(point.size()) != ctx.n()) throw std::invalid_argument("point has wrong dimension");
  const RationalMatrix g = cone_generators(ctx, c);
  if (g.cols() == 0) return std::all_of(point.begin(), point.end(), [](const Rational& x) { return sgn(x) == 0; });
  SolveResult s = solve(g, point);
  if (!s) return false;
  return std::all_of(s.x.begin(), s.x.end(), [](const Rational& x) { return sgn(x) >= 0; });
}

bool cones_meet_in_common_face(const RationalMatrix& a, const std::vector<Ray>& first,
                               const std::vector<Ray>& second) {
  // x = sum_first lambda g = sum_second mu h. Writing w = (lambda - mu on common rays, lambda on
  // first-only rays, -mu on second-only rays) gives a kernel vector of [common | first | second].
  // The intersection is larger than the common face iff some kernel vector has w >= 0 on the
  // first-only block, w <= 0 on the second-only block, and is nonzero there. That cone is pointed,
  // so it is nontrivial iff it has an extreme ray; extreme rays are cut out by d-1 independent
  // tight constraints, d = kernel dimension.
  std::vector<Ray> common;
  std::vector<Ray> only_first;
  std::vector<Ray> only_second;
  for (const Ray& r : first)
    (std::find(second.begin(), second.end(), r) != second.end() ? common : only_first).push_back(r);
  for (const Ray& r : second)
    if (std::find(first.begin(), first.end(), r) == first.end()) only_second.push_back(r);

  std::vector<Ray> all = common;
  all.insert(all.end(), only_first.begin(), only_first.end());
  all.insert(all.end(), only_second.begin(), only_second.end());
  const auto kernel = nullspace(generator_matrix(a, all));
  const std::size_t d = kernel.size();
  if (d == 0) return true;

  // Constraint rows c with c . y >= 0.
  std::vector<RationalVector> constraints;
  for (std::size_t r = common.size(); r < all.size(); ++r) {
    const bool negate = r >= common.size() + only_first.size();
    RationalVector row(d);
    for (std::size_t t = 0; t < d; ++t) row[t] = negate ? Rational(-kernel[t][r]) : kernel[t][r];
    constraints.push_back(std::move(row));
  }
  const std::size_t m = constraints.size();
  if (m < d - 1) return true;

  auto feasible = [&](const RationalVector& y) {
    bool nonzero = false;
    for (const auto& c : constraints) {
      Rational dot = 0;
      for (std::size_t t = 0; t < d; ++t) dot += c[t] * y[t];
      if (sgn(dot) < 0) return false;
      if (sgn(dot) > 0) nonzero = true;
    }
    return nonzero;
  };

  std::vector<bool> choose(m, false);
  std::fill(choose.begin(), choose.begin() + static_cast<long>(d - 1), true);
  do {
    RationalMatrix tight(d - 1, d);
    std::size_t row = 0;
    for (std::size_t i = 0; i < m; ++i)
      if (choose[i]) {
        for (std::size_t t = 0; t < d; ++t) tight(row, t) = constraints[i][t];
        ++row;
      }
    auto ray = nullspace(tight);
    if (ray.size() != 1) continue;
    RationalVector y = ray[0];
    if (feasible(y)) return false;
    for (auto& v : y) v = -v;
    if (feasible(y)) return false;
  } while (std::prev_permutation(choose.begin(), choose.end()));
  return true;
}

FanReport check_fan(const QContext& ctx) {
  if (ctx.n() > kMaxExhaustiveFanN) throw SizeGuardError("exhaustive fan check supports n <= 6");
  const RationalMatrix a = build_A(ctx);
  const auto cones = all_cones(ctx.n());
  FanReport rep;
  rep.cones = cones.size();
  rep.simplicial = true;
  rep.dimension_law = true;
  rep.intersection_law = true;
  for (const ConeId& c : cones) {
    const RationalMatrix g = generator_matrix(a, c.rays());
    if (!nullspace(g).empty()) {
      rep.simplicial = false;
      rep.failures.push_back("dependent generators: " + c.label());
    }
    if (rank(g) != static_cast<std::size_t>(c.dim())) {
      rep.dimension_law = false;
      rep.failures.push_back("dimension mismatch: " + c.label());
    }
  }
  std::vector<std::vector<Ray>> rays;
  rays.reserve(cones.size());
  for (const ConeId& c : cones) rays.push_back(c.rays());
  for (std::size_t i = 0; i < cones.size(); ++i)
    for (std::size_t j = i + 1; j < cones.size(); ++j) {
      ++rep.pairs;
      if (!cones_meet_in_common_face(a, rays[i], rays[j])) {
        rep.intersection_law = false;
        rep.failures.push_back("intersection law: " + cones[i].label() + " / " + cones[j].label());
      }
    }
  return rep;
}

std::vector<std::pair<ConeId, int>> all_walls(int n) {
  std::vector<std::pair<ConeId, int>> out;
  for (const ConeId& c : cones_of_dim(n, n - 1)) {
    const Subset used = c.j() | c.k();
    for (int l = 1; l <= n; ++l)
      if (!used.contains(l)) out.emplace_back(c, l);
  }
  return out;
}

Rational WallData::coefficient(const Ray& r) const {
  auto it = coefficients.find(r);
  return it == coefficients.end() ? Rational(0) : it->second;
}

WallData wall_relation(const QContext& ctx, const ConeId& wall, int missing) {
  check_cone_in_range(ctx, wall);
  if (wall.dim() != ctx.n() - 1) throw std::invalid_argument("wall must have dimension n-1");
  if (missing < 1 || missing > ctx.n() || (wall.j() | wall.k()).contains(missing))
    throw std::invalid_argument("missing index must be the index absent from the wall");
  const RationalMatrix a = build_A(ctx);
  std::vector<Ray> rays = wall.rays();
  rays.push_back(Ray::e(missing));
  rays.push_back(Ray::neg_alpha(missing));
  const auto kernel = nullspace(generator_matrix(a, rays));
  WallData w{wall, missing, {}, kernel.size()};
  if (kernel.size() != 1) return w;
  RationalVector v = kernel[0];
  make_primitive(v);
  if (sgn(v[rays.size() - 2]) < 0)
    for (auto& x : v) x = -x;
  for (std::size_t i = 0; i < rays.size(); ++i)
    if (sgn(v[i]) != 0) w.coefficients[rays[i]] = v[i];
  return w;
}

std::map<int, Rational> wall_alpha_coefficients_via_cartan(const QContext& ctx, const ConeId& wall,
                                                           int missing) {
  const Subset k_plus = wall.k().with(missing);
  const RationalMatrix sub = principal_submatrix(build_A(ctx), k_plus);
  const auto idx = k_plus.elements();
  RationalVector rhs(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) rhs[i] = idx[i] == missing ? 1 : 0;
  SolveResult s = solve(sub, rhs);
  if (!s) throw SingularMatrixError();
  std::map<int, Rational> out;
  for (std::size_t i = 0; i < idx.size(); ++i) out[idx[i]] = s.x[i];
  return out;
}

CompletenessReport check_complete(const QContext& ctx, std::size_t samples, std::uint64_t seed) {
  const int n = ctx.n();
  CompletenessReport rep;
  rep.wall_count_ok = true;
  const auto maximal = cones_of_dim(n, n);
  for (const auto& [wall, l] : all_walls(n)) {
    ++rep.walls;
    std::vector<ConeId> containing;
    for (const ConeId& m : maximal)
      if ((wall.j().bits & ~m.j().bits) == 0 && (wall.k().bits & ~m.k().bits) == 0) containing.push_back(m);
    std::vector<ConeId> expected{ConeId(wall.j().with(l), wall.k()), ConeId(wall.j(), wall.k().with(l))};
    std::sort(containing.begin(), containing.end());
    std::sort(expected.begin(), expected.end());
    // Both extra rays enter the relation with positive coefficients exactly when they lie on
    // opposite sides of the wall's hyperplane.
    const WallData w = wall_relation(ctx, wall, l);
    const bool opposite = w.kernel_dim == 1 && sgn(w.coefficient(Ray::e(l))) > 0 &&
                          sgn(w.coefficient(Ray::neg_alpha(l))) > 0;
    if (containing != expected || !opposite) rep.wall_count_ok = false;
  }

  const RationalMatrix a = build_A(ctx);
  std::vector<RationalMatrix> inverses;
  for (const ConeId& m : maximal) inverses.push_back(inverse(generator_matrix(a, m.rays())));
  auto covered = [&](const RationalVector& x) {
    for (const auto& inv : inverses) {
      RationalVector lambda = inv * x;
      if (std::all_of(lambda.begin(), lambda.end(), [](const Rational& v) { return sgn(v) >= 0; })) return true;
    }
    return false;
  };
  std::mt19937_64 rng(seed);
  rep.samples = samples + 1;
  if (!covered(RationalVector(n))) ++rep.uncovered;
  for (std::size_t s = 0; s < samples; ++s) {
    RationalVector x(n);
    for (auto& v : x) v = random_rational(rng);
    if (!covered(x)) ++rep.uncovered;
  }
  rep.coverage_ok = rep.uncovered == 0;
  return rep;
}

AmpleReport check_ample(const QContext& ctx, const RationalVector& a) {
  if (static_cast<int>(a.size()) != ctx.n()) throw std::invalid_argument("need n coefficients");
  for (const auto& v : a)
    if (sgn(v) <= 0) throw std::invalid_argument("ample check requires all a_i > 0");
  AmpleReport rep;
  rep.pass = true;
  bool first = true;
  for (const auto& [wall, l] : all_walls(ctx.n())) {
    const WallData w = wall_relation(ctx, wall, l);
    ++rep.walls;
    Rational sum = 0;
    for (int j = 1; j <= ctx.n(); ++j) sum += a[j - 1] * w.coefficient(Ray::neg_alpha(j));
    if (w.kernel_dim != 1 || sgn(sum) <= 0) rep.pass = false;
    if (first || sum < rep.min_intersection) rep.min_intersection = sum;
    first = false;
  }
  return rep;
}

namespace {

std::pair<int, int> ordered(int a, int b) { return a <= b ? std::pair{a, b} : std::pair{b, a}; }

void add_to(Quadric& q, int a, int b, const Rational& c) {
  if (a == 0 || b == 0 || sgn(c) == 0) return;
  auto key = ordered(a, b);
  q[key] += c;
  if (sgn(q[key]) == 0) q.erase(key);
}

std::size_t span_rank(const std::vector<Quadric>& quads, int n) {
  std::map<std::pair<int, int>, std::size_t> col;
  for (int a = 1; a <= n; ++a)
    for (int b = a; b <= n; ++b) col.emplace(std::pair{a, b}, col.size());
  RationalMatrix m(quads.size(), col.size());
  for (std::size_t r = 0; r < quads.size(); ++r)
    for (const auto& [k, v] : quads[r]) m(r, col.at(k)) = v;
  return rank(m);
}

}  // namespace

SrPresentation sr_presentation(const QContext& ctx) {
  const int n = ctx.n();
  if (n > kMaxExhaustiveFanN) throw SizeGuardError("SR presentation supports n <= 6");
  const RationalMatrix a = build_A(ctx);
  SrPresentation sr;

  // Ray sets that span a cone of the fan; minimal non-faces are the rest, minimal under inclusion.
  std::vector<Ray> rays;
  for (int i = 1; i <= n; ++i) rays.push_back(Ray::e(i));
  for (int i = 1; i <= n; ++i) rays.push_back(Ray::neg_alpha(i));
  std::vector<bool> is_face(std::size_t{1} << (2 * n), false);
  for (const ConeId& c : all_cones(n)) is_face[c.j().bits | (c.k().bits << n)] = true;
  for (std::uint32_t mask = 1; mask < is_face.size(); ++mask) {
    if (is_face[mask]) continue;
    bool minimal = true;
    for (std::uint32_t b = mask; b != 0; b &= b - 1)
      if (!is_face[mask & ~(b & -b)]) minimal = false;
    if (!minimal) continue;
    std::vector<Ray> nf;
    for (int t = 0; t < 2 * n; ++t)
      if ((mask >> t) & 1u) nf.push_back(rays[t]);
    sr.nonfaces.push_back(std::move(nf));
  }

  // Linear relations sum_rho <m, u_rho> D_rho = 0 for m = e_i^*:  Y_i - sum_j A_ij X_j = 0.
  sr.linear_relations = RationalMatrix(n, n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      const RationalVector v = ray_vector(a, Ray::neg_alpha(j));
      sr.linear_relations(i - 1, j - 1) = -v[i - 1];
    }

  // Substitute Y into the non-face monomials. Non-faces pairing an e-ray with a -alpha-ray give
  // X_j * Y_i; two rays of the same kind never form a non-face here, but are handled generally.
  auto as_x_linear = [&](const Ray& r) {
    RationalVector v(n);
    if (r.kind == Ray::Kind::neg_alpha) {
      v[r.index - 1] = 1;
    } else {
      for (int j = 1; j <= n; ++j) v[j - 1] = sr.linear_relations(r.index - 1, j - 1);
    }
    return v;
  };
  bool all_quadratic = true;
  for (const auto& nf : sr.nonfaces) {
    if (nf.size() != 2) {
      all_quadratic = false;
      continue;
    }
    const RationalVector f = as_x_linear(nf[0]);
    const RationalVector g = as_x_linear(nf[1]);
    Quadric q;
    for (int s = 1; s <= n; ++s)
      for (int t = 1; t <= n; ++t) add_to(q, s, t, f[s - 1] * g[t - 1]);
    sr.eliminated.push_back(std::move(q));
  }

  for (int i = 1; i <= n; ++i) {
    Quadric q;
    add_to(q, i, i, ctx.q() + 1);
    if (i + 1 <= n) add_to(q, i, i + 1, Rational(-1));
    if (i - 1 >= 1) add_to(q, i, i - 1, -ctx.q());
    sr.klyachko.push_back(std::move(q));
  }
  std::vector<Quadric> both = sr.eliminated;
  both.insert(both.end(), sr.klyachko.begin(), sr.klyachko.end());
  const std::size_t r1 = span_rank(sr.eliminated, n);
  const std::size_t r2 = span_rank(sr.klyachko, n);
  sr.ideals_equal = all_quadratic && r1 == r2 && r1 == span_rank(both, n);

  // Graded pieces of Q[X]/(eliminated quadrics).
  sr.dims_match_binomial = true;
  for (int k = 0; k <= n + 1; ++k) {
    const auto monomials = compositions(n, k);
    std::map<ExponentVector, std::size_t> col;
    for (const auto& m : monomials) col.emplace(m, col.size());
    std::size_t relation_rank = 0;
    if (k >= 2) {
      const auto multipliers = compositions(n, k - 2);
      RationalMatrix rel(multipliers.size() * sr.eliminated.size(), monomials.size());
      std::size_t row = 0;
      for (const auto& mult : multipliers)
        for (const Quadric& q : sr.eliminated) {
          for (const auto& [ab, c] : q) {
            ExponentVector e = mult;
            ++e[ab.first - 1];
            ++e[ab.second - 1];
            rel(row, col.at(e)) += c;
          }
          ++row;
        }
      relation_rank = rank(rel);
    }
    const std::size_t dim = monomials.size() - relation_rank;
    sr.graded_dims.push_back(dim);
    mpz_class binom;
    mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    if (binom != static_cast<unsigned long>(dim)) sr.dims_match_binomial = false;
  }
  return sr;
}

Rational toric_top_integral(const QContext& ctx, const ExponentVector& eta) {
  const Rational d = det(build_A(ctx));
  return monomial_degree(ctx, eta) / q_factorial(ctx.n(), ctx.q()) / abs(d);
}

NormalizationReport top_normalization(const QContext& ctx) {
  const int n = ctx.n();
  const RationalMatrix a = build_A(ctx);
  auto alg = KlyachkoAlgebra::create(ctx);
  NormalizationReport rep;

  // In cohomology D_{-alpha_i} = u_i and D_{e_i} = sum_j A_ij u_j.
  for (const ConeId& m : cones_of_dim(n, n)) {
    KlyElement prod = alg->one();
    for (int i : m.j().elements()) {
      RationalVector row(n);
      for (int j = 1; j <= n; ++j) row[j - 1] = a(i - 1, j - 1);
      prod = kly_multiply(prod, alg->linear(row));
    }
    for (int k : m.k().elements()) prod = kly_multiply(prod, alg->generator(k));
    const Rational top = prod.coefficient(Subset::full(n));
    const Rational vol = abs(det(generator_matrix(a, m.rays())));
    rep.per_cone[m] = sgn(top) == 0 ? Rational(0) : 1 / (vol * top);
  }
  const Rational expected = 1 / abs(det(a));
  rep.cones_consistent = std::all_of(rep.per_cone.begin(), rep.per_cone.end(),
                                     [&](const auto& kv) { return kv.second == expected; });

  bool first = true;
  rep.ratio_constant = true;
  for (const auto& eta : compositions(n, n)) {
    const Rational deg = monomial_degree(ctx, eta);
    if (sgn(deg) == 0) continue;
    const Rational r = toric_top_integral(ctx, eta) / deg;
    if (first) {
      rep.ratio = r;
      first = false;
    } else if (r != rep.ratio) {
      rep.ratio_constant = false;
    }
  }
  const Rational fact = q_factorial(n, ctx.q());
  rep.claim_det_then_factorial = 1 / (q_int(n + 1, ctx.q()) * fact);
  rep.claim_factorial_squared = 1 / (fact * fact);
  return rep;
}

}  // namespace qkly
