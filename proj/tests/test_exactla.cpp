#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "generators.hpp"
#include "qkly/exactla.hpp"

using namespace qkly;

namespace {

RationalVector vec(std::initializer_list<Rational> v) { return RationalVector(v); }

bool annihilates(const RationalMatrix& m, const RationalVector& v) {
  for (const auto& x : m * v)
    if (x != 0) return false;
  return true;
}

// Sign pattern of x^T S x over all integer directions in [-r, r]^d, x != 0.
Definiteness grid_definiteness(const RationalMatrix& s, int r) {
  const std::size_t d = s.rows();
  std::vector<int> x(d, -r);
  bool pos = false, neg = false, zero = false;
  for (;;) {
    bool nonzero = false;
    for (int v : x) nonzero = nonzero || v != 0;
    if (nonzero) {
      Rational val = 0;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) val += s(i, j) * x[i] * x[j];
      if (val > 0) pos = true;
      else if (val < 0) neg = true;
      else zero = true;
    }
    std::size_t k = 0;
    while (k < d && x[k] == r) x[k++] = -r;
    if (k == d) break;
    ++x[k];
  }
  if (pos && neg) return Definiteness::indefinite;
  if (pos) return zero ? Definiteness::positive_semidefinite : Definiteness::positive_definite;
  if (neg) return zero ? Definiteness::negative_semidefinite : Definiteness::negative_definite;
  return Definiteness::zero;
}

}  // namespace

TEST_CASE("rationals are canonical") {
  CHECK(to_string(parse_rational("6/4")) == "3/2");
  CHECK(to_string(parse_rational("-2/4")) == "-1/2");
  CHECK(to_string(parse_rational("+3")) == "3");
  CHECK(to_string(parse_rational("0/5")) == "0");
  CHECK(to_string(parse_rational("7")) == "7");
  CHECK(parse_rational("-3/6").get_den() > 0);
  CHECK_THROWS_AS(parse_rational("3/-6"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/2/3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
  CHECK(rational_pow(Rational(2, 3), 3) == Rational(8, 27));
  CHECK(rational_pow(Rational(5), 0) == 1);
}

TEST_CASE("solve examples") {
  auto id = RationalMatrix::identity(2);
  auto r = solve(id, vec({3, -2}));
  REQUIRE(r);
  CHECK(r.x == vec({3, -2}));

  RationalMatrix m{{3, -1}, {-2, 3}};
  r = solve(m, vec({1, 0}));
  REQUIRE(r);
  CHECK(r.x == vec({Rational(3, 7), Rational(2, 7)}));

  RationalMatrix ones{{1, 1}, {1, 1}};
  r = solve(ones, vec({0, 1}));
  CHECK_FALSE(r);
  CHECK(r.status == SolveStatus::inconsistent);
  CHECK(r.x.empty());
  // consistent but square singular gets its own marker
  CHECK(solve(ones, vec({1, 1})).status == SolveStatus::singular);
}

TEST_CASE("rectangular solve returns a particular solution") {
  RationalMatrix m{{1, 2, 3}};
  auto r = solve(m, vec({6}));
  REQUIRE(r);
  CHECK(m * r.x == vec({6}));
  RationalMatrix tall{{1, 0}, {0, 1}, {1, 1}};
  CHECK(solve(tall, vec({1, 2, 3})).x == vec({1, 2}));
  CHECK(solve(tall, vec({1, 2, 4})).status == SolveStatus::inconsistent);
}

TEST_CASE("det examples") {
  CHECK(det(RationalMatrix::identity(3)) == 1);
  CHECK(det(RationalMatrix{{3, -1}, {-2, 3}}) == 7);
  CHECK(det(RationalMatrix(2, 2)) == 0);
  CHECK(det(RationalMatrix{{0, 1}, {1, 0}}) == -1);
  CHECK(det(RationalMatrix{{Rational(1, 2), Rational(1, 3)}, {Rational(1, 4), Rational(1, 5)}}) == Rational(1, 60));
  CHECK_THROWS(det(RationalMatrix(2, 3)));
}

TEST_CASE("inverse examples") {
  CHECK(inverse(RationalMatrix::identity(2)) == RationalMatrix::identity(2));
  RationalMatrix expected{{Rational(3, 7), Rational(1, 7)}, {Rational(2, 7), Rational(3, 7)}};
  CHECK(inverse(RationalMatrix{{3, -1}, {-2, 3}}) == expected);
  CHECK_THROWS_AS(inverse(RationalMatrix{{1, 1}, {1, 1}}), SingularMatrixError);
}

TEST_CASE("nullspace examples") {
  CHECK(nullspace(RationalMatrix::identity(2)).empty());
  auto ns = nullspace(RationalMatrix{{3, -2}});
  REQUIRE(ns.size() == 1);
  CHECK(ns[0][0] * 3 == ns[0][1] * 2);
  CHECK(ns[0][0] != 0);

  RationalMatrix wall{{3, 0, -3}, {-2, 0, 2}};
  ns = nullspace(wall);
  CHECK(ns.size() == 2);
  for (const auto& v : ns) CHECK(annihilates(wall, v));
  CHECK(rank(RationalMatrix::from_columns(ns, 3)) == 2);

  RationalMatrix zero(2, 3);
  CHECK(nullspace(zero).size() == 3);
}

TEST_CASE("definiteness examples") {
  CHECK(definiteness(RationalMatrix{{2, 0}, {0, 3}}) == Definiteness::positive_definite);
  CHECK(definiteness(RationalMatrix(2, 2)) == Definiteness::zero);
  CHECK(definiteness(RationalMatrix{{1, 3}, {3, 2}}) == Definiteness::indefinite);
  CHECK(definiteness(RationalMatrix{{0, 1}, {1, 0}}) == Definiteness::indefinite);
  CHECK(definiteness(RationalMatrix{{1, 1}, {1, 1}}) == Definiteness::positive_semidefinite);
  CHECK(definiteness(RationalMatrix{{-1, 0}, {0, 0}}) == Definiteness::negative_semidefinite);
  CHECK(definiteness(RationalMatrix{{-2, 1}, {1, -2}}) == Definiteness::negative_definite);
  CHECK_THROWS_AS(definiteness(RationalMatrix{{1, 2}, {3, 4}}), NotSymmetricError);
  CHECK(to_string(Definiteness::positive_definite) == "positive-definite");
}

TEST_CASE("property: solve(M, Mx) = x and det(M) det(M^-1) = 1") {
  std::mt19937_64 rng(11);
  int nonsingular = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 5;
    RationalMatrix m = testgen::random_matrix(rng, n, n);
    RationalVector x = testgen::random_vector(rng, n);
    const Rational d = det(m);
    if (d == 0) {
      CHECK_THROWS_AS(inverse(m), SingularMatrixError);
      CHECK(rank(m) < n);
      continue;
    }
    ++nonsingular;
    auto r = solve(m, m * x);
    REQUIRE(r);
    CHECK(r.x == x);
    RationalMatrix inv = inverse(m);
    CHECK(d * det(inv) == 1);
    CHECK(m * inv == RationalMatrix::identity(n));
    CHECK(rank(m) == n);
  }
  CHECK(nonsingular > 200);
}

TEST_CASE("property: det is multiplicative and transpose-invariant") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 4;
    RationalMatrix a = testgen::random_matrix(rng, n, n), b = testgen::random_matrix(rng, n, n);
    CHECK(det(a * b) == det(a) * det(b));
    CHECK(det(a.transpose()) == det(a));
  }
}

TEST_CASE("property: rank-nullity and nullspace vectors are annihilated") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t r = 1 + trial % 4, c = 1 + (trial / 4) % 5;
    RationalMatrix m = testgen::random_matrix(rng, r, c);
    if (trial % 3 == 0 && r > 1)  // force a dependent row
      for (std::size_t j = 0; j < c; ++j) m(r - 1, j) = m(0, j) * 2;
    auto ns = nullspace(m);
    CHECK(ns.size() + rank(m) == c);
    for (const auto& v : ns) CHECK(annihilates(m, v));
    if (!ns.empty()) CHECK(rank(RationalMatrix::from_columns(ns, c)) == ns.size());
  }
}

TEST_CASE("property: definiteness agrees with a brute-force direction grid") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 2 + trial % 2;
    RationalMatrix s = testgen::random_symmetric_int(rng, n, 2);
    if (trial % 4 == 0) {  // bias toward semidefinite cases: S = B^T B
      RationalMatrix b(n, n);
      std::uniform_int_distribution<int> d(-2, 2);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) b(i, j) = (i == n - 1) ? 0 : d(rng);
      s = b.transpose() * b;
    }
    // kernel directions of these integer matrices have integer entries of size at most 8
    const int r = n == 2 ? 12 : 8;
    CHECK_MESSAGE(definiteness(s) == grid_definiteness(s, r), "trial ", trial);
  }
}

TEST_CASE("property: inertia matches Sylvester's law for B^T D B") {
  std::mt19937_64 rng(15);
  std::uniform_int_distribution<int> sign(-1, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 5;
    RationalMatrix b = testgen::random_matrix(rng, n, n);
    if (det(b) == 0) continue;
    RationalMatrix d(n, n);
    Inertia want;
    for (std::size_t i = 0; i < n; ++i) {
      const int s = sign(rng);
      d(i, i) = s;
      (s > 0 ? want.positive : s < 0 ? want.negative : want.zero)++;
    }
    const Inertia got = inertia(b.transpose() * d * b);
    CHECK(got.positive == want.positive);
    CHECK(got.negative == want.negative);
    CHECK(got.zero == want.zero);
  }
}
