#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qkly/absorption.hpp"

#include <cmath>

using namespace qkly;

namespace {

const std::vector<Rational> kQGrid{Rational(1, 3), Rational(1, 2), 1, 2, 3};

// All exponent vectors of length n with entries summing to `mass`.
void all_vectors(int n, int mass, ExponentVector& cur, std::vector<ExponentVector>& out) {
  if (static_cast<int>(cur.size()) == n - 1) {
    cur.push_back(mass);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int v = 0; v <= mass; ++v) {
    cur.push_back(v);
    all_vectors(n, mass - v, cur, out);
    cur.pop_back();
  }
}

std::vector<ExponentVector> vectors_of_mass(int n, int mass) {
  std::vector<ExponentVector> out;
  ExponentVector cur;
  all_vectors(n, mass, cur, out);
  return out;
}

struct Truncated {
  std::map<ExponentVector, Rational> absorbed;
  Rational dead;
  Rational unresolved;
};

// Pushes the full distribution forward `depth` steps with the leftmost rule.
Truncated expand(const Rational& q, const ExponentVector& eta, int depth) {
  const Rational right = 1 / (q + 1), left = q / (q + 1);
  const int n = static_cast<int>(eta.size());
  Truncated t;
  std::map<ExponentVector, Rational> frontier{{eta, 1}};
  for (int step = 0; step < depth && !frontier.empty(); ++step) {
    std::map<ExponentVector, Rational> next;
    for (const auto& [state, mass] : frontier) {
      int site = -1;
      for (int i = 0; i < n && site < 0; ++i)
        if (state[i] >= 2) site = i;
      if (site < 0) {
        t.absorbed[state] += mass;
        continue;
      }
      for (int dir : {-1, 1}) {
        const Rational w = mass * (dir < 0 ? left : right);
        const int to = site + dir;
        if (to < 0 || to >= n) {
          t.dead += w;
          continue;
        }
        ExponentVector s = state;
        --s[site];
        ++s[to];
        next[s] += w;
      }
    }
    frontier = std::move(next);
  }
  for (const auto& [state, mass] : frontier) {
    bool sqfree = true;
    for (int v : state) sqfree = sqfree && v <= 1;
    if (sqfree) t.absorbed[state] += mass;
    else t.unresolved += mass;
  }
  return t;
}

Rational sum_probabilities(const AbsorptionResult& r) {
  Rational s = 0;
  for (const auto& [k, v] : r.probabilities) s += v;
  return s;
}

}  // namespace

TEST_CASE("reduce_measure examples") {
  auto r = reduce_measure(QContext(2, 2), {2, 0});
  CHECK(r.probabilities.size() == 1);
  CHECK(r.probability_of(Subset::of({1, 2})) == Rational(1, 3));
  CHECK(r.dead_mass == Rational(2, 3));

  for (const auto& q : kQGrid) {
    r = reduce_measure(QContext(4, q), {1, 0, 1, 1});
    CHECK(r.probability_of(Subset::of({1, 3, 4})) == 1);
    CHECK(r.dead_mass == 0);
  }

  r = reduce_measure(QContext(3, 1), {1, 2, 0});
  CHECK(r.probability_of(Subset::full(3)) == Rational(2, 3));
  CHECK(r.dead_mass == Rational(1, 3));
}

TEST_CASE("reduce_measure errors and guards") {
  CHECK_THROWS_AS(reduce_measure(QContext(2, 1), {1, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(reduce_measure(QContext(2, 1), {-1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(reduce_measure(QContext(2, 1), {13, 0}), SizeGuardError);
  CHECK_THROWS_AS(reduce_measure(QContext(13, 1), ExponentVector(13, 0)), SizeGuardError);
  CHECK_NOTHROW(reduce_measure(QContext(3, 1), {12, 0, 0}));
}

TEST_CASE("the zero measure is already absorbed") {
  auto r = reduce_measure(QContext(3, 2), {0, 0, 0});
  CHECK(r.probability_of(Subset{}) == 1);
  CHECK(r.dead_mass == 0);
}

TEST_CASE("helpers") {
  CHECK(is_squarefree({1, 0, 1}));
  CHECK_FALSE(is_squarefree({2, 0}));
  CHECK(total_mass({1, 2, 3}) == 6);
  CHECK(support_of({1, 0, 1}) == Subset::of({1, 3}));
  CHECK(indicator(3, Subset::of({2})) == ExponentVector{0, 1, 0});
  CHECK(to_point_measure({0, 2, 1}) == PointMeasure{{2, 2}, {3, 1}});
}

TEST_CASE("property: conservation and support invariants, mass <= 5, n <= 5") {
  for (const auto& q : kQGrid)
    for (int n = 1; n <= 5; ++n)
      for (int mass = 0; mass <= 5; ++mass)
        for (const auto& eta : vectors_of_mass(n, mass)) {
          auto r = reduce_measure(QContext(n, q), eta);
          CHECK(sum_probabilities(r) + r.dead_mass == 1);
          CHECK(r.dead_mass >= 0);
          for (const auto& [s, p] : r.probabilities) {
            CHECK(p > 0);
            CHECK(s.size() == mass);
          }
          if (mass > n) CHECK(r.dead_mass == 1);
        }
}

TEST_CASE("property: rule independence, mass <= 5, n <= 5") {
  std::vector<SelectionRule> rules{SelectionRule::leftmost(), SelectionRule::rightmost()};
  for (std::uint64_t s = 1; s <= 5; ++s) rules.push_back(SelectionRule::seeded_random(1000 + 77 * s));
  for (const auto& q : {Rational(1, 2), Rational(1), Rational(3)})
    for (int n = 1; n <= 5; ++n)
      for (int mass = 0; mass <= 5; ++mass)
        for (const auto& eta : vectors_of_mass(n, mass)) {
          const QContext ctx(n, q);
          const auto base = reduce_measure(ctx, eta, rules[0]);
          for (std::size_t r = 1; r < rules.size(); ++r) CHECK(reduce_measure(ctx, eta, rules[r]) == base);
        }
}

TEST_CASE("property: exact distribution agrees with 60-step truncated expansion, mass <= 3") {
  for (const auto& q : kQGrid)
    for (int n = 1; n <= 4; ++n)
      for (int mass = 0; mass <= 3; ++mass)
        for (const auto& eta : vectors_of_mass(n, mass)) {
          const auto exact = reduce_measure(QContext(n, q), eta);
          const Truncated t = expand(q, eta, 60);
          // everything the truncation has not resolved can land anywhere
          const Rational slack = t.unresolved;
          CHECK(slack < Rational(1, 1000));
          CHECK(abs(exact.dead_mass - t.dead) <= slack);
          CHECK(exact.dead_mass >= t.dead);
          for (const auto& [state, p] : t.absorbed) {
            const Rational e = exact.probability_of(support_of(state));
            CHECK(e >= p);
            CHECK(e - p <= slack);
          }
          for (const auto& [s, p] : exact.probabilities) CHECK(t.absorbed.contains(indicator(n, s)));
        }
}

TEST_CASE("selection rules are deterministic") {
  auto a = SelectionRule::seeded_random(5), b = SelectionRule::seeded_random(5);
  for (std::uint64_t h = 0; h < 100; ++h) {
    CHECK(a.pick(4, h) == b.pick(4, h));
    CHECK(a.pick(4, h) < 4);
  }
  CHECK(SelectionRule::leftmost().pick(3, 9) == 0);
  CHECK(SelectionRule::rightmost().pick(3, 9) == 2);
}

TEST_CASE("simulate_mc: already absorbed input hits every trial") {
  McOptions opt;
  opt.trials = 1000;
  opt.seed = 3;
  auto r = simulate_mc(Rational(1, 2), Rational(1, 2), {{1, 1}, {2, 1}}, {{1, 1}, {2, 1}}, SelectionRule::leftmost(), opt);
  CHECK(r.hits == 1000);
  CHECK(r.completed == 1000);
  CHECK(r.estimate == 1);
  CHECK(r.stderr_estimate == 0.0);
}

TEST_CASE("simulate_mc examples within 4 standard errors") {
  McOptions opt;
  opt.trials = 100000;
  opt.seed = 20240601;
  auto r = simulate_mc(Rational(2, 3), Rational(1, 3), {{1, 2}}, {{1, 1}, {2, 1}}, SelectionRule::leftmost(), opt);
  CHECK(r.completed == opt.trials);
  CHECK(std::abs(r.estimate.get_d() - 1.0 / 3.0) < 4 * r.stderr_estimate);

  r = simulate_mc(Rational(1, 2), Rational(1, 2), {{1, 1}, {2, 2}}, {{1, 1}, {2, 1}, {3, 1}},
                  SelectionRule::leftmost(), opt);
  CHECK(std::abs(r.estimate.get_d() - 2.0 / 3.0) < 4 * r.stderr_estimate);
}

TEST_CASE("simulate_mc is reproducible and independent of the worker count") {
  McOptions opt;
  opt.trials = 20000;
  opt.seed = 99;
  const PointMeasure eta{{1, 3}, {2, 0}, {3, 0}}, target{{1, 1}, {2, 1}, {3, 1}};
  opt.workers = 1;
  auto a = simulate_mc(Rational(1, 3), Rational(2, 3), eta, target, SelectionRule::seeded_random(4), opt);
  auto a2 = simulate_mc(Rational(1, 3), Rational(2, 3), eta, target, SelectionRule::seeded_random(4), opt);
  opt.workers = 4;
  auto b = simulate_mc(Rational(1, 3), Rational(2, 3), eta, target, SelectionRule::seeded_random(4), opt);
  CHECK(a.hits == a2.hits);
  CHECK(a.hits == b.hits);
  CHECK(a.completed == b.completed);
  CHECK(a.estimate == b.estimate);
  opt.seed = 100;
  auto c = simulate_mc(Rational(1, 3), Rational(2, 3), eta, target, SelectionRule::seeded_random(4), opt);
  CHECK(c.hits != a.hits);
}

TEST_CASE("simulate_mc: leaving the target span is a definite miss") {
  // The early exit must not change any outcome: widening the window only lets missed
  // trajectories run longer.
  McOptions opt;
  opt.trials = 5000;
  opt.seed = 7;
  const PointMeasure eta{{1, 1}, {2, 2}}, target{{1, 1}, {2, 1}, {3, 1}};
  auto narrow = simulate_mc(Rational(1, 2), Rational(1, 2), eta, target, SelectionRule::leftmost(), opt);
  opt.window = 6;
  auto wide = simulate_mc(Rational(1, 2), Rational(1, 2), eta, target, SelectionRule::leftmost(), opt);
  REQUIRE(wide.timed_out == 0);
  CHECK(narrow.hits == wide.hits);
}

TEST_CASE("simulate_mc: timeouts are reported and excluded") {
  McOptions opt;
  opt.trials = 200;
  opt.seed = 1;
  opt.max_steps = 1;
  opt.window = 50;
  auto r = simulate_mc(Rational(1, 2), Rational(1, 2), {{0, 6}}, {{-2, 1}, {-1, 1}, {0, 1}, {1, 1}, {2, 1}, {3, 1}},
                       SelectionRule::leftmost(), opt);
  CHECK(r.timed_out == 200);
  CHECK(r.completed == 0);
  CHECK(r.hits == 0);
}

TEST_CASE("simulate_mc errors") {
  McOptions opt;
  opt.trials = 10;
  const PointMeasure eta{{1, 2}}, target{{1, 1}, {2, 1}};
  CHECK_THROWS_AS(simulate_mc(Rational(1, 2), Rational(1, 3), eta, target, SelectionRule::leftmost(), opt),
                  InvalidProbabilityError);
  CHECK_THROWS_AS(simulate_mc(Rational(0), Rational(1), eta, target, SelectionRule::leftmost(), opt),
                  InvalidProbabilityError);
  CHECK_THROWS_AS(simulate_mc(Rational(1, 2), Rational(1, 2), eta, {{1, 1}}, SelectionRule::leftmost(), opt),
                  std::invalid_argument);
  CHECK_THROWS_AS(simulate_mc(Rational(1, 2), Rational(1, 2), eta, {{1, 2}}, SelectionRule::leftmost(), opt),
                  std::invalid_argument);
}
