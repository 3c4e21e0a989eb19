#pragma once

#include "qkly/qcore.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace qkly {

/// Multiplicities eta(1..n) of an exponent vector / point measure supported on [n].
using ExponentVector = std::vector<int>;

/// Finitely supported point measure on the integers: site -> multiplicity (> 0 only).
using PointMeasure = std::map<long, int>;

/// Which site with multiplicity >= 2 is updated next.
class SelectionRule {
 public:
  enum class Kind { leftmost, rightmost, seeded_random };

  static SelectionRule leftmost() { return SelectionRule(Kind::leftmost, 0); }
  static SelectionRule rightmost() { return SelectionRule(Kind::rightmost, 0); }
  static SelectionRule seeded_random(std::uint64_t seed) { return SelectionRule(Kind::seeded_random, seed); }

  Kind kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }

  /// Picks one of `eligible` (sorted ascending, nonempty); `state_hash` identifies the
  /// current configuration so that the random rule is a fixed function of the state.
  std::size_t pick(std::size_t eligible_count, std::uint64_t state_hash) const;

 private:
  SelectionRule(Kind k, std::uint64_t seed) : kind_(k), seed_(seed) {}
  Kind kind_;
  std::uint64_t seed_;
};

/// Final distribution of the boundary-killed chain on [n]. Keys are the 0/1-valued end
/// states, stored as subsets of [n].
struct AbsorptionResult {
  std::map<Subset, Rational> probabilities;
  Rational dead_mass;

  Rational probability_of(Subset s) const;
  friend bool operator==(const AbsorptionResult&, const AbsorptionResult&) = default;
};

inline constexpr int kMaxReductionMass = 12;

bool is_squarefree(const ExponentVector& eta);
int total_mass(const ExponentVector& eta);
Subset support_of(const ExponentVector& squarefree_eta);
ExponentVector indicator(int n, Subset s);

/// Exact absorption distribution. From a state with eta(i) >= 2 at the selected site i the chain
/// moves one unit to i+1 with weight 1/(q+1) and to i-1 with weight q/(q+1); leaving [n] kills
/// the trajectory. Cycles in the transition graph are resolved by SCC condensation and an exact
/// linear solve per component.
AbsorptionResult reduce_measure(const QContext& ctx, const ExponentVector& eta,
                                const SelectionRule& rule = SelectionRule::leftmost());

struct McOptions {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  long window = 0;
  std::uint64_t max_steps = 100000;
  unsigned workers = 1;
};

struct McResult {
  std::uint64_t hits = 0;
  std::uint64_t completed = 0;
  std::uint64_t timed_out = 0;
  Rational estimate;
  double stderr_estimate = 0.0;
};

class InvalidProbabilityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Monte Carlo estimate of the probability that `eta` ends as `target` under the unkilled
/// displacement process on the integers (left with q_left, right with q_right).
///
/// A trajectory completes when the measure becomes 0/1-valued, or as a miss once its support
/// leaves [min(target) - window, max(target) + window]. The support minimum never increases and
/// the maximum never decreases, so leaving the target span already rules out a hit. Timed-out
/// trajectories are counted separately and excluded from the estimate. Trial t uses a random
/// stream derived from (seed, t), so the result does not depend on `workers`.
McResult simulate_mc(const Rational& q_left, const Rational& q_right, const PointMeasure& eta,
                     const PointMeasure& target, const SelectionRule& rule, const McOptions& options);

/// Point measure placing eta(i) at site i, i = 1..n.
PointMeasure to_point_measure(const ExponentVector& eta);

}  // namespace qkly
