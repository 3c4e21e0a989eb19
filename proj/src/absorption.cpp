#include "qkly/absorption.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <thread>
#include <unordered_map>

namespace qkly {

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr int kDead = -1;

struct Distribution {
  std::map<Subset, Rational> p;
  Rational dead;
};

// Packs multiplicities (each <= 15) four bits per site.
std::uint64_t pack(const ExponentVector& eta) {
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < eta.size(); ++i) key |= static_cast<std::uint64_t>(eta[i]) << (4 * i);
  return key;
}

std::uint64_t hash_state(const ExponentVector& eta) { return mix64(pack(eta)); }

struct TransitionGraph {
  std::vector<ExponentVector> states;
  // For transient states: successor after moving right / left (kDead when it leaves [n]).
  std::vector<int> right;
  std::vector<int> left;
  std::vector<bool> absorbing;
};

TransitionGraph build_graph(const ExponentVector& start, const SelectionRule& rule) {
  TransitionGraph g;
  std::unordered_map<std::uint64_t, int> index;
  auto intern = [&](const ExponentVector& s) {
    auto [it, inserted] = index.emplace(pack(s), static_cast<int>(g.states.size()));
    if (inserted) {
      g.states.push_back(s);
      g.right.push_back(kDead);
      g.left.push_back(kDead);
      g.absorbing.push_back(is_squarefree(s));
    }
    return it->second;
  };
  intern(start);
  const int n = static_cast<int>(start.size());
  for (std::size_t cur = 0; cur < g.states.size(); ++cur) {
    if (g.absorbing[cur]) continue;
    ExponentVector s = g.states[cur];
    std::vector<int> eligible;
    for (int i = 0; i < n; ++i)
      if (s[i] >= 2) eligible.push_back(i);
    const int site = eligible[rule.pick(eligible.size(), hash_state(s))];
    int r = kDead;
    int l = kDead;
    if (site + 1 < n) {
      ExponentVector t = s;
      --t[site];
      ++t[site + 1];
      r = intern(t);
    }
    if (site - 1 >= 0) {
      ExponentVector t = s;
      --t[site];
      ++t[site - 1];
      l = intern(t);
    }
    g.right[cur] = r;
    g.left[cur] = l;
  }
  return g;
}

// Iterative Tarjan; components come out sinks first.
std::vector<std::vector<int>> strongly_connected_components(const TransitionGraph& g) {
  const int count = static_cast<int>(g.states.size());
  std::vector<int> order(count, -1);
  std::vector<int> low(count, 0);
  std::vector<bool> on_stack(count, false);
  std::vector<int> stack;
  std::vector<std::vector<int>> components;
  int next = 0;

  auto successors = [&](int v) {
    std::vector<int> out;
    if (g.absorbing[v]) return out;
    if (g.right[v] != kDead) out.push_back(g.right[v]);
    if (g.left[v] != kDead) out.push_back(g.left[v]);
    return out;
  };

  struct Frame {
    int v;
    std::vector<int> succ;
    std::size_t pos;
  };
  for (int root = 0; root < count; ++root) {
    if (order[root] != -1) continue;
    std::vector<Frame> call;
    call.push_back({root, successors(root), 0});
    order[root] = low[root] = next++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.pos < f.succ.size()) {
        int w = f.succ[f.pos++];
        if (order[w] == -1) {
          order[w] = low[w] = next++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, successors(w), 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], order[w]);
        }
        continue;
      }
      const int v = f.v;
      if (low[v] == order[v]) {
        std::vector<int> comp;
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        components.push_back(std::move(comp));
      }
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
    }
  }
  return components;
}

}  // namespace

std::size_t SelectionRule::pick(std::size_t eligible_count, std::uint64_t state_hash) const {
  switch (kind_) {
    case Kind::leftmost: return 0;
    case Kind::rightmost: return eligible_count - 1;
    case Kind::seeded_random: return mix64(state_hash ^ mix64(seed_)) % eligible_count;
  }
  return 0;
}

Rational AbsorptionResult::probability_of(Subset s) const {
  auto it = probabilities.find(s);
  return it == probabilities.end() ? Rational(0) : it->second;
}

bool is_squarefree(const ExponentVector& eta) {
  return std::all_of(eta.begin(), eta.end(), [](int c) { return c == 0 || c == 1; });
}

int total_mass(const ExponentVector& eta) {
  int m = 0;
  for (int c : eta) m += c;
  return m;
}

Subset support_of(const ExponentVector& eta) {
  Subset s;
  for (std::size_t i = 0; i < eta.size(); ++i)
    if (eta[i] > 0) s = s.with(static_cast<int>(i) + 1);
  return s;
}

ExponentVector indicator(int n, Subset s) {
  ExponentVector eta(n, 0);
  for (int i : s.elements()) eta[i - 1] = 1;
  return eta;
}

AbsorptionResult reduce_measure(const QContext& ctx, const ExponentVector& eta,
                                const SelectionRule& rule) {
  const int n = ctx.n();
  if (static_cast<int>(eta.size()) != n)
    throw std::invalid_argument("exponent vector length must equal n");
  if (std::any_of(eta.begin(), eta.end(), [](int c) { return c < 0; }))
    throw std::invalid_argument("exponent vector entries must be nonnegative");
  if (n > kMaxSubsetN || total_mass(eta) > kMaxReductionMass)
    throw SizeGuardError("state space guard: n <= 12 and total mass <= 12 required");

  if (is_squarefree(eta)) return {{{support_of(eta), Rational(1)}}, Rational(0)};

  const Rational w_right = 1 / (ctx.q() + 1);
  const Rational w_left = ctx.q() / (ctx.q() + 1);

  TransitionGraph g = build_graph(eta, rule);
  std::vector<Distribution> dist(g.states.size());
  std::vector<int> comp_of(g.states.size(), -1);

  // Contribution of a successor that is already solved (or dead) to a distribution.
  auto add_scaled = [&](Distribution& acc, int succ, const Rational& w) {
    if (succ == kDead) {
      acc.dead += w;
      return;
    }
    const Distribution& d = dist[succ];
    for (const auto& [k, v] : d.p) acc.p[k] += w * v;
    acc.dead += w * d.dead;
  };

  auto components = strongly_connected_components(g);
  for (std::size_t c = 0; c < components.size(); ++c) {
    const auto& comp = components[c];
    for (int v : comp) comp_of[v] = static_cast<int>(c);

    if (comp.size() == 1) {
      const int v = comp[0];
      if (g.absorbing[v]) {
        dist[v].p[support_of(g.states[v])] = 1;
        continue;
      }
      add_scaled(dist[v], g.right[v], w_right);
      add_scaled(dist[v], g.left[v], w_left);
      continue;
    }

    // (I - T) X = B over the component's states; columns of B are the reachable outcomes.
    std::map<int, std::size_t> local;
    for (std::size_t i = 0; i < comp.size(); ++i) local[comp[i]] = i;
    std::vector<Distribution> external(comp.size());
    RationalMatrix m = RationalMatrix::identity(comp.size());
    for (std::size_t i = 0; i < comp.size(); ++i) {
      const int v = comp[i];
      for (auto [succ, w] : {std::pair{g.right[v], w_right}, std::pair{g.left[v], w_left}}) {
        if (succ != kDead && comp_of[succ] == static_cast<int>(c)) {
          m(i, local[succ]) -= w;
        } else {
          add_scaled(external[i], succ, w);
        }
      }
    }
    std::vector<Subset> keys;
    for (const auto& e : external)
      for (const auto& [k, v] : e.p) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    RationalMatrix b(comp.size(), keys.size() + 1);
    for (std::size_t i = 0; i < comp.size(); ++i) {
      for (std::size_t k = 0; k < keys.size(); ++k) {
        auto it = external[i].p.find(keys[k]);
        if (it != external[i].p.end()) b(i, k) = it->second;
      }
      b(i, keys.size()) = external[i].dead;
    }
    RationalMatrix x = solve(m, b);
    for (std::size_t i = 0; i < comp.size(); ++i) {
      Distribution& d = dist[comp[i]];
      for (std::size_t k = 0; k < keys.size(); ++k)
        if (sgn(x(i, k)) != 0) d.p[keys[k]] = x(i, k);
      d.dead = x(i, keys.size());
    }
  }

  AbsorptionResult result;
  for (const auto& [k, v] : dist[0].p)
    if (sgn(v) != 0) result.probabilities.emplace(k, v);
  result.dead_mass = dist[0].dead;
  return result;
}

PointMeasure to_point_measure(const ExponentVector& eta) {
  PointMeasure m;
  for (std::size_t i = 0; i < eta.size(); ++i)
    if (eta[i] > 0) m[static_cast<long>(i) + 1] = eta[i];
  return m;
}

namespace {

enum class TrialOutcome { hit, miss, timed_out };

TrialOutcome run_trial(PointMeasure state, const PointMeasure& target, long lo, long hi,
                       std::uint64_t left_num, std::uint64_t denom, const SelectionRule& rule,
                       std::uint64_t max_steps, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> coin(0, denom - 1);
  std::vector<long> eligible;
  for (std::uint64_t step = 0;; ++step) {
    if (state.begin()->first < lo || state.rbegin()->first > hi) return TrialOutcome::miss;
    eligible.clear();
    std::uint64_t h = 0;
    for (const auto& [site, mult] : state) {
      if (mult >= 2) eligible.push_back(site);
      h = mix64(h ^ (static_cast<std::uint64_t>(site) * 31 + static_cast<std::uint64_t>(mult)));
    }
    if (eligible.empty()) return state == target ? TrialOutcome::hit : TrialOutcome::miss;
    if (step == max_steps) return TrialOutcome::timed_out;
    const long site = eligible[rule.pick(eligible.size(), h)];
    const long dest = coin(rng) < left_num ? site - 1 : site + 1;
    if (--state[site] == 0) state.erase(site);
    ++state[dest];
  }
}

}  // namespace

McResult simulate_mc(const Rational& q_left, const Rational& q_right, const PointMeasure& eta,
                     const PointMeasure& target, const SelectionRule& rule, const McOptions& options) {
  if (sgn(q_left) <= 0 || sgn(q_right) <= 0 || q_left + q_right != 1)
    throw InvalidProbabilityError("q_L and q_R must be positive and sum to 1");
  auto mass = [](const PointMeasure& m) {
    long s = 0;
    for (const auto& [site, c] : m) {
      if (c < 0) throw std::invalid_argument("negative multiplicity");
      s += c;
    }
    return s;
  };
  if (mass(eta) != mass(target)) throw std::invalid_argument("eta and target must have equal mass");
  for (const auto& [site, c] : target)
    if (c != 1) throw std::invalid_argument("target must be 0/1-valued");
  if (!q_left.get_den().fits_ulong_p())
    throw std::invalid_argument("q_L denominator too large for sampling");

  PointMeasure start;
  for (const auto& [site, c] : eta)
    if (c > 0) start[site] = c;
  PointMeasure goal = target;

  McResult res;
  if (start.empty()) {
    res.hits = res.completed = options.trials;
    res.estimate = options.trials > 0 ? 1 : 0;
    return res;
  }
  const long lo = goal.empty() ? 0 : goal.begin()->first - options.window;
  const long hi = goal.empty() ? 0 : goal.rbegin()->first + options.window;
  const std::uint64_t denom = q_left.get_den().get_ui();
  const std::uint64_t left_num = q_left.get_num().get_ui();

  struct Tally {
    std::uint64_t hits = 0, misses = 0, timed_out = 0;
  };
  const unsigned workers = std::max(1u, options.workers);
  std::vector<Tally> tallies(workers);
  auto work = [&](unsigned w) {
    const std::uint64_t begin = options.trials * w / workers;
    const std::uint64_t end = options.trials * (w + 1) / workers;
    Tally& t = tallies[w];
    for (std::uint64_t trial = begin; trial < end; ++trial) {
      std::mt19937_64 rng(mix64(options.seed) ^ mix64(trial + 0x5bd1e995ULL));
      switch (run_trial(start, goal, lo, hi, left_num, denom, rule, options.max_steps, rng)) {
        case TrialOutcome::hit: ++t.hits; break;
        case TrialOutcome::miss: ++t.misses; break;
        case TrialOutcome::timed_out: ++t.timed_out; break;
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> threads;
    for (unsigned w = 0; w < workers; ++w) threads.emplace_back(work, w);
  }
  for (const Tally& t : tallies) {
    res.hits += t.hits;
    res.completed += t.hits + t.misses;
    res.timed_out += t.timed_out;
  }
  if (res.completed > 0) {
    res.estimate = Rational(static_cast<unsigned long>(res.hits), static_cast<unsigned long>(res.completed));
    res.estimate.canonicalize();
    const double p = res.estimate.get_d();
    res.stderr_estimate = std::sqrt(p * (1.0 - p) / static_cast<double>(res.completed));
  }
  return res;
}

}  // namespace qkly
