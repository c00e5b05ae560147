#pragma once

#include <functional>
#include <string>
#include <vector>

#include "netcoord/population.hpp"
#include "netcoord/rng.hpp"
#include "netcoord/tiebreak.hpp"
#include "netcoord/verdict.hpp"

namespace netcoord {

// K(z, y): every choice that some agent selects at z but not at y. Empty
// iff z = y.
inline ChoiceSet kset(const State& z, const State& y) {
  if (z.size() != y.size()) throw std::invalid_argument("kset: state length mismatch");
  ChoiceSet out;
  for (std::size_t i = 0; i < z.size(); ++i)
    if (z[i] != y[i]) out.insert(z[i]);
  return out;
}

namespace detail {

// k^n, saturating at cap+1 so callers can compare against a budget.
inline long ipow_capped(int k, int n, long cap) {
  long v = 1;
  for (int i = 0; i < n; ++i) {
    if (v > cap / k) return cap + 1;
    v *= k;
  }
  return v;
}

// Enumeration of C^n in lexicographic order, agent 0 most significant.
struct StateSpace {
  int n;
  int k;
  long total;

  StateSpace(int n_, int k_, long cap) : n(n_), k(k_), total(ipow_capped(k_, n_, cap)) {}

  State state_of(long idx) const {
    State x(n);
    for (int i = n - 1; i >= 0; --i) {
      x[i] = static_cast<Choice>(idx % k);
      idx /= k;
    }
    return x;
  }

  long index_of(const State& x) const {
    long idx = 0;
    for (int i = 0; i < n; ++i) idx = idx * k + x[i];
    return idx;
  }

  std::vector<State> all_states() const {
    std::vector<State> out;
    out.reserve(total);
    State x(n, 0);
    for (long idx = 0; idx < total; ++idx) {
      out.push_back(x);
      for (int i = n - 1; i >= 0; --i) {
        if (++x[i] < k) break;
        x[i] = 0;
      }
    }
    return out;
  }

  State random_state(Rng& rng) const {
    State x(n);
    for (int i = 0; i < n; ++i) x[i] = static_cast<Choice>(rng() % k);
    return x;
  }
};

inline std::vector<Choice> tend_table(const Population& pop, int agent,
                                      const std::vector<State>& states) {
  std::vector<Choice> f(states.size());
  for (std::size_t s = 0; s < states.size(); ++s) f[s] = pop.tend(agent, states[s]);
  return f;
}

// Does some agent play `c` at z but not at y?
inline bool in_kset(Choice c, const State& z, const State& y) {
  for (std::size_t j = 0; j < z.size(); ++j)
    if (z[j] == c && y[j] != c) return true;
  return false;
}

// All z compatible with y under "y_j = A implies z_j = A", in lexicographic
// order. fn returns false to stop early.
inline bool for_each_constrained_z(const State& y, Choice target, int k,
                                   const std::function<bool(const State&)>& fn) {
  const int n = static_cast<int>(y.size());
  State z(n, 0);
  std::vector<bool> fixed(n);
  for (int i = 0; i < n; ++i) {
    fixed[i] = (y[i] == target);
    if (fixed[i]) z[i] = target;
  }
  for (;;) {
    if (!fn(z)) return false;
    int i = n - 1;
    for (; i >= 0; --i) {
      if (fixed[i]) continue;
      if (++z[i] < k) break;
      z[i] = 0;
    }
    if (i < 0) return true;
  }
}

inline State random_constrained_z(const State& y, Choice target, int k, Rng& rng) {
  State z(y.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    z[i] = (y[i] == target) ? target : static_cast<Choice>(rng() % k);
  return z;
}

}  // namespace detail

// Definition check for a coordinating agent: for every ordered state pair
// (y, z), f_i(z) lies in {f_i(y)} union K(z, y). Exhaustive in lexicographic
// order within the budget; seeded sampling beyond it when requested.
inline PropertyVerdict check_coordinating_agent(const Population& pop, int agent,
                                                const CheckOptions& opts = {}) {
  pop.check_agent(agent);
  const int n = pop.size();
  const int k = pop.alphabet().size();
  detail::StateSpace space(n, k, opts.max_pairs);
  PropertyVerdict verdict;

  const long pair_total =
      space.total > opts.max_pairs ? opts.max_pairs + 1 : detail::ipow_capped(k, 2 * n, opts.max_pairs);
  if (pair_total <= opts.max_pairs) {
    auto states = space.all_states();
    auto f = detail::tend_table(pop, agent, states);
    for (long yi = 0; yi < space.total; ++yi) {
      for (long zi = 0; zi < space.total; ++zi) {
        ++verdict.pairs_checked;
        if (f[zi] == f[yi]) continue;
        if (detail::in_kset(f[zi], states[zi], states[yi])) continue;
        verdict.holds = false;
        verdict.witness = Witness{states[yi], states[zi], agent, f[zi]};
        return verdict;
      }
    }
    return verdict;
  }

  if (opts.sample_pairs <= 0)
    throw BudgetExceeded("coordinating check needs " + std::to_string(pair_total) +
                         "+ ordered pairs; raise max_pairs or enable sampling");
  verdict.sampled = true;
  Rng rng(opts.seed);
  for (long s = 0; s < opts.sample_pairs; ++s) {
    State y = space.random_state(rng);
    State z = space.random_state(rng);
    ++verdict.pairs_checked;
    Choice fy = pop.tend(agent, y);
    Choice fz = pop.tend(agent, z);
    if (fz == fy || detail::in_kset(fz, z, y)) continue;
    verdict.holds = false;
    verdict.witness = Witness{std::move(y), std::move(z), agent, fz};
    return verdict;
  }
  return verdict;
}

// Every agent coordinating; first failing agent (lowest id) wins.
inline PropertyVerdict check_coordinating_population(const Population& pop,
                                                     const CheckOptions& opts = {}) {
  PropertyVerdict verdict;
  for (int i = 0; i < pop.size(); ++i) {
    PropertyVerdict v = check_coordinating_agent(pop, i, opts);
    verdict.pairs_checked += v.pairs_checked;
    verdict.sampled = verdict.sampled || v.sampled;
    if (!v.holds) {
      verdict.holds = false;
      verdict.witness = v.witness;
      return verdict;
    }
  }
  return verdict;
}

// Definition check for an A-coordinating agent: over pairs where every
// A-chooser at y still chooses A at z, tending to A at y forces tending to
// A at z.
inline PropertyVerdict check_a_coordinating_agent(const Population& pop, int agent, Choice target,
                                                  const CheckOptions& opts = {}) {
  pop.check_agent(agent);
  if (!pop.alphabet().contains(target)) throw std::invalid_argument("target outside alphabet");
  const int n = pop.size();
  const int k = pop.alphabet().size();
  detail::StateSpace space(n, k, opts.max_pairs);
  PropertyVerdict verdict;

  // 1 + k(k-1) compatible (y_j, z_j) combinations per coordinate.
  const long pair_total = detail::ipow_capped(1 + k * (k - 1), n, opts.max_pairs);
  if (pair_total <= opts.max_pairs && space.total <= opts.max_pairs) {
    auto states = space.all_states();
    auto f = detail::tend_table(pop, agent, states);
    for (long yi = 0; yi < space.total; ++yi) {
      if (f[yi] != target) continue;  // pairs with f_i(y) != A hold trivially
      const State& y = states[yi];
      bool ok = detail::for_each_constrained_z(y, target, k, [&](const State& z) {
        ++verdict.pairs_checked;
        if (f[space.index_of(z)] == target) return true;
        Witness w{y, z, agent, f[space.index_of(z)]};
        w.has_target = true;
        w.target = target;
        verdict.holds = false;
        verdict.witness = std::move(w);
        return false;
      });
      if (!ok) return verdict;
    }
    return verdict;
  }

  if (opts.sample_pairs <= 0)
    throw BudgetExceeded("A-coordinating check needs " + std::to_string(pair_total) +
                         "+ constrained pairs; raise max_pairs or enable sampling");
  verdict.sampled = true;
  Rng rng(opts.seed);
  for (long s = 0; s < opts.sample_pairs; ++s) {
    State y = space.random_state(rng);
    State z = detail::random_constrained_z(y, target, k, rng);
    ++verdict.pairs_checked;
    if (pop.tend(agent, y) != target) continue;
    Choice fz = pop.tend(agent, z);
    if (fz == target) continue;
    Witness w{std::move(y), std::move(z), agent, fz};
    w.has_target = true;
    w.target = target;
    verdict.holds = false;
    verdict.witness = std::move(w);
    return verdict;
  }
  return verdict;
}

// A-coordinating for every agent and every choice A.
inline PropertyVerdict check_restrictive_coordinating(const Population& pop,
                                                      const CheckOptions& opts = {}) {
  PropertyVerdict verdict;
  for (int i = 0; i < pop.size(); ++i) {
    for (Choice a = 0; a < pop.alphabet().size(); ++a) {
      PropertyVerdict v = check_a_coordinating_agent(pop, i, a, opts);
      verdict.pairs_checked += v.pairs_checked;
      verdict.sampled = verdict.sampled || v.sampled;
      if (!v.holds) {
        verdict.holds = false;
        verdict.witness = v.witness;
        return verdict;
      }
    }
  }
  return verdict;
}

// Coordinating tie breaker: tau_i(S, z) in {tau_i(S, y)} union K(z, y) for
// every nonempty subset S of the alphabet, state pair, and agent.
inline PropertyVerdict check_coordinating_tiebreaker(const TieBreaker& tie, const Population& pop,
                                                     const CheckOptions& opts = {}) {
  const int n = pop.size();
  const int k = pop.alphabet().size();
  detail::StateSpace space(n, k, opts.max_pairs);
  PropertyVerdict verdict;

  const long subsets = (1L << k) - 1;
  long pair_total = detail::ipow_capped(k, 2 * n, opts.max_pairs);
  if (pair_total <= opts.max_pairs / (subsets * n)) {
    auto states = space.all_states();
    for (int i = 0; i < n; ++i) {
      for (long mask = 1; mask <= subsets; ++mask) {
        ChoiceSet feasible(static_cast<std::uint64_t>(mask));
        for (const State& y : states) {
          Choice ty = tie.pick(feasible, y, i);
          for (const State& z : states) {
            ++verdict.pairs_checked;
            Choice tz = tie.pick(feasible, z, i);
            if (tz == ty || detail::in_kset(tz, z, y)) continue;
            Witness w{y, z, i, tz};
            w.has_subset = true;
            w.subset = feasible;
            verdict.holds = false;
            verdict.witness = std::move(w);
            return verdict;
          }
        }
      }
    }
    return verdict;
  }

  if (opts.sample_pairs <= 0)
    throw BudgetExceeded("tie-breaker check exceeds the pair budget; raise max_pairs or sample");
  verdict.sampled = true;
  Rng rng(opts.seed);
  for (long s = 0; s < opts.sample_pairs; ++s) {
    int i = static_cast<int>(rng() % n);
    std::uint64_t mask = 1 + rng() % subsets;
    ChoiceSet feasible(mask);
    State y = space.random_state(rng);
    State z = space.random_state(rng);
    ++verdict.pairs_checked;
    Choice ty = tie.pick(feasible, y, i);
    Choice tz = tie.pick(feasible, z, i);
    if (tz == ty || detail::in_kset(tz, z, y)) continue;
    Witness w{std::move(y), std::move(z), i, tz};
    w.has_subset = true;
    w.subset = feasible;
    verdict.holds = false;
    verdict.witness = std::move(w);
    return verdict;
  }
  return verdict;
}

// Re-evaluates a coordinating-definition witness from scratch; true when the
// violation is real.
inline bool replay_coordinating_witness(const Population& pop, const Witness& w) {
  Choice fy = pop.tend(w.agent, w.y);
  Choice fz = pop.tend(w.agent, w.z);
  return fz != fy && !detail::in_kset(fz, w.z, w.y) && fz == w.offending;
}

inline bool replay_a_coordinating_witness(const Population& pop, const Witness& w) {
  if (!w.has_target) return false;
  for (std::size_t j = 0; j < w.y.size(); ++j)
    if (w.y[j] == w.target && w.z[j] != w.target) return false;
  return pop.tend(w.agent, w.y) == w.target && pop.tend(w.agent, w.z) != w.target;
}

inline bool replay_tiebreaker_witness(const TieBreaker& tie, const Witness& w) {
  if (!w.has_subset) return false;
  Choice ty = tie.pick(w.subset, w.y, w.agent);
  Choice tz = tie.pick(w.subset, w.z, w.agent);
  return tz != ty && !detail::in_kset(tz, w.z, w.y);
}

}  // namespace netcoord
