#pragma once

#include <functional>

#include "netcoord/coordination.hpp"
#include "netcoord/netgame.hpp"
#include "netcoord/util.hpp"

namespace netcoord {

// Utility evaluated at a full state; the agent index is fixed by the caller.
using UtilityFn = std::function<double(const State&)>;

namespace detail {

// Increasing differences of `gain` (the advantage of the first choice over
// the second for the focal agent) over pairs where every first-choice agent
// at y keeps that choice at z. Binary alphabets only.
inline PropertyVerdict check_increasing_differences(const std::function<double(const State&)>& gain,
                                                    int n, int agent, const CheckOptions& opts,
                                                    const char* note) {
  const int k = 2;
  const Choice high = 0;
  StateSpace space(n, k, opts.max_pairs);
  PropertyVerdict verdict;

  const long pair_total = ipow_capped(1 + k * (k - 1), n, opts.max_pairs);
  if (pair_total <= opts.max_pairs) {
    auto states = space.all_states();
    for (const State& y : states) {
      double gy = gain(y);
      bool ok = for_each_constrained_z(y, high, k, [&](const State& z) {
        ++verdict.pairs_checked;
        if (approx_ge(gain(z), gy)) return true;
        Witness w{y, z, agent, 0};
        w.has_target = true;
        w.target = high;
        w.note = note;
        verdict.holds = false;
        verdict.witness = std::move(w);
        return false;
      });
      if (!ok) return verdict;
    }
    return verdict;
  }

  if (opts.sample_pairs <= 0) throw BudgetExceeded("increasing-differences check exceeds the pair budget");
  verdict.sampled = true;
  Rng rng(opts.seed);
  for (long s = 0; s < opts.sample_pairs; ++s) {
    State y = space.random_state(rng);
    State z = random_constrained_z(y, high, k, rng);
    ++verdict.pairs_checked;
    if (approx_ge(gain(z), gain(y))) continue;
    Witness w{std::move(y), std::move(z), agent, 0};
    w.has_target = true;
    w.target = high;
    w.note = note;
    verdict.holds = false;
    verdict.witness = std::move(w);
    return verdict;
  }
  return verdict;
}

}  // namespace detail

// Supermodularity (increasing differences) of a utility on a binary ordered
// alphabet, first choice ranked above the second.
inline PropertyVerdict check_supermodular_utility(const UtilityFn& u, int n, int agent,
                                                  const CheckOptions& opts = {}) {
  auto gain = [&u, agent](const State& x) {
    State v = x;
    v[agent] = 0;
    double a = u(v);
    v[agent] = 1;
    return a - u(v);
  };
  return detail::check_increasing_differences(gain, n, agent, opts, "utility gain dropped");
}

inline PropertyVerdict check_supermodular_utility(const NetworkGame& game, int agent,
                                                  const CheckOptions& opts = {}) {
  if (!game.binary()) throw std::invalid_argument("supermodularity check needs a binary alphabet");
  return check_supermodular_utility([&game, agent](const State& x) { return game.utility(x, agent); },
                                    game.size(), agent, opts);
}

// Satisfaction s_i(x) = 1 iff x_i = f_i(x). Restrictive coordinating binary
// agents have supermodular satisfaction; verified here by enumeration.
inline PropertyVerdict check_satisfaction_supermodular(const Population& pop, int agent,
                                                       const CheckOptions& opts = {}) {
  if (pop.alphabet().size() != 2)
    throw std::invalid_argument("satisfaction supermodularity needs a binary alphabet");
  pop.check_agent(agent);
  auto gain = [&pop, agent](const State& x) {
    State v = x;
    v[agent] = 0;
    int sa = pop.tend(agent, v) == v[agent] ? 1 : 0;
    v[agent] = 1;
    int sb = pop.tend(agent, v) == v[agent] ? 1 : 0;
    return static_cast<double>(sa - sb);
  };
  return detail::check_increasing_differences(gain, pop.size(), agent, opts,
                                              "satisfaction gain dropped");
}

}  // namespace netcoord
