#pragma once

#include <map>
#include <utility>

#include "netcoord/activation.hpp"
#include "netcoord/population.hpp"
#include "netcoord/trace.hpp"

namespace netcoord {

// One asynchronous update: the active agent revises to f_agent(x), everyone
// else keeps their choice.
inline State step(const Population& pop, const State& x, int agent) {
  pop.check_state(x);
  State next = x;
  next[agent] = pop.tend(agent, x);
  return next;
}

// Exhaustive all-agent check of f_i(x) = x_i. Quiescence over a window of
// activations is not used anywhere: it is unsound for sequences that are not
// persistent.
inline bool is_equilibrium(const Population& pop, const State& x) {
  pop.check_state(x);
  for (int i = 0; i < pop.size(); ++i)
    if (pop.tend(i, x) != x[i]) return false;
  return true;
}

// Default run budget: the canonical bound |S| covers coordinating
// populations, 50 n^2 covers the rest of the desk-scale corpus.
inline long default_max_steps(int n) {
  long a = canonical_length(n);
  long b = 50L * n * n;
  return a > b ? a : b;
}

struct RunOptions {
  long max_steps = -1;      // -1: default_max_steps(n)
  bool detect_cycles = false;
  long snapshot_every = -1; // -1: every n steps, 0: off
};

// Runs the dynamics from x0 under the given activation sequence.
//
// Stops with an equilibrium verdict at the first time the exhaustive check
// holds. With detect_cycles (deterministic sequences only), stops when a
// (state, position-in-period) pair repeats. Otherwise stops after max_steps
// with a budget_exhausted verdict, which is a report, not an error.
inline RunTrace run(const Population& pop, const State& x0, const ActivationSequence& seq,
                    const RunOptions& opts = {}) {
  pop.check_state(x0);
  const int n = pop.size();
  const long max_steps = opts.max_steps >= 0 ? opts.max_steps : default_max_steps(n);
  const long snap = opts.snapshot_every >= 0 ? opts.snapshot_every : n;
  if (opts.detect_cycles && !seq.deterministic())
    throw std::invalid_argument("cycle detection requires a deterministic activation sequence");

  RunTrace trace;
  trace.x0 = x0;
  State x = x0;
  auto sampler = seq.sampler(n);

  long period = opts.detect_cycles ? seq.period(n) : 0;
  std::map<std::pair<long, State>, long> seen;

  bool recheck = true;  // the state changed since the last equilibrium check
  bool at_equilibrium = false;
  long t = 0;
  for (;; ++t) {
    if (recheck) {
      at_equilibrium = is_equilibrium(pop, x);
      recheck = false;
    }
    if (at_equilibrium) {
      trace.verdict = {Verdict::Kind::equilibrium, t, 0, -1, t};
      break;
    }
    if (opts.detect_cycles) {
      auto key = std::make_pair(t % period, x);
      auto [it, inserted] = seen.emplace(key, t);
      if (!inserted) {
        trace.verdict = {Verdict::Kind::cycle, -1, t - it->second, it->second, t};
        break;
      }
    }
    if (t >= max_steps) {
      trace.verdict = {Verdict::Kind::budget_exhausted, -1, 0, -1, t};
      break;
    }
    if (snap > 0 && t % snap == 0 && t > 0) trace.snapshots.emplace(t, x);

    int agent = sampler.next(t);
    Choice next = pop.tend(agent, x);
    if (next != x[agent]) {
      trace.switches.push_back({t + 1, agent, x[agent], next});
      x[agent] = next;
      recheck = true;
    }
  }
  trace.final_state = std::move(x);
  return trace;
}

}  // namespace netcoord
