#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "netcoord/choice.hpp"

namespace netcoord {

// One agent changed her choice at time t (i.e. state(t) differs from
// state(t-1) exactly at `agent`).
struct SwitchEvent {
  long t;
  int agent;
  Choice from;
  Choice to;
};

struct Verdict {
  enum class Kind { equilibrium, cycle, budget_exhausted };
  Kind kind = Kind::budget_exhausted;
  long t_star = -1;      // equilibrium: first time the all-agent check holds
  long period = 0;       // cycle: number of steps between state revisits
  long entry_time = -1;  // cycle: time of the first occurrence
  long steps = 0;        // steps actually executed

  bool is_equilibrium() const { return kind == Kind::equilibrium; }
  bool is_cycle() const { return kind == Kind::cycle; }
};

// Compressed trajectory: initial state plus switch events, with optional
// periodic snapshots. Consecutive states differ in at most one coordinate.
struct RunTrace {
  State x0;
  State final_state;
  std::vector<SwitchEvent> switches;
  std::map<long, State> snapshots;
  Verdict verdict;

  // Reconstructs the state at time t from x0 and the switch log.
  State state_at(long t) const {
    if (t < 0 || t > verdict.steps) throw std::out_of_range("state_at: time outside trace");
    State x = x0;
    for (const auto& ev : switches) {
      if (ev.t > t) break;
      x[ev.agent] = ev.to;
    }
    return x;
  }

  long switch_count() const { return static_cast<long>(switches.size()); }
};

}  // namespace netcoord
