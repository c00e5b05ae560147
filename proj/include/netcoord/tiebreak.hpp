#pragma once

#include <stdexcept>

#include "netcoord/choice.hpp"

namespace netcoord {

// Selects a single choice from a nonempty feasible set. Always returns a
// member of the set. min_index, current_else_min and designated are
// coordinating tie breakers; opposite_of is the classic foil that is not.
class TieBreaker {
 public:
  enum class Kind { min_index, current_else_min, designated_agent, opposite_agent };

  TieBreaker() = default;

  static TieBreaker min_index() { return TieBreaker(Kind::min_index, -1); }
  static TieBreaker current_else_min() { return TieBreaker(Kind::current_else_min, -1); }
  // Copy the designated agent's current choice when feasible, else min.
  static TieBreaker designated(int agent) { return TieBreaker(Kind::designated_agent, agent); }
  // Pick a feasible choice differing from the designated agent's, else min.
  static TieBreaker opposite_of(int agent) { return TieBreaker(Kind::opposite_agent, agent); }

  Kind kind() const { return kind_; }
  int designated_id() const { return agent_; }

  Choice pick(const ChoiceSet& feasible, const State& x, int self) const {
    if (feasible.empty()) throw std::invalid_argument("tie breaker on empty feasible set");
    switch (kind_) {
      case Kind::min_index:
        return feasible.min();
      case Kind::current_else_min:
        return feasible.contains(x[self]) ? x[self] : feasible.min();
      case Kind::designated_agent:
        return feasible.contains(x[agent_]) ? x[agent_] : feasible.min();
      case Kind::opposite_agent: {
        for (Choice c : feasible.to_vector())
          if (c != x[agent_]) return c;
        return feasible.min();
      }
    }
    return feasible.min();
  }

 private:
  TieBreaker(Kind k, int agent) : kind_(k), agent_(agent) {}
  Kind kind_ = Kind::current_else_min;
  int agent_ = -1;
};

}  // namespace netcoord
