#pragma once

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "netcoord/choice.hpp"

namespace netcoord {

// A revision protocol maps the full decision state to the choice the agent
// tends to pick. Protocols must be deterministic and total over the state
// space; randomness lives in the activation sequence, never here.
using RevisionFn = std::function<Choice(const State&)>;

// The triple (agents, alphabet, per-agent revision protocols). Immutable
// after construction; safe to share across concurrent runs.
class Population {
 public:
  Population(ChoiceAlphabet alphabet, std::vector<RevisionFn> protocols)
      : alphabet_(std::move(alphabet)), protocols_(std::move(protocols)) {
    if (protocols_.empty()) throw std::invalid_argument("population needs at least one agent");
    for (const auto& f : protocols_)
      if (!f) throw std::invalid_argument("null revision protocol");
  }

  int size() const { return static_cast<int>(protocols_.size()); }
  const ChoiceAlphabet& alphabet() const { return alphabet_; }

  // What agent i tends to choose at state x. Throws if the protocol emits a
  // choice outside the alphabet (a malformed protocol).
  Choice tend(int agent, const State& x) const {
    check_agent(agent);
    Choice c = protocols_[agent](x);
    if (!alphabet_.contains(c))
      throw std::runtime_error("protocol of agent " + std::to_string(agent + 1) +
                               " returned a choice outside the alphabet");
    return c;
  }

  void check_agent(int agent) const {
    if (agent < 0 || agent >= size())
      throw std::invalid_argument("agent id out of range: " + std::to_string(agent));
  }

  void check_state(const State& x) const {
    if (static_cast<int>(x.size()) != size())
      throw std::invalid_argument("state length does not match population size");
    for (Choice c : x)
      if (!alphabet_.contains(c)) throw std::invalid_argument("state entry outside the alphabet");
  }

 private:
  ChoiceAlphabet alphabet_;
  std::vector<RevisionFn> protocols_;
};

}  // namespace netcoord
