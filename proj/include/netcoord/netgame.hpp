#pragma once

#include <algorithm>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "netcoord/choice.hpp"
#include "netcoord/network.hpp"
#include "netcoord/payoff.hpp"
#include "netcoord/population.hpp"
#include "netcoord/rules.hpp"
#include "netcoord/tiebreak.hpp"
#include "netcoord/util.hpp"

namespace netcoord {

struct AgentSpec {
  RuleKind rule = RuleKind::best_response;
  PayoffMatrix payoff;
  TieBreaker tie = TieBreaker::current_else_min();
};

// Pairwise network game: each agent plays her single strategy against every
// neighbor and collects payoffs from her own matrix. Immutable after
// construction; all evaluations are pure.
class NetworkGame {
 public:
  NetworkGame(Network net, ChoiceAlphabet alphabet, std::vector<AgentSpec> agents)
      : net_(std::move(net)), alphabet_(std::move(alphabet)), agents_(std::move(agents)) {
    if (static_cast<int>(agents_.size()) != net_.size())
      throw std::invalid_argument("one agent spec per node required");
    for (const auto& a : agents_)
      if (a.payoff.strategies() != alphabet_.size())
        throw std::invalid_argument("payoff matrix does not match alphabet size");
  }

  // Uniform helper: every agent shares the same rule, matrix and tie breaker.
  static NetworkGame homogeneous(Network net, ChoiceAlphabet alphabet, RuleKind rule,
                                 const PayoffMatrix& payoff,
                                 TieBreaker tie = TieBreaker::current_else_min()) {
    std::vector<AgentSpec> agents(net.size(), AgentSpec{rule, payoff, tie});
    return NetworkGame(std::move(net), std::move(alphabet), std::move(agents));
  }

  int size() const { return net_.size(); }
  bool binary() const { return alphabet_.size() == 2; }
  const Network& network() const { return net_; }
  const ChoiceAlphabet& alphabet() const { return alphabet_; }
  const AgentSpec& agent(int i) const { return agents_.at(i); }

  // Accumulated payoff of agent i at state x. Isolated agents earn 0.
  double utility(const State& x, int i) const { return utility_with(x, i, x[i]); }

  // Utility of agent i if she played `own` while neighbors keep x.
  double utility_with(const State& x, int i, Choice own) const {
    const auto& pi = agents_[i].payoff;
    double u = 0.0;
    for (int j : net_.neighbors(i)) u += pi(own, x[j]);
    return u;
  }

  // Weak-argmax set over own strategies against fixed neighbor strategies.
  // Every choice within tolerance of the maximum is feasible; an isolated
  // agent is indifferent between all of them.
  ChoiceSet best_response_set(const State& x, int i) const {
    double best = utility_with(x, i, 0);
    for (Choice q = 1; q < alphabet_.size(); ++q)
      best = std::max(best, utility_with(x, i, q));
    ChoiceSet out;
    for (Choice q = 0; q < alphabet_.size(); ++q)
      if (approx_ge(utility_with(x, i, q), best)) out.insert(q);
    return out;
  }

  // Choices of the highest earners in the self-inclusive neighborhood.
  ChoiceSet imitation_set(const State& x, int i) const {
    double best = utility(x, i);
    for (int j : net_.neighbors(i)) best = std::max(best, utility(x, j));
    ChoiceSet out;
    if (approx_ge(utility(x, i), best)) out.insert(x[i]);
    for (int j : net_.neighbors(i))
      if (approx_ge(utility(x, j), best)) out.insert(x[j]);
    return out;
  }

  // Strategies that strictly improve agent i's utility; possibly empty.
  ChoiceSet better_reply_set(const State& x, int i) const {
    double current = utility(x, i);
    ChoiceSet out;
    for (Choice q = 0; q < alphabet_.size(); ++q)
      if (approx_gt(utility_with(x, i, q), current)) out.insert(q);
    return out;
  }

  // Imitate only strategies that are also strict better replies; keep the
  // current choice when none qualifies.
  ChoiceSet rational_imitation_set(const State& x, int i) const {
    ChoiceSet both = imitation_set(x, i).intersect(better_reply_set(x, i));
    if (!both.empty()) return both;
    ChoiceSet keep;
    keep.insert(x[i]);
    return keep;
  }

  ChoiceSet feasible_set(const State& x, int i) const {
    switch (agents_[i].rule) {
      case RuleKind::best_response: return best_response_set(x, i);
      case RuleKind::imitation: return imitation_set(x, i);
      case RuleKind::rational_imitation: return rational_imitation_set(x, i);
    }
    return {};
  }

  // The revision protocol: the rule's feasible set filtered by the agent's
  // tie breaker.
  Choice resolve(const State& x, int i) const { return agents_[i].tie.pick(feasible_set(x, i), x, i); }

  // Numbers of i's neighbors playing each choice.
  std::vector<int> neighbor_counts(const State& x, int i) const {
    std::vector<int> counts(alphabet_.size(), 0);
    for (int j : net_.neighbors(i)) counts[x[j]]++;
    return counts;
  }

 private:
  Network net_;
  ChoiceAlphabet alphabet_;
  std::vector<AgentSpec> agents_;
};

// Wraps the game's resolve into per-agent revision protocols. The returned
// population shares ownership of the game.
inline Population to_population(std::shared_ptr<const NetworkGame> game) {
  std::vector<RevisionFn> protocols;
  protocols.reserve(game->size());
  for (int i = 0; i < game->size(); ++i)
    protocols.emplace_back([game, i](const State& x) { return game->resolve(x, i); });
  return Population(game->alphabet(), std::move(protocols));
}

inline Population to_population(NetworkGame game) {
  return to_population(std::make_shared<const NetworkGame>(std::move(game)));
}

}  // namespace netcoord
