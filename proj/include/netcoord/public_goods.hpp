#pragma once

#include <algorithm>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "netcoord/choice.hpp"
#include "netcoord/network.hpp"
#include "netcoord/population.hpp"
#include "netcoord/rules.hpp"
#include "netcoord/tiebreak.hpp"
#include "netcoord/util.hpp"

namespace netcoord {

// Spatial public goods game: every agent hosts one group game played with
// her whole self-inclusive neighborhood and takes part in each neighbor's
// game. Cooperators pay c into each pool they join; each pool is multiplied
// by r and split evenly over the hosting group.
class PublicGoodsGame {
 public:
  static constexpr Choice kCooperate = 0;  // numeric strategy value 1
  static constexpr Choice kDefect = 1;     // numeric strategy value 0

  PublicGoodsGame(Network net, double contribution, double multiplier,
                  TieBreaker tie = TieBreaker::current_else_min())
      : net_(std::move(net)), c_(contribution), r_(multiplier), tie_(tie) {
    if (!(c_ > 0.0)) throw std::invalid_argument("contribution must be positive");
    if (!(r_ > 0.0)) throw std::invalid_argument("multiplier must be positive");
  }

  static ChoiceAlphabet alphabet() { return ChoiceAlphabet::cooperate_defect(); }
  static int value(Choice c) { return c == kCooperate ? 1 : 0; }

  int size() const { return net_.size(); }
  const Network& network() const { return net_; }
  double contribution() const { return c_; }
  double multiplier() const { return r_; }

  // Cooperating neighbors of j, excluding j herself.
  int cooperating_neighbors(const State& x, int j) const {
    int count = 0;
    for (int m : net_.neighbors(j)) count += value(x[m]);
    return count;
  }

  // u_i = sum over games j in the self-inclusive neighborhood of
  // r c (n^C_j + x_j) / group_j, minus group_i * c when i cooperates.
  double utility(const State& x, int i) const {
    check_state(x);
    double u = pool_share(x, i);
    for (int j : net_.neighbors(i)) u += pool_share(x, j);
    return u - net_.group_size(i) * c_ * value(x[i]);
  }

  // Cooperation becomes (weakly) optimal exactly at r = group^2: deviating
  // moves only the agent's own pool contribution and her per-game cost, so
  // the tendency is independent of the state.
  ChoiceSet best_response_set(const State& x, int i) const {
    check_state(x);
    return threshold_set(i);
  }

  ChoiceSet threshold_set(int i) const {
    double group_sq = static_cast<double>(net_.group_size(i)) * net_.group_size(i);
    ChoiceSet out;
    if (approx_eq(r_, group_sq)) {
      out.insert(kCooperate);
      out.insert(kDefect);
    } else if (r_ > group_sq) {
      out.insert(kCooperate);
    } else {
      out.insert(kDefect);
    }
    return out;
  }

  // Highest earners in the self-inclusive neighborhood, by realized utility.
  ChoiceSet imitation_set(const State& x, int i) const {
    double best = utility(x, i);
    for (int j : net_.neighbors(i)) best = std::max(best, utility(x, j));
    ChoiceSet out;
    if (approx_ge(utility(x, i), best)) out.insert(x[i]);
    for (int j : net_.neighbors(i))
      if (approx_ge(utility(x, j), best)) out.insert(x[j]);
    return out;
  }

  // Strict deviation improvements, using the same own-game deviation
  // accounting as the best-response threshold.
  ChoiceSet better_reply_set(const State& x, int i) const {
    double coop_gain = r_ * c_ / net_.group_size(i) - net_.group_size(i) * c_;
    ChoiceSet out;
    if (x[i] == kDefect && approx_gt(coop_gain, 0.0)) out.insert(kCooperate);
    if (x[i] == kCooperate && approx_gt(0.0, coop_gain)) out.insert(kDefect);
    return out;
  }

  ChoiceSet rational_imitation_set(const State& x, int i) const {
    ChoiceSet both = imitation_set(x, i).intersect(better_reply_set(x, i));
    if (!both.empty()) return both;
    ChoiceSet keep;
    keep.insert(x[i]);
    return keep;
  }

  ChoiceSet feasible_set(const State& x, int i, RuleKind rule) const {
    switch (rule) {
      case RuleKind::best_response: return best_response_set(x, i);
      case RuleKind::imitation: return imitation_set(x, i);
      case RuleKind::rational_imitation: return rational_imitation_set(x, i);
    }
    return {};
  }

  Choice resolve(const State& x, int i, RuleKind rule) const {
    return tie_.pick(feasible_set(x, i, rule), x, i);
  }

  // Accounting for the pool-conservation identity: everything paid in,
  // times r, is exactly what the hosted games pay out.
  double total_contributed(const State& x) const {
    double total = 0.0;
    for (int i = 0; i < size(); ++i) total += c_ * value(x[i]) * net_.group_size(i);
    return total;
  }
  double total_distributed(const State& x) const {
    double total = 0.0;
    for (int j = 0; j < size(); ++j)
      total += r_ * c_ * (cooperating_neighbors(x, j) + value(x[j]));
    return total;
  }

  void check_state(const State& x) const {
    if (static_cast<int>(x.size()) != size()) throw std::invalid_argument("state length mismatch");
    for (Choice c : x)
      if (c > 1) throw std::invalid_argument("public goods states are binary C/D");
  }

 private:
  // What agent i receives from the game hosted by j (j must belong to i's
  // self-inclusive neighborhood; every participant gets the same share).
  double pool_share(const State& x, int j) const {
    return r_ * c_ * (cooperating_neighbors(x, j) + value(x[j])) / net_.group_size(j);
  }

  Network net_;
  double c_;
  double r_;
  TieBreaker tie_;
};

// Population adapter; all agents follow the given update rule.
inline Population to_population(std::shared_ptr<const PublicGoodsGame> game, RuleKind rule) {
  std::vector<RevisionFn> protocols;
  protocols.reserve(game->size());
  for (int i = 0; i < game->size(); ++i)
    protocols.emplace_back([game, i, rule](const State& x) { return game->resolve(x, i, rule); });
  return Population(PublicGoodsGame::alphabet(), std::move(protocols));
}

inline Population to_population(PublicGoodsGame game, RuleKind rule) {
  return to_population(std::make_shared<const PublicGoodsGame>(std::move(game)), rule);
}

}  // namespace netcoord
