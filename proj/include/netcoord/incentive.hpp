#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "netcoord/netgame.hpp"
#include "netcoord/verdict.hpp"

namespace netcoord {

// Per-agent nonnegative incentives toward one designated choice.
struct RewardVector {
  std::vector<double> r;
  Choice target = 0;

  static RewardVector zeros(int n, Choice target) { return RewardVector{std::vector<double>(n, 0.0), target}; }
  static RewardVector uniform(int n, double value, Choice target) {
    if (value < 0) throw std::invalid_argument("negative reward");
    return RewardVector{std::vector<double>(n, value), target};
  }

  double total() const {
    double t = 0;
    for (double v : r) t += v;
    return t;
  }
  void validate(int n) const {
    if (static_cast<int>(r.size()) != n) throw std::invalid_argument("reward vector length mismatch");
    for (double v : r)
      if (v < 0 || !std::isfinite(v)) throw std::invalid_argument("rewards must be finite and nonnegative");
  }
};

// How a reward enters the game. Best-responders are paid per interaction
// (the target row of the payoff matrix is raised), so their displayed
// utility grows by r * degree while playing the target. Imitators are
// compared through total earnings, so their reward is a flat utility bonus.
enum class RewardSemantics { payoff_row, utility_additive };

inline RewardSemantics default_semantics(RuleKind rule) {
  return rule == RuleKind::best_response ? RewardSemantics::payoff_row
                                         : RewardSemantics::utility_additive;
}

// The target row of the matrix raised by r: playing the target strategy
// earns r extra against every opponent strategy.
inline PayoffMatrix with_reward_row(PayoffMatrix pi, Choice target, double reward) {
  if (reward < 0) throw std::invalid_argument("negative reward");
  for (int opp = 0; opp < pi.strategies(); ++opp) pi.at(target, opp) += reward;
  return pi;
}

// Payoff-row application of a full reward vector; binary pairwise games.
inline NetworkGame apply_incentive(const NetworkGame& game, const RewardVector& rewards) {
  rewards.validate(game.size());
  std::vector<AgentSpec> agents;
  agents.reserve(game.size());
  for (int i = 0; i < game.size(); ++i) {
    AgentSpec a = game.agent(i);
    a.payoff = with_reward_row(std::move(a.payoff), rewards.target, rewards.r[i]);
    agents.push_back(std::move(a));
  }
  return NetworkGame(game.network(), game.alphabet(), std::move(agents));
}

// A network game with a reward vector layered on top, using per-agent
// semantics chosen by update rule. With all rewards zero every evaluation
// reduces to the base game.
class IncentivizedGame {
 public:
  IncentivizedGame(std::shared_ptr<const NetworkGame> base, RewardVector rewards)
      : base_(std::move(base)), rewards_(std::move(rewards)) {
    rewards_.validate(base_->size());
    if (!base_->alphabet().contains(rewards_.target))
      throw std::invalid_argument("reward target outside the alphabet");
  }

  const NetworkGame& base() const { return *base_; }
  std::shared_ptr<const NetworkGame> base_ptr() const { return base_; }
  const RewardVector& rewards() const { return rewards_; }
  Choice target() const { return rewards_.target; }
  int size() const { return base_->size(); }

  // Boost added to agent k's displayed utility while she plays the target.
  double boost(int k) const {
    return default_semantics(base_->agent(k).rule) == RewardSemantics::payoff_row
               ? rewards_.r[k] * base_->network().degree(k)
               : rewards_.r[k];
  }

  double utility(const State& x, int k) const {
    return base_->utility(x, k) + (x[k] == rewards_.target ? boost(k) : 0.0);
  }

  double utility_with(const State& x, int i, Choice own) const {
    return base_->utility_with(x, i, own) + (own == rewards_.target ? boost(i) : 0.0);
  }

  ChoiceSet best_response_set(const State& x, int i) const {
    const auto& alpha = base_->alphabet();
    double best = utility_with(x, i, 0);
    for (Choice q = 1; q < alpha.size(); ++q) best = std::max(best, utility_with(x, i, q));
    ChoiceSet out;
    for (Choice q = 0; q < alpha.size(); ++q)
      if (approx_ge(utility_with(x, i, q), best)) out.insert(q);
    return out;
  }

  ChoiceSet imitation_set(const State& x, int i) const {
    double best = utility(x, i);
    for (int j : base_->network().neighbors(i)) best = std::max(best, utility(x, j));
    ChoiceSet out;
    if (approx_ge(utility(x, i), best)) out.insert(x[i]);
    for (int j : base_->network().neighbors(i))
      if (approx_ge(utility(x, j), best)) out.insert(x[j]);
    return out;
  }

  ChoiceSet better_reply_set(const State& x, int i) const {
    double current = utility_with(x, i, x[i]);
    ChoiceSet out;
    for (Choice q = 0; q < base_->alphabet().size(); ++q)
      if (approx_gt(utility_with(x, i, q), current)) out.insert(q);
    return out;
  }

  ChoiceSet feasible_set(const State& x, int i) const {
    switch (base_->agent(i).rule) {
      case RuleKind::best_response: return best_response_set(x, i);
      case RuleKind::imitation: return imitation_set(x, i);
      case RuleKind::rational_imitation: {
        ChoiceSet both = imitation_set(x, i).intersect(better_reply_set(x, i));
        if (!both.empty()) return both;
        ChoiceSet keep;
        keep.insert(x[i]);
        return keep;
      }
    }
    return {};
  }

  Choice resolve(const State& x, int i) const {
    return base_->agent(i).tie.pick(feasible_set(x, i), x, i);
  }

 private:
  std::shared_ptr<const NetworkGame> base_;
  RewardVector rewards_;
};

inline Population to_population(std::shared_ptr<const IncentivizedGame> game) {
  std::vector<RevisionFn> protocols;
  protocols.reserve(game->size());
  for (int i = 0; i < game->size(); ++i)
    protocols.emplace_back([game, i](const State& x) { return game->resolve(x, i); });
  return Population(game->base().alphabet(), std::move(protocols));
}

inline Population to_population(IncentivizedGame game) {
  return to_population(std::make_shared<const IncentivizedGame>(std::move(game)));
}

namespace detail {

inline Choice other_binary(Choice c) { return static_cast<Choice>(1 - c); }

inline void require_binary(const NetworkGame& g, const char* what) {
  if (!g.binary()) throw std::invalid_argument(std::string(what) + " needs a binary game");
}

// gamma and delta relative to an arbitrary target strategy.
inline double gamma_for(const PayoffMatrix& pi, Choice target) {
  Choice o = other_binary(target);
  return pi(o, o) - pi(target, o);
}
inline double delta_for(const PayoffMatrix& pi, Choice target) {
  Choice o = other_binary(target);
  return pi(target, target) - pi(o, target) - pi(target, o) + pi(o, o);
}

}  // namespace detail

// Infimum additional per-interaction reward that makes the target the
// strict best response of agent i, from the linear-threshold form
// gamma - delta * n^X / deg. Clamped below at zero; an agent already
// playing the target needs nothing.
inline double min_reward_br(const IncentivizedGame& game, const State& x, int i) {
  detail::require_binary(game.base(), "min_reward_br");
  if (game.base().agent(i).rule != RuleKind::best_response)
    throw std::invalid_argument("min_reward_br on a non-best-responder");
  const Choice target = game.target();
  if (x[i] == target) return 0.0;
  int deg = game.base().network().degree(i);
  if (deg == 0) throw std::invalid_argument("min_reward_br on an isolated agent");
  const auto& pi = game.base().agent(i).payoff;
  int n_target = game.base().neighbor_counts(x, i)[target];
  double required = detail::gamma_for(pi, target) -
                    detail::delta_for(pi, target) * n_target / deg;
  double additional = required - game.rewards().r[i];
  return std::max(0.0, additional);
}

inline double min_reward_br(const NetworkGame& game, const State& x, int i, Choice target) {
  return min_reward_br(IncentivizedGame(std::make_shared<const NetworkGame>(game),
                                        RewardVector::zeros(game.size(), target)),
                       x, i);
}

// Infimum additional utility bonus on a target-playing agent i that makes
// some non-target neighbor's imitation set collapse to the target: i must
// out-earn every non-target member of that neighbor's self-inclusive
// neighborhood, minimized over eligible neighbors.
inline double min_reward_imitation(const IncentivizedGame& game, const State& x, int i) {
  detail::require_binary(game.base(), "min_reward_imitation");
  const Choice target = game.target();
  if (x[i] != target) throw std::invalid_argument("min_reward_imitation needs a target-playing agent");
  const Network& net = game.base().network();
  double best = -1.0;
  bool found = false;
  for (int j : net.neighbors(i)) {
    if (x[j] == target) continue;
    double top_other = game.utility(x, j);  // j herself plays the other strategy
    for (int k : net.neighbors(j))
      if (x[k] != target) top_other = std::max(top_other, game.utility(x, k));
    double gap = top_other - game.utility(x, i);
    if (!found || gap < best) best = gap;
    found = true;
  }
  if (!found) throw std::invalid_argument("min_reward_imitation: no non-target neighbor");
  return std::max(0.0, best);
}

inline double min_reward_imitation(const NetworkGame& game, const State& x, int i, Choice target) {
  return min_reward_imitation(IncentivizedGame(std::make_shared<const NetworkGame>(game),
                                               RewardVector::zeros(game.size(), target)),
                              x, i);
}

// Sorted distinct candidate rewards for agent i at equilibrium x*: the
// transition values of f^r_i over all states where others sit at x*_j or
// the target. Closed form for best-responders; neighborhood-local
// enumeration of utility gaps for imitators; per-state bisection for
// rational imitators.
struct CandidateRewardSet {
  std::vector<double> values;
};

namespace detail {

// Agents within two hops whose choice can differ from x* on the monotone
// path (everyone not already at the target, excluding i herself).
inline std::vector<int> flippable_two_hop(const Network& net, const State& x_star, int i,
                                          Choice target) {
  std::set<int> hood;
  for (int j : net.neighbors(i)) {
    hood.insert(j);
    for (int k : net.neighbors(j)) hood.insert(k);
  }
  hood.insert(i);
  std::vector<int> out;
  for (int j : hood)
    if (j != i && x_star[j] != target) out.push_back(j);
  return out;
}

// Transition reward for imitator i at a fixed state under a uniform reward
// sweep: every target-playing agent k gains r per unit of her boost rate.
inline double imitator_transition(const NetworkGame& g, const State& x, int i, Choice target) {
  const Network& net = g.network();
  double top_other = -std::numeric_limits<double>::infinity();
  bool has_other = false, has_target = false;
  double best = std::numeric_limits<double>::infinity();
  if (x[i] != target) {
    top_other = g.utility(x, i);
    has_other = true;
  }
  for (int k : net.neighbors(i))
    if (x[k] != target) {
      top_other = std::max(top_other, g.utility(x, k));
      has_other = true;
    }
  if (!has_other) return 0.0;  // the whole neighborhood already plays the target
  auto consider = [&](int j) {
    double rate = default_semantics(g.agent(j).rule) == RewardSemantics::payoff_row
                      ? static_cast<double>(net.degree(j))
                      : 1.0;
    if (rate <= 0) return;
    best = std::min(best, (top_other - g.utility(x, j)) / rate);
    has_target = true;
  };
  if (x[i] == target) consider(i);
  for (int j : net.neighbors(i))
    if (x[j] == target) consider(j);
  if (!has_target) return std::numeric_limits<double>::infinity();
  return std::max(0.0, best);
}

}  // namespace detail

inline CandidateRewardSet candidate_reward_set(const NetworkGame& game, const State& x_star, int i,
                                               Choice target, int max_enum_bits = 20) {
  detail::require_binary(game, "candidate_reward_set");
  const Network& net = game.network();
  std::set<double> values;
  const RuleKind rule = game.agent(i).rule;

  if (rule == RuleKind::best_response) {
    int deg = net.degree(i);
    if (deg == 0) throw std::invalid_argument("candidate_reward_set on an isolated agent");
    const auto& pi = game.agent(i).payoff;
    int base_count = game.neighbor_counts(x_star, i)[target];
    for (int k = base_count; k <= deg; ++k)
      values.insert(std::max(0.0, detail::gamma_for(pi, target) -
                                      detail::delta_for(pi, target) * k / deg));
    return CandidateRewardSet{std::vector<double>(values.begin(), values.end())};
  }

  std::vector<int> flippable = detail::flippable_two_hop(net, x_star, i, target);
  if (static_cast<int>(flippable.size()) > max_enum_bits)
    throw BudgetExceeded("candidate_reward_set: local state space exceeds the enumeration budget");
  const long combos = 1L << flippable.size();
  for (long mask = 0; mask < combos; ++mask) {
    State x = x_star;
    for (std::size_t b = 0; b < flippable.size(); ++b)
      if ((mask >> b) & 1) x[flippable[b]] = target;

    if (rule == RuleKind::imitation) {
      double v = detail::imitator_transition(game, x, i, target);
      if (std::isfinite(v)) values.insert(v);
    } else {
      // Rational imitators have no single closed form: bisect the uniform
      // reward against the resolved protocol at this state.
      auto tends_target = [&](double r) {
        IncentivizedGame inc(std::make_shared<const NetworkGame>(game),
                             RewardVector::uniform(game.size(), r, target));
        return inc.resolve(x, i) == target;
      };
      if (tends_target(0.0)) {
        values.insert(0.0);
        continue;
      }
      double hi = 1.0;
      bool reachable = false;
      for (int grow = 0; grow < 60; ++grow, hi *= 2)
        if (tends_target(hi)) {
          reachable = true;
          break;
        }
      if (!reachable) continue;
      double lo = 0.0;
      for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        (tends_target(mid) ? hi : lo) = mid;
      }
      values.insert(hi);
    }
  }
  return CandidateRewardSet{std::vector<double>(values.begin(), values.end())};
}

}  // namespace netcoord
