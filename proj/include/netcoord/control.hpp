#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "netcoord/activation.hpp"
#include "netcoord/engine.hpp"
#include "netcoord/incentive.hpp"
#include "netcoord/verdict.hpp"

namespace netcoord {

inline int count_choice(const State& x, Choice c) {
  int n = 0;
  for (Choice v : x) n += v == c;
  return n;
}

// Greedy selection score: progress per reward, discounted by the ratio
// exponent beta.
inline double selection_ratio(double gain, double cost, double beta) {
  return gain / std::pow(cost, beta);
}

// Linear-threshold potential for best-responder networks: target-neighbor
// surplus over the switch threshold, plus one per unconverted agent.
inline double potential_br(const NetworkGame& game, const State& x, Choice target) {
  double phi = 0.0;
  for (int i = 0; i < game.size(); ++i) {
    const auto& pi = game.agent(i).payoff;
    Choice o = static_cast<Choice>(1 - target);
    double gamma = pi(o, o) - pi(target, o);
    double delta = pi(target, target) - pi(o, target) - pi(target, o) + pi(o, o);
    int deg = game.network().degree(i);
    phi += game.neighbor_counts(x, i)[target] - std::ceil(gamma / delta * deg - 1e-12) +
           (x[i] == target ? 0.0 : 1.0);
  }
  return phi;
}

// Imitator-network potential: total target-playing neighbor count, twice
// the number of edges once everyone has converted.
inline double potential_im(const NetworkGame& game, const State& x, Choice target) {
  double phi = 0.0;
  for (int i = 0; i < game.size(); ++i) phi += game.neighbor_counts(x, i)[target];
  return phi;
}

namespace detail {

// Incremental binary simulator for the control loops: cached base utilities
// and target-neighbor counts make one activation O(deg). Inner equilibration
// runs round-robin sweeps until a full sweep produces no switch; since
// incentives only push toward the target that takes at most n + 1 sweeps on
// coordinating inputs.
class ControlSim {
 public:
  ControlSim(std::shared_ptr<const NetworkGame> base, Choice target)
      : base_(std::move(base)), target_(target), other_(other_binary(target)),
        reward_(base_->size(), 0.0) {
    require_binary(*base_, "control");
    rate_.resize(base_->size());
    for (int i = 0; i < base_->size(); ++i)
      rate_[i] = default_semantics(base_->agent(i).rule) == RewardSemantics::payoff_row
                     ? static_cast<double>(base_->network().degree(i))
                     : 1.0;
  }

  const NetworkGame& game() const { return *base_; }
  const State& state() const { return x_; }
  const std::vector<double>& rewards() const { return reward_; }
  Choice target() const { return target_; }

  void reset(const State& x0, const std::vector<double>& rewards) {
    x_ = x0;
    reward_ = rewards;
    rebuild();
  }

  void add_reward(int i, double amount) { reward_[i] += amount; }

  // Displayed utility, boost included.
  double displayed(int k) const {
    return base_util_[k] + (x_[k] == target_ ? reward_[k] * rate_[k] : 0.0);
  }

  double base_utility_with(int i, Choice own) const {
    const auto& pi = base_->agent(i).payoff;
    int deg = base_->network().degree(i);
    return pi(own, target_) * target_count_[i] + pi(own, other_) * (deg - target_count_[i]);
  }

  Choice evaluate(int i) const {
    ChoiceSet feasible;
    switch (base_->agent(i).rule) {
      case RuleKind::best_response: feasible = br_set(i); break;
      case RuleKind::imitation: feasible = im_set(i); break;
      case RuleKind::rational_imitation: {
        feasible = im_set(i).intersect(better_set(i));
        if (feasible.empty()) feasible.insert(x_[i]);
        break;
      }
    }
    return base_->agent(i).tie.pick(feasible, x_, i);
  }

  // One full round-robin sweep; reports whether anything switched.
  bool sweep() {
    bool switched = false;
    for (int i = 0; i < base_->size(); ++i) {
      Choice next = evaluate(i);
      if (next != x_[i]) {
        apply_switch(i, next);
        switched = true;
      }
      ++activations_;
    }
    return switched;
  }

  // Sweeps until quiescent; a quiet sweep is itself the exhaustive
  // equilibrium check. Returns false when the cap is hit, which cannot
  // happen for coordinating populations under target-only incentives.
  bool equilibrate(int max_sweeps = -1) {
    const int cap = max_sweeps > 0 ? max_sweeps : base_->size() + 2;
    for (int s = 0; s < cap; ++s)
      if (!sweep()) return true;
    return false;
  }

  int target_players() const { return count_choice(x_, target_); }
  long activations() const { return activations_; }
  void reset_activation_counter() { activations_ = 0; }

 private:
  void rebuild() {
    const int n = base_->size();
    target_count_.assign(n, 0);
    base_util_.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
      for (int j : base_->network().neighbors(i)) target_count_[i] += x_[j] == target_;
      base_util_[i] = base_utility_with(i, x_[i]);
    }
  }

  void apply_switch(int i, Choice next) {
    Choice prev = x_[i];
    x_[i] = next;
    for (int j : base_->network().neighbors(i)) {
      target_count_[j] += (next == target_) - (prev == target_);
      const auto& pj = base_->agent(j).payoff;
      base_util_[j] += pj(x_[j], next) - pj(x_[j], prev);
    }
    base_util_[i] = base_utility_with(i, next);
  }

  ChoiceSet br_set(int i) const {
    double u_target = base_utility_with(i, target_) + reward_[i] * rate_[i];
    double u_other = base_utility_with(i, other_);
    ChoiceSet out;
    if (approx_ge(u_target, u_other)) out.insert(target_);
    if (approx_ge(u_other, u_target)) out.insert(other_);
    return out;
  }

  ChoiceSet im_set(int i) const {
    double best = displayed(i);
    for (int j : base_->network().neighbors(i)) best = std::max(best, displayed(j));
    ChoiceSet out;
    if (approx_ge(displayed(i), best)) out.insert(x_[i]);
    for (int j : base_->network().neighbors(i))
      if (approx_ge(displayed(j), best)) out.insert(x_[j]);
    return out;
  }

  ChoiceSet better_set(int i) const {
    double current = base_util_[i] + (x_[i] == target_ ? reward_[i] * rate_[i] : 0.0);
    ChoiceSet out;
    if (x_[i] != target_ &&
        approx_gt(base_utility_with(i, target_) + reward_[i] * rate_[i], current))
      out.insert(target_);
    if (x_[i] != other_ && approx_gt(base_utility_with(i, other_), current)) out.insert(other_);
    return out;
  }

  std::shared_ptr<const NetworkGame> base_;
  Choice target_;
  Choice other_;
  State x_;
  std::vector<double> reward_;
  std::vector<double> rate_;
  std::vector<int> target_count_;
  std::vector<double> base_util_;
  long activations_ = 0;
};

inline void require_equilibrium(const NetworkGame& game, const State& x_star) {
  Population pop = to_population(std::make_shared<const NetworkGame>(game));
  if (!is_equilibrium(pop, x_star))
    throw std::invalid_argument("the provided state is not an equilibrium of the base game");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Uniform reward control

struct UniformRewardResult {
  std::optional<double> reward;  // least candidate that converts everyone
  std::vector<double> candidates;
  State final_state;
};

// Probes the sorted union of per-agent candidate sets by simulating the
// uniformly incentivized game from x* under round-robin sweeps; binary
// search is valid because conversion success is monotone in the reward.
inline UniformRewardResult uniform_reward(std::shared_ptr<const NetworkGame> game,
                                          const State& x_star, Choice target,
                                          double epsilon = 1e-6, int max_enum_bits = 20) {
  detail::require_equilibrium(*game, x_star);
  const int n = game->size();

  std::set<double> uni;
  for (int i = 0; i < n; ++i)
    for (double v : candidate_reward_set(*game, x_star, i, target, max_enum_bits).values)
      uni.insert(v);
  std::vector<double> candidates(uni.begin(), uni.end());

  detail::ControlSim sim(game, target);
  auto converts = [&](double r) {
    sim.reset(x_star, std::vector<double>(n, r + epsilon));
    if (!sim.equilibrate(2 * n + 2)) return false;
    return sim.target_players() == n;
  };

  UniformRewardResult result;
  result.candidates = candidates;
  if (candidates.empty() || !converts(candidates.back())) {
    sim.reset(x_star, std::vector<double>(n, 0.0));
    sim.equilibrate();
    result.final_state = sim.state();
    return result;  // no finite uniform reward
  }
  std::size_t lo = 0, hi = candidates.size() - 1;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (converts(candidates[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  converts(candidates[lo]);
  result.reward = candidates[lo];
  result.final_state = sim.state();
  return result;
}

// ---------------------------------------------------------------------------
// Targeted and budgeted reward control

enum class SelectStrategy { inro, ipro_br, ipro_im, degree, random, optimal };

inline const char* to_string(SelectStrategy s) {
  switch (s) {
    case SelectStrategy::inro: return "inro";
    case SelectStrategy::ipro_br: return "ipro-br";
    case SelectStrategy::ipro_im: return "ipro-im";
    case SelectStrategy::degree: return "degree";
    case SelectStrategy::random: return "random";
    case SelectStrategy::optimal: return "optimal";
  }
  return "?";
}

inline SelectStrategy strategy_from_string(const std::string& s) {
  if (s == "inro") return SelectStrategy::inro;
  if (s == "ipro-br") return SelectStrategy::ipro_br;
  if (s == "ipro-im") return SelectStrategy::ipro_im;
  if (s == "degree") return SelectStrategy::degree;
  if (s == "random") return SelectStrategy::random;
  if (s == "optimal") return SelectStrategy::optimal;
  throw std::invalid_argument("unknown selection strategy: " + s);
}

struct SelectionStep {
  int agent;
  double added;  // r* + epsilon committed in this round
};

struct ControlResult {
  RewardVector rewards;
  std::vector<SelectionStep> order;
  State final_state;
  int converted = 0;  // agents playing the target at the end
  double total_cost = 0.0;
  bool residue = false;  // non-target agents remained with no eligible candidate
  long outer_iterations = 0;
  long max_inner_activations = 0;
};

struct ControlOptions {
  double epsilon = 1e-6;
  std::optional<double> budget;  // Problem-3 cap on the total reward
  double beta = 4.0;             // ratio exponent for INRO / IPRO
  std::uint64_t seed = 0;        // used by the random strategy
};

namespace detail {

struct Candidate {
  int agent;
  double cost;  // r* + epsilon
};

// Eligible agents: unconverted best-responders, and target-playing
// imitators with an unconverted neighbor.
inline std::vector<int> eligible_agents(const NetworkGame& g, const State& x, Choice target) {
  std::vector<int> out;
  for (int i = 0; i < g.size(); ++i) {
    if (g.agent(i).rule == RuleKind::best_response) {
      if (x[i] != target) out.push_back(i);
    } else if (g.agent(i).rule == RuleKind::imitation) {
      if (x[i] != target) continue;
      for (int j : g.network().neighbors(i))
        if (x[j] != target) {
          out.push_back(i);
          break;
        }
    }
  }
  return out;
}

inline double candidate_increment(const IncentivizedGame& inc, const State& x, int agent) {
  return inc.base().agent(agent).rule == RuleKind::best_response
             ? min_reward_br(inc, x, agent)
             : min_reward_imitation(inc, x, agent);
}

}  // namespace detail

// The generic iterative loop: pick an eligible agent, pay just over her
// infimum reward, simulate to the (unique, for coordinating populations)
// equilibrium, repeat while unconverted agents remain. With a budget,
// unaffordable candidates are skipped and the loop stops when none remain.
inline ControlResult targeted_control(std::shared_ptr<const NetworkGame> game, const State& x_star,
                                      Choice target, SelectStrategy strategy,
                                      const ControlOptions& opts = {}) {
  detail::require_equilibrium(*game, x_star);
  detail::require_binary(*game, "targeted_control");
  const int n = game->size();
  if (strategy == SelectStrategy::ipro_br || strategy == SelectStrategy::ipro_im) {
    RuleKind wanted =
        strategy == SelectStrategy::ipro_br ? RuleKind::best_response : RuleKind::imitation;
    for (int i = 0; i < n; ++i)
      if (game->agent(i).rule != wanted)
        throw std::invalid_argument(
            "IPRO variants need a single-rule network; no potential is available otherwise");
  }
  if (strategy == SelectStrategy::optimal)
    throw std::invalid_argument("use optimal_control for the exhaustive search");

  ControlResult result;
  result.rewards = RewardVector::zeros(n, target);
  Rng rng(opts.seed);

  detail::ControlSim sim(game, target);
  sim.reset(x_star, result.rewards.r);
  detail::ControlSim scratch = sim;

  const bool uses_lookahead = strategy == SelectStrategy::inro ||
                              strategy == SelectStrategy::ipro_br ||
                              strategy == SelectStrategy::ipro_im;

  for (;;) {
    if (sim.target_players() == n) break;
    ++result.outer_iterations;
    if (result.outer_iterations > n + 1)
      throw std::logic_error("targeted control exceeded its outer iteration bound");

    IncentivizedGame inc(game, RewardVector{sim.rewards(), target});
    std::vector<detail::Candidate> affordable;
    for (int i : detail::eligible_agents(*game, sim.state(), target)) {
      double cost = detail::candidate_increment(inc, sim.state(), i) + opts.epsilon;
      if (opts.budget && result.total_cost + cost > *opts.budget + 1e-12) continue;
      affordable.push_back({i, cost});
    }
    if (affordable.empty()) {
      result.residue = true;
      break;
    }

    detail::Candidate chosen = affordable.front();
    if (strategy == SelectStrategy::degree) {
      for (const auto& c : affordable)
        if (game->network().degree(c.agent) > game->network().degree(chosen.agent)) chosen = c;
    } else if (strategy == SelectStrategy::random) {
      chosen = affordable[rng() % affordable.size()];
    } else if (uses_lookahead) {
      double best_score = -std::numeric_limits<double>::infinity();
      for (const auto& c : affordable) {
        scratch = sim;
        scratch.add_reward(c.agent, c.cost);
        scratch.reset_activation_counter();
        if (!scratch.equilibrate())
          throw std::runtime_error("inner simulation did not settle; population not coordinating?");
        result.max_inner_activations = std::max(result.max_inner_activations, scratch.activations());
        double gain = 0.0;
        switch (strategy) {
          case SelectStrategy::inro:
            gain = scratch.target_players() - sim.target_players();
            break;
          case SelectStrategy::ipro_br:
            gain = potential_br(*game, scratch.state(), target) -
                   potential_br(*game, sim.state(), target);
            break;
          default:
            gain = potential_im(*game, scratch.state(), target) -
                   potential_im(*game, sim.state(), target);
            break;
        }
        double score = selection_ratio(gain, c.cost, opts.beta);
        if (score > best_score + 1e-15) {
          best_score = score;
          chosen = c;
        }
      }
    }

    sim.add_reward(chosen.agent, chosen.cost);
    sim.reset_activation_counter();
    if (!sim.equilibrate())
      throw std::runtime_error("inner simulation did not settle; population not coordinating?");
    result.max_inner_activations = std::max(result.max_inner_activations, sim.activations());
    result.rewards.r[chosen.agent] += chosen.cost;
    result.total_cost += chosen.cost;
    result.order.push_back({chosen.agent, chosen.cost});
  }

  result.final_state = sim.state();
  result.converted = sim.target_players();
  return result;
}

// Exhaustive search over selection orders (depth-first, branch-and-bound on
// accumulated cost, Pareto memo per reached state over cost and rewards).
// Maximizes conversions first, then minimizes cost. Hard-capped population
// size; the search is exponential.
inline ControlResult optimal_control(std::shared_ptr<const NetworkGame> game, const State& x_star,
                                     Choice target, const ControlOptions& opts = {},
                                     int max_n = 15) {
  detail::require_equilibrium(*game, x_star);
  detail::require_binary(*game, "optimal_control");
  const int n = game->size();
  if (n > max_n) throw std::invalid_argument("optimal search is capped at " + std::to_string(max_n));
  if (n > 63) throw std::invalid_argument("optimal search needs n <= 63");

  struct Best {
    double cost = std::numeric_limits<double>::infinity();
    int converted = -1;
    std::vector<SelectionStep> order;
    std::vector<double> rewards;
    State final_state;
  } best;

  struct MemoEntry {
    double cost;
    std::vector<double> rewards;
  };
  std::unordered_map<std::uint64_t, std::vector<MemoEntry>> memo;

  auto state_key = [target](const State& x) {
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] == target) key |= 1ULL << i;
    return key;
  };

  detail::ControlSim scratch(game, target);
  std::vector<SelectionStep> order;

  std::function<void(const State&, const std::vector<double>&, double)> dfs =
      [&](const State& x, const std::vector<double>& rewards, double cost) {
        int converted = count_choice(x, target);
        // Bound: a completed order can only add cost.
        if (converted < n && cost >= best.cost && best.converted == n) return;

        std::uint64_t key = state_key(x);
        auto& entries = memo[key];
        for (const auto& e : entries) {
          if (e.cost <= cost + 1e-15) {
            bool dominates = true;
            for (int i = 0; i < n && dominates; ++i) dominates = e.rewards[i] >= rewards[i] - 1e-15;
            if (dominates) return;
          }
        }
        entries.push_back({cost, rewards});

        if (converted == n) {
          if (n > best.converted || (best.converted == n && cost < best.cost)) {
            best = {cost, n, order, rewards, x};
          }
          return;
        }

        IncentivizedGame inc(game, RewardVector{rewards, target});
        std::vector<int> eligible = detail::eligible_agents(*game, x, target);
        if (eligible.empty()) {
          if (converted > best.converted || (converted == best.converted && cost < best.cost)) {
            best = {cost, converted, order, rewards, x};
          }
          return;
        }
        for (int agent : eligible) {
          double add = detail::candidate_increment(inc, x, agent) + opts.epsilon;
          if (opts.budget && cost + add > *opts.budget + 1e-12) continue;
          if (best.converted == n && cost + add >= best.cost) continue;
          std::vector<double> next_rewards = rewards;
          next_rewards[agent] += add;
          scratch.reset(x, next_rewards);
          if (!scratch.equilibrate())
            throw std::runtime_error("inner simulation did not settle; population not coordinating?");
          order.push_back({agent, add});
          dfs(scratch.state(), next_rewards, cost + add);
          order.pop_back();
        }
      };

  dfs(x_star, std::vector<double>(n, 0.0), 0.0);

  ControlResult result;
  result.rewards = RewardVector{best.rewards.empty() ? std::vector<double>(n, 0.0) : best.rewards,
                                target};
  result.order = best.order;
  result.final_state = best.converted >= 0 ? best.final_state : x_star;
  result.converted = best.converted >= 0 ? best.converted : count_choice(x_star, target);
  result.total_cost = std::isfinite(best.cost) ? best.cost : 0.0;
  result.residue = result.converted < n;
  result.outer_iterations = static_cast<long>(result.order.size());
  return result;
}

inline ControlResult run_control(std::shared_ptr<const NetworkGame> game, const State& x_star,
                                 Choice target, SelectStrategy strategy,
                                 const ControlOptions& opts = {}) {
  return strategy == SelectStrategy::optimal ? optimal_control(game, x_star, target, opts)
                                             : targeted_control(game, x_star, target, strategy, opts);
}

// Re-executes a recorded selection order step by step. The reproduced final
// state and total cost must match the original result exactly.
inline ControlResult replay_control(std::shared_ptr<const NetworkGame> game, const State& x_star,
                                    Choice target, const std::vector<SelectionStep>& order) {
  ControlResult result;
  result.rewards = RewardVector::zeros(game->size(), target);
  detail::ControlSim sim(game, target);
  sim.reset(x_star, result.rewards.r);
  sim.equilibrate();
  for (const auto& step : order) {
    sim.add_reward(step.agent, step.added);
    if (!sim.equilibrate())
      throw std::runtime_error("replay did not settle; population not coordinating?");
    result.rewards.r[step.agent] += step.added;
    result.total_cost += step.added;
    result.order.push_back(step);
  }
  result.final_state = sim.state();
  result.converted = sim.target_players();
  result.outer_iterations = static_cast<long>(order.size());
  return result;
}

// ---------------------------------------------------------------------------
// Incentive convergence checks

// Runs seeded random-activation trials from x* with the rewards applied and
// verifies that every logged switch lands on the target choice.
inline PropertyVerdict verify_monotone_in_x(const IncentivizedGame& game, const State& x_star,
                                            int trials, std::uint64_t seed, long max_steps = -1) {
  detail::require_equilibrium(game.base(), x_star);
  Population pop = to_population(std::make_shared<const IncentivizedGame>(game));
  const long budget = max_steps >= 0 ? max_steps : default_max_steps(pop.size());
  PropertyVerdict verdict;
  for (int t = 0; t < trials; ++t) {
    RunTrace trace =
        run(pop, x_star, ActivationSequence::uniform(derive_seed(seed, t)), {.max_steps = budget});
    for (const auto& ev : trace.switches) {
      ++verdict.pairs_checked;
      if (ev.to == game.target()) continue;
      Witness w;
      w.y = trace.state_at(ev.t - 1);
      w.z = trace.state_at(ev.t);
      w.agent = ev.agent;
      w.offending = ev.to;
      w.has_target = true;
      w.target = game.target();
      w.note = "switch away from the target at t=" + std::to_string(ev.t) + " (trial " +
               std::to_string(t) + ")";
      verdict.holds = false;
      verdict.witness = std::move(w);
      return verdict;
    }
  }
  return verdict;
}

// Runs several distinct persistent sequences (round-robin rotations plus
// seeded random) to their equilibria; holds iff all final states coincide.
inline PropertyVerdict verify_unique_convergence(const IncentivizedGame& game, const State& x_star,
                                                 int sequences, std::uint64_t seed,
                                                 long max_steps = -1) {
  detail::require_equilibrium(game.base(), x_star);
  Population pop = to_population(std::make_shared<const IncentivizedGame>(game));
  const int n = pop.size();
  const long budget = max_steps >= 0 ? max_steps : default_max_steps(n);

  PropertyVerdict verdict;
  std::optional<State> reference;
  const int rotations = std::min(n, (sequences + 1) / 2);
  for (int s = 0; s < sequences; ++s) {
    ActivationSequence seq = s < rotations
                                 ? ActivationSequence::round_robin(s)
                                 : ActivationSequence::uniform(derive_seed(seed, s));
    RunTrace trace = run(pop, x_star, seq, {.max_steps = budget});
    ++verdict.pairs_checked;
    if (!trace.verdict.is_equilibrium()) {
      Witness w;
      w.y = x_star;
      w.z = trace.final_state;
      w.note = "sequence " + std::to_string(s) + " did not equilibrate within budget";
      verdict.holds = false;
      verdict.witness = std::move(w);
      return verdict;
    }
    if (!reference) {
      reference = trace.final_state;
    } else if (*reference != trace.final_state) {
      Witness w;
      w.y = *reference;
      w.z = trace.final_state;
      w.note = "two persistent sequences reached different equilibria";
      verdict.holds = false;
      verdict.witness = std::move(w);
      return verdict;
    }
  }
  return verdict;
}

}  // namespace netcoord
