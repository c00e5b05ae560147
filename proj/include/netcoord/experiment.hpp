#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "netcoord/control.hpp"
#include "netcoord/engine.hpp"
#include "netcoord/parallel.hpp"
#include "netcoord/scenario.hpp"

namespace netcoord {

// Sweep description: either population sizes (targeted control cost) or
// budgets at a fixed size (conversions bought). Replicates are freshly
// generated instances; every row is reproducible from its recorded seed.
struct ExperimentPlan {
  enum class Axis { size, budget };
  enum class NetworkType { br_only, im_only, mixed };

  Axis axis = Axis::size;
  std::vector<int> sizes{20, 40, 60};
  std::vector<double> budgets;
  int budget_size = 100;  // population size for budget sweeps
  int replicates = 10;
  NetworkType network = NetworkType::br_only;
  std::vector<SelectStrategy> strategies{SelectStrategy::inro, SelectStrategy::degree,
                                         SelectStrategy::random};
  double expected_degree = 6.0;
  double threshold_lo = 0.0;  // best-responder thresholds drawn from (lo, hi]
  double threshold_hi = 2.0 / 3.0;
  double epsilon = 1e-6;
  double beta = 4.0;
  std::uint64_t master_seed = 1;
  int jobs = 0;  // 0: hardware concurrency

  void validate() const {
    if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
    if (strategies.empty()) throw std::invalid_argument("no strategies selected");
    if (axis == Axis::size && sizes.empty()) throw std::invalid_argument("empty size sweep");
    if (axis == Axis::budget && budgets.empty()) throw std::invalid_argument("empty budget sweep");
    for (SelectStrategy s : strategies) {
      if (s == SelectStrategy::ipro_br && network != NetworkType::br_only)
        throw std::invalid_argument("ipro-br runs only on best-responder networks");
      if (s == SelectStrategy::ipro_im && network != NetworkType::im_only)
        throw std::invalid_argument("ipro-im runs only on imitator networks");
      if (s == SelectStrategy::optimal) {
        int max_n = axis == Axis::size ? *std::max_element(sizes.begin(), sizes.end()) : budget_size;
        if (max_n > 15)
          throw std::invalid_argument("optimal search allowed only for sizes up to 15");
      }
    }
  }

  GenSpec gen_spec(int n) const {
    GenSpec spec;
    spec.n = n;
    spec.expected_degree = expected_degree;
    switch (network) {
      case NetworkType::br_only:
        spec.frac_br = 1.0;
        spec.frac_im = 0.0;
        spec.init = InitKind::all_undesirable;
        break;
      case NetworkType::im_only:
        spec.frac_br = 0.0;
        spec.frac_im = 1.0;
        spec.init = InitKind::bernoulli_third;
        break;
      case NetworkType::mixed:
        spec.frac_br = 0.5;
        spec.frac_im = 0.5;
        spec.init = InitKind::all_undesirable;
        break;
    }
    spec.frac_ri = 1.0 - spec.frac_br - spec.frac_im;
    spec.threshold_lo = threshold_lo;
    spec.threshold_hi = threshold_hi;
    return spec;
  }
};

inline ExperimentPlan::NetworkType network_type_from_string(const std::string& s) {
  if (s == "br") return ExperimentPlan::NetworkType::br_only;
  if (s == "im") return ExperimentPlan::NetworkType::im_only;
  if (s == "mixed") return ExperimentPlan::NetworkType::mixed;
  throw std::invalid_argument("unknown network type: " + s);
}

inline const char* to_string(ExperimentPlan::NetworkType t) {
  switch (t) {
    case ExperimentPlan::NetworkType::br_only: return "br";
    case ExperimentPlan::NetworkType::im_only: return "im";
    case ExperimentPlan::NetworkType::mixed: return "mixed";
  }
  return "?";
}

inline ExperimentPlan plan_from_json(const nlohmann::ordered_json& j) {
  ExperimentPlan plan;
  std::string axis = j.value("axis", "size");
  plan.axis = axis == "budget" ? ExperimentPlan::Axis::budget : ExperimentPlan::Axis::size;
  if (axis != "budget" && axis != "size") throw std::invalid_argument("axis must be size or budget");
  if (j.contains("sizes")) plan.sizes = j.at("sizes").get<std::vector<int>>();
  if (j.contains("budgets")) plan.budgets = j.at("budgets").get<std::vector<double>>();
  plan.budget_size = j.value("budget_size", plan.budget_size);
  plan.replicates = j.value("replicates", plan.replicates);
  plan.network = network_type_from_string(j.value("network", "br"));
  if (j.contains("strategies")) {
    plan.strategies.clear();
    for (const auto& s : j.at("strategies"))
      plan.strategies.push_back(strategy_from_string(s.get<std::string>()));
  }
  plan.expected_degree = j.value("expected_degree", plan.expected_degree);
  plan.threshold_lo = j.value("threshold_lo", plan.threshold_lo);
  plan.threshold_hi = j.value("threshold_hi", plan.threshold_hi);
  plan.epsilon = j.value("epsilon", plan.epsilon);
  plan.beta = j.value("beta", plan.beta);
  plan.master_seed = j.value("seed", plan.master_seed);
  plan.jobs = j.value("jobs", plan.jobs);
  plan.validate();
  return plan;
}

struct ExperimentRow {
  double sweep_value = 0;
  std::string strategy;
  int replicate = 0;
  double total_reward = 0;
  int converted = 0;
  double wall_ms = 0;
  std::uint64_t seed = 0;
  int n = 0;
};

struct ExperimentResults {
  std::vector<ExperimentRow> rows;

  std::string csv() const {
    std::ostringstream out;
    out << "sweep_value,strategy,replicate,total_reward,converted,wall_ms,seed\n";
    for (const auto& r : rows)
      out << r.sweep_value << ',' << r.strategy << ',' << r.replicate << ',' << r.total_reward
          << ',' << r.converted << ',' << r.wall_ms << ',' << r.seed << '\n';
    return out.str();
  }

  // Mean and standard error per sweep point and strategy.
  nlohmann::ordered_json summary() const {
    struct Acc {
      std::vector<double> reward, converted;
    };
    std::map<std::pair<double, std::string>, Acc> acc;
    for (const auto& r : rows) {
      auto& a = acc[{r.sweep_value, r.strategy}];
      a.reward.push_back(r.total_reward);
      a.converted.push_back(static_cast<double>(r.converted));
    }
    auto mean_se = [](const std::vector<double>& v) {
      double mean = 0;
      for (double x : v) mean += x;
      mean /= v.size();
      double var = 0;
      for (double x : v) var += (x - mean) * (x - mean);
      double se = v.size() > 1 ? std::sqrt(var / (v.size() - 1) / v.size()) : 0.0;
      return std::make_pair(mean, se);
    };
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& [key, a] : acc) {
      auto [rm, rs] = mean_se(a.reward);
      auto [cm, cs] = mean_se(a.converted);
      nlohmann::ordered_json e;
      e["sweep_value"] = key.first;
      e["strategy"] = key.second;
      e["replicates"] = a.reward.size();
      e["mean_total_reward"] = rm;
      e["stderr_total_reward"] = rs;
      e["mean_converted"] = cm;
      e["stderr_converted"] = cs;
      out.push_back(e);
    }
    return out;
  }
};

namespace detail {

// Generates, settles, and (for imitator networks) retries until the rest
// state keeps both strategies alive, so control has work to do.
inline std::pair<Instance, State> settled_experiment_instance(const ExperimentPlan& plan, int n,
                                                              std::uint64_t seed) {
  GenSpec spec = plan.gen_spec(n);
  for (int attempt = 0;; ++attempt) {
    Instance inst = gen_instance(spec, derive_seed(seed, 100 + attempt));
    Population pop = to_population(std::make_shared<const NetworkGame>(inst.game));
    RunTrace t = run(pop, inst.x0, ActivationSequence::uniform(derive_seed(seed, 200 + attempt)));
    if (!t.verdict.is_equilibrium()) continue;  // try a fresh instance
    int converted = count_choice(t.final_state, 0);
    bool degenerate = converted == 0 || converted == n;
    if (plan.network == ExperimentPlan::NetworkType::im_only && degenerate && attempt < 50)
      continue;
    return {std::move(inst), t.final_state};
  }
}

}  // namespace detail

inline ExperimentResults run_experiment(const ExperimentPlan& plan) {
  plan.validate();
  const bool size_axis = plan.axis == ExperimentPlan::Axis::size;
  const int sweep_points = static_cast<int>(size_axis ? plan.sizes.size() : plan.budgets.size());
  const int items = sweep_points * plan.replicates;

  std::vector<std::vector<ExperimentRow>> buckets(items);
  parallel_for(0, items, plan.jobs, [&](int item) {
    const int sweep_idx = item / plan.replicates;
    const int replicate = item % plan.replicates;
    const int n = size_axis ? plan.sizes[sweep_idx] : plan.budget_size;
    const double sweep_value = size_axis ? n : plan.budgets[sweep_idx];

    // Budget sweeps reuse the same instance per replicate across budgets, so
    // derive the instance seed from the replicate only.
    std::uint64_t inst_seed = derive_seed(plan.master_seed,
                                          size_axis ? 10000 + item : 20000 + replicate * 131 + n);
    auto [inst, x_star] = detail::settled_experiment_instance(plan, n, inst_seed);
    auto game = std::make_shared<const NetworkGame>(std::move(inst.game));

    for (const SelectStrategy strategy : plan.strategies) {
      ControlOptions opts;
      opts.epsilon = plan.epsilon;
      opts.beta = plan.beta;
      opts.seed = derive_seed(inst_seed, 7);
      if (!size_axis) opts.budget = plan.budgets[sweep_idx];
      auto t0 = std::chrono::steady_clock::now();
      ControlResult r = run_control(game, x_star, 0, strategy, opts);
      auto t1 = std::chrono::steady_clock::now();
      ExperimentRow row;
      row.sweep_value = sweep_value;
      row.strategy = to_string(strategy);
      row.replicate = replicate;
      row.total_reward = r.total_cost;
      row.converted = r.converted;
      row.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      row.seed = inst_seed;
      row.n = n;
      buckets[item].push_back(row);
    }
  });

  ExperimentResults results;
  for (auto& b : buckets)
    for (auto& r : b) results.rows.push_back(std::move(r));
  std::stable_sort(results.rows.begin(), results.rows.end(),
                   [](const ExperimentRow& a, const ExperimentRow& b) {
                     if (a.sweep_value != b.sweep_value) return a.sweep_value < b.sweep_value;
                     if (a.strategy != b.strategy) return a.strategy < b.strategy;
                     return a.replicate < b.replicate;
                   });
  return results;
}

}  // namespace netcoord
