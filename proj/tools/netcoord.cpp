// Command-line front end: simulate populations, run the coordination
// checkers, solve the reward-control problems, regenerate experiment
// sweeps, and drive the built-in worked examples.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "netcoord/coordination.hpp"
#include "netcoord/engine.hpp"
#include "netcoord/exemplars.hpp"
#include "netcoord/experiment.hpp"
#include "netcoord/scenario.hpp"
#include "netcoord/serialize.hpp"
#include "netcoord/supermodular.hpp"

using namespace netcoord;

namespace {

std::filesystem::path out_dir() {
  if (const char* env = std::getenv("NETCOORD_OUT_DIR")) return env;
  return ".";
}

State parse_state(const std::string& csv, const ChoiceAlphabet& alphabet) {
  State x;
  std::istringstream in(csv);
  std::string tok;
  while (std::getline(in, tok, ',')) x.push_back(alphabet.index_of(tok));
  return x;
}

ActivationSequence parse_sequence(const std::string& spec, std::uint64_t seed) {
  if (spec == "roundrobin") return ActivationSequence::round_robin();
  if (spec == "random") return ActivationSequence::uniform(seed);
  if (spec == "canonical") return ActivationSequence::explicit_list({});  // resolved later
  std::vector<int> entries;
  std::istringstream in(spec);
  std::string tok;
  while (std::getline(in, tok, ',')) entries.push_back(std::stoi(tok) - 1);
  return ActivationSequence::explicit_list(entries);
}

// Built-in worked examples, addressable by name.
struct Exemplar {
  std::string name;
  std::string blurb;
};

const std::vector<Exemplar> kExemplars = {
    {"least-popular", "three agents chasing the minority color; alternates forever"},
    {"cyclic-copy", "copy-your-successor ring; coordinating yet cycling under round robin"},
    {"nearest-neighbor", "planar agents copying their nearest neighbor; always equilibrates"},
    {"radius-plurality", "planar agents following the local plurality within a disc"},
    {"star-mild-diagonal", "best-response star that fails targeted coordination"},
    {"star-steep-diagonal", "best-response star that fails plain coordination"},
    {"imitation-flip", "imitation network whose tendency escapes the switched set"},
    {"pgg-flip", "public goods imitation flipping toward a free-riding hub"},
    {"contrarian", "supermodular deviation gain, non-coordinating protocol"},
};

int run_exemplar(const std::string& name, int n, std::uint64_t seed, const std::string& out);

ModelDocument load_or_example(const std::string& spec_path) {
  return load_model_file(spec_path);
}

int cmd_simulate(const std::string& spec_path, std::string x0_csv, std::string seq_spec,
                 std::uint64_t seed, long max_steps, bool detect_cycles, long snapshot_every,
                 std::string out) {
  ModelDocument doc = load_or_example(spec_path);
  const Population& pop = doc.pop();
  State x0;
  if (!x0_csv.empty())
    x0 = parse_state(x0_csv, pop.alphabet());
  else if (doc.x0)
    x0 = *doc.x0;
  else
    throw std::runtime_error("no initial state: pass --x0 or add x0 to the document");

  ActivationSequence seq = seq_spec == "canonical"
                               ? canonical_sequence(pop.size())
                               : parse_sequence(seq_spec, seed);
  RunOptions opts;
  opts.max_steps = max_steps;
  opts.detect_cycles = detect_cycles;
  opts.snapshot_every = snapshot_every;
  RunTrace trace = run(pop, x0, seq, opts);

  switch (trace.verdict.kind) {
    case Verdict::Kind::equilibrium:
      std::cout << "equilibrium at t=" << trace.verdict.t_star << "\n";
      break;
    case Verdict::Kind::cycle:
      std::cout << "cycle of period " << trace.verdict.period << " entered at t="
                << trace.verdict.entry_time << "\n";
      break;
    case Verdict::Kind::budget_exhausted:
      std::cout << "no verdict within " << trace.verdict.steps << " steps\n";
      break;
  }
  std::cout << "switches: " << trace.switch_count() << "\n";

  if (!out.empty()) {
    write_text_file(out + ".json", trace_to_json(trace, pop.alphabet()).dump(2) + "\n");
    write_text_file(out + ".csv", trace_to_csv(trace, pop.alphabet()));
    std::cout << "wrote " << out << ".json and " << out << ".csv\n";
  }
  return 0;
}

int cmd_check(const std::string& spec_path, const std::string& property, std::string choice_label,
              int agent_1based, long max_pairs, long sample, std::uint64_t seed,
              const std::string& tb_kind, int tb_agent, std::string out) {
  ModelDocument doc = load_or_example(spec_path);
  const Population& pop = doc.pop();
  CheckOptions opts;
  opts.max_pairs = max_pairs;
  opts.sample_pairs = sample;
  opts.seed = seed;

  PropertyVerdict verdict;
  try {
    if (property == "coordinating") {
      verdict = agent_1based > 0 ? check_coordinating_agent(pop, agent_1based - 1, opts)
                                 : check_coordinating_population(pop, opts);
    } else if (property == "restrictive") {
      verdict = check_restrictive_coordinating(pop, opts);
    } else if (property == "a-coordinating") {
      if (choice_label.empty()) throw std::runtime_error("a-coordinating needs --choice");
      Choice target = pop.alphabet().index_of(choice_label);
      if (agent_1based > 0) {
        verdict = check_a_coordinating_agent(pop, agent_1based - 1, target, opts);
      } else {
        verdict.holds = true;
        for (int i = 0; i < pop.size() && verdict.holds; ++i) {
          PropertyVerdict v = check_a_coordinating_agent(pop, i, target, opts);
          verdict.pairs_checked += v.pairs_checked;
          if (!v.holds) verdict = v;
        }
      }
    } else if (property == "tiebreaker") {
      TieBreaker tb = TieBreaker::current_else_min();
      if (tb_kind == "min-index") tb = TieBreaker::min_index();
      else if (tb_kind == "current-else-min") tb = TieBreaker::current_else_min();
      else if (tb_kind == "designated") tb = TieBreaker::designated(tb_agent - 1);
      else if (tb_kind == "opposite") tb = TieBreaker::opposite_of(tb_agent - 1);
      else throw std::runtime_error("unknown tie breaker: " + tb_kind);
      verdict = check_coordinating_tiebreaker(tb, pop, opts);
    } else if (property == "supermodular") {
      if (!doc.netgame) throw std::runtime_error("supermodular check needs a netgame document");
      if (agent_1based <= 0) {
        verdict.holds = true;
        for (int i = 0; i < pop.size() && verdict.holds; ++i) {
          PropertyVerdict v = check_supermodular_utility(*doc.netgame, i, opts);
          verdict.pairs_checked += v.pairs_checked;
          if (!v.holds) verdict = v;
        }
      } else {
        verdict = check_supermodular_utility(*doc.netgame, agent_1based - 1, opts);
      }
    } else if (property == "satisfaction-supermodular") {
      if (agent_1based <= 0) throw std::runtime_error("pass --agent for this check");
      verdict = check_satisfaction_supermodular(pop, agent_1based - 1, opts);
    } else {
      throw std::runtime_error("unknown property: " + property);
    }
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 2;
  }

  json report = property_verdict_to_json(verdict, pop.alphabet());
  report["property"] = property;
  std::cout << report.dump(2) << "\n";
  if (!out.empty()) write_text_file(out, report.dump(2) + "\n");
  return verdict.holds ? 0 : 1;
}

int cmd_control(const std::string& spec_path, std::string xstar_csv, bool settle,
                const std::string& problem, const std::string& strategy_name, double budget,
                double epsilon, std::uint64_t seed, std::string target_label, std::string out) {
  ModelDocument doc = load_or_example(spec_path);
  if (!doc.netgame) throw std::runtime_error("control needs a netgame document");
  auto game = doc.netgame;
  const ChoiceAlphabet& alphabet = game->alphabet();
  Choice target = target_label.empty() ? Choice{0} : alphabet.index_of(target_label);

  State x_star;
  if (!xstar_csv.empty()) {
    x_star = parse_state(xstar_csv, alphabet);
  } else if (doc.x0) {
    x_star = *doc.x0;
  } else {
    throw std::runtime_error("no start state: pass --xstar or add x0 to the document");
  }
  if (settle) {
    RunTrace t = run(doc.pop(), x_star, ActivationSequence::uniform(derive_seed(seed, 1)));
    if (!t.verdict.is_equilibrium())
      throw std::runtime_error("settling did not reach an equilibrium within budget");
    x_star = t.final_state;
  }

  json report;
  if (problem == "uniform") {
    UniformRewardResult r = uniform_reward(game, x_star, target, epsilon);
    if (r.reward) {
      std::cout << "uniform reward r* = " << *r.reward << "\n";
      report["reward"] = *r.reward;
    } else {
      std::cout << "no finite uniform reward converts this population\n";
      report["reward"] = nullptr;
    }
    report["candidates"] = r.candidates;
    report["final_state"] = state_to_json(r.final_state, alphabet);
  } else if (problem == "targeted" || problem == "budgeted") {
    ControlOptions opts;
    opts.epsilon = epsilon;
    opts.seed = seed;
    if (problem == "budgeted") opts.budget = budget;
    ControlResult r = run_control(game, x_star, target, strategy_from_string(strategy_name), opts);
    std::cout << "strategy " << strategy_name << ": total reward " << r.total_cost << ", converted "
              << r.converted << "/" << game->size() << (r.residue ? " (residue remained)" : "")
              << "\n";
    std::cout << "order:";
    for (const auto& s : r.order) std::cout << " " << s.agent + 1 << "(+" << s.added << ")";
    std::cout << "\n";
    report = control_result_to_json(r, alphabet);
    report["strategy"] = strategy_name;
  } else {
    throw std::runtime_error("unknown problem: " + problem);
  }
  if (!out.empty()) write_text_file(out, report.dump(2) + "\n");
  return 0;
}

int cmd_experiment(const std::string& plan_path, std::string out_prefix) {
  std::ifstream in(plan_path);
  if (!in) throw std::runtime_error("cannot open " + plan_path);
  json plan_json;
  in >> plan_json;
  ExperimentPlan plan = plan_from_json(plan_json);
  ExperimentResults results = run_experiment(plan);

  if (out_prefix.empty()) out_prefix = (out_dir() / "experiment").string();
  write_text_file(out_prefix + ".csv", results.csv());
  write_text_file(out_prefix + "_summary.json", results.summary().dump(2) + "\n");
  std::cout << "wrote " << results.rows.size() << " rows to " << out_prefix << ".csv\n";
  std::cout << results.summary().dump(2) << "\n";
  return 0;
}

int run_exemplar(const std::string& name, int n, std::uint64_t seed, const std::string& out) {
  auto report_check = [](const std::string& what, const PropertyVerdict& v) {
    std::cout << "  " << what << ": " << (v.holds ? "holds" : "fails") << " ("
              << v.pairs_checked << " pairs)\n";
  };

  if (name == "least-popular") {
    Population pop = example1_population();
    State x0(3, 0);
    auto seq = ActivationSequence::explicit_list({1, 2, 1, 0, 2, 1, 0});
    RunTrace t = run(pop, x0, seq, {.max_steps = 7});
    std::cout << "state at t=7 equals state at t=1: "
              << (t.state_at(7) == t.state_at(1) ? "yes" : "no") << "\n";
    RunTrace cyc = run(pop, x0, ActivationSequence::round_robin(), {.detect_cycles = true});
    std::cout << "round robin verdict: cycle of period " << cyc.verdict.period << "\n";
    if (!out.empty()) write_text_file(out + ".csv", trace_to_csv(cyc, pop.alphabet()));
    return 0;
  }
  if (name == "cyclic-copy") {
    Population pop = cyclic_copy_population(3);
    RunTrace t = run(pop, State{0, 1, 0}, ActivationSequence::round_robin(), {.detect_cycles = true});
    std::cout << "round robin from alternating start: cycle of period " << t.verdict.period << "\n";
    report_check("coordinating", check_coordinating_population(pop));
    report_check("restrictive coordinating", check_restrictive_coordinating(pop));
    RunTrace r = run(pop, State{0, 1, 0}, ActivationSequence::uniform(seed));
    std::cout << "random activation verdict: "
              << (r.verdict.is_equilibrium() ? "equilibrium" : "none") << "\n";
    return 0;
  }
  if (name == "nearest-neighbor" || name == "radius-plurality") {
    Rng rng(seed);
    PlanarPoints pts = PlanarPoints::random(n, rng, 400.0);
    ChoiceAlphabet alphabet({"1", "2", "3", "4"});
    Population pop = name == "nearest-neighbor"
                         ? nearest_neighbor_population(pts, alphabet)
                         : radius_plurality_population(pts, 50.0, alphabet);
    State x0(n);
    for (auto& c : x0) c = static_cast<Choice>(rng() % 4);
    RunTrace t = run(pop, x0, ActivationSequence::uniform(derive_seed(seed, 5)));
    std::cout << (t.verdict.is_equilibrium()
                      ? "equilibrated at t=" + std::to_string(t.verdict.t_star)
                      : "no equilibrium within budget")
              << "\n";
    for (Choice c = 0; c < 4; ++c)
      std::cout << "  choice " << alphabet.label(c) << ": " << count_choice(t.final_state, c)
                << " agents\n";
    if (name == "nearest-neighbor") {
      auto report = nn_digraph_structure(pts);
      std::cout << report.components.size() << " components, all cycles length two: "
                << (report.all_cycles_length_two ? "yes" : "no") << "\n";
    }
    if (!out.empty()) {
      std::ostringstream pcsv;
      pcsv << "agent,x,y,initial,final\n";
      for (int i = 0; i < n; ++i)
        pcsv << i + 1 << ',' << pts.at(i).x << ',' << pts.at(i).y << ','
             << alphabet.label(x0[i]) << ',' << alphabet.label(t.final_state[i]) << '\n';
      write_text_file(out + "_points.csv", pcsv.str());
      write_text_file(out + "_trace.csv", trace_to_csv(t, alphabet));
      std::cout << "wrote " << out << "_points.csv and " << out << "_trace.csv\n";
    }
    return 0;
  }
  if (name == "star-mild-diagonal" || name == "star-steep-diagonal") {
    bool steep = name == "star-steep-diagonal";
    auto game = NetworkGame::homogeneous(
        Network::star(7), ChoiceAlphabet({"Y", "B", "R"}), RuleKind::best_response,
        PayoffMatrix::diagonal(steep ? std::vector<double>{30, 10, 1}
                                     : std::vector<double>{15, 10, 5}));
    Population pop = to_population(std::move(game));
    CheckOptions opts;
    opts.max_pairs = 8000000;
    if (steep) {
      PropertyVerdict v = check_coordinating_agent(pop, 0, opts);
      report_check("center coordinating", v);
      if (v.witness)
        std::cout << witness_to_json(*v.witness, pop.alphabet()).dump(2) << "\n";
    } else {
      PropertyVerdict v = check_a_coordinating_agent(pop, 0, pop.alphabet().index_of("B"), opts);
      report_check("center B-coordinating", v);
      if (v.witness)
        std::cout << witness_to_json(*v.witness, pop.alphabet()).dump(2) << "\n";
    }
    return 0;
  }
  if (name == "imitation-flip") {
    Network net(6, {{0, 1}, {1, 2}, {0, 3}, {3, 4}, {3, 5}});
    auto game = NetworkGame::homogeneous(std::move(net), ChoiceAlphabet({"Y", "B", "R"}),
                                         RuleKind::imitation,
                                         PayoffMatrix::diagonal({10.0, 1.0, 100.0}));
    Population pop = to_population(std::move(game));
    report_check("coordinating", check_coordinating_population(pop));
    report_check("restrictive coordinating", check_restrictive_coordinating(pop));
    return 0;
  }
  if (name == "pgg-flip") {
    Network net(7, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 5}, {1, 6}, {5, 6}});
    PublicGoodsGame game(std::move(net), 1.0, 3.0);
    Population pop = to_population(std::make_shared<const PublicGoodsGame>(std::move(game)),
                                   RuleKind::imitation);
    report_check("coordinating", check_coordinating_population(pop));
    return 0;
  }
  if (name == "contrarian") {
    Population pop = contrarian_population(3);
    auto u = [](const State& x) { return static_cast<double>(x[0]); };
    report_check("deviation gain supermodular", check_supermodular_utility(u, 3, 0));
    report_check("coordinating", check_coordinating_agent(pop, 0));
    return 0;
  }
  std::cerr << "unknown example: " << name << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation, verification and incentive control of asynchronous "
               "decision-making populations on networks"};
  app.require_subcommand(1);

  // simulate
  std::string spec_path, x0_csv, seq_spec = "random", out;
  std::uint64_t seed = 0;
  long max_steps = -1, snapshot_every = -1;
  bool detect_cycles = false;
  auto* sim = app.add_subcommand("simulate", "run the decision-making dynamics");
  sim->add_option("--spec", spec_path, "model document (JSON)")->required();
  sim->add_option("--x0", x0_csv, "initial state as comma-separated labels");
  sim->add_option("--seq", seq_spec, "roundrobin | random | canonical | 1-based id list");
  sim->add_option("--seed", seed, "seed for random activation");
  sim->add_option("--max-steps", max_steps, "step budget (-1: default)");
  sim->add_flag("--detect-cycles", detect_cycles, "detect state revisits (deterministic seq)");
  sim->add_option("--snapshot-every", snapshot_every, "snapshot period (-1: n, 0: off)");
  sim->add_option("--out", out, "output prefix for trace JSON/CSV");

  // check
  std::string property = "coordinating", choice_label, tb_kind = "current-else-min";
  int agent = 0, tb_agent = 1;
  long max_pairs = 1000000, sample = 0;
  auto* chk = app.add_subcommand("check", "run a coordination/supermodularity checker");
  chk->add_option("--spec", spec_path, "model document (JSON)")->required();
  chk->add_option("--property", property,
                  "coordinating | restrictive | a-coordinating | tiebreaker | supermodular | "
                  "satisfaction-supermodular");
  chk->add_option("--choice", choice_label, "target choice label for a-coordinating");
  chk->add_option("--agent", agent, "1-based agent id (0: all)");
  chk->add_option("--max-pairs", max_pairs, "exhaustive pair budget");
  chk->add_option("--sample", sample, "sampled pairs when over budget");
  chk->add_option("--seed", seed, "sampling seed");
  chk->add_option("--tiebreaker", tb_kind, "tie breaker kind for --property tiebreaker");
  chk->add_option("--tb-agent", tb_agent, "1-based designated agent for the tie breaker");
  chk->add_option("--out", out, "write the verdict JSON here");

  // control
  std::string problem = "targeted", strategy_name = "inro", xstar_csv, target_label;
  double budget = 0.0, epsilon = 1e-6;
  bool settle = false;
  auto* ctl = app.add_subcommand("control", "solve a reward-control problem");
  ctl->add_option("--spec", spec_path, "netgame document (JSON)")->required();
  ctl->add_option("--xstar", xstar_csv, "equilibrium state as labels");
  ctl->add_flag("--settle", settle, "equilibrate the start state first");
  ctl->add_option("--problem", problem, "uniform | targeted | budgeted");
  ctl->add_option("--strategy", strategy_name, "inro | ipro-br | ipro-im | degree | random | optimal");
  ctl->add_option("--budget", budget, "budget for --problem budgeted");
  ctl->add_option("--epsilon", epsilon, "margin added above each infimum reward");
  ctl->add_option("--seed", seed, "seed for the random strategy / settling");
  ctl->add_option("--target", target_label, "target choice label (default: first)");
  ctl->add_option("--out", out, "write the result JSON here");

  // experiment
  std::string plan_path, out_prefix;
  auto* exp = app.add_subcommand("experiment", "run a sweep from a plan file");
  exp->add_option("--plan", plan_path, "experiment plan (JSON)")->required();
  exp->add_option("--out", out_prefix, "output prefix (default: $NETCOORD_OUT_DIR/experiment)");

  // examples
  int ex_n = 60;
  std::string ex_name;
  auto* ex = app.add_subcommand("examples", "list or run the built-in worked examples");
  auto* ex_list = ex->add_subcommand("list", "list example names");
  auto* ex_run = ex->add_subcommand("run", "run one example");
  ex_run->add_option("name", ex_name, "example name")->required();
  ex_run->add_option("--n", ex_n, "agent count for the planar examples");
  ex_run->add_option("--seed", seed, "seed for the planar examples");
  ex_run->add_option("--out", out, "output prefix for CSV exports");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed())
      return cmd_simulate(spec_path, x0_csv, seq_spec, seed, max_steps, detect_cycles,
                          snapshot_every, out);
    if (chk->parsed())
      return cmd_check(spec_path, property, choice_label, agent, max_pairs, sample, seed, tb_kind,
                       tb_agent, out);
    if (ctl->parsed())
      return cmd_control(spec_path, xstar_csv, settle, problem, strategy_name, budget, epsilon,
                         seed, target_label, out);
    if (exp->parsed()) return cmd_experiment(plan_path, out_prefix);
    if (ex->parsed()) {
      if (ex_list->parsed()) {
        for (const auto& e : kExemplars) std::cout << e.name << "  -  " << e.blurb << "\n";
        return 0;
      }
      if (ex_run->parsed()) return run_exemplar(ex_name, ex_n, seed, out);
      std::cout << "use: examples list | examples run <name>\n";
      return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
