#pragma once

#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "netcoord/control.hpp"
#include "netcoord/exemplars.hpp"
#include "netcoord/incentive.hpp"
#include "netcoord/netgame.hpp"
#include "netcoord/public_goods.hpp"
#include "netcoord/trace.hpp"
#include "netcoord/verdict.hpp"

// JSON and CSV interchange. Agent ids are 1-based in every external format;
// states are arrays of choice labels.

namespace netcoord {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// States and alphabets

inline json state_to_json(const State& x, const ChoiceAlphabet& alphabet) {
  json arr = json::array();
  for (Choice c : x) arr.push_back(alphabet.label(c));
  return arr;
}

inline State state_from_json(const json& arr, const ChoiceAlphabet& alphabet) {
  State x;
  for (const auto& v : arr) x.push_back(alphabet.index_of(v.get<std::string>()));
  return x;
}

inline ChoiceAlphabet alphabet_from_json(const json& arr) {
  std::vector<std::string> labels;
  for (const auto& v : arr) labels.push_back(v.get<std::string>());
  return ChoiceAlphabet(labels);
}

// ---------------------------------------------------------------------------
// Networks

inline json edges_to_json(const Network& net) {
  json arr = json::array();
  for (auto [u, v] : net.edges()) arr.push_back(json::array({u + 1, v + 1}));
  return arr;
}

inline Network network_from_json(int n, const json& edges) {
  std::vector<std::pair<int, int>> es;
  for (const auto& e : edges) es.emplace_back(e.at(0).get<int>() - 1, e.at(1).get<int>() - 1);
  return Network(n, es);
}

// Edge-list CSV: one "u,v" pair per line, 1-based ids; a non-numeric first
// line is treated as a header.
inline Network network_from_edge_csv(std::istream& in, int n) {
  std::vector<std::pair<int, int>> es;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string a, b;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',')) continue;
    try {
      es.emplace_back(std::stoi(a) - 1, std::stoi(b) - 1);
    } catch (const std::exception&) {
      if (!first) throw std::invalid_argument("bad edge row: " + line);
    }
    first = false;
  }
  return Network(n, es);
}

// ---------------------------------------------------------------------------
// Payoffs, tie breakers, rules

inline json payoff_to_json(const PayoffMatrix& pi, const ChoiceAlphabet& alphabet) {
  json rows = json::array();
  for (int r = 0; r < pi.strategies(); ++r) {
    json row = json::array();
    for (int c = 0; c < pi.strategies(); ++c) row.push_back(pi.at(r, c));
    rows.push_back(row);
  }
  json j;
  j["strategies"] = json::array();
  for (const auto& l : alphabet.labels()) j["strategies"].push_back(l);
  j["rows"] = rows;
  return j;
}

inline PayoffMatrix payoff_from_json(const json& j, const ChoiceAlphabet& alphabet) {
  if (j.contains("strategies")) {
    ChoiceAlphabet declared = alphabet_from_json(j.at("strategies"));
    if (!(declared == alphabet))
      throw std::invalid_argument("payoff strategy order disagrees with the alphabet");
  }
  std::vector<std::vector<double>> rows;
  for (const auto& row : j.at("rows")) rows.push_back(row.get<std::vector<double>>());
  return PayoffMatrix::from_rows(rows);
}

inline json tiebreaker_to_json(const TieBreaker& t) {
  json j;
  switch (t.kind()) {
    case TieBreaker::Kind::min_index: j["kind"] = "min-index"; break;
    case TieBreaker::Kind::current_else_min: j["kind"] = "current-else-min"; break;
    case TieBreaker::Kind::designated_agent:
      j["kind"] = "designated";
      j["agent"] = t.designated_id() + 1;
      break;
    case TieBreaker::Kind::opposite_agent:
      j["kind"] = "opposite";
      j["agent"] = t.designated_id() + 1;
      break;
  }
  return j;
}

inline TieBreaker tiebreaker_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "min-index") return TieBreaker::min_index();
  if (kind == "current-else-min") return TieBreaker::current_else_min();
  if (kind == "designated") return TieBreaker::designated(j.at("agent").get<int>() - 1);
  if (kind == "opposite") return TieBreaker::opposite_of(j.at("agent").get<int>() - 1);
  throw std::invalid_argument("unknown tie breaker kind: " + kind);
}

// ---------------------------------------------------------------------------
// Game documents

inline json netgame_to_json(const NetworkGame& g, std::optional<std::uint64_t> seed = {}) {
  json j;
  j["kind"] = "netgame";
  j["n"] = g.size();
  j["alphabet"] = json::array();
  for (const auto& l : g.alphabet().labels()) j["alphabet"].push_back(l);
  j["edges"] = edges_to_json(g.network());
  json agents = json::array();
  for (int i = 0; i < g.size(); ++i) {
    json a;
    a["rule"] = to_string(g.agent(i).rule);
    a["tiebreaker"] = tiebreaker_to_json(g.agent(i).tie);
    a["payoff"] = payoff_to_json(g.agent(i).payoff, g.alphabet());
    agents.push_back(a);
  }
  j["agents"] = agents;
  if (seed) j["seed"] = *seed;
  return j;
}

inline NetworkGame netgame_from_json(const json& j) {
  ChoiceAlphabet alphabet = alphabet_from_json(j.at("alphabet"));
  int n = j.at("n").get<int>();
  Network net = network_from_json(n, j.at("edges"));
  std::vector<AgentSpec> agents;
  auto parse_agent = [&](const json& a) {
    AgentSpec spec;
    spec.rule = rule_from_string(a.at("rule").get<std::string>());
    spec.payoff = payoff_from_json(a.at("payoff"), alphabet);
    spec.tie = a.contains("tiebreaker") ? tiebreaker_from_json(a.at("tiebreaker"))
                                        : TieBreaker::current_else_min();
    return spec;
  };
  if (j.contains("agents")) {
    for (const auto& a : j.at("agents")) agents.push_back(parse_agent(a));
  } else if (j.contains("agent_default")) {
    agents.assign(n, parse_agent(j.at("agent_default")));
  } else {
    throw std::invalid_argument("netgame document needs agents or agent_default");
  }
  return NetworkGame(std::move(net), std::move(alphabet), std::move(agents));
}

// A loaded model: always provides a population; network games and public
// goods games additionally keep their structured form for the checkers and
// the control pipeline.
struct ModelDocument {
  std::optional<Population> population;
  std::shared_ptr<const NetworkGame> netgame;
  std::shared_ptr<const PublicGoodsGame> pgg;
  RuleKind pgg_rule = RuleKind::best_response;
  std::optional<State> x0;

  const Population& pop() const { return *population; }
};

inline Population population_from_protocol_json(const json& p, int n, ChoiceAlphabet alphabet) {
  std::string name = p.at("name").get<std::string>();
  if (name == "least-popular") return least_popular_population(n, std::move(alphabet));
  if (name == "cyclic-copy") return cyclic_copy_population(n, std::move(alphabet));
  if (name == "contrarian") return contrarian_population(n, std::move(alphabet));
  if (name == "constant") {
    Choice c = alphabet.index_of(p.at("choice").get<std::string>());
    return Population(std::move(alphabet),
                      std::vector<RevisionFn>(n, [c](const State&) { return c; }));
  }
  if (name == "nearest-neighbor" || name == "radius-plurality") {
    std::vector<Point> pts;
    for (const auto& q : p.at("points")) pts.push_back({q.at(0).get<double>(), q.at(1).get<double>()});
    if (static_cast<int>(pts.size()) != n)
      throw std::invalid_argument("points list does not match n");
    PlanarPoints planar(std::move(pts));
    if (name == "nearest-neighbor") return nearest_neighbor_population(planar, std::move(alphabet));
    return radius_plurality_population(planar, p.at("radius").get<double>(), std::move(alphabet));
  }
  throw std::invalid_argument("unknown protocol name: " + name);
}

inline ModelDocument load_model(const json& j) {
  ModelDocument doc;
  std::string kind = j.value("kind", "netgame");
  if (kind == "netgame") {
    doc.netgame = std::make_shared<const NetworkGame>(netgame_from_json(j));
    doc.population = to_population(doc.netgame);
  } else if (kind == "pgg") {
    int n = j.at("n").get<int>();
    Network net = network_from_json(n, j.at("edges"));
    doc.pgg = std::make_shared<const PublicGoodsGame>(std::move(net), j.at("c").get<double>(),
                                                      j.at("r").get<double>());
    doc.pgg_rule = rule_from_string(j.value("rule", "best-response"));
    doc.population = to_population(doc.pgg, doc.pgg_rule);
  } else if (kind == "population") {
    int n = j.at("n").get<int>();
    ChoiceAlphabet alphabet = alphabet_from_json(j.at("alphabet"));
    doc.population = population_from_protocol_json(j.at("protocol"), n, alphabet);
  } else {
    throw std::invalid_argument("unknown document kind: " + kind);
  }
  if (j.contains("x0"))
    doc.x0 = state_from_json(j.at("x0"), doc.population->alphabet());
  return doc;
}

inline ModelDocument load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return load_model(j);
}

// ---------------------------------------------------------------------------
// Run traces

inline json verdict_to_json(const Verdict& v) {
  json j;
  switch (v.kind) {
    case Verdict::Kind::equilibrium:
      j["kind"] = "equilibrium";
      j["t_star"] = v.t_star;
      break;
    case Verdict::Kind::cycle:
      j["kind"] = "cycle";
      j["period"] = v.period;
      j["entry_time"] = v.entry_time;
      break;
    case Verdict::Kind::budget_exhausted:
      j["kind"] = "budget-exhausted";
      break;
  }
  j["steps"] = v.steps;
  return j;
}

inline json trace_to_json(const RunTrace& t, const ChoiceAlphabet& alphabet) {
  json j;
  j["x0"] = state_to_json(t.x0, alphabet);
  j["verdict"] = verdict_to_json(t.verdict);
  json switches = json::array();
  for (const auto& ev : t.switches) {
    json e;
    e["t"] = ev.t;
    e["agent"] = ev.agent + 1;
    e["from"] = alphabet.label(ev.from);
    e["to"] = alphabet.label(ev.to);
    switches.push_back(e);
  }
  j["switches"] = switches;
  j["final_state"] = state_to_json(t.final_state, alphabet);
  if (!t.snapshots.empty()) {
    json snaps = json::object();
    for (const auto& [tt, x] : t.snapshots) snaps[std::to_string(tt)] = state_to_json(x, alphabet);
    j["snapshots"] = snaps;
  }
  return j;
}

inline std::string trace_to_csv(const RunTrace& t, const ChoiceAlphabet& alphabet) {
  std::ostringstream out;
  out << "t,agent,from,to\n";
  for (const auto& ev : t.switches)
    out << ev.t << ',' << ev.agent + 1 << ',' << alphabet.label(ev.from) << ','
        << alphabet.label(ev.to) << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Verdicts and witnesses

inline json witness_to_json(const Witness& w, const ChoiceAlphabet& alphabet) {
  json j;
  j["y"] = state_to_json(w.y, alphabet);
  j["z"] = state_to_json(w.z, alphabet);
  if (w.agent >= 0) j["agent"] = w.agent + 1;
  j["tended"] = alphabet.label(w.offending);
  if (w.has_target) j["target"] = alphabet.label(w.target);
  if (w.has_subset) {
    json s = json::array();
    for (Choice c : w.subset.to_vector()) s.push_back(alphabet.label(c));
    j["subset"] = s;
  }
  if (!w.note.empty()) j["note"] = w.note;
  return j;
}

inline json property_verdict_to_json(const PropertyVerdict& v, const ChoiceAlphabet& alphabet) {
  json j;
  j["holds"] = v.holds;
  j["pairs_checked"] = v.pairs_checked;
  j["mode"] = v.sampled ? "sampled" : "exhaustive";
  if (v.witness) j["witness"] = witness_to_json(*v.witness, alphabet);
  return j;
}

// ---------------------------------------------------------------------------
// Control results

inline json control_result_to_json(const ControlResult& r, const ChoiceAlphabet& alphabet) {
  json j;
  j["target"] = alphabet.label(r.rewards.target);
  j["rewards"] = r.rewards.r;
  json order = json::array();
  for (const auto& s : r.order) {
    json e;
    e["agent"] = s.agent + 1;
    e["added"] = s.added;
    order.push_back(e);
  }
  j["order"] = order;
  j["final_state"] = state_to_json(r.final_state, alphabet);
  j["converted"] = r.converted;
  j["total_cost"] = r.total_cost;
  j["residue"] = r.residue;
  j["outer_iterations"] = r.outer_iterations;
  return j;
}

inline std::string control_summary_csv_header() {
  return "instance,n,strategy,total_reward,converted,wall_ms\n";
}

inline std::string control_summary_csv_row(const std::string& instance, int n,
                                           const std::string& strategy, const ControlResult& r,
                                           double wall_ms) {
  std::ostringstream out;
  out << instance << ',' << n << ',' << strategy << ',' << r.total_cost << ',' << r.converted
      << ',' << wall_ms << '\n';
  return out.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace netcoord
