#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "netcoord/exemplars.hpp"
#include "netcoord/netgame.hpp"
#include "netcoord/rng.hpp"

namespace netcoord {

// Random geometric network: n points uniform in the unit square, an edge
// whenever the Euclidean distance is at most sqrt((1 + expected_degree)/n).
// Resamples (bounded) until no node is isolated.
inline Network gen_network(int n, double expected_degree, std::uint64_t seed, int max_retries = 100) {
  if (n < 2) throw std::invalid_argument("gen_network needs n >= 2");
  if (expected_degree <= 0) throw std::invalid_argument("expected_degree must be positive");
  Rng rng(seed);
  const double radius = std::sqrt((1.0 + expected_degree) / n);
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    PlanarPoints pts = PlanarPoints::random(n, rng);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (dist(pts.at(i), pts.at(j)) <= radius) edges.emplace_back(i, j);
    Network net(n, edges);
    if (!net.has_isolated_node()) return net;
  }
  throw std::runtime_error("gen_network: retry budget exhausted (parameters too sparse)");
}

// Binary best-response matrix with unit threshold sensitivity: delta = 1 and
// gamma = tau, so the switch threshold is ceil(tau * deg). Valid for
// tau in (0, 1); the strict dominance conditions fail at the endpoints.
inline PayoffMatrix br_payoff_from_threshold(double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("threshold must lie in (0, 1)");
  return PayoffMatrix::from_rows({{1.0 - tau, 0.0}, {0.0, tau}});
}

// Imitator matrix p*I + v*W with W uniform on [0,1]^{2x2}; resampled until
// the coordination-matrix predicate holds (p >= 1, v <= 1 make failures
// essentially impossible, the check guards degenerate parameters).
inline PayoffMatrix gen_imitator_payoff(double p, double v, Rng& rng, int max_retries = 100) {
  if (p < 1.0) throw std::invalid_argument("coordination level p must be >= 1");
  if (v < 0.0 || v > 1.0) throw std::invalid_argument("payoff variance v must lie in [0, 1]");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    PayoffMatrix m = PayoffMatrix::from_rows(
        {{p + v * u(rng), v * u(rng)}, {v * u(rng), p + v * u(rng)}});
    if (m.is_coordination_matrix()) return m;
  }
  throw std::runtime_error("gen_imitator_payoff: retry budget exhausted");
}

enum class InitKind { all_undesirable, bernoulli_third };

// Initial states over the binary alphabet ("1" desirable, "2" undesirable).
// The bernoulli kind can reject the all-undesirable draw, which imitator-only
// networks cannot recover from.
inline State gen_initial_state(InitKind kind, int n, std::uint64_t seed,
                               bool reject_all_undesirable = false) {
  if (kind == InitKind::all_undesirable) return State(n, 1);
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    State x(n);
    bool any_desirable = false;
    for (int i = 0; i < n; ++i) {
      x[i] = u(rng) < 1.0 / 3.0 ? 0 : 1;
      any_desirable = any_desirable || x[i] == 0;
    }
    if (!reject_all_undesirable || any_desirable) return x;
  }
}

struct GenSpec {
  int n = 20;
  double expected_degree = 6.0;
  double frac_br = 1.0;  // agent mix; must sum to 1
  double frac_im = 0.0;
  double frac_ri = 0.0;
  double threshold_lo = 0.0;  // thresholds drawn from (lo, hi]
  double threshold_hi = 2.0 / 3.0;
  double p_lo = 1.0, p_hi = 2.0;
  double v_lo = 0.0, v_hi = 1.0;
  InitKind init = InitKind::all_undesirable;

  void validate() const {
    if (n < 2) throw std::invalid_argument("plan size must be >= 2");
    double sum = frac_br + frac_im + frac_ri;
    if (std::fabs(sum - 1.0) > 1e-9) throw std::invalid_argument("rule fractions must sum to 1");
    if (frac_br < 0 || frac_im < 0 || frac_ri < 0) throw std::invalid_argument("negative rule fraction");
    if (threshold_lo < 0.0 || threshold_hi > 2.0 / 3.0 + 1e-12 || threshold_lo >= threshold_hi)
      throw std::invalid_argument("threshold range must sit inside (0, 2/3]");
    if (p_lo < 1.0 || p_hi < p_lo) throw std::invalid_argument("bad coordination-level range");
    if (v_lo < 0.0 || v_hi > 1.0 || v_hi < v_lo) throw std::invalid_argument("bad variance range");
  }
};

struct Instance {
  NetworkGame game;
  State x0;
  std::uint64_t seed = 0;
};

// Full instance generation: one seed fixes the network, rule assignment,
// payoffs and the initial state.
inline Instance gen_instance(const GenSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(derive_seed(seed, 1));
  std::uniform_real_distribution<double> u(0.0, 1.0);

  Network net = gen_network(spec.n, spec.expected_degree, derive_seed(seed, 2));
  std::vector<AgentSpec> agents;
  bool imitators_only = true;
  for (int i = 0; i < spec.n; ++i) {
    AgentSpec a;
    double pick = u(rng);
    if (pick < spec.frac_br)
      a.rule = RuleKind::best_response;
    else if (pick < spec.frac_br + spec.frac_im)
      a.rule = RuleKind::imitation;
    else
      a.rule = RuleKind::rational_imitation;
    if (a.rule == RuleKind::best_response) {
      // (lo, hi]: hi is attainable, lo is not, keeping strict dominance.
      double tau = spec.threshold_hi - u(rng) * (spec.threshold_hi - spec.threshold_lo);
      a.payoff = br_payoff_from_threshold(tau);
    } else {
      double p = spec.p_lo + u(rng) * (spec.p_hi - spec.p_lo);
      double v = spec.v_lo + u(rng) * (spec.v_hi - spec.v_lo);
      a.payoff = gen_imitator_payoff(p, v, rng);
    }
    a.tie = TieBreaker::current_else_min();
    imitators_only = imitators_only && a.rule == RuleKind::imitation;
    agents.push_back(std::move(a));
  }

  NetworkGame game(std::move(net), ChoiceAlphabet::binary(), std::move(agents));
  State x0 = gen_initial_state(spec.init, spec.n, derive_seed(seed, 3),
                               imitators_only && spec.init == InitKind::bernoulli_third);
  return Instance{std::move(game), std::move(x0), seed};
}

}  // namespace netcoord
