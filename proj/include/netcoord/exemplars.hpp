#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "netcoord/population.hpp"
#include "netcoord/rng.hpp"
#include "netcoord/tiebreak.hpp"

namespace netcoord {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double dist(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Planar agent layout used by the nearest-neighbor and radius-plurality
// protocols. Nearest-neighbor requires all pairwise distances distinct.
class PlanarPoints {
 public:
  explicit PlanarPoints(std::vector<Point> pts) : pts_(std::move(pts)) {
    if (pts_.size() < 2) throw std::invalid_argument("need at least two points");
  }

  static PlanarPoints random(int n, Rng& rng, double side = 1.0) {
    std::uniform_real_distribution<double> u(0.0, side);
    std::vector<Point> pts(n);
    for (auto& p : pts) p = {u(rng), u(rng)};
    return PlanarPoints(std::move(pts));
  }

  int size() const { return static_cast<int>(pts_.size()); }
  const Point& at(int i) const { return pts_.at(i); }
  const std::vector<Point>& points() const { return pts_; }

  bool distances_distinct() const {
    std::vector<double> d;
    for (int i = 0; i < size(); ++i)
      for (int j = i + 1; j < size(); ++j) d.push_back(dist(pts_[i], pts_[j]));
    std::sort(d.begin(), d.end());
    return std::adjacent_find(d.begin(), d.end()) == d.end();
  }

  // Index of the strictly nearest other point.
  int nearest_other(int i) const {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int j = 0; j < size(); ++j) {
      if (j == i) continue;
      double d = dist(pts_[i], pts_[j]);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    return best;
  }

  std::vector<int> within_radius(int i, double radius) const {
    std::vector<int> out;
    for (int j = 0; j < size(); ++j)
      if (j != i && dist(pts_[i], pts_[j]) <= radius) out.push_back(j);
    return out;
  }

 private:
  std::vector<Point> pts_;
};

// Everyone updates to the least common choice, ties resolved toward the
// alphabet-first choice. The canonical three-agent two-color instance never
// equilibrates.
inline Population least_popular_population(int n, ChoiceAlphabet alphabet) {
  const int k = alphabet.size();
  RevisionFn f = [k](const State& x) {
    std::vector<int> counts(k, 0);
    for (Choice c : x) counts[c]++;
    Choice best = 0;
    for (Choice c = 1; c < k; ++c)
      if (counts[c] < counts[best]) best = c;
    return best;
  };
  return Population(std::move(alphabet), std::vector<RevisionFn>(n, f));
}

inline Population example1_population() {
  return least_popular_population(3, ChoiceAlphabet({"Red", "Blue"}));
}

// Copy the choice of the strictly nearest other agent.
inline Population nearest_neighbor_population(const PlanarPoints& pts, ChoiceAlphabet alphabet) {
  if (!pts.distances_distinct()) throw std::invalid_argument("duplicate pairwise distances");
  std::vector<RevisionFn> protocols;
  for (int i = 0; i < pts.size(); ++i) {
    int j = pts.nearest_other(i);
    protocols.emplace_back([j](const State& x) { return x[j]; });
  }
  return Population(std::move(alphabet), std::move(protocols));
}

// Update to the most frequent choice among agents within the disc; keep the
// current choice on a tie that includes it (else alphabet-minimum), and when
// the disc is empty.
inline Population radius_plurality_population(const PlanarPoints& pts, double radius,
                                              ChoiceAlphabet alphabet) {
  const int k = alphabet.size();
  std::vector<RevisionFn> protocols;
  for (int i = 0; i < pts.size(); ++i) {
    std::vector<int> disc = pts.within_radius(i, radius);
    protocols.emplace_back([disc, k, i](const State& x) {
      if (disc.empty()) return x[i];
      std::vector<int> counts(k, 0);
      for (int j : disc) counts[x[j]]++;
      int best = *std::max_element(counts.begin(), counts.end());
      ChoiceSet top;
      for (Choice c = 0; c < k; ++c)
        if (counts[c] == best) top.insert(c);
      return TieBreaker::current_else_min().pick(top, x, i);
    });
  }
  return Population(std::move(alphabet), std::move(protocols));
}

// f_i = x_{i+1}, cyclically. Coordinating and restrictive coordinating, yet
// it cycles forever from an alternating start under the repeating sequence
// (1, ..., n) when n is odd.
inline Population cyclic_copy_population(int n, ChoiceAlphabet alphabet = ChoiceAlphabet({"A", "B"})) {
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("cyclic copy exemplar needs odd n >= 3");
  std::vector<RevisionFn> protocols;
  for (int i = 0; i < n; ++i) {
    int j = (i + 1) % n;
    protocols.emplace_back([j](const State& x) { return x[j]; });
  }
  return Population(std::move(alphabet), std::move(protocols));
}

// Binary agents that always tend to the choice they are not playing. Their
// deviation gain is constant in everyone else's choices (supermodular), yet
// the protocol is not coordinating.
inline Population contrarian_population(int n, ChoiceAlphabet alphabet = ChoiceAlphabet({"1", "0"})) {
  if (alphabet.size() != 2) throw std::invalid_argument("contrarian exemplar is binary");
  std::vector<RevisionFn> protocols;
  for (int i = 0; i < n; ++i)
    protocols.emplace_back([i](const State& x) { return static_cast<Choice>(1 - x[i]); });
  return Population(std::move(alphabet), std::move(protocols));
}

// Nearest-neighbor digraph: node -> strictly nearest other node. Every
// weakly connected component contains exactly one cycle, a mutual nearest
// pair; the report makes that checkable.
struct NnDigraphReport {
  std::vector<int> nearest;                  // out-edge of each node
  std::vector<std::vector<int>> components;  // weakly connected node sets
  std::vector<std::vector<int>> cycles;      // the cycle found in each component
  bool all_cycles_length_two = true;
};

inline NnDigraphReport nn_digraph_structure(const PlanarPoints& pts) {
  if (!pts.distances_distinct()) throw std::invalid_argument("duplicate pairwise distances");
  const int n = pts.size();
  NnDigraphReport report;
  report.nearest.resize(n);
  for (int i = 0; i < n; ++i) report.nearest[i] = pts.nearest_other(i);

  // Weak components via union-find over the undirected support.
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); };
  for (int i = 0; i < n; ++i) parent[find(i)] = find(report.nearest[i]);

  std::vector<std::vector<int>> by_root(n);
  for (int i = 0; i < n; ++i) by_root[find(i)].push_back(i);
  for (auto& comp : by_root) {
    if (comp.empty()) continue;
    // Follow out-edges from any node until a repeat: that loop is the
    // component's unique cycle.
    std::vector<int> order;
    std::vector<int> pos(n, -1);
    int v = comp.front();
    while (pos[v] < 0) {
      pos[v] = static_cast<int>(order.size());
      order.push_back(v);
      v = report.nearest[v];
    }
    std::vector<int> cycle(order.begin() + pos[v], order.end());
    if (cycle.size() != 2) report.all_cycles_length_two = false;
    report.components.push_back(std::move(comp));
    report.cycles.push_back(std::move(cycle));
  }
  return report;
}

}  // namespace netcoord
