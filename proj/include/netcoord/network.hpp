#pragma once

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace netcoord {

// Simple undirected graph: no self-loops, no parallel edges, no weights.
class Network {
 public:
  Network() = default;
  Network(int n, const std::vector<std::pair<int, int>>& edges) : n_(n), adj_(n) {
    if (n < 1) throw std::invalid_argument("network needs at least one node");
    std::set<std::pair<int, int>> uniq;
    for (auto [u, v] : edges) {
      if (u < 0 || u >= n || v < 0 || v >= n) throw std::invalid_argument("edge endpoint out of range");
      if (u == v) throw std::invalid_argument("self-loop on node " + std::to_string(u + 1));
      uniq.emplace(std::min(u, v), std::max(u, v));
    }
    for (auto [u, v] : uniq) {
      adj_[u].push_back(v);
      adj_[v].push_back(u);
    }
    for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
    edges_.assign(uniq.begin(), uniq.end());
  }

  static Network path(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return Network(n, e);
  }

  // One center (node 0) connected to every other node.
  static Network star(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 1; i < n; ++i) e.emplace_back(0, i);
    return Network(n, e);
  }

  static Network complete(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
    return Network(n, e);
  }

  int size() const { return n_; }
  long edge_count() const { return static_cast<long>(edges_.size()); }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int i) const { return adj_.at(i); }
  int degree(int i) const { return static_cast<int>(adj_.at(i).size()); }
  // |N_i| + 1: the agent together with her neighbors.
  int group_size(int i) const { return degree(i) + 1; }
  bool adjacent(int u, int v) const {
    const auto& nb = adj_.at(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  bool has_isolated_node() const {
    for (const auto& nb : adj_)
      if (nb.empty()) return true;
    return false;
  }

 private:
  int n_ = 0;
  std::vector<std::vector<int>> adj_;
  std::vector<std::pair<int, int>> edges_;
};

}  // namespace netcoord
