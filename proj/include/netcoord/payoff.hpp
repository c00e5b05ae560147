#pragma once

#include <stdexcept>
#include <vector>

#include "netcoord/choice.hpp"
#include "netcoord/util.hpp"

namespace netcoord {

// Square payoff matrix: row = own strategy, column = opponent strategy.
class PayoffMatrix {
 public:
  PayoffMatrix() = default;
  explicit PayoffMatrix(int strategies, double fill = 0.0)
      : k_(strategies), v_(static_cast<std::size_t>(strategies) * strategies, fill) {
    if (strategies < 2) throw std::invalid_argument("payoff matrix needs at least 2 strategies");
  }

  static PayoffMatrix from_rows(const std::vector<std::vector<double>>& rows) {
    PayoffMatrix m(static_cast<int>(rows.size()));
    for (int r = 0; r < m.k_; ++r) {
      if (static_cast<int>(rows[r].size()) != m.k_) throw std::invalid_argument("payoff matrix is not square");
      for (int c = 0; c < m.k_; ++c) m.at(r, c) = rows[r][c];
    }
    return m;
  }

  static PayoffMatrix diagonal(const std::vector<double>& diag) {
    PayoffMatrix m(static_cast<int>(diag.size()));
    for (int r = 0; r < m.k_; ++r) m.at(r, r) = diag[r];
    return m;
  }

  int strategies() const { return k_; }
  double operator()(Choice own, Choice opp) const { return v_[index(own, opp)]; }
  double& at(int own, int opp) { return v_[index(own, opp)]; }
  double at(int own, int opp) const { return v_[index(own, opp)]; }

  // gamma = pi(2,2) - pi(1,2): the deficit of playing the first strategy
  // against a second-strategy opponent. Binary matrices only.
  double gamma() const {
    check_binary();
    return at(1, 1) - at(0, 1);
  }

  // delta = pi(1,1) - pi(2,1) - pi(1,2) + pi(2,2). A best-responder with
  // delta > 0 behaves as a linear-threshold agent, switching to the first
  // strategy once enough neighbors play it.
  double delta() const {
    check_binary();
    return at(0, 0) - at(1, 0) - at(0, 1) + at(1, 1);
  }

  // Binary coordinating best-responder condition: delta > 0.
  bool is_coordinating_br() const { return delta() > 0.0; }

  // Strict column dominance pi_kk > pi_pk for all p != k; the special case
  // of the coordinating best-responder condition.
  bool strict_column_dominant() const {
    for (int k = 0; k < k_; ++k)
      for (int p = 0; p < k_; ++p)
        if (p != k && !(at(k, k) > at(p, k))) return false;
    return true;
  }

  // Opponent-coordinating: each row is maximized on the diagonal
  // (pi_kk >= pi_kp), i.e. matching the opponent never hurts.
  bool is_opponent_coordinating() const {
    for (int k = 0; k < k_; ++k)
      for (int p = 0; p < k_; ++p)
        if (!approx_ge(at(k, k), at(k, p))) return false;
    return true;
  }

  // Coordination payoff matrix: the diagonal weakly dominates both its row
  // and its column.
  bool is_coordination_matrix() const {
    for (int k = 0; k < k_; ++k)
      for (int q = 0; q < k_; ++q) {
        if (!approx_ge(at(k, k), at(k, q))) return false;
        if (!approx_ge(at(k, k), at(q, k))) return false;
      }
    return true;
  }

 private:
  std::size_t index(int own, int opp) const {
    if (own < 0 || own >= k_ || opp < 0 || opp >= k_) throw std::out_of_range("payoff index");
    return static_cast<std::size_t>(own) * k_ + opp;
  }
  void check_binary() const {
    if (k_ != 2) throw std::logic_error("binary payoff predicate on a non-binary matrix");
  }

  int k_ = 0;
  std::vector<double> v_;
};

}  // namespace netcoord
