#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "netcoord/rng.hpp"

namespace netcoord {

// Activation sequences decide which agent revises at each time step. Agent
// ids are 0-based here; serialized forms use 1-based ids.
//
// Deterministic kinds (explicit list, round robin) repeat cyclically, so a
// finite list describes an infinite periodic sequence. Random kinds draw one
// agent per step with every agent's probability bounded below by a positive
// constant (uniform: 1/n; weighted: min w / sum w).
class ActivationSequence {
 public:
  enum class Kind { explicit_list, round_robin, uniform_random, weighted_random };

  static ActivationSequence explicit_list(std::vector<int> entries) {
    if (entries.empty()) throw std::invalid_argument("empty activation list");
    ActivationSequence s;
    s.kind_ = Kind::explicit_list;
    s.entries_ = std::move(entries);
    return s;
  }

  static ActivationSequence round_robin(int offset = 0) {
    ActivationSequence s;
    s.kind_ = Kind::round_robin;
    s.offset_ = offset;
    return s;
  }

  static ActivationSequence uniform(std::uint64_t seed) {
    ActivationSequence s;
    s.kind_ = Kind::uniform_random;
    s.seed_ = seed;
    return s;
  }

  static ActivationSequence weighted(std::vector<double> weights, std::uint64_t seed) {
    if (weights.empty()) throw std::invalid_argument("empty weight vector");
    for (double w : weights)
      if (!(w > 0.0)) throw std::invalid_argument("activation weights must be strictly positive");
    ActivationSequence s;
    s.kind_ = Kind::weighted_random;
    s.weights_ = std::move(weights);
    s.seed_ = seed;
    return s;
  }

  Kind kind() const { return kind_; }
  bool deterministic() const { return kind_ == Kind::explicit_list || kind_ == Kind::round_robin; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<int>& entries() const { return entries_; }

  // Period of the deterministic cycle (list length, or n for round robin).
  long period(int n) const {
    switch (kind_) {
      case Kind::explicit_list: return static_cast<long>(entries_.size());
      case Kind::round_robin: return n;
      default: throw std::logic_error("period() on a random activation sequence");
    }
  }

  // Stateful per-run sampler; each run owns one so runs stay independent.
  class Sampler {
   public:
    Sampler(const ActivationSequence& seq, int n) : seq_(seq), n_(n), rng_(seq.seed_) {
      if (seq.kind_ == Kind::explicit_list) {
        for (int a : seq.entries_)
          if (a < 0 || a >= n) throw std::invalid_argument("activation entry out of range");
      }
      if (seq.kind_ == Kind::weighted_random) {
        if (static_cast<int>(seq.weights_.size()) != n)
          throw std::invalid_argument("weight vector length does not match population size");
        dist_ = std::discrete_distribution<int>(seq.weights_.begin(), seq.weights_.end());
      }
    }

    int next(long t) {
      switch (seq_.kind_) {
        case Kind::explicit_list: return seq_.entries_[t % seq_.entries_.size()];
        case Kind::round_robin: return static_cast<int>((t + seq_.offset_) % n_);
        case Kind::uniform_random: return static_cast<int>(rng_() % static_cast<std::uint64_t>(n_));
        case Kind::weighted_random: return dist_(rng_);
      }
      return 0;
    }

   private:
    const ActivationSequence& seq_;
    int n_;
    Rng rng_;
    std::discrete_distribution<int> dist_;
  };

  Sampler sampler(int n) const { return Sampler(*this, n); }

 private:
  Kind kind_ = Kind::round_robin;
  std::vector<int> entries_;
  std::vector<double> weights_;
  int offset_ = 0;
  std::uint64_t seed_ = 0;
};

// The recursive activation sequence S = (S_1, ..., S_n) with S_1 = (1) and
// S_i = (i, D_{i-1} repeated i-1 times), D_j = (j, j-1, ..., 1); 0-based ids.
// Any coordinating population is at equilibrium by the end of S.
inline std::vector<int> canonical_entries(int n) {
  if (n < 1) throw std::invalid_argument("canonical sequence needs n >= 1");
  std::vector<int> s{0};
  for (int i = 1; i < n; ++i) {
    s.push_back(i);
    for (int rep = 0; rep < i; ++rep)
      for (int j = i - 1; j >= 0; --j) s.push_back(j);
  }
  return s;
}

inline ActivationSequence canonical_sequence(int n) {
  return ActivationSequence::explicit_list(canonical_entries(n));
}

// |S| = n + sum_{i<n} i^2; the equilibration bound for coordinating runs.
inline long canonical_length(int n) {
  long m = n - 1;
  return n + m * (m + 1) * (2 * m + 1) / 6;
}

}  // namespace netcoord
