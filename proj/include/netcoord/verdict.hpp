#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "netcoord/choice.hpp"

namespace netcoord {

// Counterexample to a checked property. The state pair is always filled;
// the remaining fields depend on which definition was violated.
struct Witness {
  State y;
  State z;
  int agent = -1;
  Choice offending = 0;      // what f (or the tie breaker) actually returned
  bool has_target = false;   // targeted checks carry the choice under test
  Choice target = 0;
  bool has_subset = false;   // tie-breaker checks carry the feasible subset
  ChoiceSet subset;
  std::string note;
};

struct PropertyVerdict {
  bool holds = true;
  std::optional<Witness> witness;
  long pairs_checked = 0;
  // Sampled verdicts are evidence, never proof: holds just means no
  // counterexample was found among the sampled pairs.
  bool sampled = false;
};

// Thrown when an exhaustive check would exceed the configured pair budget
// and sampling was not requested.
struct BudgetExceeded : std::runtime_error {
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct CheckOptions {
  long max_pairs = 1000000;  // exhaustive enumeration budget (ordered pairs)
  long sample_pairs = 0;     // >0: fall back to this many seeded samples over budget
  std::uint64_t seed = 0;
};

}  // namespace netcoord
