#pragma once

#include <stdexcept>
#include <string>

namespace netcoord {

enum class RuleKind { best_response, imitation, rational_imitation };

inline const char* to_string(RuleKind r) {
  switch (r) {
    case RuleKind::best_response: return "best-response";
    case RuleKind::imitation: return "imitation";
    case RuleKind::rational_imitation: return "rational-imitation";
  }
  return "?";
}

inline RuleKind rule_from_string(const std::string& s) {
  if (s == "best-response" || s == "br") return RuleKind::best_response;
  if (s == "imitation" || s == "im") return RuleKind::imitation;
  if (s == "rational-imitation" || s == "ri") return RuleKind::rational_imitation;
  throw std::invalid_argument("unknown update rule: " + s);
}

}  // namespace netcoord
