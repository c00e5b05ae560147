#pragma once

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace netcoord {

// A choice is an index into the population's alphabet. The alphabet order is
// total and fixed; "min-index" tie breaking refers to this order.
using Choice = std::uint8_t;

// Decision state: one choice per agent.
using State = std::vector<Choice>;

class ChoiceAlphabet {
 public:
  ChoiceAlphabet() = default;
  explicit ChoiceAlphabet(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.size() < 2) throw std::invalid_argument("alphabet needs at least 2 labels");
    if (labels_.size() > 255) throw std::invalid_argument("alphabet too large");
    for (std::size_t i = 0; i < labels_.size(); ++i)
      for (std::size_t j = i + 1; j < labels_.size(); ++j)
        if (labels_[i] == labels_[j]) throw std::invalid_argument("duplicate alphabet label: " + labels_[i]);
  }
  ChoiceAlphabet(std::initializer_list<const char*> labels)
      : ChoiceAlphabet(std::vector<std::string>(labels.begin(), labels.end())) {}

  static ChoiceAlphabet binary() { return ChoiceAlphabet({"1", "2"}); }
  static ChoiceAlphabet cooperate_defect() { return ChoiceAlphabet({"C", "D"}); }

  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& label(Choice c) const { return labels_.at(c); }
  const std::vector<std::string>& labels() const { return labels_; }

  bool contains(Choice c) const { return c < labels_.size(); }

  // Throws if the label is unknown.
  Choice index_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == label) return static_cast<Choice>(i);
    throw std::invalid_argument("unknown choice label: " + label);
  }

  bool operator==(const ChoiceAlphabet& other) const { return labels_ == other.labels_; }

 private:
  std::vector<std::string> labels_;
};

// Small set of choices backed by a bitmask (alphabets are capped at 255, and
// in practice far smaller). Iteration order is alphabet order.
class ChoiceSet {
 public:
  ChoiceSet() = default;
  explicit ChoiceSet(std::uint64_t mask) : mask_(mask) {}
  ChoiceSet(std::initializer_list<Choice> cs) {
    for (Choice c : cs) insert(c);
  }

  static ChoiceSet all(int alphabet_size) {
    if (alphabet_size >= 64) throw std::invalid_argument("ChoiceSet supports alphabets up to 63");
    return ChoiceSet((alphabet_size == 0) ? 0ULL : ((1ULL << alphabet_size) - 1));
  }

  void insert(Choice c) {
    if (c >= 64) throw std::invalid_argument("ChoiceSet supports choices up to 63");
    mask_ |= (1ULL << c);
  }
  bool contains(Choice c) const { return c < 64 && (mask_ >> c) & 1ULL; }
  bool empty() const { return mask_ == 0; }
  int size() const { return __builtin_popcountll(mask_); }
  std::uint64_t mask() const { return mask_; }

  // Lowest-index member; only valid on a nonempty set.
  Choice min() const {
    if (empty()) throw std::logic_error("min() on empty ChoiceSet");
    return static_cast<Choice>(__builtin_ctzll(mask_));
  }

  ChoiceSet intersect(const ChoiceSet& other) const { return ChoiceSet(mask_ & other.mask_); }
  ChoiceSet unite(const ChoiceSet& other) const { return ChoiceSet(mask_ | other.mask_); }

  std::vector<Choice> to_vector() const {
    std::vector<Choice> out;
    for (std::uint64_t m = mask_; m; m &= m - 1)
      out.push_back(static_cast<Choice>(__builtin_ctzll(m)));
    return out;
  }

  bool operator==(const ChoiceSet& other) const { return mask_ == other.mask_; }

 private:
  std::uint64_t mask_ = 0;
};

}  // namespace netcoord
