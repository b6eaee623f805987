#pragma once

// Generalized suffix automaton over letter codes: the factor index behind
// LeafLanguage. Every distinct factor of the added words is spelled by exactly
// one path from the root, so membership is a walk and per-length counts
// fall out of the state lengths.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "lamina/words.hpp"

namespace lamina {

class SuffixAutomaton {
 public:
  explicit SuffixAutomaton(std::size_t alphabet_size = 0);

  void add_word(std::span<const Letter> word);

  /// Length of the longest prefix of `w` that is a factor of an added word.
  std::size_t longest_prefix(std::span<const Letter> w) const noexcept;
  bool contains(std::span<const Letter> w) const noexcept {
    return longest_prefix(w) == w.size();
  }

  /// Number of distinct factors of each length 0..max_length.
  std::vector<std::uint64_t> count_by_length(std::size_t max_length) const;

  /// Visits every distinct factor of exactly `length` letters in increasing
  /// letter-code order.
  void for_each_factor(std::size_t length,
                       const std::function<void(std::span<const Letter>)>& visit) const;

  std::size_t state_count() const noexcept { return len_.size(); }
  std::size_t alphabet_size() const noexcept { return sigma_; }

 private:
  std::int32_t next(std::int32_t state, std::size_t c) const noexcept {
    return trans_[static_cast<std::size_t>(state) * sigma_ + c];
  }
  std::int32_t& next(std::int32_t state, std::size_t c) noexcept {
    return trans_[static_cast<std::size_t>(state) * sigma_ + c];
  }
  std::int32_t new_state(std::int32_t length);
  std::int32_t clone_state(std::int32_t from, std::int32_t length);
  std::int32_t extend(std::int32_t last, std::size_t c);

  std::size_t sigma_;
  std::vector<std::int32_t> trans_;
  std::vector<std::int32_t> len_;
  std::vector<std::int32_t> link_;
};

}  // namespace lamina
