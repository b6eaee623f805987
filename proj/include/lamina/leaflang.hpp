#pragma once

// Leaf factor languages of stable laminations.
//
// A word of length <= horizon is a leaf segment iff it is a factor of some
// iterate f^n(e), n >= 1, of a source map, or the inverse of such a factor.
// The language is materialized once up to the horizon into a suffix
// automaton and is read-only afterwards, so concurrent queries are safe.
//
// Diagonal leaves are not generated: the language is the union of the
// stable-lamination factors of the given sources, an under-approximation of
// the full Cannon-Thurston lamination.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "lamina/suffix_automaton.hpp"
#include "lamina/traintrack.hpp"
#include "lamina/words.hpp"

namespace lamina {

/// Hyperbolicity constant together with the local-geodesic scale r and the
/// fellow-travelling bound D. Defaults: r = 8*delta + 1, D = 2*delta.
struct HyperbolicityParams {
  std::size_t delta = 1;
  std::size_t r = 9;
  std::size_t D = 2;

  static HyperbolicityParams with_delta(std::size_t delta);
  /// Throws std::invalid_argument when delta < 1 or r < 1.
  void validate() const;
  bool operator==(const HyperbolicityParams&) const = default;
};

struct LanguageOptions {
  std::size_t stabilization_window = 2;
  std::size_t depth_cap = 64;
  /// Upper bound on letters held by the factor index (words plus inverses).
  std::size_t memory_budget = 200'000'000;
  /// Keep iterating at least this far even after stabilization.
  std::size_t min_generation_depth = 0;
};

class LeafLanguage {
 public:
  /// Rebuilds a language from its generating words (cache load path).
  LeafLanguage(Alphabet alphabet, std::vector<std::string> source_hashes, std::size_t horizon,
               std::size_t generation_depth, std::vector<ReducedWord> basis);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t horizon() const noexcept { return horizon_; }
  std::size_t generation_depth() const noexcept { return generation_depth_; }
  const std::vector<std::string>& source_hashes() const noexcept { return source_hashes_; }
  /// Words whose factors (and their inverses) are exactly the members.
  const std::vector<ReducedWord>& basis() const noexcept { return basis_; }
  /// Content hash over sources, horizon, generation depth and basis.
  const std::string& hash() const noexcept { return hash_; }

  /// Longest member prefix of `w`, at most horizon() letters.
  std::size_t longest_member_prefix(std::span<const Letter> w) const noexcept;
  /// Unchecked membership for |w| <= horizon.
  bool member(std::span<const Letter> w) const noexcept {
    return w.size() <= horizon_ && index_.contains(w);
  }
  /// Member counts for lengths 0..horizon.
  std::vector<std::uint64_t> member_counts() const { return index_.count_by_length(horizon_); }
  const SuffixAutomaton& index() const noexcept { return index_; }

 private:
  Alphabet alphabet_;
  std::vector<std::string> source_hashes_;
  std::size_t horizon_;
  std::size_t generation_depth_;
  std::vector<ReducedWord> basis_;
  std::string hash_;
  SuffixAutomaton index_;
};

/// Materializes the factor language of the sources up to `horizon`.
/// generation_depth is the least n whose member set equals that of
/// n + stabilization_window. Throws HorizonTooLarge, NotStabilized,
/// CancellationDetected.
LeafLanguage build_language(std::span<const TrainTrackMap> sources, std::size_t horizon,
                            const LanguageOptions& options = {});
LeafLanguage build_language(std::span<const TrainTrackMap> sources, std::size_t horizon,
                            std::size_t stabilization_window);

/// Throws BeyondHorizon when |w| > horizon.
bool is_leaf_factor(const LeafLanguage& lang, const ReducedWord& w);

/// Tree model: w lies within 2*delta of a leaf iff its core, trimmed by
/// 2*delta letters at each end, is a member. Throws TooShort if |w| <= 4*delta.
bool is_coarse_leaf_segment(const LeafLanguage& lang, const HyperbolicityParams& params,
                            const ReducedWord& w);

/// All members of exactly `length` letters. Throws BeyondHorizon.
std::set<ReducedWord> enumerate_members(const LeafLanguage& lang, std::size_t length);

/// Longest member factor of the bi-infinite power of `period`, capped at `cap`.
std::size_t longest_periodic_member(const LeafLanguage& lang, std::span<const Letter> period,
                                    std::size_t cap);

/// Largest L <= search_bound such that some length-L factor of period^inf,
/// trimmed by delta + D at each end, is a member. A result equal to
/// search_bound means no bound was found within the search.
/// Throws NotCyclicallyReduced, BeyondHorizon.
std::size_t max_leaf_overlap(const LeafLanguage& lang, const HyperbolicityParams& params,
                             const ReducedWord& period, std::size_t search_bound);

}  // namespace lamina
