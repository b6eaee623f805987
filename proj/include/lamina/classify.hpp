#pragma once

// Bounded-depth classifiers for geodesic rays in the tree model.
//
// Window constants for hyperbolicity constant delta: candidate segments have
// 100*delta letters, non-leaf tests use the 20*delta truncation followed by
// the 2*delta coarse-leaf trim, and alignment along the ray is literal
// occurrence of the 6*delta-trimmed core.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "lamina/leaflang.hpp"
#include "lamina/ray_stream.hpp"
#include "lamina/rays.hpp"
#include "lamina/words.hpp"

namespace lamina {

enum class VerdictKind {
  ConicalCertified,
  NonConicalEvidence,
  InjectiveEvidence,
  NonInjectiveEvidence,
  RecurrentEvidence,
  NotRecurrentEvidence,
  Unknown,
};

std::string to_string(VerdictKind kind);
VerdictKind verdict_kind_from_string(const std::string& s);

struct ConicalCertificate {
  ReducedWord tau;
  std::size_t tau_position = 0;  // where tau was read off the ray
  ReducedWord tau_truncated;     // 20*delta truncation
  MembershipQuery non_leaf_query;
  /// Offsets of the 6*delta-trimmed core of tau; strictly increasing.
  std::vector<std::size_t> occurrences;
  std::size_t depth = 0;
  std::size_t delta = 1;
};

struct ConicalTranscript {
  std::size_t window = 0;
  std::size_t windows_examined = 0;
  std::size_t non_leaf_windows = 0;
  /// Windows starting at or after tail_start.
  std::size_t tail_start = 0;
  std::size_t tail_non_leaf_windows = 0;
  /// Most occurrences of any tail candidate's aligned core.
  std::size_t max_tail_occurrences = 0;
  /// Longest distance between first and last occurrence of a tail candidate.
  std::size_t max_tail_span = 0;
  /// First non-leaf window, if any.
  std::optional<std::size_t> first_non_leaf;
  /// Last non-leaf window, if any.
  std::optional<std::size_t> last_non_leaf;
  /// "leaf_tail", "sparse_tail" or "recurring_tail".
  std::string pattern;
};

struct InjectivityTranscript {
  std::size_t trim = 0;  // delta + D
  std::size_t horizon = 0;
  std::size_t non_leaf_windows = 0;
  std::optional<std::size_t> first_non_leaf;
  std::optional<std::size_t> last_non_leaf;
  /// The non-leaf window starting at last_non_leaf.
  ReducedWord witness;
  /// Checkpoints depth*i/8 paired with the first non-leaf window at or after it.
  std::vector<std::pair<std::size_t, std::optional<std::size_t>>> checkpoints;
};

struct RecurrenceTranscript {
  std::size_t window = 0;
  std::size_t k = 0;
  std::size_t first_half_factors = 0;
  /// A first-half factor missing from some window of the second half.
  std::optional<ReducedWord> gap_factor;
  std::optional<std::size_t> gap_at;
  /// A factor occurring exactly once, before depth/2.
  std::optional<ReducedWord> unique_factor;
  std::optional<std::size_t> unique_at;
};

using VerdictPayload = std::variant<std::monostate, ConicalCertificate, ConicalTranscript,
                                    InjectivityTranscript, RecurrenceTranscript>;

struct Verdict {
  std::string classifier;  // "conical", "injective", "recurrent"
  VerdictKind kind = VerdictKind::Unknown;
  std::size_t depth = 0;
  std::string language_hash;
  /// Diagonal leaves are not generated, so the language under-approximates
  /// the lamination and leaf-based evidence is one-sided.
  bool under_approximation = false;
  /// The recurrence test is a symbolic proxy for controlled concentration.
  bool recurrence_proxy = false;
  VerdictPayload payload;
};

struct ConicalOptions {
  std::size_t min_occurrences = 5;
  /// The last occurrence must fall at or after depth * (1 - tail_fraction).
  double tail_fraction = 0.25;
};

Verdict classify_conical(const ReducedWord& prefix, const LeafLanguage& language,
                         const HyperbolicityParams& params, const ConicalOptions& options = {});
Verdict classify_conical(RayStream& ray, const LeafLanguage& language,
                         const HyperbolicityParams& params, std::size_t depth,
                         std::size_t min_occurrences = 5);

Verdict classify_injective(const ReducedWord& prefix, const LeafLanguage& language,
                           const HyperbolicityParams& params);
Verdict classify_injective(RayStream& ray, const LeafLanguage& language,
                           const HyperbolicityParams& params, std::size_t depth);

/// Throws DepthTooSmall when depth < 2*window, std::invalid_argument when
/// k is 0 or exceeds the window.
Verdict classify_recurrent(const ReducedWord& prefix, std::size_t window, std::size_t k);
Verdict classify_recurrent(RayStream& ray, std::size_t depth, std::size_t window, std::size_t k);

struct ConsistencyReport {
  bool passed = true;
  std::string message;
  std::vector<VerdictKind> kinds;
};

/// Flags {RecurrentEvidence, InjectiveEvidence, NonConicalEvidence} together.
/// Throws DepthMismatch when depths or language hashes differ.
ConsistencyReport consistency_check(std::span<const Verdict> verdicts);

/// Recomputes the truncation and membership verdict and re-checks every
/// occurrence against `prefix`, which may be longer than the certified depth.
ReplayResult replay_conical(const ConicalCertificate& certificate, const ReducedWord& prefix,
                            const LeafLanguage& language, const HyperbolicityParams& params,
                            std::size_t min_occurrences = 5);

}  // namespace lamina
