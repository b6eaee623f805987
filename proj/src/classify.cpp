#include "lamina/classify.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string_view>
#include <unordered_map>

#include "lamina/error.hpp"

namespace lamina {

namespace {

constexpr std::pair<VerdictKind, const char*> kKindNames[] = {
    {VerdictKind::ConicalCertified, "ConicalCertified"},
    {VerdictKind::NonConicalEvidence, "NonConicalEvidence"},
    {VerdictKind::InjectiveEvidence, "InjectiveEvidence"},
    {VerdictKind::NonInjectiveEvidence, "NonInjectiveEvidence"},
    {VerdictKind::RecurrentEvidence, "RecurrentEvidence"},
    {VerdictKind::NotRecurrentEvidence, "NotRecurrentEvidence"},
    {VerdictKind::Unknown, "Unknown"},
};

// Greedy non-overlapping occurrences: each accepted one starts at least
// `spacing` after the previous.
std::vector<std::size_t> spaced_occurrences(std::string_view text, std::string_view pattern,
                                            std::size_t spacing) {
  std::vector<std::size_t> out;
  for (auto p = text.find(pattern); p != std::string_view::npos;) {
    out.push_back(p);
    p = text.find(pattern, p + std::max<std::size_t>(spacing, 1));
  }
  return out;
}

bool in_final_part(std::size_t position, std::size_t depth, double tail_fraction) {
  return static_cast<double>(position) >= static_cast<double>(depth) * (1.0 - tail_fraction);
}

void check_window_fits(const LeafLanguage& language, const HyperbolicityParams& params,
                       std::size_t depth) {
  params.validate();
  const std::size_t window = 100 * params.delta;
  if (language.horizon() < window) throw BeyondHorizon(window, language.horizon());
  if (depth < window) {
    throw DepthTooSmall("depth " + std::to_string(depth) + " is below 100*delta = " +
                        std::to_string(window));
  }
}

}  // namespace

std::string to_string(VerdictKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "Unknown";
}

VerdictKind verdict_kind_from_string(const std::string& s) {
  for (const auto& [k, name] : kKindNames) {
    if (s == name) return k;
  }
  throw std::invalid_argument("unknown verdict kind '" + s + "'");
}

Verdict classify_conical(const ReducedWord& prefix, const LeafLanguage& language,
                         const HyperbolicityParams& params, const ConicalOptions& options) {
  const std::size_t depth = prefix.size();
  check_window_fits(language, params, depth);
  const std::size_t d = params.delta;
  const std::size_t window = 100 * d;
  const std::size_t core_off = 22 * d;  // 20*delta truncation, then 2*delta trim
  const std::size_t core_len = window - 2 * core_off;
  const std::size_t align_off = 6 * d;
  const std::size_t align_len = window - 2 * align_off;

  Verdict verdict;
  verdict.classifier = "conical";
  verdict.depth = depth;
  verdict.language_hash = language.hash();
  verdict.under_approximation = true;

  ConicalTranscript tr;
  tr.window = window;
  tr.tail_start = depth / 2;
  const std::string_view text = prefix.view();
  struct Spread {
    std::size_t count;  // spaced occurrences
    std::size_t span;   // first to last occurrence, any spacing
  };
  std::unordered_map<std::string_view, Spread> seen;

  for (std::size_t s = 0; s + window <= depth; ++s) {
    ++tr.windows_examined;
    if (language.member(prefix.letters().subspan(s + core_off, core_len))) continue;
    ++tr.non_leaf_windows;
    if (!tr.first_non_leaf) tr.first_non_leaf = s;
    tr.last_non_leaf = s;
    const std::string_view aligned = text.substr(s + align_off, align_len);
    auto it = seen.find(aligned);
    if (it == seen.end()) {
      const auto occ = spaced_occurrences(text, aligned, window);
      if (occ.size() >= options.min_occurrences &&
          in_final_part(occ.back(), depth, options.tail_fraction)) {
        ConicalCertificate cert;
        cert.tau = prefix.subword(s, window);
        cert.tau_position = s;
        cert.tau_truncated = truncate(cert.tau, 20 * d);
        const ReducedWord core = prefix.subword(s + core_off, core_len);
        cert.non_leaf_query = {core, language.horizon(), language.hash(), false};
        cert.occurrences = occ;
        cert.depth = depth;
        cert.delta = d;
        verdict.kind = VerdictKind::ConicalCertified;
        verdict.under_approximation = false;
        verdict.payload = std::move(cert);
        return verdict;
      }
      const std::size_t last = text.rfind(aligned);
      it = seen.emplace(aligned, Spread{occ.size(), last - occ.front()}).first;
    }
    if (s >= tr.tail_start) {
      ++tr.tail_non_leaf_windows;
      tr.max_tail_occurrences = std::max(tr.max_tail_occurrences, it->second.count);
      tr.max_tail_span = std::max(tr.max_tail_span, it->second.span);
    }
  }

  if (tr.tail_non_leaf_windows == 0) {
    tr.pattern = "leaf_tail";
    verdict.kind = VerdictKind::NonConicalEvidence;
  } else if (tr.max_tail_occurrences < options.min_occurrences) {
    // No tail candidate recurs min_occurrences times anywhere in the prefix.
    tr.pattern = "sparse_tail";
    verdict.kind = VerdictKind::NonConicalEvidence;
  } else {
    tr.pattern = "recurring_tail";
    verdict.kind = VerdictKind::Unknown;
  }
  verdict.payload = std::move(tr);
  return verdict;
}

Verdict classify_conical(RayStream& ray, const LeafLanguage& language,
                         const HyperbolicityParams& params, std::size_t depth,
                         std::size_t min_occurrences) {
  check_window_fits(language, params, depth);
  ConicalOptions options;
  options.min_occurrences = min_occurrences;
  return classify_conical(ray.extend(depth), language, params, options);
}

Verdict classify_injective(const ReducedWord& prefix, const LeafLanguage& language,
                           const HyperbolicityParams& params) {
  const std::size_t depth = prefix.size();
  check_window_fits(language, params, depth);
  const std::size_t trim = params.delta + params.D;
  const std::size_t horizon = language.horizon();

  Verdict verdict;
  verdict.classifier = "injective";
  verdict.depth = depth;
  verdict.language_hash = language.hash();
  verdict.under_approximation = true;

  InjectivityTranscript tr;
  tr.trim = trim;
  tr.horizon = horizon;
  std::vector<std::size_t> starts;  // window starts whose trimmed core is non-leaf
  std::size_t witness_len = 0;
  const auto letters = prefix.letters();
  for (std::size_t j = trim; j < depth; ++j) {
    const std::size_t cap = std::min(horizon, depth - j);
    const std::size_t e = language.longest_member_prefix(letters.subspan(j, cap));
    if (e >= cap) continue;
    // letters[j, j+e+1) is not a member; pad by `trim` on both sides.
    if (j + e + 1 + trim > depth) continue;
    starts.push_back(j - trim);
    witness_len = e + 1 + 2 * trim;
  }
  tr.non_leaf_windows = starts.size();
  if (!starts.empty()) {
    tr.first_non_leaf = starts.front();
    tr.last_non_leaf = starts.back();
    tr.witness = prefix.subword(starts.back(), witness_len);
  }
  for (std::size_t i = 0; i < 8; ++i) {
    const std::size_t c = depth * i / 8;
    auto it = std::lower_bound(starts.begin(), starts.end(), c);
    tr.checkpoints.emplace_back(c, it == starts.end() ? std::nullopt : std::optional(*it));
  }

  if (tr.last_non_leaf && 4 * *tr.last_non_leaf >= 3 * depth) {
    verdict.kind = VerdictKind::InjectiveEvidence;
  } else if (!tr.last_non_leaf || 2 * *tr.last_non_leaf < depth) {
    verdict.kind = VerdictKind::NonInjectiveEvidence;
  } else {
    verdict.kind = VerdictKind::Unknown;
  }
  verdict.payload = std::move(tr);
  return verdict;
}

Verdict classify_injective(RayStream& ray, const LeafLanguage& language,
                           const HyperbolicityParams& params, std::size_t depth) {
  check_window_fits(language, params, depth);
  return classify_injective(ray.extend(depth), language, params);
}

Verdict classify_recurrent(const ReducedWord& prefix, std::size_t window, std::size_t k) {
  const std::size_t depth = prefix.size();
  if (k == 0 || k > window) throw std::invalid_argument("factor length k must be in [1, window]");
  if (depth < 2 * window) {
    throw DepthTooSmall("depth " + std::to_string(depth) + " is below twice the window " +
                        std::to_string(window));
  }
  Verdict verdict;
  verdict.classifier = "recurrent";
  verdict.depth = depth;
  verdict.recurrence_proxy = true;

  RecurrenceTranscript tr;
  tr.window = window;
  tr.k = k;
  const std::string_view text = prefix.view();
  const std::size_t half = depth / 2;
  std::unordered_map<std::string_view, std::vector<std::size_t>> positions;
  for (std::size_t p = 0; p + k <= depth; ++p) positions[text.substr(p, k)].push_back(p);

  // For each factor of [0, half): occurrences inside [half, depth) must hit
  // every interval [s, s + window), half <= s <= depth - window.
  std::set<std::string_view> first_half;
  for (std::size_t p = 0; p + k <= half; ++p) first_half.insert(text.substr(p, k));
  tr.first_half_factors = first_half.size();
  bool recurrent = true;
  for (std::string_view f : first_half) {
    const auto& occ = positions[f];
    std::size_t s = half;  // earliest interval start not yet covered
    bool ok = true;
    for (auto it = std::lower_bound(occ.begin(), occ.end(), half); it != occ.end(); ++it) {
      if (*it + k > depth) break;
      if (*it > s + window - k) {
        ok = false;
        break;
      }
      s = *it + 1;
      if (s > depth - window) break;
    }
    if (ok && s <= depth - window) ok = false;
    if (!ok) {
      recurrent = false;
      tr.gap_factor = prefix.subword(positions[f].front(), k);
      tr.gap_at = s;
      break;
    }
  }

  if (recurrent) {
    verdict.kind = VerdictKind::RecurrentEvidence;
  } else {
    std::optional<std::size_t> unique;
    for (const auto& [f, occ] : positions) {
      if (occ.size() == 1 && occ.front() < half && (!unique || occ.front() < *unique)) unique = occ.front();
    }
    if (unique) {
      tr.unique_factor = prefix.subword(*unique, k);
      tr.unique_at = unique;
      verdict.kind = VerdictKind::NotRecurrentEvidence;
    } else {
      verdict.kind = VerdictKind::Unknown;
    }
  }
  verdict.payload = std::move(tr);
  return verdict;
}

Verdict classify_recurrent(RayStream& ray, std::size_t depth, std::size_t window, std::size_t k) {
  if (depth < 2 * window) {
    throw DepthTooSmall("depth " + std::to_string(depth) + " is below twice the window " +
                        std::to_string(window));
  }
  return classify_recurrent(ray.extend(depth), window, k);
}

ConsistencyReport consistency_check(std::span<const Verdict> verdicts) {
  ConsistencyReport report;
  std::string hash;
  for (const auto& v : verdicts) {
    if (v.depth != verdicts.front().depth) {
      throw DepthMismatch("verdicts computed at depths " + std::to_string(verdicts.front().depth) +
                          " and " + std::to_string(v.depth));
    }
    if (!v.language_hash.empty()) {
      if (!hash.empty() && hash != v.language_hash) {
        throw DepthMismatch("verdicts computed against different languages");
      }
      hash = v.language_hash;
    }
    report.kinds.push_back(v.kind);
  }
  auto has = [&](VerdictKind k) {
    return std::find(report.kinds.begin(), report.kinds.end(), k) != report.kinds.end();
  };
  if (has(VerdictKind::RecurrentEvidence) && has(VerdictKind::InjectiveEvidence) &&
      has(VerdictKind::NonConicalEvidence)) {
    report.passed = false;
    report.message =
        "recurrent, injective and non-conical together: a controlled concentration point with a "
        "single preimage must be conical";
  }
  return report;
}

ReplayResult replay_conical(const ConicalCertificate& certificate, const ReducedWord& prefix,
                            const LeafLanguage& language, const HyperbolicityParams& params,
                            std::size_t min_occurrences) {
  const std::size_t d = params.delta;
  if (certificate.delta != d) return {false, "certificate was issued for delta " + std::to_string(certificate.delta)};
  if (certificate.non_leaf_query.language_hash != language.hash()) {
    return {false, "certificate refers to language " + certificate.non_leaf_query.language_hash};
  }
  if (certificate.tau.size() < 100 * d) return {false, "tau shorter than 100*delta"};
  const ReducedWord truncated = truncate(certificate.tau, 20 * d);
  if (truncated != certificate.tau_truncated) return {false, "truncation differs"};
  bool coarse = true;
  try {
    coarse = is_coarse_leaf_segment(language, params, truncated);
  } catch (const Error& e) {
    return {false, e.what()};
  }
  if (coarse) return {false, "truncation is a coarse leaf segment"};
  if (truncate(truncated, 2 * d) != certificate.non_leaf_query.queried) return {false, "queried core differs"};
  if (certificate.occurrences.size() < min_occurrences) return {false, "too few occurrences"};
  const ReducedWord aligned = truncate(certificate.tau, 6 * d);
  std::size_t previous = 0;
  for (std::size_t i = 0; i < certificate.occurrences.size(); ++i) {
    const std::size_t p = certificate.occurrences[i];
    if (i > 0 && p <= previous) return {false, "occurrences not strictly increasing"};
    previous = p;
    if (p + aligned.size() > prefix.size() || prefix.view().substr(p, aligned.size()) != aligned.view()) {
      return {false, "no aligned occurrence at offset " + std::to_string(p)};
    }
  }
  if (4 * certificate.occurrences.back() < 3 * certificate.depth) {
    return {false, "last occurrence outside the final quarter"};
  }
  return {true, ""};
}

}  // namespace lamina
