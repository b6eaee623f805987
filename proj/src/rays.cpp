#include "lamina/rays.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <unordered_set>

#include "lamina/error.hpp"

namespace lamina {

namespace {

class PeriodicProducer final : public RayProducer {
 public:
  explicit PeriodicProducer(ReducedWord period) : period_(std::move(period)) {}

  void extend(std::vector<Letter>& prefix, std::size_t length) override {
    while (prefix.size() < length) prefix.insert(prefix.end(), period_.begin(), period_.end());
  }

 private:
  ReducedWord period_;
};

class ExplicitProducer final : public RayProducer {
 public:
  explicit ExplicitProducer(ReducedWord word) : word_(std::move(word)) {}

  void extend(std::vector<Letter>& prefix, std::size_t length) override {
    if (length > word_.size()) {
      throw RayExhausted("explicit ray has " + std::to_string(word_.size()) + " letters, " +
                         std::to_string(length) + " requested");
    }
    prefix.assign(word_.begin(), word_.end());
  }

 private:
  ReducedWord word_;
};

ReducedWord power(const ReducedWord& w, std::size_t k) {
  std::vector<Letter> out;
  out.reserve(w.size() * k);
  for (std::size_t i = 0; i < k; ++i) out.insert(out.end(), w.begin(), w.end());
  return ReducedWord::from_reduced(std::move(out));
}

std::vector<std::size_t> occurrences(std::string_view text, std::string_view pattern) {
  std::vector<std::size_t> out;
  for (auto p = text.find(pattern); p != std::string_view::npos; p = text.find(pattern, p + 1)) {
    out.push_back(p);
  }
  return out;
}

// Shortest d dividing |w| with w = (w[0, d))^(|w|/d).
std::string_view primitive_root(std::string_view w) {
  for (std::size_t d = 1; d < w.size(); ++d) {
    if (w.size() % d == 0 && w.substr(d) == w.substr(0, w.size() - d)) return w.substr(0, d);
  }
  return w;
}

bool conjugate(std::string_view a, std::string_view b) {
  return a.size() == b.size() && (std::string(a) + std::string(a)).find(b) != std::string::npos;
}

constexpr std::size_t kGapCandidates = 16;

class WInfinityProducer final : public RayProducer {
 public:
  WInfinityProducer(std::shared_ptr<const LeafLanguage> language, WInfinityScheme scheme,
                    std::vector<Letter> leaf)
      : language_(std::move(language)), scheme_(std::move(scheme)), leaf_(std::move(leaf)) {
    const std::size_t r = scheme_.params.r;
    for (std::size_t i = 0; i + r <= leaf_.size(); ++i) leaf_factors_.insert(text().substr(i, r));
    scheme_.local_geodesic = true;
    scheme_.r_factors_in_leaf = true;
    next_m_ = r;
  }

  void extend(std::vector<Letter>& prefix, std::size_t length) override {
    while (prefix.size() < length) append_stage(prefix);
  }

  const WInfinityScheme& scheme() const noexcept { return scheme_; }

 private:
  std::string_view text() const noexcept { return bytes(leaf_); }

  ReducedWord piece(std::size_t pos, std::size_t len) const {
    return ReducedWord::from_reduced({leaf_.begin() + static_cast<std::ptrdiff_t>(pos),
                                      leaf_.begin() + static_cast<std::ptrdiff_t>(pos + len)});
  }

  // First length-m factor that occurs again later in the examined prefix.
  std::size_t find_v(std::size_t m) const {
    const auto t = text();
    for (std::size_t i = 0; i + m <= t.size(); ++i) {
      if (t.find(t.substr(i, m), i + 1) != std::string_view::npos) return i;
    }
    throw SearchBudgetExhausted(m, "a recurring factor v_m");
  }

  void append_stage(std::vector<Letter>& prefix) {
    const std::size_t m = next_m_;
    const auto t = text();
    const HyperbolicityParams& params = scheme_.params;

    WInfinityStage stage;
    stage.m = m;
    stage.v_position = v_position_ ? *v_position_ : find_v(m);
    stage.v = piece(stage.v_position, m);
    const auto q = occurrences(t, stage.v.view());

    // u_m: shortest gap between occurrences of v_m that is at least 2m and
    // longer than the previous period, so |u_m| >= m; alpha_m must not be a
    // power of a conjugate of an earlier period.
    const std::size_t min_gap =
        std::max(2 * m, scheme_.stages.empty() ? 0 : scheme_.stages.back().period() + 1);
    std::vector<std::pair<std::size_t, std::size_t>> gaps;  // (gap, start)
    for (std::size_t i = 0; i < q.size(); ++i) {
      auto it = std::lower_bound(q.begin() + static_cast<std::ptrdiff_t>(i), q.end(), q[i] + min_gap);
      for (std::size_t n = 0; it != q.end() && n < kGapCandidates; ++it, ++n) gaps.emplace_back(*it - q[i], q[i]);
    }
    std::sort(gaps.begin(), gaps.end());
    std::size_t best = 0;
    std::size_t gap = 0;
    for (const auto& [g, start] : gaps) {
      const std::string_view root = primitive_root(t.substr(start, g));
      if (std::any_of(roots_.begin(), roots_.end(), [&](const std::string& r) { return conjugate(r, root); })) {
        continue;
      }
      gap = g;
      best = start;
      roots_.emplace_back(root);
      break;
    }
    if (gap == 0) throw SearchBudgetExhausted(m, "v_m u_m v_m");
    stage.vuv_position = best;
    stage.u = piece(best + m, gap - m);
    stage.alpha = piece(best, gap);

    // t_m: shortest nonempty word with v_m t_m v_{m+1} occurring.
    const std::size_t next_v = find_v(m + 1);
    const auto q_next = occurrences(t, t.substr(next_v, m + 1));
    std::size_t t_len = 0;
    for (std::size_t p : q) {
      auto it = std::lower_bound(q_next.begin(), q_next.end(), p + m + 1);
      if (it == q_next.end()) continue;
      if (t_len == 0 || *it - p - m < t_len) {
        t_len = *it - p - m;
        stage.vtv_position = p;
      }
    }
    if (t_len == 0) throw SearchBudgetExhausted(m, "v_m t_m v_{m+1}");
    stage.t = piece(stage.vtv_position + m, t_len);

    if (!is_cyclically_reduced(stage.alpha.letters())) {
      throw std::logic_error("w-infinity: alpha_m is not cyclically reduced");
    }
    const std::size_t horizon = language_->horizon();
    stage.longest_leaf_power = longest_periodic_member(*language_, stage.alpha.letters(), horizon);
    stage.overlap_bound = max_leaf_overlap(*language_, params, stage.alpha, horizon);
    if (stage.longest_leaf_power >= horizon || stage.overlap_bound >= horizon) {
      throw HorizonTooSmall("leaf overlap of alpha_" + std::to_string(m) +
                            " is not bounded within horizon " + std::to_string(horizon));
    }
    // The extra 40*delta pays for the 20*delta truncation at both ends.
    const std::size_t threshold =
        std::max(stage.overlap_bound, stage.longest_leaf_power) + 4 * params.delta + 40 * params.delta;
    stage.kappa = threshold / stage.period() + 1;
    while (true) {
      stage.certificate = certify_block(*language_, params, m, stage.alpha, stage.kappa);
      if (stage.certificate.non_leaf) break;
      ++stage.kappa;
    }

    const std::size_t old = prefix.size();
    stage.offset = old;
    for (const ReducedWord* w : {&stage.certificate.block, &stage.v, &stage.t}) {
      if (!prefix.empty() && !w->empty() && prefix.back() == inverse(w->front())) {
        throw std::logic_error("w-infinity: cancellation at a junction");
      }
      prefix.insert(prefix.end(), w->begin(), w->end());
    }

    const std::size_t r = params.r;
    const std::size_t from = old >= r ? old - r + 1 : 0;
    const std::string_view fresh = bytes(prefix).substr(from);
    scheme_.local_geodesic = scheme_.local_geodesic && is_reduced(std::span<const Letter>(prefix).subspan(from));
    for (std::size_t i = 0; i + r <= fresh.size(); ++i) {
      if (!leaf_factors_.contains(fresh.substr(i, r))) scheme_.r_factors_in_leaf = false;
    }

    scheme_.length = prefix.size();
    scheme_.stages.push_back(std::move(stage));
    v_position_ = next_v;
    ++next_m_;
  }

  std::shared_ptr<const LeafLanguage> language_;
  WInfinityScheme scheme_;
  std::vector<Letter> leaf_;
  std::unordered_set<std::string_view> leaf_factors_;
  std::size_t next_m_ = 0;
  std::optional<std::size_t> v_position_;
  std::vector<std::string> roots_;
};

}  // namespace

RayStream periodic_ray(const Alphabet& alphabet, const ReducedWord& period) {
  if (period.empty() || !is_cyclically_reduced(period.letters())) {
    throw NotCyclicallyReduced("periodic ray needs a nonempty cyclically reduced period");
  }
  Provenance p{RaySource::periodic, "periodic: " + alphabet.render(period), ""};
  return RayStream(alphabet, std::make_unique<PeriodicProducer>(period), std::move(p));
}

RayStream explicit_ray(const Alphabet& alphabet, const std::vector<ReducedWord>& pieces) {
  ReducedWord w;
  for (const auto& piece : pieces) w = concat_reduced(w, piece).word;
  Provenance p{RaySource::explicit_words, "explicit: " + alphabet.render(w), ""};
  return RayStream(alphabet, std::make_unique<ExplicitProducer>(std::move(w)), std::move(p));
}

ReducedWord truncate(const ReducedWord& w, std::size_t c) {
  if (w.size() < 2 * c) return {};
  return w.subword(c, w.size() - 2 * c);
}

NonLeafBlockCertificate certify_block(const LeafLanguage& language, const HyperbolicityParams& params,
                                      std::size_t index, const ReducedWord& alpha, std::size_t kappa) {
  NonLeafBlockCertificate cert;
  cert.index = index;
  cert.period = alpha;
  cert.power = kappa;
  cert.block = power(alpha, kappa);
  cert.truncation = truncate(cert.block, 20 * params.delta);
  const ReducedWord core = truncate(cert.truncation, 2 * params.delta);
  if (core.size() > language.horizon()) {
    throw HorizonTooSmall("block alpha_" + std::to_string(index) + "^" + std::to_string(kappa) +
                          " has a core of " + std::to_string(core.size()) +
                          " letters, beyond horizon " + std::to_string(language.horizon()));
  }
  cert.query = {core, language.horizon(), language.hash(), language.member(core.letters())};
  cert.non_leaf = !is_coarse_leaf_segment(language, params, cert.truncation);
  return cert;
}

WInfinityBuild build_w_infinity(std::shared_ptr<const LeafLanguage> language,
                                const HyperbolicityParams& params, RayStream& leaf_ray,
                                std::size_t target_length, std::size_t search_budget) {
  if (!language) throw std::invalid_argument("build_w_infinity needs a language");
  params.validate();
  WInfinityScheme scheme;
  scheme.params = params;
  scheme.language_hash = language->hash();
  scheme.horizon = language->horizon();
  scheme.leaf = leaf_ray.provenance();
  scheme.leaf_prefix_examined = search_budget;
  const ReducedWord leaf = leaf_ray.extend(search_budget);

  const Alphabet alphabet = leaf_ray.alphabet();
  Provenance p{RaySource::w_infinity,
               "winf: from " + leaf_ray.provenance().description + " (examined " +
                   std::to_string(search_budget) + " letters)",
               leaf_ray.provenance().source_hash};
  auto producer = std::make_unique<WInfinityProducer>(std::move(language), std::move(scheme),
                                                      std::vector<Letter>(leaf.begin(), leaf.end()));
  const WInfinityProducer* raw = producer.get();
  RayStream ray(alphabet, std::move(producer), std::move(p));
  if (target_length > 0) ray.extend(target_length);
  WInfinityScheme out = raw->scheme();
  return {std::move(ray), std::move(out)};
}

const WInfinityScheme* w_infinity_scheme(const RayStream& ray) {
  const auto* p = dynamic_cast<const WInfinityProducer*>(&ray.producer());
  return p ? &p->scheme() : nullptr;
}

ReducedWord extend(RayStream& ray, std::size_t new_length) { return ray.extend(new_length); }

ReplayResult replay_block(const NonLeafBlockCertificate& certificate, const LeafLanguage& language,
                          const HyperbolicityParams& params) {
  if (certificate.query.language_hash != language.hash()) {
    return {false, "certificate refers to language " + certificate.query.language_hash};
  }
  if (certificate.query.horizon != language.horizon()) return {false, "horizon differs"};
  NonLeafBlockCertificate again;
  try {
    again = certify_block(language, params, certificate.index, certificate.period, certificate.power);
  } catch (const Error& e) {
    return {false, e.what()};
  }
  if (again.block != certificate.block) return {false, "block is not period^power"};
  if (again.truncation != certificate.truncation) return {false, "truncation differs"};
  if (again.query.queried != certificate.query.queried) return {false, "queried core differs"};
  if (again.query.member != certificate.query.member) return {false, "membership verdict differs"};
  if (again.non_leaf != certificate.non_leaf) return {false, "block verdict differs"};
  return {true, ""};
}

}  // namespace lamina
