#include "lamina/leaflang.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "lamina/digest.hpp"
#include "lamina/error.hpp"

namespace lamina {

namespace {

using Bytes = std::string;  // letter codes, one per byte

std::span<const Letter> letters_of(const Bytes& b) {
  return {reinterpret_cast<const Letter*>(b.data()), b.size()};
}

Bytes expand(const TrainTrackMap& map, const Bytes& w, std::size_t generator_hint) {
  Bytes out;
  out.reserve(w.size() * map.max_image_length());
  const auto letters = letters_of(w);
  for (std::size_t i = 0; i < letters.size(); ++i) {
    const ReducedWord& img = map.image(letters[i]);
    if (!out.empty() && static_cast<Letter>(out.back()) == inverse(img.front())) {
      const auto& a = map.alphabet();
      throw CancellationDetected(a.name(letters[i - 1]) + " " + a.name(letters[i]),
                                 a.generators()[generator_hint], 0);
    }
    out.append(img.view());
  }
  return out;
}

// Cumulative factor data of one source: length-H windows of all iterates up
// to the current level plus iterates still shorter than H.
class SourceGenerator {
 public:
  SourceGenerator(const TrainTrackMap& map, std::size_t horizon)
      : map_(map), horizon_(horizon), tails_(map.alphabet().generator_count()) {}

  // Computes level n + 1 from level n (level 1 from the generators).
  void advance() {
    ++level_;
    std::unordered_set<Bytes> next;
    if (level_ == 1) {
      for (std::size_t g = 0; g < tails_.size(); ++g) {
        absorb(g, Bytes(map_.image(generator_letter(g)).view()), next);
      }
    } else {
      for (const Bytes& x : current_) {
        const Bytes fx = expand(map_, x, 0);
        const std::size_t first = map_.image(static_cast<Letter>(x.front())).size();
        for (std::size_t o = 0; o < first; ++o) next.insert(fx.substr(o, horizon_));
      }
      for (std::size_t g = 0; g < tails_.size(); ++g) absorb(g, expand(map_, tails_[g].word, g), next);
    }
    for (const Bytes& w : next) windows_.insert(w);
    current_ = std::move(next);
    window_history_.push_back(windows_.size());
  }

  std::size_t level() const noexcept { return level_; }
  std::size_t window_count() const noexcept { return windows_.size(); }
  std::size_t windows_at(std::size_t level) const { return window_history_[level - 1]; }

  // Member sets agree at levels a < b: equal window sets and every short
  // iterate first seen after a is already a factor at level a.
  bool same_members(std::size_t a, std::size_t b) const {
    if (windows_at(a) != windows_at(b)) return false;
    for (const auto& [word, level] : shorts_) {
      if (level <= a || level > b) continue;
      bool found = false;
      for (const auto& [other, other_level] : shorts_) {
        if (other_level <= a && other.find(word) != Bytes::npos) {
          found = true;
          break;
        }
      }
      for (auto it = windows_.begin(); !found && it != windows_.end(); ++it) {
        found = it->find(word) != Bytes::npos;
      }
      if (!found) return false;
    }
    return true;
  }

  // Generating words of the member set at `level`. Windows only grow, so the
  // set at a stabilized level is the current one.
  std::vector<Bytes> basis(std::size_t level) const {
    std::vector<Bytes> out(windows_.begin(), windows_.end());
    for (const auto& [word, l] : shorts_) {
      if (l <= level) out.push_back(word);
    }
    return out;
  }

 private:
  struct Tail {
    Bytes word;  // the whole iterate while short, else its last H letters
    bool long_ = false;
  };

  void absorb(std::size_t g, Bytes iterate, std::unordered_set<Bytes>& next) {
    Tail& tail = tails_[g];
    if (iterate.size() < horizon_) {
      shorts_.emplace(iterate, level_);
      tail.word = std::move(iterate);
      return;
    }
    for (std::size_t o = 0; o + horizon_ <= iterate.size(); ++o) next.insert(iterate.substr(o, horizon_));
    tail.word = iterate.substr(iterate.size() - horizon_);
    tail.long_ = true;
  }

  const TrainTrackMap& map_;
  std::size_t horizon_;
  std::size_t level_ = 0;
  std::vector<Tail> tails_;
  std::unordered_set<Bytes> current_;
  std::set<Bytes> windows_;
  std::map<Bytes, std::size_t> shorts_;
  std::vector<std::size_t> window_history_;
};

std::string language_hash(const std::vector<std::string>& source_hashes, std::size_t horizon,
                          std::size_t depth, const std::vector<ReducedWord>& basis) {
  std::string canon = "lamina.leaf-language/1\n";
  for (const auto& h : source_hashes) canon += "source " + h + "\n";
  canon += "horizon " + std::to_string(horizon) + "\n";
  canon += "generation_depth " + std::to_string(depth) + "\n";
  for (const auto& w : basis) {
    for (Letter x : w) canon += std::to_string(code(x)) + ",";
    canon += "\n";
  }
  return sha256_hex(canon);
}

}  // namespace

HyperbolicityParams HyperbolicityParams::with_delta(std::size_t delta) {
  HyperbolicityParams p;
  p.delta = delta;
  p.r = 8 * delta + 1;
  p.D = 2 * delta;
  p.validate();
  return p;
}

void HyperbolicityParams::validate() const {
  if (delta < 1) throw std::invalid_argument("delta must be at least 1");
  if (r < 1) throw std::invalid_argument("local-geodesic scale r must be at least 1");
}

LeafLanguage::LeafLanguage(Alphabet alphabet, std::vector<std::string> source_hashes,
                           std::size_t horizon, std::size_t generation_depth,
                           std::vector<ReducedWord> basis)
    : alphabet_(std::move(alphabet)),
      source_hashes_(std::move(source_hashes)),
      horizon_(horizon),
      generation_depth_(generation_depth),
      basis_(std::move(basis)),
      index_(alphabet_.letter_count()) {
  std::sort(basis_.begin(), basis_.end());
  basis_.erase(std::unique(basis_.begin(), basis_.end()), basis_.end());
  for (const auto& w : basis_) {
    if (w.size() > horizon_) throw std::invalid_argument("basis word longer than the horizon");
    index_.add_word(w.letters());
    index_.add_word(invert(w).letters());
  }
  hash_ = language_hash(source_hashes_, horizon_, generation_depth_, basis_);
}

std::size_t LeafLanguage::longest_member_prefix(std::span<const Letter> w) const noexcept {
  return index_.longest_prefix(w.first(std::min(w.size(), horizon_)));
}

LeafLanguage build_language(std::span<const TrainTrackMap> sources, std::size_t horizon,
                            const LanguageOptions& options) {
  if (sources.empty()) throw std::invalid_argument("build_language needs at least one source");
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  if (options.stabilization_window < 1) throw std::invalid_argument("stabilization window must be >= 1");
  const Alphabet& alphabet = sources.front().alphabet();
  for (const auto& s : sources) {
    if (!(s.alphabet() == alphabet)) throw InvalidMap("language sources must share one alphabet");
  }

  std::vector<Bytes> basis_bytes;
  std::vector<std::string> hashes;
  std::size_t generation_depth = 0;
  for (const auto& source : sources) {
    SourceGenerator gen(source, horizon);
    const std::size_t w = options.stabilization_window;
    std::size_t stable = 0;
    while (true) {
      if (gen.level() >= options.depth_cap) throw NotStabilized(options.depth_cap);
      gen.advance();
      if (2 * gen.window_count() * horizon > options.memory_budget) {
        throw HorizonTooLarge("factor index for horizon " + std::to_string(horizon) +
                              " exceeds the memory budget of " +
                              std::to_string(options.memory_budget) + " letters");
      }
      const std::size_t n = gen.level();
      if (stable == 0 && n > w && gen.same_members(n - w, n)) stable = n - w;
      if (stable != 0 && n >= std::max(stable + w, options.min_generation_depth)) break;
    }
    const std::size_t depth = std::max(stable, options.min_generation_depth);
    generation_depth = std::max(generation_depth, depth);
    for (auto& b : gen.basis(depth)) basis_bytes.push_back(std::move(b));
    hashes.push_back(source.source_hash());
  }

  std::vector<ReducedWord> basis;
  basis.reserve(basis_bytes.size());
  for (const auto& b : basis_bytes) {
    const auto l = letters_of(b);
    basis.push_back(ReducedWord::from_reduced({l.begin(), l.end()}));
  }
  return LeafLanguage(alphabet, std::move(hashes), horizon, generation_depth, std::move(basis));
}

LeafLanguage build_language(std::span<const TrainTrackMap> sources, std::size_t horizon,
                            std::size_t stabilization_window) {
  LanguageOptions options;
  options.stabilization_window = stabilization_window;
  return build_language(sources, horizon, options);
}

bool is_leaf_factor(const LeafLanguage& lang, const ReducedWord& w) {
  if (w.size() > lang.horizon()) throw BeyondHorizon(w.size(), lang.horizon());
  return lang.member(w.letters());
}

bool is_coarse_leaf_segment(const LeafLanguage& lang, const HyperbolicityParams& params,
                            const ReducedWord& w) {
  const std::size_t trim = 2 * params.delta;
  if (w.size() <= 2 * trim) {
    throw TooShort("segment of length " + std::to_string(w.size()) + " has no core after trimming " +
                   std::to_string(trim) + " from each end");
  }
  return is_leaf_factor(lang, w.subword(trim, w.size() - 2 * trim));
}

std::set<ReducedWord> enumerate_members(const LeafLanguage& lang, std::size_t length) {
  if (length > lang.horizon()) throw BeyondHorizon(length, lang.horizon());
  std::set<ReducedWord> out;
  lang.index().for_each_factor(length, [&](std::span<const Letter> f) {
    out.insert(ReducedWord::from_reduced({f.begin(), f.end()}));
  });
  return out;
}

std::size_t longest_periodic_member(const LeafLanguage& lang, std::span<const Letter> period,
                                    std::size_t cap) {
  cap = std::min(cap, lang.horizon());
  std::size_t best = 0;
  std::vector<Letter> run(cap);
  for (std::size_t offset = 0; offset < period.size(); ++offset) {
    for (std::size_t i = 0; i < cap; ++i) run[i] = period[(offset + i) % period.size()];
    best = std::max(best, lang.longest_member_prefix(run));
    if (best == cap) break;
  }
  return best;
}

std::size_t max_leaf_overlap(const LeafLanguage& lang, const HyperbolicityParams& params,
                             const ReducedWord& period, std::size_t search_bound) {
  if (period.empty() || !is_cyclically_reduced(period.letters())) {
    throw NotCyclicallyReduced("period word must be nonempty and cyclically reduced");
  }
  if (search_bound > lang.horizon()) throw BeyondHorizon(search_bound, lang.horizon());
  const std::size_t trim = params.delta + params.D;
  const std::size_t core = longest_periodic_member(lang, period.letters(), search_bound);
  return std::min(search_bound, core + 2 * trim);
}

}  // namespace lamina
