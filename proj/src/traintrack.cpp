#include "lamina/traintrack.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "lamina/digest.hpp"
#include "lamina/error.hpp"

namespace lamina {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

// Expands the images of `w` into `out`, stopping once `out` holds `limit`
// letters. Junction cancellation is a train-track violation.
void expand_into(const TrainTrackMap& map, std::span<const Letter> w, std::vector<Letter>& out,
                 std::size_t limit, std::string_view context) {
  for (std::size_t i = 0; i < w.size() && out.size() < limit; ++i) {
    const ReducedWord& img = map.image(w[i]);
    if (!out.empty() && out.back() == inverse(img.front())) {
      const auto& a = map.alphabet();
      throw CancellationDetected(a.name(w[i - 1]) + " " + a.name(w[i]), std::string(context), 0);
    }
    out.insert(out.end(), img.begin(), img.end());
  }
  if (out.size() > limit) out.resize(limit);
}

class FixedRayProducer final : public RayProducer {
 public:
  explicit FixedRayProducer(FixedRayScheme scheme) : scheme_(std::move(scheme)) {}

  void extend(std::vector<Letter>& prefix, std::size_t length) override {
    if (prefix.size() >= length) return;
    const std::size_t target = std::max(length, 2 * prefix.size());
    std::vector<Letter> w = prefix.empty() ? std::vector<Letter>{scheme_.seed} : prefix;
    const std::string context = scheme_.map->alphabet().name(scheme_.seed);
    while (w.size() < target) {
      std::vector<Letter> next;
      next.reserve(target);
      expand_into(*scheme_.map, w, next, target, context);
      // Every stage is a longer prefix of the same fixed word.
      w = std::move(next);
    }
    prefix = std::move(w);
  }

 private:
  FixedRayScheme scheme_;
};

}  // namespace

TrainTrackMap::TrainTrackMap(Alphabet alphabet, std::vector<ReducedWord> images, bool primitive)
    : alphabet_(std::move(alphabet)), primitive_(primitive) {
  if (images.size() != alphabet_.generator_count()) {
    throw InvalidMap("expected one image per generator");
  }
  images_.resize(alphabet_.letter_count());
  for (std::size_t g = 0; g < images.size(); ++g) {
    if (images[g].empty()) {
      throw InvalidMap("image of " + alphabet_.generators()[g] + " is empty");
    }
    for (Letter x : images[g]) {
      if (!alphabet_.contains(x)) throw InvalidMap("image uses a letter outside the alphabet");
    }
    images_[2 * g] = images[g];
    images_[2 * g + 1] = invert(images[g]);
  }
  if (primitive_ && !is_primitive(transition_matrix())) {
    throw InvalidMap("map is flagged primitive but its transition matrix is not primitive");
  }
}

std::size_t TrainTrackMap::max_image_length() const noexcept {
  std::size_t m = 0;
  for (const auto& img : images_) m = std::max(m, img.size());
  return m;
}

std::vector<std::vector<std::uint64_t>> TrainTrackMap::transition_matrix() const {
  const std::size_t n = alphabet_.generator_count();
  std::vector<std::vector<std::uint64_t>> m(n, std::vector<std::uint64_t>(n, 0));
  for (std::size_t j = 0; j < n; ++j) {
    for (Letter x : images_[2 * j]) ++m[generator_of(x)][j];
  }
  return m;
}

bool is_primitive(const std::vector<std::vector<std::uint64_t>>& matrix) {
  const std::size_t n = matrix.size();
  if (n == 0) return false;
  using Bool = std::vector<std::vector<char>>;
  Bool base(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) base[i][j] = matrix[i][j] > 0;
  }
  Bool power = base;
  for (std::size_t k = 1; k <= n * n; ++k) {
    bool positive = true;
    for (const auto& row : power) positive = positive && std::all_of(row.begin(), row.end(), [](char c) { return c != 0; });
    if (positive) return true;
    Bool next(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t l = 0; l < n; ++l) {
        if (!power[i][l]) continue;
        for (std::size_t j = 0; j < n; ++j) next[i][j] = next[i][j] || base[l][j];
      }
    }
    power = std::move(next);
  }
  return false;
}

VerificationReport verify_train_track(TrainTrackMap& map, std::size_t depth) {
  if (depth < 1) throw std::invalid_argument("verification depth must be at least 1");
  const Alphabet& alphabet = map.alphabet();
  const std::size_t L = alphabet.letter_count();
  auto turn_index = [L](Letter x, Letter y) { return code(x) * L + code(y); };

  VerificationReport report;
  report.depth = depth;
  report.new_turns_per_iterate.assign(depth, 0);
  std::vector<char> seen_global(L * L, 0);

  for (std::size_t e = 0; e < L; ++e) {
    const Letter start = letter_from_code(e);
    std::vector<char> letters(L, 0);
    letters[e] = 1;
    std::vector<char> turns(L * L, 0);

    for (std::size_t k = 1; k <= depth; ++k) {
      std::vector<char> next_letters(L, 0);
      std::vector<char> next_turns(L * L, 0);
      for (std::size_t x = 0; x < L; ++x) {
        if (!letters[x]) continue;
        const ReducedWord& img = map.image(letter_from_code(x));
        for (std::size_t i = 0; i < img.size(); ++i) {
          next_letters[code(img[i])] = 1;
          if (i + 1 < img.size()) next_turns[turn_index(img[i], img[i + 1])] = 1;
        }
      }
      for (std::size_t t = 0; t < L * L; ++t) {
        if (!turns[t]) continue;
        const Letter x = letter_from_code(t / L);
        const Letter y = letter_from_code(t % L);
        next_turns[turn_index(map.image(x).back(), map.image(y).front())] = 1;
      }
      // Every turn of f^k(e) must survive one more application.
      for (std::size_t t = 0; t < L * L; ++t) {
        if (!next_turns[t]) continue;
        const Letter x = letter_from_code(t / L);
        const Letter y = letter_from_code(t % L);
        if (map.image(x).back() == inverse(map.image(y).front())) {
          throw CancellationDetected(alphabet.name(x) + " " + alphabet.name(y),
                                     alphabet.name(start), k);
        }
        if (!seen_global[t]) {
          seen_global[t] = 1;
          report.turns.push_back({x, y});
          ++report.new_turns_per_iterate[k - 1];
        }
      }
      letters = std::move(next_letters);
      turns = std::move(next_turns);
    }
  }
  map.verified_depth_ = std::max(map.verified_depth_, depth);
  return report;
}

ReducedWord apply(const TrainTrackMap& map, const ReducedWord& w, std::size_t n) {
  ReducedWord current = w;
  for (std::size_t step = 0; step < n; ++step) {
    std::vector<Letter> raw;
    for (Letter x : current) {
      const auto& img = map.image(x);
      raw.insert(raw.end(), img.begin(), img.end());
    }
    current = reduce(raw);
  }
  return current;
}

RayStream fixed_ray(const FixedRayScheme& scheme) {
  if (!scheme.map) throw std::invalid_argument("fixed_ray requires a map");
  const TrainTrackMap& map = *scheme.map;
  const Alphabet& alphabet = map.alphabet();
  if (!alphabet.contains(scheme.seed)) throw UnknownLetter("#" + std::to_string(code(scheme.seed)));
  const ReducedWord& img = map.image(scheme.seed);
  if (img.front() != scheme.seed) {
    throw SeedNotExpanding("image of " + alphabet.name(scheme.seed) + " does not begin with it");
  }
  if (img.size() < 2) {
    throw SeedNotExpanding("image of " + alphabet.name(scheme.seed) + " does not grow");
  }
  Provenance provenance{RaySource::fixed_point,
                        "fixed: " + map.source_name() + " seed " + alphabet.name(scheme.seed),
                        map.source_hash()};
  return RayStream(alphabet, std::make_unique<FixedRayProducer>(scheme), std::move(provenance));
}

TrainTrackMap parse_map(std::string_view text, const std::string& source_name) {
  std::vector<std::string> generators;
  bool explicit_alphabet = false;
  std::vector<std::pair<std::string, std::pair<std::string, std::size_t>>> rules;
  bool primitive = false;
  std::size_t verify_depth = 0;

  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;

    if (line.rfind("alphabet", 0) == 0) {
      std::string rest = line.substr(8);
      if (!rest.empty() && rest.front() == ':') rest.erase(0, 1);
      if (explicit_alphabet) throw ParseError(source_name, line_no, "duplicate alphabet declaration");
      generators = split_ws(rest);
      if (generators.empty()) throw ParseError(source_name, line_no, "empty alphabet");
      explicit_alphabet = true;
      continue;
    }
    if (line == "primitive") {
      primitive = true;
      continue;
    }
    if (line.rfind("verify_depth", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ParseError(source_name, line_no, "expected verify_depth = N");
      try {
        verify_depth = std::stoul(trim(line.substr(eq + 1)));
      } catch (const std::exception&) {
        throw ParseError(source_name, line_no, "verify_depth must be a positive integer");
      }
      if (verify_depth == 0) throw ParseError(source_name, line_no, "verify_depth must be positive");
      continue;
    }
    std::size_t arrow = line.find("->");
    std::size_t arrow_len = 2;
    if (arrow == std::string::npos) {
      arrow = line.find("→");
      arrow_len = std::string_view("→").size();
    }
    if (arrow == std::string::npos) throw ParseError(source_name, line_no, "unrecognized line: " + line);
    std::string lhs = trim(line.substr(0, arrow));
    std::string rhs = trim(line.substr(arrow + arrow_len));
    if (lhs.empty() || lhs.find(' ') != std::string::npos) {
      throw ParseError(source_name, line_no, "rule must map a single generator");
    }
    rules.push_back({lhs, {rhs, line_no}});
    if (!explicit_alphabet && std::find(generators.begin(), generators.end(), lhs) == generators.end()) {
      generators.push_back(lhs);
    }
  }
  if (generators.empty()) throw ParseError(source_name, line_no, "no generators declared");

  Alphabet alphabet = [&] {
    try {
      return Alphabet(generators);
    } catch (const std::invalid_argument& e) {
      throw ParseError(source_name, 1, e.what());
    }
  }();
  std::vector<ReducedWord> images(alphabet.generator_count());
  std::vector<char> defined(alphabet.generator_count(), 0);
  for (const auto& [lhs, rhs_line] : rules) {
    const auto& [rhs, ln] = rhs_line;
    auto it = std::find(generators.begin(), generators.end(), lhs);
    if (it == generators.end()) throw ParseError(source_name, ln, "rule for undeclared generator " + lhs);
    const auto g = static_cast<std::size_t>(it - generators.begin());
    if (defined[g]) throw ParseError(source_name, ln, "duplicate rule for " + lhs);
    std::vector<Letter> letters;
    try {
      letters = alphabet.parse_letters(rhs);
    } catch (const UnknownLetter& e) {
      throw ParseError(source_name, ln, e.what());
    }
    if (letters.empty()) throw ParseError(source_name, ln, "image of " + lhs + " is empty");
    if (!is_reduced(letters)) throw ParseError(source_name, ln, "image of " + lhs + " is not freely reduced");
    images[g] = ReducedWord::from_reduced(std::move(letters));
    defined[g] = 1;
  }
  for (std::size_t g = 0; g < defined.size(); ++g) {
    if (!defined[g]) throw ParseError(source_name, line_no, "no rule for generator " + generators[g]);
  }

  TrainTrackMap map(std::move(alphabet), std::move(images), primitive);
  map.source_hash_ = sha256_hex(text);
  map.source_name_ = source_name;
  map.requested_verify_depth_ = verify_depth;
  return map;
}

TrainTrackMap read_map_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open map file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_map(buf.str(), path.filename().string());
}

TrainTrackMap load_map(const std::filesystem::path& path) {
  TrainTrackMap map = read_map_file(path);
  const std::size_t depth = map.requested_verify_depth() ? map.requested_verify_depth() : 8;
  verify_train_track(map, depth);
  return map;
}

}  // namespace lamina
