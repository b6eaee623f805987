#include "lamina/words.hpp"

#include <algorithm>
#include <stdexcept>

#include "lamina/error.hpp"

namespace lamina {

namespace {

constexpr std::string_view kAsciiInverse = "^-1";
constexpr std::string_view kUnicodeInverse = "⁻¹";

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == ','; }

}  // namespace

Alphabet::Alphabet(std::vector<std::string> generators) : names_(std::move(generators)) {
  if (names_.size() > max_generators) {
    throw std::invalid_argument("alphabet supports at most 127 generators");
  }
  for (std::size_t i = 0; i < names_.size(); ++i) {
    const auto& n = names_[i];
    if (n.empty()) throw std::invalid_argument("generator names must be non-empty");
    if (n.find('^') != std::string::npos || n.find(kUnicodeInverse) != std::string::npos ||
        std::any_of(n.begin(), n.end(), is_space)) {
      throw std::invalid_argument("invalid generator name '" + n + "'");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (names_[j] == n) throw std::invalid_argument("duplicate generator name '" + n + "'");
    }
  }
}

Letter Alphabet::letter(std::string_view symbol) const {
  bool inv = false;
  if (symbol.ends_with(kAsciiInverse)) {
    symbol.remove_suffix(kAsciiInverse.size());
    inv = true;
  } else if (symbol.ends_with(kUnicodeInverse)) {
    symbol.remove_suffix(kUnicodeInverse.size());
    inv = true;
  }
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == symbol) {
      Letter x = generator_letter(i);
      return inv ? inverse(x) : x;
    }
  }
  throw UnknownLetter(std::string(symbol) + (inv ? std::string(kAsciiInverse) : ""));
}

std::string Alphabet::name(Letter x) const {
  if (!contains(x)) throw UnknownLetter("#" + std::to_string(code(x)));
  const auto& n = names_[generator_of(x)];
  return is_positive(x) ? n : n + std::string(kAsciiInverse);
}

std::vector<Letter> Alphabet::parse_letters(std::string_view text) const {
  std::vector<Letter> out;
  const bool single_char = std::all_of(names_.begin(), names_.end(),
                                       [](const std::string& n) { return n.size() == 1; });
  std::size_t i = 0;
  while (i < text.size()) {
    if (is_space(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    const std::string_view token = text.substr(i, j - i);
    i = j;

    try {
      out.push_back(letter(token));
      continue;
    } catch (const UnknownLetter&) {
      if (!single_char) throw;
    }
    // Juxtaposed single-character names, each optionally followed by an
    // inverse marker.
    std::size_t k = 0;
    while (k < token.size()) {
      const std::string_view one = token.substr(k, 1);
      Letter x = letter(one);
      k += 1;
      const std::string_view rest = token.substr(k);
      if (rest.starts_with(kAsciiInverse)) {
        x = inverse(x);
        k += kAsciiInverse.size();
      } else if (rest.starts_with(kUnicodeInverse)) {
        x = inverse(x);
        k += kUnicodeInverse.size();
      }
      out.push_back(x);
    }
  }
  return out;
}

ReducedWord Alphabet::parse(std::string_view text) const {
  return reduce(*this, parse_letters(text));
}

std::string Alphabet::render(std::span<const Letter> letters) const {
  std::string out;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (i) out += ' ';
    out += name(letters[i]);
  }
  return out;
}

std::string Alphabet::render(const ReducedWord& w) const { return render(w.letters()); }

ReducedWord ReducedWord::from_reduced(std::vector<Letter> letters) {
  if (!is_reduced(letters)) throw std::logic_error("ReducedWord::from_reduced: word is not reduced");
  return ReducedWord(std::move(letters));
}

ReducedWord ReducedWord::subword(std::size_t pos, std::size_t len) const {
  if (pos > letters_.size() || len > letters_.size() - pos) {
    throw std::out_of_range("ReducedWord::subword");
  }
  return ReducedWord(std::vector<Letter>(letters_.begin() + static_cast<std::ptrdiff_t>(pos),
                                         letters_.begin() + static_cast<std::ptrdiff_t>(pos + len)));
}

bool is_reduced(std::span<const Letter> raw) noexcept {
  for (std::size_t i = 1; i < raw.size(); ++i) {
    if (raw[i] == inverse(raw[i - 1])) return false;
  }
  return true;
}

bool is_cyclically_reduced(std::span<const Letter> w) noexcept {
  if (!is_reduced(w)) return false;
  return w.size() < 2 || w.front() != inverse(w.back());
}

ReducedWord reduce(std::span<const Letter> raw) {
  std::vector<Letter> stack;
  stack.reserve(raw.size());
  for (Letter x : raw) {
    if (!stack.empty() && stack.back() == inverse(x)) {
      stack.pop_back();
    } else {
      stack.push_back(x);
    }
  }
  return ReducedWord(std::move(stack));
}

ReducedWord reduce(const Alphabet& alphabet, std::span<const Letter> raw) {
  for (Letter x : raw) {
    if (!alphabet.contains(x)) throw UnknownLetter("#" + std::to_string(code(x)));
  }
  return reduce(raw);
}

ReducedWord invert(const ReducedWord& w) {
  std::vector<Letter> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[w.size() - 1 - i] = inverse(w[i]);
  return ReducedWord::from_reduced(std::move(out));
}

Concatenation concat_reduced(const ReducedWord& u, const ReducedWord& v) {
  std::size_t depth = 0;
  while (depth < u.size() && depth < v.size() && u[u.size() - 1 - depth] == inverse(v[depth])) {
    ++depth;
  }
  std::vector<Letter> out;
  out.reserve(u.size() + v.size() - 2 * depth);
  out.insert(out.end(), u.begin(), u.end() - static_cast<std::ptrdiff_t>(depth));
  out.insert(out.end(), v.begin() + static_cast<std::ptrdiff_t>(depth), v.end());
  return {ReducedWord::from_reduced(std::move(out)), depth};
}

std::set<ReducedWord> factors(const ReducedWord& w, std::size_t length) {
  std::set<ReducedWord> out;
  if (length > w.size()) return out;
  for (std::size_t i = 0; i + length <= w.size(); ++i) out.insert(w.subword(i, length));
  return out;
}

}  // namespace lamina
