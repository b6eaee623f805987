#pragma once

// Freely reduced words over a symmetric alphabet.
//
// Letters are small integers: generator i is encoded as 2i and its formal
// inverse as 2i+1, so the involution is `code ^ 1`. Names only appear at the
// text boundary (Alphabet::parse / Alphabet::render).

#include <compare>
#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lamina {

enum class Letter : std::uint8_t {};

constexpr Letter inverse(Letter x) noexcept {
  return static_cast<Letter>(static_cast<std::uint8_t>(x) ^ 1u);
}
constexpr std::size_t code(Letter x) noexcept { return static_cast<std::uint8_t>(x); }
constexpr Letter letter_from_code(std::size_t c) noexcept {
  return static_cast<Letter>(static_cast<std::uint8_t>(c));
}
constexpr Letter generator_letter(std::size_t generator) noexcept {
  return letter_from_code(2 * generator);
}
constexpr std::size_t generator_of(Letter x) noexcept { return code(x) / 2; }
constexpr bool is_positive(Letter x) noexcept { return (code(x) & 1u) == 0; }

/// Byte view of a letter sequence, for hashing and substring search.
inline std::string_view bytes(std::span<const Letter> s) noexcept {
  return {reinterpret_cast<const char*>(s.data()), s.size()};
}

class ReducedWord;

/// Generator names plus the fixed-point-free involution pairing each with
/// its inverse.
class Alphabet {
 public:
  static constexpr std::size_t max_generators = 127;

  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> generators);

  std::size_t generator_count() const noexcept { return names_.size(); }
  std::size_t letter_count() const noexcept { return 2 * names_.size(); }
  const std::vector<std::string>& generators() const noexcept { return names_; }
  bool contains(Letter x) const noexcept { return code(x) < letter_count(); }

  /// Letter for a generator name or an inverse spelled `x^-1` / `x⁻¹`.
  Letter letter(std::string_view symbol) const;
  std::string name(Letter x) const;

  /// Reads letters separated by whitespace; tokens that are not a single
  /// name are split into juxtaposed single-character names. Does not reduce.
  std::vector<Letter> parse_letters(std::string_view text) const;
  ReducedWord parse(std::string_view text) const;
  std::string render(std::span<const Letter> letters) const;
  std::string render(const ReducedWord& w) const;

  bool operator==(const Alphabet&) const = default;

 private:
  std::vector<std::string> names_;
};

/// Immutable freely reduced word. The empty word is the identity.
class ReducedWord {
 public:
  ReducedWord() = default;

  /// Wraps letters already known to be reduced; throws std::logic_error if
  /// they are not.
  static ReducedWord from_reduced(std::vector<Letter> letters);

  std::span<const Letter> letters() const noexcept { return letters_; }
  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  Letter operator[](std::size_t i) const noexcept { return letters_[i]; }
  auto begin() const noexcept { return letters_.begin(); }
  auto end() const noexcept { return letters_.end(); }
  Letter front() const noexcept { return letters_.front(); }
  Letter back() const noexcept { return letters_.back(); }

  ReducedWord subword(std::size_t pos, std::size_t len) const;
  std::string_view view() const noexcept { return bytes(letters_); }

  bool operator==(const ReducedWord&) const = default;
  auto operator<=>(const ReducedWord&) const = default;

 private:
  explicit ReducedWord(std::vector<Letter> letters) : letters_(std::move(letters)) {}
  friend ReducedWord reduce(std::span<const Letter>);

  std::vector<Letter> letters_;
};

bool is_reduced(std::span<const Letter> raw) noexcept;
bool is_cyclically_reduced(std::span<const Letter> w) noexcept;

/// Free reduction.
ReducedWord reduce(std::span<const Letter> raw);
/// Free reduction with every letter checked against `alphabet`.
ReducedWord reduce(const Alphabet& alphabet, std::span<const Letter> raw);

ReducedWord invert(const ReducedWord& w);

struct Concatenation {
  ReducedWord word;
  std::size_t cancellation_depth = 0;
};
Concatenation concat_reduced(const ReducedWord& u, const ReducedWord& v);

std::set<ReducedWord> factors(const ReducedWord& w, std::size_t length);

}  // namespace lamina
