#include "lamina/suffix_automaton.hpp"

#include <algorithm>
#include <stdexcept>

namespace lamina {

SuffixAutomaton::SuffixAutomaton(std::size_t alphabet_size) : sigma_(alphabet_size) {
  new_state(0);
  link_[0] = -1;
}

std::int32_t SuffixAutomaton::new_state(std::int32_t length) {
  const auto id = static_cast<std::int32_t>(len_.size());
  len_.push_back(length);
  link_.push_back(0);
  trans_.resize(trans_.size() + sigma_, -1);
  return id;
}

std::int32_t SuffixAutomaton::clone_state(std::int32_t from, std::int32_t length) {
  const std::int32_t id = new_state(length);
  link_[static_cast<std::size_t>(id)] = link_[static_cast<std::size_t>(from)];
  for (std::size_t c = 0; c < sigma_; ++c) next(id, c) = next(from, c);
  return id;
}

std::int32_t SuffixAutomaton::extend(std::int32_t last, std::size_t c) {
  auto L = [this](std::int32_t s) { return len_[static_cast<std::size_t>(s)]; };

  if (const std::int32_t q = next(last, c); q != -1) {
    if (L(last) + 1 == L(q)) return q;
    const std::int32_t clone = clone_state(q, L(last) + 1);
    link_[static_cast<std::size_t>(q)] = clone;
    for (std::int32_t p = last; p != -1 && next(p, c) == q; p = link_[static_cast<std::size_t>(p)]) {
      next(p, c) = clone;
    }
    return clone;
  }

  const std::int32_t cur = new_state(L(last) + 1);
  std::int32_t p = last;
  while (p != -1 && next(p, c) == -1) {
    next(p, c) = cur;
    p = link_[static_cast<std::size_t>(p)];
  }
  if (p == -1) {
    link_[static_cast<std::size_t>(cur)] = 0;
    return cur;
  }
  const std::int32_t q = next(p, c);
  if (L(p) + 1 == L(q)) {
    link_[static_cast<std::size_t>(cur)] = q;
    return cur;
  }
  const std::int32_t clone = clone_state(q, L(p) + 1);
  link_[static_cast<std::size_t>(q)] = clone;
  link_[static_cast<std::size_t>(cur)] = clone;
  for (; p != -1 && next(p, c) == q; p = link_[static_cast<std::size_t>(p)]) next(p, c) = clone;
  return cur;
}

void SuffixAutomaton::add_word(std::span<const Letter> word) {
  std::int32_t last = 0;
  for (Letter x : word) {
    if (code(x) >= sigma_) throw std::out_of_range("SuffixAutomaton: letter outside alphabet");
    last = extend(last, code(x));
  }
}

std::size_t SuffixAutomaton::longest_prefix(std::span<const Letter> w) const noexcept {
  std::int32_t s = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (code(w[i]) >= sigma_) return i;
    s = next(s, code(w[i]));
    if (s == -1) return i;
  }
  return w.size();
}

std::vector<std::uint64_t> SuffixAutomaton::count_by_length(std::size_t max_length) const {
  // State s spells one factor of every length in (len(link s), len s].
  std::vector<std::int64_t> diff(max_length + 2, 0);
  diff[0] += 1;
  diff[1] -= 1;
  for (std::size_t s = 1; s < len_.size(); ++s) {
    const auto lo = static_cast<std::size_t>(len_[static_cast<std::size_t>(link_[s])]) + 1;
    const auto hi = static_cast<std::size_t>(len_[s]);
    if (lo > max_length) continue;
    diff[lo] += 1;
    diff[std::min(hi, max_length) + 1] -= 1;
  }
  std::vector<std::uint64_t> out(max_length + 1, 0);
  std::int64_t run = 0;
  for (std::size_t l = 0; l <= max_length; ++l) {
    run += diff[l];
    out[l] = static_cast<std::uint64_t>(run);
  }
  return out;
}

void SuffixAutomaton::for_each_factor(std::size_t length,
                                      const std::function<void(std::span<const Letter>)>& visit) const {
  std::vector<Letter> path;
  path.reserve(length);
  std::vector<std::int32_t> states{0};
  std::vector<std::size_t> cursor{0};
  if (length == 0) {
    visit(path);
    return;
  }
  while (!states.empty()) {
    const std::int32_t s = states.back();
    std::size_t& c = cursor.back();
    if (c == sigma_) {
      states.pop_back();
      cursor.pop_back();
      if (!path.empty()) path.pop_back();
      continue;
    }
    const std::size_t letter = c++;
    const std::int32_t t = next(s, letter);
    if (t == -1) continue;
    path.push_back(letter_from_code(letter));
    if (path.size() == length) {
      visit(path);
      path.pop_back();
      continue;
    }
    states.push_back(t);
    cursor.push_back(0);
  }
}

}  // namespace lamina
