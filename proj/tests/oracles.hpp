#pragma once

// Independent reference computations used by the tests. Words here are
// plain strings: a lowercase letter is a generator, the uppercase letter its
// inverse. Nothing in this file calls into the library.

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdlib>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

using Substitution = std::map<char, std::string>;

inline const Substitution& tribonacci() {
  static const Substitution s{{'a', "ab"}, {'b', "ac"}, {'c', "a"}};
  return s;
}

inline const Substitution& fibonacci() {
  static const Substitution s{{'a', "ab"}, {'b', "a"}};
  return s;
}

inline char flip(char c) {
  return std::islower(static_cast<unsigned char>(c)) ? static_cast<char>(std::toupper(c))
                                                      : static_cast<char>(std::tolower(c));
}

inline std::string invert(const std::string& w) {
  std::string out(w.rbegin(), w.rend());
  for (char& c : out) c = flip(c);
  return out;
}

inline std::string free_reduce(const std::string& w) {
  std::string out;
  for (char c : w) {
    if (!out.empty() && out.back() == flip(c)) {
      out.pop_back();
    } else {
      out.push_back(c);
    }
  }
  return out;
}

// Textual substitution, n times. Inverse letters map to inverted images.
inline std::string iterate(const Substitution& f, std::string w, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    std::string next;
    for (char c : w) {
      if (std::islower(static_cast<unsigned char>(c))) {
        next += f.at(c);
      } else {
        next += invert(f.at(flip(c)));
      }
    }
    w = free_reduce(next);
  }
  return w;
}

// Every factor of length <= max_len of f^n(e) and of its inverse, n <= n_max.
inline std::set<std::string> factor_set(const Substitution& f, std::size_t n_max, std::size_t max_len) {
  std::set<std::string> out;
  for (const auto& [e, image] : f) {
    (void)image;
    for (std::size_t n = 0; n <= n_max; ++n) {
      const std::string w = iterate(f, std::string(1, e), n);
      for (const std::string& s : {w, invert(w)}) {
        for (std::size_t i = 0; i < s.size(); ++i) {
          for (std::size_t len = 0; len <= max_len && i + len <= s.size(); ++len) out.insert(s.substr(i, len));
        }
      }
    }
  }
  return out;
}

// All freely reduced words of exactly `length` letters over generators.
inline std::vector<std::string> reduced_words(const std::string& generators, std::size_t length) {
  std::string letters;
  for (char g : generators) {
    letters.push_back(g);
    letters.push_back(flip(g));
  }
  std::vector<std::string> layer{""};
  for (std::size_t i = 0; i < length; ++i) {
    std::vector<std::string> next;
    for (const auto& w : layer) {
      for (char c : letters) {
        if (!w.empty() && w.back() == flip(c)) continue;
        next.push_back(w + c);
      }
    }
    layer = std::move(next);
  }
  return layer;
}

// ---- Z^2 = <a, b | a b a^-1 b^-1> on the lattice --------------------------

struct Point {
  int x = 0;
  int y = 0;
  bool operator==(const Point&) const = default;
  auto operator<=>(const Point&) const = default;
};

inline int l1(Point p, Point q) { return std::abs(p.x - q.x) + std::abs(p.y - q.y); }

// Letter codes a=0, a^-1=1, b=2, b^-1=3.
inline Point step(Point p, int code) {
  static constexpr std::array<std::pair<int, int>, 4> d{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
  return {p.x + d[code].first, p.y + d[code].second};
}

// Shortlex-least geodesic spelling of p as letter codes.
inline std::vector<int> lattice_rep(Point p) {
  std::vector<int> w;
  for (int i = 0; i < std::abs(p.x); ++i) w.push_back(p.x > 0 ? 0 : 1);
  for (int i = 0; i < std::abs(p.y); ++i) w.push_back(p.y > 0 ? 2 : 3);
  return w;
}

// Lattice points of the l1 ball of radius r in shortlex order of their
// representatives.
inline std::vector<Point> lattice_ball(int r) {
  std::vector<Point> pts;
  for (int x = -r; x <= r; ++x) {
    for (int y = -r; y <= r; ++y) {
      if (std::abs(x) + std::abs(y) <= r) pts.push_back({x, y});
    }
  }
  std::sort(pts.begin(), pts.end(), [](Point p, Point q) {
    const auto a = lattice_rep(p);
    const auto b = lattice_rep(q);
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return pts;
}

// Exhaustive thin-triangle constant of the radius-r lattice ball: sides are
// lexicographically least staircase geodesics inside the ball, oriented from
// the earlier vertex in shortlex order.
inline int lattice_delta(int r) {
  const auto pts = lattice_ball(r);
  const int n = static_cast<int>(pts.size());
  auto inside = [r](Point p) { return std::abs(p.x) + std::abs(p.y) <= r; };
  std::map<std::pair<int, int>, std::vector<Point>> sides;
  auto side = [&](int u, int v) -> const std::vector<Point>& {
    auto [it, fresh] = sides.try_emplace({u, v});
    if (fresh) {
      Point p = pts[u];
      const Point target = pts[v];
      it->second.push_back(p);
      while (p != target) {
        for (int c = 0; c < 4; ++c) {
          const Point q = step(p, c);
          if (inside(q) && l1(q, target) + 1 == l1(p, target)) {
            p = q;
            break;
          }
        }
        it->second.push_back(p);
      }
    }
    return it->second;
  };
  auto gap = [](const std::vector<Point>& s, const std::vector<Point>& t1, const std::vector<Point>& t2) {
    int worst = 0;
    for (Point p : s) {
      int best = 1 << 30;
      for (Point q : t1) best = std::min(best, l1(p, q));
      for (Point q : t2) best = std::min(best, l1(p, q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  int delta = 0;
  for (int x = 0; x < n; ++x) {
    for (int y = x + 1; y < n; ++y) {
      for (int z = y + 1; z < n; ++z) {
        const auto& xy = side(x, y);
        const auto& yz = side(y, z);
        const auto& xz = side(x, z);
        delta = std::max({delta, gap(xy, yz, xz), gap(yz, xy, xz), gap(xz, xy, yz)});
      }
    }
  }
  return delta;
}

// ---- genus-2 surface group by Dehn's algorithm ----------------------------

// Relator a b a^-1 b^-1 c d c^-1 d^-1 satisfies small cancellation C'(1/6),
// so a freely reduced word is trivial iff repeatedly replacing more than half
// of a cyclic conjugate of the relator (or its inverse) by the shorter
// complement empties it.
inline bool dehn_trivial(std::string w, const std::string& relator = "abABcdCD") {
  std::vector<std::string> conj;
  for (const std::string& r : {relator, invert(relator)}) {
    for (std::size_t i = 0; i < r.size(); ++i) conj.push_back(r.substr(i) + r.substr(0, i));
  }
  const std::size_t len = relator.size();
  w = free_reduce(w);
  bool changed = true;
  while (changed && !w.empty()) {
    changed = false;
    for (const auto& c : conj) {
      for (std::size_t k = len; k > len / 2; --k) {
        const std::string piece = c.substr(0, k);
        const auto at = w.find(piece);
        if (at == std::string::npos) continue;
        w = free_reduce(w.substr(0, at) + invert(c.substr(k)) + w.substr(at + k));
        changed = true;
        break;
      }
      if (changed) break;
    }
  }
  return w.empty();
}

// Number of group elements of word length <= r.
inline std::size_t genus2_ball_size(std::size_t r) {
  std::vector<std::string> words;
  for (std::size_t len = 0; len <= r; ++len) {
    for (auto& w : reduced_words("abcd", len)) words.push_back(std::move(w));
  }
  std::vector<std::size_t> parent(words.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (std::size_t j = i + 1; j < words.size(); ++j) {
      // No nontrivial relation is shorter than the relator.
      if (words[i].size() + words[j].size() < 8) continue;
      if (find(i) == find(j)) continue;
      if (dehn_trivial(words[i] + invert(words[j]))) parent[find(j)] = find(i);
    }
  }
  std::set<std::size_t> roots;
  for (std::size_t i = 0; i < words.size(); ++i) roots.insert(find(i));
  return roots.size();
}

}  // namespace oracle
