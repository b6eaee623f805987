#include "lamina/cayley.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "lamina/error.hpp"

namespace lamina {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Coset table with union-find coincidence handling (after Holt's
// COINCIDENCE procedure).
class CosetTable {
 public:
  CosetTable(const Presentation& p, std::size_t budget)
      : letters_(p.alphabet.letter_count()), budget_(budget) {
    for (const auto& r : p.relators) relators_.emplace_back(r.begin(), r.end());
    add_node();
  }

  std::size_t live_count() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < parent_.size(); ++i) n += parent_[i] == static_cast<std::int32_t>(i);
    return n;
  }

  // Enumerates until every coset within `radius` of the identity has all
  // edges defined and no relator scan yields anything new.
  void enumerate(std::size_t radius) {
    while (true) {
      saturate();
      const auto dist = distances();
      bool defined = false;
      const std::size_t n = parent_.size();
      for (std::size_t c = 0; c < n; ++c) {
        if (!live(c) || dist[c] >= radius) continue;
        for (std::size_t x = 0; x < letters_; ++x) {
          if (at(c, x) != -1) continue;
          const auto fresh = add_node();
          set_edge(static_cast<std::int32_t>(c), x, fresh);
          defined = true;
        }
      }
      if (!defined) {
        saturate();
        // Coincidences can shorten distances; stop only at a true fixpoint.
        const auto again = distances();
        bool complete = true;
        for (std::size_t c = 0; c < parent_.size() && complete; ++c) {
          if (!live(c) || again[c] >= radius) continue;
          for (std::size_t x = 0; x < letters_; ++x) complete = complete && at(c, x) != -1;
        }
        if (complete) return;
      }
    }
  }

  // Breadth-first distances from the identity over live cosets; SIZE_MAX
  // for dead or unreachable ones.
  std::vector<std::size_t> distances() const {
    std::vector<std::size_t> dist(parent_.size(), SIZE_MAX);
    std::deque<std::int32_t> queue{0};
    dist[0] = 0;
    while (!queue.empty()) {
      const auto c = queue.front();
      queue.pop_front();
      for (std::size_t x = 0; x < letters_; ++x) {
        const auto d = at(static_cast<std::size_t>(c), x);
        if (d == -1 || dist[static_cast<std::size_t>(d)] != SIZE_MAX) continue;
        dist[static_cast<std::size_t>(d)] = dist[static_cast<std::size_t>(c)] + 1;
        queue.push_back(d);
      }
    }
    return dist;
  }

  std::int32_t at(std::size_t c, std::size_t x) const { return table_[c * letters_ + x]; }
  bool live(std::size_t c) const { return parent_[c] == static_cast<std::int32_t>(c); }

 private:
  std::int32_t& cell(std::int32_t c, std::size_t x) {
    return table_[static_cast<std::size_t>(c) * letters_ + x];
  }

  std::int32_t add_node() {
    if (parent_.size() >= budget_) {
      throw BudgetExceeded("coset enumeration exceeded the vertex budget of " + std::to_string(budget_) +
                           "; lower the radius or raise --budget-vertices");
    }
    const auto id = static_cast<std::int32_t>(parent_.size());
    parent_.push_back(id);
    table_.resize(table_.size() + letters_, -1);
    return id;
  }

  void set_edge(std::int32_t c, std::size_t x, std::int32_t d) {
    cell(c, x) = d;
    cell(d, x ^ 1u) = c;
  }

  std::int32_t find(std::int32_t c) {
    while (parent_[static_cast<std::size_t>(c)] != c) {
      parent_[static_cast<std::size_t>(c)] = parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(c)])];
      c = parent_[static_cast<std::size_t>(c)];
    }
    return c;
  }

  void merge(std::int32_t a, std::int32_t b, std::deque<std::int32_t>& queue) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent_[static_cast<std::size_t>(b)] = a;
    queue.push_back(b);
  }

  void coincidence(std::int32_t a, std::int32_t b) {
    std::deque<std::int32_t> queue;
    merge(a, b, queue);
    while (!queue.empty()) {
      const auto e = queue.front();
      queue.pop_front();
      for (std::size_t x = 0; x < letters_; ++x) {
        const auto f = cell(e, x);
        if (f == -1) continue;
        cell(f, x ^ 1u) = -1;
        cell(e, x) = -1;
        const auto e1 = find(e);
        const auto f1 = find(f);
        if (cell(e1, x) != -1) {
          merge(f1, cell(e1, x), queue);
        } else if (cell(f1, x ^ 1u) != -1) {
          merge(e1, cell(f1, x ^ 1u), queue);
        } else {
          set_edge(e1, x, f1);
        }
      }
    }
    changed_ = true;
  }

  // One relator scan at coset c: deduction on a single gap, coincidence
  // when the two ends meet at different cosets.
  void scan(std::int32_t c, const std::vector<Letter>& r) {
    const std::size_t k = r.size();
    std::int32_t f = c;
    std::size_t i = 0;
    while (i < k && cell(f, code(r[i])) != -1) f = cell(f, code(r[i++]));
    if (i == k) {
      if (f != c) coincidence(f, c);
      return;
    }
    std::int32_t b = c;
    std::size_t j = k;
    while (j > i && cell(b, code(inverse(r[j - 1]))) != -1) b = cell(b, code(inverse(r[--j])));
    if (j == i) {
      if (f != b) coincidence(f, b);
    } else if (j == i + 1) {
      set_edge(f, code(r[i]), b);
      changed_ = true;
    }
  }

  void saturate() {
    do {
      changed_ = false;
      for (std::size_t c = 0; c < parent_.size(); ++c) {
        for (const auto& r : relators_) {
          if (!live(c)) break;
          scan(static_cast<std::int32_t>(c), r);
        }
      }
    } while (changed_);
  }

  std::size_t letters_;
  std::size_t budget_;
  std::vector<std::vector<Letter>> relators_;
  std::vector<std::int32_t> table_;
  std::vector<std::int32_t> parent_;
  bool changed_ = false;
};

std::size_t ball_size(const CosetTable& table, std::size_t radius) {
  std::size_t n = 0;
  for (std::size_t d : table.distances()) n += d <= radius;
  return n;
}

}  // namespace

Presentation parse_presentation(std::string_view text, const std::string& source_name) {
  std::vector<std::string> generators;
  std::vector<std::pair<std::string, std::size_t>> relator_lines;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    if (line.rfind("alphabet", 0) == 0) {
      std::string rest = line.substr(8);
      if (!rest.empty() && rest.front() == ':') rest.erase(0, 1);
      if (!generators.empty()) throw ParseError(source_name, line_no, "duplicate alphabet declaration");
      std::istringstream words(rest);
      for (std::string g; words >> g;) generators.push_back(g);
      if (generators.empty()) throw ParseError(source_name, line_no, "empty alphabet");
      continue;
    }
    if (line.rfind("relator", 0) == 0) {
      line = line.substr(7);
      if (!line.empty() && line.front() == ':') line.erase(0, 1);
      line = trim(line);
    }
    relator_lines.emplace_back(line, line_no);
  }
  if (generators.empty()) throw ParseError(source_name, line_no, "missing alphabet declaration");

  Presentation p;
  p.name = source_name;
  try {
    p.alphabet = Alphabet(generators);
  } catch (const std::invalid_argument& e) {
    throw ParseError(source_name, 1, e.what());
  }
  for (const auto& [line, ln] : relator_lines) {
    std::vector<Letter> letters;
    try {
      letters = p.alphabet.parse_letters(line);
    } catch (const UnknownLetter& e) {
      throw ParseError(source_name, ln, "malformed relator: " + std::string(e.what()));
    }
    if (letters.empty() || !is_cyclically_reduced(letters)) {
      throw ParseError(source_name, ln, "malformed relator '" + line + "': must be nonempty and cyclically reduced");
    }
    p.relators.push_back(ReducedWord::from_reduced(std::move(letters)));
  }
  return p;
}

Presentation read_presentation_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read presentation file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_presentation(ss.str(), path.string());
}

CayleyBall build_ball(const Presentation& presentation, std::size_t radius, const BallOptions& options) {
  if (radius < 1) throw std::invalid_argument("ball radius must be at least 1");
  std::size_t longest = 0;
  for (const auto& r : presentation.relators) longest = std::max(longest, r.size());
  const std::size_t slack = options.slack.value_or((longest + 1) / 2);

  CayleyBall ball;
  ball.presentation_ = presentation;
  ball.radius_ = radius;
  ball.working_radius_ = radius + slack;
  ball.letters_ = presentation.alphabet.letter_count();

  CosetTable table(presentation, options.vertex_budget);
  table.enumerate(ball.working_radius_);
  ball.enumerated_ = table.live_count();
  const auto dist = table.distances();

  // Renumber in shortlex order: breadth first, letters ascending.
  const std::size_t L = ball.letters_;
  std::vector<std::int32_t> id(dist.size(), -1);
  std::vector<std::size_t> coset_of;
  std::vector<std::vector<Letter>> reps;
  id[0] = 0;
  coset_of.push_back(0);
  reps.emplace_back();
  for (std::size_t head = 0; head < coset_of.size(); ++head) {
    const std::size_t c = coset_of[head];
    if (dist[c] >= radius) continue;
    for (std::size_t x = 0; x < L; ++x) {
      const auto d = table.at(c, x);
      if (d == -1 || id[static_cast<std::size_t>(d)] != -1) continue;
      id[static_cast<std::size_t>(d)] = static_cast<std::int32_t>(coset_of.size());
      coset_of.push_back(static_cast<std::size_t>(d));
      auto w = reps[head];
      w.push_back(letter_from_code(x));
      reps.push_back(std::move(w));
    }
  }
  const std::size_t n = coset_of.size();
  ball.adjacency_.assign(n * L, -1);
  ball.depth_.resize(n);
  ball.reps_.reserve(n);
  for (std::size_t v = 0; v < n; ++v) {
    ball.depth_[v] = dist[coset_of[v]];
    ball.reps_.push_back(ReducedWord::from_reduced(std::move(reps[v])));
    for (std::size_t x = 0; x < L; ++x) {
      const auto d = table.at(coset_of[v], x);
      if (d != -1 && id[static_cast<std::size_t>(d)] != -1) ball.adjacency_[v * L + x] = id[static_cast<std::size_t>(d)];
    }
  }

  ball.confirmed_ = false;
  if (options.confirm) {
    try {
      CosetTable deeper(presentation, options.vertex_budget);
      deeper.enumerate(ball.working_radius_ + 1);
      ball.confirmed_ = ball_size(deeper, radius) == n;
    } catch (const BudgetExceeded&) {
      ball.confirmed_ = false;
    }
  }
  return ball;
}

std::vector<std::size_t> CayleyBall::sphere_sizes() const {
  std::vector<std::size_t> out(radius_ + 1, 0);
  for (std::size_t d : depth_) ++out[d];
  return out;
}

std::optional<CayleyBall::Vertex> CayleyBall::neighbor(Vertex v, Letter x) const noexcept {
  if (v >= vertex_count() || code(x) >= letters_) return std::nullopt;
  const auto d = adjacency_[v * letters_ + code(x)];
  if (d == -1) return std::nullopt;
  return static_cast<Vertex>(d);
}

std::optional<CayleyBall::Vertex> CayleyBall::trace(std::span<const Letter> w, Vertex from) const noexcept {
  std::optional<Vertex> v = from;
  for (Letter x : w) {
    v = neighbor(*v, x);
    if (!v) return std::nullopt;
  }
  return v;
}

std::vector<std::size_t> CayleyBall::distances_from(Vertex v) const {
  std::vector<std::size_t> dist(vertex_count(), SIZE_MAX);
  std::deque<Vertex> queue{v};
  dist[v] = 0;
  while (!queue.empty()) {
    const Vertex c = queue.front();
    queue.pop_front();
    for (std::size_t x = 0; x < letters_; ++x) {
      const auto d = adjacency_[c * letters_ + x];
      if (d == -1 || dist[static_cast<std::size_t>(d)] != SIZE_MAX) continue;
      dist[static_cast<std::size_t>(d)] = dist[c] + 1;
      queue.push_back(static_cast<Vertex>(d));
    }
  }
  return dist;
}

DeltaEstimate estimate_delta(const CayleyBall& ball, const DeltaOptions& options) {
  using Vertex = CayleyBall::Vertex;
  const std::size_t n = ball.vertex_count();
  const std::size_t L = ball.presentation().alphabet.letter_count();
  // Rows are computed on first use; sampling on large balls touches few.
  std::vector<std::vector<std::uint16_t>> rows(n);
  auto dist = [&](Vertex a, Vertex b) -> std::size_t {
    auto& row = rows[a];
    if (row.empty()) {
      const auto full = ball.distances_from(a);
      row.reserve(n);
      for (std::size_t d : full) row.push_back(static_cast<std::uint16_t>(std::min<std::size_t>(d, UINT16_MAX)));
    }
    return row[b];
  };

  // Lexicographically least geodesic from u to v.
  auto side = [&](Vertex u, Vertex v) {
    std::vector<Vertex> path{u};
    while (u != v) {
      for (std::size_t x = 0; x < L; ++x) {
        const auto w = ball.neighbor(u, letter_from_code(x));
        if (w && dist(*w, v) + 1 == dist(u, v)) {
          u = *w;
          break;
        }
      }
      path.push_back(u);
    }
    return path;
  };
  std::unordered_map<std::uint64_t, std::vector<Vertex>> sides;
  auto get_side = [&](Vertex u, Vertex v) -> const std::vector<Vertex>& {
    if (u > v) std::swap(u, v);
    auto [it, fresh] = sides.try_emplace(static_cast<std::uint64_t>(u) * n + v);
    if (fresh) it->second = side(u, v);
    return it->second;
  };
  auto gap = [&](const std::vector<Vertex>& a, const std::vector<Vertex>& b, const std::vector<Vertex>& c) {
    std::size_t worst = 0;
    for (Vertex p : a) {
      std::size_t best = SIZE_MAX;
      for (Vertex q : b) best = std::min(best, dist(p, q));
      for (Vertex q : c) best = std::min(best, dist(p, q));
      worst = std::max(worst, best);
    }
    return worst;
  };

  DeltaEstimate est;
  est.seed = options.seed;
  auto examine = [&](Vertex x, Vertex y, Vertex z) {
    if (x == y || y == z || x == z) return;
    const auto& xy = get_side(x, y);
    const auto& yz = get_side(y, z);
    const auto& xz = get_side(x, z);
    const std::size_t e = std::max({gap(xy, yz, xz), gap(yz, xy, xz), gap(xz, xy, yz)});
    ++est.triangles;
    if (e > est.delta) {
      est.delta = e;
      est.witness = {x, y, z};
    }
  };

  if (n <= options.exhaustive_limit) {
    est.exhaustive = true;
    for (Vertex x = 0; x < n; ++x) {
      for (Vertex y = x + 1; y < n; ++y) {
        for (Vertex z = y + 1; z < n; ++z) examine(x, y, z);
      }
    }
  } else {
    est.exhaustive = false;
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<Vertex> pick(0, static_cast<Vertex>(n - 1));
    for (std::size_t i = 0; i < options.samples; ++i) {
      std::array<Vertex, 3> t{pick(rng), pick(rng), pick(rng)};
      std::sort(t.begin(), t.end());
      examine(t[0], t[1], t[2]);
    }
  }
  return est;
}

bool is_local_geodesic(FreeBackend, std::span<const Letter> w, std::size_t r) {
  if (r < 1) throw std::invalid_argument("local-geodesic scale must be at least 1");
  return is_reduced(w);
}

bool is_local_geodesic(FreeBackend backend, const ReducedWord& w, std::size_t r) {
  return is_local_geodesic(backend, w.letters(), r);
}

bool is_local_geodesic(const CayleyBall& ball, std::span<const Letter> w, std::size_t r) {
  if (r < 1) throw std::invalid_argument("local-geodesic scale must be at least 1");
  const std::size_t len = std::min(r, w.size());
  if (len > ball.radius()) {
    throw BeyondBall("subwords of length " + std::to_string(len) + " do not fit in a ball of radius " +
                     std::to_string(ball.radius()));
  }
  for (std::size_t i = 0; i + len <= w.size(); ++i) {
    const auto end = ball.trace(w.subspan(i, len));
    if (!end) throw BeyondBall("subword at offset " + std::to_string(i) + " leaves the ball");
    if (ball.depth(*end) != len) return false;
  }
  return true;
}

}  // namespace lamina
