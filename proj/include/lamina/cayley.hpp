#pragma once

// Finite balls in Cayley graphs of finitely presented groups.
//
// Balls come from a bounded Todd-Coxeter enumeration: cosets are defined
// breadth first out to a working radius beyond the requested one, relator
// cycles are scanned for deductions and coincidences, and the result is cut
// back to the requested radius. A second enumeration one level deeper
// confirms the vertex count; disagreement marks the ball unconfirmed.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lamina/words.hpp"

namespace lamina {

struct Presentation {
  Alphabet alphabet;
  std::vector<ReducedWord> relators;
  std::string name;
};

/// Text format:
///
///     alphabet a b
///     relator a b a^-1 b^-1
///
/// `#` starts a comment; a line without a keyword is a relator. Throws
/// ParseError on malformed or non-cyclically-reduced relators.
Presentation parse_presentation(std::string_view text, const std::string& source_name = "<presentation>");
Presentation read_presentation_file(const std::filesystem::path& path);

struct BallOptions {
  std::size_t vertex_budget = 2'000'000;
  /// Extra levels enumerated past the radius; default ceil(max relator / 2).
  std::optional<std::size_t> slack;
  bool confirm = true;
};

class CayleyBall {
 public:
  using Vertex = std::uint32_t;
  static constexpr Vertex identity = 0;

  const Presentation& presentation() const noexcept { return presentation_; }
  std::size_t radius() const noexcept { return radius_; }
  std::size_t working_radius() const noexcept { return working_radius_; }
  bool confirmed() const noexcept { return confirmed_; }
  /// Cosets alive when the enumeration closed.
  std::size_t enumerated() const noexcept { return enumerated_; }

  /// Vertices are numbered in shortlex order of their representatives.
  std::size_t vertex_count() const noexcept { return depth_.size(); }
  std::size_t depth(Vertex v) const noexcept { return depth_[v]; }
  std::vector<std::size_t> sphere_sizes() const;
  /// Shortlex-least geodesic word from the identity.
  const ReducedWord& representative(Vertex v) const noexcept { return reps_[v]; }

  /// Neighbour across `x`, if it lies in the ball.
  std::optional<Vertex> neighbor(Vertex v, Letter x) const noexcept;
  /// End vertex of the path spelled by `w` from `from`, if it stays in the ball.
  std::optional<Vertex> trace(std::span<const Letter> w, Vertex from = identity) const noexcept;

  /// Path distance inside the ball (breadth-first search over ball edges).
  std::vector<std::size_t> distances_from(Vertex v) const;

 private:
  friend CayleyBall build_ball(const Presentation&, std::size_t, const BallOptions&);

  Presentation presentation_;
  std::size_t radius_ = 0;
  std::size_t working_radius_ = 0;
  bool confirmed_ = false;
  std::size_t enumerated_ = 0;
  std::size_t letters_ = 0;
  std::vector<std::int32_t> adjacency_;  // vertex * letters + code, -1 outside
  std::vector<std::size_t> depth_;
  std::vector<ReducedWord> reps_;
};

/// Throws BudgetExceeded, std::invalid_argument for radius 0.
CayleyBall build_ball(const Presentation& presentation, std::size_t radius,
                      const BallOptions& options = {});

struct DeltaOptions {
  /// Every triangle is examined when the ball has at most this many vertices.
  std::size_t exhaustive_limit = 200;
  std::size_t samples = 200'000;
  std::uint64_t seed = 0;
};

struct DeltaEstimate {
  std::size_t delta = 0;
  bool exhaustive = true;
  std::size_t triangles = 0;
  std::uint64_t seed = 0;
  std::array<CayleyBall::Vertex, 3> witness{};
};

/// Largest e over the examined triangles such that some side leaves the
/// (e-1)-neighbourhood of the other two. Side between u < v is the
/// lexicographically least geodesic from u to v by letter code.
DeltaEstimate estimate_delta(const CayleyBall& ball, const DeltaOptions& options = {});

struct FreeBackend {};

/// Free groups: true iff w is freely reduced.
bool is_local_geodesic(FreeBackend, std::span<const Letter> w, std::size_t r);
bool is_local_geodesic(FreeBackend, const ReducedWord& w, std::size_t r);
/// Every subword of length min(r, |w|) traces a geodesic. Throws BeyondBall.
bool is_local_geodesic(const CayleyBall& ball, std::span<const Letter> w, std::size_t r);

}  // namespace lamina
