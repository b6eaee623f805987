#pragma once

// Batch front end: maps, cached languages, rays and classifiers wired into
// the `lamina` subcommands. Each cmd_* returns the process exit code:
//
//   0  verdict reached (or artifact built / replayed exactly)
//   1  consistency check flagged, or a replay did not match
//   2  at least one classifier returned Unknown
//   3  error (bad config, parse failure, budget exhausted, ...)

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lamina/document.hpp"
#include "lamina/leaflang.hpp"
#include "lamina/ray_stream.hpp"
#include "lamina/rays.hpp"
#include "lamina/traintrack.hpp"

namespace lamina {

enum class Command { build_language, classify, winf, cayley, replay_certificate };

struct RunConfig {
  std::vector<std::filesystem::path> maps;
  std::size_t horizon = 400;
  std::size_t delta = 1;
  /// Default: the certified prefix for w-infinity rays, else 2000.
  std::optional<std::size_t> depth;
  /// Inline script (contains ':') or a path to a script file.
  std::string ray;
  std::optional<std::filesystem::path> out;
  std::filesystem::path cache_dir = ".lamina-cache";
  std::uint64_t seed = 0;
  std::size_t budget_search = 50'000;
  std::size_t budget_memory = 200'000'000;
  std::size_t budget_vertices = 2'000'000;
  std::size_t min_occurrences = 5;
  /// Default depth / 4.
  std::optional<std::size_t> recurrence_window;
  /// Default 50 * delta, capped at the window.
  std::optional<std::size_t> recurrence_k;
  std::size_t stabilization_window = 2;
  /// w-infinity length for `winf`.
  std::size_t target = 2000;
  std::filesystem::path presentation;
  std::vector<std::size_t> radii{1, 2, 3, 4};
  std::filesystem::path certificate;

  /// Throws std::invalid_argument describing the first violated constraint.
  void validate(Command command) const;
};

/// Parsed ray script: `periodic: a b`, `fixed: MAP seed a`,
/// `winf: MAP target 2000`, `explicit: a b c`.
struct RayScript {
  std::string kind;
  std::vector<std::string> args;
  std::string text;
};

RayScript parse_ray_script(const std::string& inline_or_path);

int cmd_build_language(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_classify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_winf(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_cayley(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_replay_certificate(const RunConfig& config, std::ostream& out, std::ostream& err);

/// The verdict document cmd_classify would write, without error handling.
Json classify_document(const RunConfig& config, std::ostream& err);

}  // namespace lamina
