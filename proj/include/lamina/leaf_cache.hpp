#pragma once

// On-disk cache of materialized leaf languages. A cache file stores the
// generating words together with the hashes of the maps they came from; it
// is used only when every recorded source hash matches the current maps and
// the recomputed language hash matches the stored one.

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "lamina/leaflang.hpp"
#include "lamina/traintrack.hpp"

namespace lamina {

struct CachedLanguage {
  std::shared_ptr<const LeafLanguage> language;
  std::filesystem::path path;
  bool hit = false;
  /// Set when an existing cache file was rejected and rebuilt.
  std::string warning;
};

/// File name derived from source hashes, horizon and stabilization window.
std::filesystem::path cache_path(const std::filesystem::path& dir, const std::vector<TrainTrackMap>& sources,
                                 std::size_t horizon, const LanguageOptions& options);

void write_language_cache(const std::filesystem::path& path, const LeafLanguage& language);

/// Throws lamina::Error when the file is unreadable, malformed, or its
/// checksum or source hashes do not match.
LeafLanguage read_language_cache(const std::filesystem::path& path,
                                 const std::vector<std::string>& expected_source_hashes,
                                 std::size_t expected_horizon);

CachedLanguage load_or_build_language(const std::vector<TrainTrackMap>& sources, std::size_t horizon,
                                      const LanguageOptions& options, const std::filesystem::path& cache_dir);

}  // namespace lamina
