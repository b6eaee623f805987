#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "lamina/leaflang.hpp"
#include "lamina/traintrack.hpp"
#include "lamina/words.hpp"

namespace testing {

inline const std::filesystem::path kData = std::filesystem::path(LAMINA_SOURCE_DIR) / "data";

inline lamina::TrainTrackMap map_fixture(const std::string& name) {
  return lamina::load_map(kData / "maps" / (name + ".map"));
}

inline std::shared_ptr<const lamina::LeafLanguage> language_fixture(const std::string& name, std::size_t horizon) {
  std::vector<lamina::TrainTrackMap> sources{map_fixture(name)};
  return std::make_shared<const lamina::LeafLanguage>(lamina::build_language(sources, horizon));
}

inline const lamina::Alphabet& abc() {
  static const lamina::Alphabet a({"a", "b", "c"});
  return a;
}

inline lamina::ReducedWord w(const std::string& text, const lamina::Alphabet& a = abc()) { return a.parse(text); }

// Oracle-style string: lowercase generators, uppercase inverses.
inline std::string flat(const lamina::ReducedWord& word) {
  std::string out;
  for (lamina::Letter x : word) {
    const char c = static_cast<char>('a' + lamina::generator_of(x));
    out.push_back(lamina::is_positive(x) ? c : static_cast<char>(c - 'a' + 'A'));
  }
  return out;
}

}  // namespace testing
