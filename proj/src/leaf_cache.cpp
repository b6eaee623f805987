#include "lamina/leaf_cache.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lamina/digest.hpp"
#include "lamina/error.hpp"

namespace lamina {

namespace {

constexpr const char* kSchema = "lamina.leaf-cache/1";

std::string hex(const ReducedWord& w) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * w.size());
  for (Letter x : w) {
    out.push_back(digits[code(x) >> 4]);
    out.push_back(digits[code(x) & 15]);
  }
  return out;
}

std::vector<Letter> unhex(const std::string& s) {
  if (s.size() % 2 != 0) throw Error("odd-length word in cache");
  std::vector<Letter> out;
  out.reserve(s.size() / 2);
  for (std::size_t i = 0; i < s.size(); i += 2) {
    out.push_back(letter_from_code(std::stoul(s.substr(i, 2), nullptr, 16)));
  }
  return out;
}

}  // namespace

std::filesystem::path cache_path(const std::filesystem::path& dir, const std::vector<TrainTrackMap>& sources,
                                 std::size_t horizon, const LanguageOptions& options) {
  std::string key;
  for (const auto& s : sources) key += s.source_hash() + "\n";
  key += std::to_string(horizon) + "\n" + std::to_string(options.stabilization_window) + "\n" +
         std::to_string(options.min_generation_depth);
  return dir / ("leaf-" + sha256_hex(key).substr(0, 24) + "-h" + std::to_string(horizon) + ".json");
}

void write_language_cache(const std::filesystem::path& path, const LeafLanguage& language) {
  nlohmann::ordered_json j;
  j["schema"] = kSchema;
  j["source_hashes"] = language.source_hashes();
  j["horizon"] = language.horizon();
  j["generation_depth"] = language.generation_depth();
  j["generators"] = language.alphabet().generators();
  auto basis = nlohmann::ordered_json::array();
  for (const auto& w : language.basis()) basis.push_back(hex(w));
  j["basis"] = std::move(basis);
  j["checksum"] = language.hash();
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write cache file " + tmp);
    out << j.dump() << '\n';
  }
  std::filesystem::rename(tmp, path);
}

LeafLanguage read_language_cache(const std::filesystem::path& path,
                                 const std::vector<std::string>& expected_source_hashes,
                                 std::size_t expected_horizon) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read cache file " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
    if (j.at("schema").get<std::string>() != kSchema) throw Error("unsupported cache schema");
    const auto hashes = j.at("source_hashes").get<std::vector<std::string>>();
    if (hashes != expected_source_hashes) throw Error("cache was built from different map files");
    const auto horizon = j.at("horizon").get<std::size_t>();
    if (horizon != expected_horizon) throw Error("cache horizon differs");
    std::vector<ReducedWord> basis;
    for (const auto& s : j.at("basis")) basis.push_back(ReducedWord::from_reduced(unhex(s.get<std::string>())));
    LeafLanguage lang(Alphabet(j.at("generators").get<std::vector<std::string>>()), hashes, horizon,
                      j.at("generation_depth").get<std::size_t>(), std::move(basis));
    if (lang.hash() != j.at("checksum").get<std::string>()) throw Error("cache checksum mismatch");
    return lang;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error("corrupted cache file " + path.string() + ": " + e.what());
  }
}

CachedLanguage load_or_build_language(const std::vector<TrainTrackMap>& sources, std::size_t horizon,
                                      const LanguageOptions& options, const std::filesystem::path& cache_dir) {
  CachedLanguage out;
  out.path = cache_path(cache_dir, sources, horizon, options);
  std::vector<std::string> hashes;
  for (const auto& s : sources) hashes.push_back(s.source_hash());
  if (std::filesystem::exists(out.path)) {
    try {
      out.language = std::make_shared<const LeafLanguage>(read_language_cache(out.path, hashes, horizon));
      out.hit = true;
      return out;
    } catch (const Error& e) {
      out.warning = std::string("rebuilding language cache: ") + e.what();
    }
  }
  out.language = std::make_shared<const LeafLanguage>(build_language(sources, horizon, options));
  write_language_cache(out.path, *out.language);
  return out;
}

}  // namespace lamina
