#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "lamina/error.hpp"
#include "lamina/leaf_cache.hpp"
#include "lamina/leaflang.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace lamina;
using testing::language_fixture;

namespace {

std::set<std::string> oracle_members(const oracle::Substitution& f, std::size_t length) {
  std::set<std::string> out;
  for (const auto& s : oracle::factor_set(f, 10, length)) {
    if (s.size() == length) out.insert(s);
  }
  return out;
}

std::set<std::string> flat_set(const std::set<ReducedWord>& words) {
  std::set<std::string> out;
  for (const auto& w : words) out.insert(testing::flat(w));
  return out;
}

}  // namespace

TEST_CASE("short members against brute-force factor sets") {
  const auto fib = language_fixture("fibonacci", 2);
  const Alphabet& ab = fib->alphabet();
  CHECK(is_leaf_factor(*fib, ab.parse("a b")));
  CHECK(is_leaf_factor(*fib, ab.parse("b a")));
  CHECK(is_leaf_factor(*fib, ab.parse("a a")));
  CHECK_FALSE(is_leaf_factor(*fib, ab.parse("b b")));
  CHECK(flat_set(enumerate_members(*fib, 2)) == std::set<std::string>{"ab", "ba", "aa", "BA", "AB", "AA"});

  const auto trib = language_fixture("tribonacci", 2);
  const Alphabet& abc = trib->alphabet();
  CHECK(is_leaf_factor(*trib, abc.parse("c a")));
  CHECK(is_leaf_factor(*trib, abc.parse("a^-1 c^-1")));
  CHECK_FALSE(is_leaf_factor(*trib, abc.parse("c b")));
  CHECK_FALSE(is_leaf_factor(*trib, abc.parse("c c")));
  CHECK(enumerate_members(*trib, 0) == std::set<ReducedWord>{ReducedWord{}});
  CHECK(flat_set(enumerate_members(*trib, 1)) == std::set<std::string>{"a", "b", "c", "A", "B", "C"});
  CHECK_THROWS_AS(is_leaf_factor(*trib, abc.parse("a b a")), BeyondHorizon);
}

TEST_CASE("enumeration equals the oracle member sets up to length 10") {
  for (auto [name, subst] : {std::pair{"fibonacci", &oracle::fibonacci()},
                             std::pair{"tribonacci", &oracle::tribonacci()}}) {
    const auto lang = language_fixture(name, 40);
    for (std::size_t n = 0; n <= 10; ++n) {
      CAPTURE(name);
      CAPTURE(n);
      CHECK(flat_set(enumerate_members(*lang, n)) == oracle_members(*subst, n));
    }
  }
}

TEST_CASE("tribonacci member counts grow by four per letter") {
  const auto lang = language_fixture("tribonacci", 300);
  const auto counts = lang->member_counts();
  for (std::size_t n = 1; n <= 300; ++n) CHECK(counts[n] == 4 * n + 2);
  CHECK(lang->generation_depth() >= 1);
}

TEST_CASE("coarse leaf segments trim 2 delta per side") {
  const auto lang = language_fixture("tribonacci", 40);
  const auto params = HyperbolicityParams::with_delta(1);
  const Alphabet& a = lang->alphabet();
  CHECK(is_coarse_leaf_segment(*lang, params, a.parse("b^-1 b^-1 c a c^-1 c^-1")));
  CHECK(is_coarse_leaf_segment(*lang, params, a.parse("b b c a b b")));
  CHECK_FALSE(is_coarse_leaf_segment(*lang, params, a.parse("a b c c b a")));
  CHECK_THROWS_AS(is_coarse_leaf_segment(*lang, params, a.parse("a b a c")), TooShort);
}

TEST_CASE("overlap bounds for short periods") {
  const auto params = HyperbolicityParams::with_delta(1);
  const auto trib = language_fixture("tribonacci", 100);
  // Longest a-power among members is a^2; add delta + D on each side.
  const std::size_t trim = params.delta + params.D;
  CHECK(max_leaf_overlap(*trib, params, trib->alphabet().parse("a"), 40) == 2 + 2 * trim);
  CHECK(max_leaf_overlap(*trib, params, trib->alphabet().parse("a"), 40) < 40);
  CHECK_THROWS_AS(max_leaf_overlap(*trib, params, trib->alphabet().parse("a b a^-1"), 40), NotCyclicallyReduced);

  const auto fib = language_fixture("fibonacci", 100);
  // b b is not a member, so only b itself fits.
  CHECK(max_leaf_overlap(*fib, params, fib->alphabet().parse("b"), 40) == 1 + 2 * trim);
}

TEST_CASE("generation depth is stable under a wider window") {
  std::vector<TrainTrackMap> sources{testing::map_fixture("tribonacci")};
  LanguageOptions wide;
  wide.stabilization_window = 4;
  const auto narrow = build_language(sources, 120);
  const auto broad = build_language(sources, 120, wide);
  CHECK(narrow.member_counts() == broad.member_counts());
}

TEST_CASE("horizon and budget errors") {
  std::vector<TrainTrackMap> sources{testing::map_fixture("tribonacci")};
  LanguageOptions tiny;
  tiny.memory_budget = 50;
  CHECK_THROWS_AS(build_language(sources, 300, tiny), Error);
  CHECK_THROWS(build_language(sources, 0));
}

TEST_CASE("language cache round trip and corruption") {
  const auto dir = std::filesystem::temp_directory_path() / "lamina-unit-cache";
  std::filesystem::remove_all(dir);
  std::vector<TrainTrackMap> sources{testing::map_fixture("tribonacci")};
  const auto first = load_or_build_language(sources, 20, {}, dir);
  CHECK_FALSE(first.hit);
  const auto second = load_or_build_language(sources, 20, {}, dir);
  CHECK(second.hit);
  CHECK(second.language->hash() == first.language->hash());
  CHECK(second.language->member_counts() == first.language->member_counts());

  {
    std::ofstream corrupt(first.path, std::ios::trunc);
    corrupt << "{ not json";
  }
  const auto third = load_or_build_language(sources, 20, {}, dir);
  CHECK_FALSE(third.hit);
  CHECK_FALSE(third.warning.empty());
  CHECK(third.language->hash() == first.language->hash());

  // A stale source hash is never accepted.
  CHECK_THROWS_AS(read_language_cache(first.path, {std::string(64, '0')}, 20), Error);
  std::filesystem::remove_all(dir);
}
