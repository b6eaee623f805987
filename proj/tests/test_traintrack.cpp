#include <doctest.h>

#include "lamina/error.hpp"
#include "lamina/traintrack.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace lamina;
using testing::flat;

TEST_CASE("positive maps verify") {
  auto trib = parse_map("alphabet a b c\na -> a b\nb -> a c\nc -> a\n");
  CHECK_NOTHROW(verify_train_track(trib, 6));
  CHECK(trib.verified_depth() == 6);
  auto fib = parse_map("alphabet a b\na -> a b\nb -> a\n");
  CHECK_NOTHROW(verify_train_track(fib, 6));
}

TEST_CASE("a folding turn is detected") {
  auto bad = read_map_file(testing::kData / "maps" / "cancelling.map");
  CHECK_THROWS_AS(verify_train_track(bad, 2), CancellationDetected);
  CHECK_THROWS_AS(load_map(testing::kData / "maps" / "cancelling.map"), CancellationDetected);
}

TEST_CASE("apply matches textual substitution") {
  const auto trib = testing::map_fixture("tribonacci");
  const Alphabet& a = trib.alphabet();
  CHECK(a.render(apply(trib, a.parse("a"), 2)) == "a b a c");
  CHECK(a.render(apply(trib, a.parse("a"), 3)) == "a b a c a b a");
  CHECK(apply(trib, a.parse("b c^-1"), 0) == a.parse("b c^-1"));
  for (const char* word : {"a", "b c", "c^-1 b", "a b^-1 c"}) {
    const auto got = apply(trib, a.parse(word), 5);
    CHECK(flat(got) == oracle::iterate(oracle::tribonacci(), flat(a.parse(word)), 5));
  }
}

TEST_CASE("fixed rays follow the iterates") {
  const auto trib = std::make_shared<const TrainTrackMap>(testing::map_fixture("tribonacci"));
  RayStream r = fixed_ray({trib, trib->alphabet().letter("a")});
  CHECK(trib->alphabet().render(r.extend(13)) == "a b a c a b a a b a c a b");
  CHECK(flat(r.extend(500)) == oracle::iterate(oracle::tribonacci(), "a", 12).substr(0, 500));

  const auto fib = std::make_shared<const TrainTrackMap>(testing::map_fixture("fibonacci"));
  RayStream f = fixed_ray({fib, fib->alphabet().letter("a")});
  CHECK(fib->alphabet().render(f.extend(8)) == "a b a a b a b a");
}

TEST_CASE("seed must be a proper prefix of its image") {
  auto m = std::make_shared<const TrainTrackMap>(parse_map("alphabet a b\na -> b a\nb -> a\n"));
  CHECK_THROWS_AS(fixed_ray({m, m->alphabet().letter("a")}), SeedNotExpanding);
}

TEST_CASE("map parsing") {
  CHECK_THROWS_AS(parse_map("alphabet a b\na -> a x\nb -> a\n"), Error);
  CHECK_THROWS_AS(parse_map("alphabet a b\na -> a b\n"), Error);
  const auto m = parse_map("# comment\nalphabet a b\na -> a b  # trailing\nb -> a\nprimitive\n");
  CHECK(m.flagged_primitive());
  CHECK(m.source_hash().size() == 64);
  CHECK(is_primitive(m.transition_matrix()));
  CHECK_FALSE(is_primitive({{1, 0}, {0, 1}}));
}
