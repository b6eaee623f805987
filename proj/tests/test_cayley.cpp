#include <doctest.h>

#include <cmath>

#include "lamina/cayley.hpp"
#include "lamina/error.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace lamina;

namespace {

Presentation pres(const std::string& name) {
  return read_presentation_file(testing::kData / "presentations" / (name + ".pres"));
}

}  // namespace

TEST_CASE("free group balls are tree balls") {
  const auto p = pres("free2");
  std::size_t expected = 1;
  for (std::size_t r = 1; r <= 5; ++r) {
    expected += 4 * static_cast<std::size_t>(std::pow(3, r - 1));
    const auto ball = build_ball(p, r);
    CHECK(ball.vertex_count() == expected);
    CHECK(ball.confirmed());
    if (r <= 4) CHECK(estimate_delta(ball).delta == 0);
  }
}

TEST_CASE("Z2 balls are lattice diamonds") {
  const auto p = pres("z2");
  for (std::size_t r = 1; r <= 6; ++r) {
    const auto ball = build_ball(p, r);
    CHECK(ball.vertex_count() == 2 * r * r + 2 * r + 1);
    CHECK(ball.confirmed());
    const auto spheres = ball.sphere_sizes();
    for (std::size_t k = 1; k <= r; ++k) CHECK(spheres[k] == 4 * k);
  }
}

TEST_CASE("Z2 delta estimates match the lattice oracle") {
  const auto p = pres("z2");
  std::size_t previous = 0;
  for (int r = 1; r <= 4; ++r) {
    const auto est = estimate_delta(build_ball(p, static_cast<std::size_t>(r)));
    CHECK(est.exhaustive);
    CHECK(static_cast<int>(est.delta) == oracle::lattice_delta(r));
    CHECK(est.delta >= previous);
    previous = est.delta;
  }
}

TEST_CASE("genus-2 ball sizes match Dehn-algorithm counting") {
  const auto p = pres("genus2");
  CHECK(oracle::dehn_trivial("abABcdCD"));
  CHECK_FALSE(oracle::dehn_trivial("abAB"));
  for (std::size_t r = 1; r <= 3; ++r) {
    CAPTURE(r);
    CHECK(build_ball(p, r).vertex_count() == oracle::genus2_ball_size(r));
  }
}

TEST_CASE("sampled estimates are reproducible from the seed") {
  const auto ball = build_ball(pres("free2"), 5);
  DeltaOptions o;
  o.seed = 7;
  o.samples = 2000;
  const auto a = estimate_delta(ball, o);
  const auto b = estimate_delta(ball, o);
  CHECK_FALSE(a.exhaustive);
  CHECK(a.seed == 7);
  CHECK(a.delta == b.delta);
  CHECK(a.witness == b.witness);
}

TEST_CASE("local geodesic checks") {
  const Alphabet ab({"a", "b"});
  CHECK(is_local_geodesic(FreeBackend{}, ab.parse("a b a^-1 b^-1"), 4));
  const auto z2 = build_ball(pres("z2"), 4);
  CHECK_FALSE(is_local_geodesic(z2, ab.parse("a b a^-1 b^-1").letters(), 4));
  CHECK(is_local_geodesic(z2, ab.parse("a a b b").letters(), 4));
  CHECK_THROWS_AS(is_local_geodesic(z2, ab.parse("a a a a a").letters(), 5), BeyondBall);
}

TEST_CASE("presentation parsing and budgets") {
  CHECK_THROWS_AS(parse_presentation("alphabet a b\nrelator a x\n"), ParseError);
  CHECK_THROWS_AS(parse_presentation("alphabet a b\nrelator a b a^-1\n"), ParseError);
  const auto p = parse_presentation("alphabet a b\n# comment\na b a^-1 b^-1\n");
  CHECK(p.relators.size() == 1);
  BallOptions tight;
  tight.vertex_budget = 10;
  CHECK_THROWS_AS(build_ball(pres("free2"), 4, tight), BudgetExceeded);
  CHECK_THROWS_AS(build_ball(p, 0), std::invalid_argument);
}
