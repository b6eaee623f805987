#include <doctest.h>

#include "lamina/classify.hpp"
#include "lamina/error.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace lamina;

namespace {

struct Setup {
  std::shared_ptr<const LeafLanguage> lang = testing::language_fixture("tribonacci", 400);
  HyperbolicityParams params = HyperbolicityParams::with_delta(1);
  std::shared_ptr<const TrainTrackMap> map = std::make_shared<const TrainTrackMap>(testing::map_fixture("tribonacci"));

  RayStream leaf() const { return fixed_ray({map, map->alphabet().letter("a")}); }
  RayStream periodic(const std::string& p) const { return periodic_ray(lang->alphabet(), lang->alphabet().parse(p)); }
};

Verdict make(const std::string& classifier, VerdictKind kind, std::size_t depth = 100, const std::string& hash = "h") {
  Verdict v;
  v.classifier = classifier;
  v.kind = kind;
  v.depth = depth;
  v.language_hash = hash;
  return v;
}

}  // namespace

TEST_CASE("a^inf is conical with a replayable certificate") {
  Setup s;
  RayStream ray = s.periodic("a");
  const Verdict v = classify_conical(ray, *s.lang, s.params, 2000);
  REQUIRE(v.kind == VerdictKind::ConicalCertified);
  const auto& cert = std::get<ConicalCertificate>(v.payload);
  CHECK(cert.tau.size() == 100);
  CHECK(cert.tau_truncated.size() == 60);
  CHECK_FALSE(cert.non_leaf_query.member);
  CHECK(cert.occurrences.front() == 0);
  CHECK(cert.occurrences[1] == 100);
  CHECK(replay_conical(cert, ray.prefix(2000), *s.lang, s.params).ok);

  auto forged = cert;
  forged.occurrences.back() += 1;
  forged.tau = s.lang->alphabet().parse("a b");
  CHECK_FALSE(replay_conical(forged, ray.prefix(2000), *s.lang, s.params).ok);

  CHECK(classify_injective(ray, *s.lang, s.params, 2000).kind == VerdictKind::InjectiveEvidence);
  CHECK(classify_recurrent(ray, 2000, 500, 50).kind == VerdictKind::RecurrentEvidence);
}

TEST_CASE("the leaf ray is neither conical nor injective, and recurrent") {
  Setup s;
  RayStream ray = s.leaf();
  const Verdict c = classify_conical(ray, *s.lang, s.params, 2000);
  const Verdict i = classify_injective(ray, *s.lang, s.params, 2000);
  CHECK(c.kind == VerdictKind::NonConicalEvidence);
  CHECK(c.under_approximation);
  CHECK(i.kind == VerdictKind::NonInjectiveEvidence);
  const Verdict r = classify_recurrent(ray, 4000, 1000, 8);
  CHECK(r.kind == VerdictKind::RecurrentEvidence);
  CHECK(r.recurrence_proxy);

  // Direct occurrence scan: every length-8 factor of the first half of the
  // prefix recurs inside every 1000-letter window of the second half.
  const std::string text = oracle::iterate(oracle::tribonacci(), "a", 16).substr(0, 4000);
  bool recurs = true;
  for (std::size_t i = 0; i + 8 <= 2000 && recurs; ++i) {
    const std::string f = text.substr(i, 8);
    for (std::size_t start = 2000; start + 1000 <= 4000; start += 125) {
      recurs = recurs && text.substr(start, 1000).find(f) != std::string::npos;
    }
  }
  CHECK(recurs);
}

TEST_CASE("non-injective evidence excludes a conical certificate") {
  Setup s;
  for (const char* p : {"a", "b", "a b", "a c", "a b a c", "a^-1 b"}) {
    RayStream ray = s.periodic(p);
    const Verdict c = classify_conical(ray, *s.lang, s.params, 2000);
    const Verdict i = classify_injective(ray, *s.lang, s.params, 2000);
    if (i.kind == VerdictKind::NonInjectiveEvidence) CHECK(c.kind != VerdictKind::ConicalCertified);
  }
  RayStream leaf = s.leaf();
  CHECK(classify_conical(leaf, *s.lang, s.params, 2000).kind != VerdictKind::ConicalCertified);
}

TEST_CASE("periodic recurrence and input errors") {
  Setup s;
  RayStream ab = s.periodic("a b");
  CHECK(classify_recurrent(ab, 400, 100, 20).kind == VerdictKind::RecurrentEvidence);
  CHECK_THROWS_AS(classify_recurrent(ab, 100, 60, 10), DepthTooSmall);
  CHECK_THROWS_AS(classify_recurrent(ab, 400, 100, 101), std::invalid_argument);
  CHECK_THROWS_AS(classify_recurrent(ab, 400, 100, 0), std::invalid_argument);
}

TEST_CASE("w-infinity is non-conical, injective, not recurrent") {
  Setup s;
  RayStream leaf = s.leaf();
  auto built = build_w_infinity(s.lang, s.params, leaf, 2000, 50000);
  const std::size_t depth = built.scheme.length;
  const Verdict c = classify_conical(built.ray, *s.lang, s.params, depth);
  const Verdict i = classify_injective(built.ray, *s.lang, s.params, depth);
  const Verdict r = classify_recurrent(built.ray, depth, depth / 4, 50);
  CHECK(c.kind == VerdictKind::NonConicalEvidence);
  CHECK(i.kind == VerdictKind::InjectiveEvidence);
  CHECK(r.kind == VerdictKind::NotRecurrentEvidence);
  const auto& t = std::get<RecurrenceTranscript>(r.payload);
  REQUIRE(t.unique_factor);
  REQUIRE(t.unique_at);
  CHECK(*t.unique_at < depth / 2);
  // The unique factor really occurs once.
  const std::string text = testing::flat(built.ray.prefix(depth));
  const std::string f = testing::flat(*t.unique_factor);
  CHECK(text.find(f) == *t.unique_at);
  CHECK(text.find(f, *t.unique_at + 1) == std::string::npos);
  const std::vector<Verdict> all{c, i, r};
  CHECK(consistency_check(all).passed);
}

TEST_CASE("consistency law") {
  using K = VerdictKind;
  auto check = [](K r, K i, K c) {
    const std::vector<Verdict> v{make("recurrent", r), make("injective", i), make("conical", c)};
    return consistency_check(v).passed;
  };
  CHECK(check(K::RecurrentEvidence, K::InjectiveEvidence, K::ConicalCertified));
  CHECK_FALSE(check(K::RecurrentEvidence, K::InjectiveEvidence, K::NonConicalEvidence));
  CHECK(check(K::NotRecurrentEvidence, K::InjectiveEvidence, K::NonConicalEvidence));
  CHECK(check(K::RecurrentEvidence, K::NonInjectiveEvidence, K::NonConicalEvidence));
  const std::vector<Verdict> mixed{make("conical", K::Unknown, 100), make("injective", K::Unknown, 200)};
  CHECK_THROWS_AS(consistency_check(mixed), DepthMismatch);
  const std::vector<Verdict> langs{make("conical", K::Unknown, 100, "x"), make("injective", K::Unknown, 100, "y")};
  CHECK_THROWS_AS(consistency_check(langs), DepthMismatch);
}

TEST_CASE("verdict names round trip") {
  for (auto k : {VerdictKind::ConicalCertified, VerdictKind::NonConicalEvidence, VerdictKind::InjectiveEvidence,
                 VerdictKind::NonInjectiveEvidence, VerdictKind::RecurrentEvidence,
                 VerdictKind::NotRecurrentEvidence, VerdictKind::Unknown}) {
    CHECK(verdict_kind_from_string(to_string(k)) == k);
  }
}
