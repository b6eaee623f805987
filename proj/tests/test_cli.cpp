#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lamina/cli.hpp"
#include "support.hpp"

using namespace lamina;
namespace fs = std::filesystem;

namespace {

struct Scratch {
  fs::path dir = fs::temp_directory_path() / "lamina-cli-test";
  Scratch() {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
};

RunConfig base(const Scratch& s) {
  RunConfig c;
  c.maps = {testing::kData / "maps" / "tribonacci.map"};
  c.cache_dir = s.dir / "cache";
  return c;
}

Json run(int (*cmd)(const RunConfig&, std::ostream&, std::ostream&), const RunConfig& c, int expected_code) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cmd(c, out, err);
  CAPTURE(err.str());
  CHECK(code == expected_code);
  return out.str().empty() ? Json() : Json::parse(out.str());
}

}  // namespace

TEST_CASE("build-language summary and cache reuse") {
  Scratch s;
  RunConfig c = base(s);
  c.horizon = 20;
  const Json first = run(cmd_build_language, c, 0);
  CHECK(first["schema"] == kLanguageSchema);
  CHECK(first["member_counts"][20] == 82);
  CHECK(first["cache"]["hit"] == false);
  const Json second = run(cmd_build_language, c, 0);
  CHECK(second["cache"]["hit"] == true);
  CHECK(second["language"] == first["language"]);

  c.horizon = 0;
  run(cmd_build_language, c, 3);
}

TEST_CASE("corrupted cache is rebuilt with a warning") {
  Scratch s;
  RunConfig c = base(s);
  c.horizon = 20;
  const Json first = run(cmd_build_language, c, 0);
  {
    std::ofstream f(first["cache"]["path"].get<std::string>(), std::ios::trunc);
    f << "garbage";
  }
  std::ostringstream out;
  std::ostringstream err;
  CHECK(cmd_build_language(c, out, err) == 0);
  CHECK(err.str().find("warning") != std::string::npos);
}

TEST_CASE("classify documents for the three reference rays") {
  Scratch s;
  RunConfig c = base(s);
  c.ray = "periodic: a";
  Json doc = run(cmd_classify, c, 0);
  CHECK(doc["schema"] == kVerdictSchema);
  CHECK(doc["verdicts"]["conical"]["kind"] == "ConicalCertified");
  CHECK(doc["depth"] == 2000);

  c.ray = "fixed: tribonacci seed a";
  doc = run(cmd_classify, c, 0);
  CHECK(doc["verdicts"]["conical"]["kind"] == "NonConicalEvidence");
  CHECK(doc["verdicts"]["injective"]["kind"] == "NonInjectiveEvidence");

  c.ray = "winf: tribonacci target 2000";
  doc = run(cmd_classify, c, 0);
  CHECK(doc["verdicts"]["conical"]["kind"] == "NonConicalEvidence");
  CHECK(doc["verdicts"]["injective"]["kind"] == "InjectiveEvidence");
  CHECK(doc["verdicts"]["recurrent"]["kind"] == "NotRecurrentEvidence");
  CHECK(doc["consistency"]["passed"] == true);
}

TEST_CASE("ray scripts from files and bad scripts") {
  Scratch s;
  const auto script = s.dir / "ray.txt";
  {
    std::ofstream f(script);
    f << "# leaf ray\nfixed: tribonacci seed a\n";
  }
  CHECK(parse_ray_script(script.string()).kind == "fixed");
  CHECK_THROWS(parse_ray_script("spiral: a"));
  CHECK_THROWS(parse_ray_script((s.dir / "missing").string()));
  RunConfig c = base(s);
  c.ray = "periodic: a a^-1";
  run(cmd_classify, c, 3);
  c.ray = "periodic: a";
  c.horizon = 50;
  run(cmd_classify, c, 3);
  c.horizon = 400;
  c.depth = 100;
  run(cmd_classify, c, 3);
}

TEST_CASE("classify is deterministic and replays exactly") {
  Scratch s;
  RunConfig c = base(s);
  c.ray = "periodic: a b";
  c.out = s.dir / "v1.json";
  run(cmd_classify, c, 0);
  c.out = s.dir / "v2.json";
  run(cmd_classify, c, 0);
  auto load = [](const fs::path& p) {
    std::ifstream in(p);
    return Json::parse(in);
  };
  const Json a = load(s.dir / "v1.json");
  const Json b = load(s.dir / "v2.json");
  CHECK(without_timestamp(a).dump() == without_timestamp(b).dump());

  RunConfig r;
  r.cache_dir = c.cache_dir;
  r.certificate = s.dir / "v1.json";
  const Json report = run(cmd_replay_certificate, r, 0);
  CHECK(report["replayed"] == true);

  Json forged = a;
  forged["verdicts"]["recurrent"]["kind"] = "NotRecurrentEvidence";
  {
    std::ofstream f(s.dir / "forged.json");
    f << forged.dump(2);
  }
  r.certificate = s.dir / "forged.json";
  CHECK(run(cmd_replay_certificate, r, 1)["replayed"] == false);
}

TEST_CASE("winf documents replay block by block") {
  Scratch s;
  RunConfig c = base(s);
  c.out = s.dir / "w.json";
  run(cmd_winf, c, 0);
  RunConfig r;
  r.cache_dir = c.cache_dir;
  r.certificate = *c.out;
  CHECK(run(cmd_replay_certificate, r, 0)["replayed"] == true);

  std::ifstream in(*c.out);
  Json doc = Json::parse(in);
  doc["scheme"]["stages"][0]["certificate"]["verdict"] = "leaf";
  {
    std::ofstream f(s.dir / "bad.json");
    f << doc.dump();
  }
  r.certificate = s.dir / "bad.json";
  run(cmd_replay_certificate, r, 1);
}

TEST_CASE("cayley reports") {
  Scratch s;
  RunConfig c;
  c.presentation = testing::kData / "presentations" / "free2.pres";
  Json doc = run(cmd_cayley, c, 0);
  for (const auto& row : doc["results"]) CHECK(row["delta"] == 0);

  c.presentation = testing::kData / "presentations" / "z2.pres";
  c.radii = {2, 3, 4, 5, 6};
  doc = run(cmd_cayley, c, 0);
  std::size_t previous = 0;
  for (const auto& row : doc["results"]) {
    CHECK(row["delta"].get<std::size_t>() >= previous);
    previous = row["delta"].get<std::size_t>();
  }

  const auto bad = s.dir / "bad.pres";
  {
    std::ofstream f(bad);
    f << "alphabet a b\nrelator a q b\n";
  }
  c.presentation = bad;
  run(cmd_cayley, c, 3);

  c.presentation = testing::kData / "presentations" / "free2.pres";
  c.radii = {6};
  c.budget_vertices = 100;
  run(cmd_cayley, c, 3);
}
