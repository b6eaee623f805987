#include "lamina/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "lamina/cayley.hpp"
#include "lamina/classify.hpp"
#include "lamina/error.hpp"
#include "lamina/leaf_cache.hpp"

namespace lamina {

namespace {

constexpr const char* kReplaySchema = "lamina.replay/1";
constexpr std::size_t kDefaultDepth = 2000;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

std::size_t to_size(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw std::invalid_argument(what + " must be a non-negative integer, got '" + s + "'");
  }
}

void emit(const Json& doc, const RunConfig& config, std::ostream& out) {
  const std::string text = doc.dump(2) + "\n";
  if (config.out) {
    if (config.out->has_parent_path()) std::filesystem::create_directories(config.out->parent_path());
    std::ofstream file(*config.out, std::ios::binary | std::ios::trunc);
    if (!file) throw Error("cannot write " + config.out->string());
    file << text;
  } else {
    out << text;
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const std::exception& e) {
    throw Error("malformed document " + path.string() + ": " + e.what());
  }
}

// Everything a run needs, loaded once.
struct Session {
  std::vector<std::filesystem::path> map_paths;
  std::vector<TrainTrackMap> maps;
  std::shared_ptr<const LeafLanguage> language;
  HyperbolicityParams params;
};

std::filesystem::path resolve_map(const std::string& token, const std::vector<std::filesystem::path>& maps) {
  for (const auto& m : maps) {
    if (m.stem().string() == token || m.string() == token) return m;
  }
  if (std::filesystem::exists(token)) return token;
  throw std::invalid_argument("unknown map '" + token + "'; pass its file with --map");
}

// Maps named by the config, or the one the ray script refers to.
std::vector<std::filesystem::path> session_maps(const RunConfig& config, const RayScript* script) {
  if (!config.maps.empty()) return config.maps;
  if (script && (script->kind == "fixed" || script->kind == "winf") && !script->args.empty()) {
    return {resolve_map(script->args.front(), {})};
  }
  throw std::invalid_argument("no map file given (use --map)");
}

Session open_session(const RunConfig& config, const RayScript* script, std::ostream& err) {
  Session s;
  s.map_paths = session_maps(config, script);
  for (const auto& p : s.map_paths) s.maps.push_back(load_map(p));
  LanguageOptions options;
  options.stabilization_window = config.stabilization_window;
  options.memory_budget = config.budget_memory;
  const auto cached = load_or_build_language(s.maps, config.horizon, options, config.cache_dir);
  if (!cached.warning.empty()) err << "warning: " << cached.warning << "\n";
  s.language = cached.language;
  s.params = HyperbolicityParams::with_delta(config.delta);
  return s;
}

const TrainTrackMap& session_map(const Session& s, const std::string& token) {
  const auto path = resolve_map(token, s.map_paths);
  for (std::size_t i = 0; i < s.map_paths.size(); ++i) {
    if (s.map_paths[i] == path) return s.maps[i];
  }
  throw std::invalid_argument("map '" + token + "' is not among the language sources");
}

struct BuiltRay {
  RayStream ray;
  std::optional<WInfinityScheme> scheme;
};

std::size_t script_option(const RayScript& script, const std::string& key, std::size_t fallback) {
  for (std::size_t i = 1; i + 1 < script.args.size(); ++i) {
    if (script.args[i] == key) return to_size(script.args[i + 1], key);
  }
  return fallback;
}

RayStream fixed_ray_from(const Session& s, const std::string& map_token, const std::string& seed) {
  const TrainTrackMap& map = session_map(s, map_token);
  auto shared = std::make_shared<const TrainTrackMap>(map);
  return fixed_ray({shared, map.alphabet().letter(seed)});
}

std::string script_seed(const RayScript& script) {
  for (std::size_t i = 1; i + 1 < script.args.size(); ++i) {
    if (script.args[i] == "seed") return script.args[i + 1];
  }
  if (script.args.size() == 2) return script.args[1];
  return script.kind == "winf" ? "" : throw std::invalid_argument("fixed ray script needs 'seed <letter>'");
}

BuiltRay build_ray(const RunConfig& config, const RayScript& script, const Session& s) {
  const Alphabet& alphabet = s.language->alphabet();
  if (script.kind == "periodic") {
    return {periodic_ray(alphabet, alphabet.parse(trim(script.text.substr(script.text.find(':') + 1)))), {}};
  }
  if (script.kind == "explicit") {
    return {explicit_ray(alphabet, {alphabet.parse(trim(script.text.substr(script.text.find(':') + 1)))}), {}};
  }
  if (script.args.empty()) throw std::invalid_argument(script.kind + " ray script needs a map");
  if (script.kind == "fixed") return {fixed_ray_from(s, script.args[0], script_seed(script)), {}};
  if (script.kind == "winf") {
    std::string seed = script_seed(script);
    const TrainTrackMap& map = session_map(s, script.args[0]);
    if (seed.empty()) seed = map.alphabet().generators().front();
    RayStream leaf = fixed_ray_from(s, script.args[0], seed);
    const std::size_t target = script_option(script, "target", config.target);
    const std::size_t budget = script_option(script, "budget", config.budget_search);
    auto built = build_w_infinity(s.language, s.params, leaf, target, budget);
    return {std::move(built.ray), std::move(built.scheme)};
  }
  throw std::invalid_argument("unknown ray kind '" + script.kind + "'");
}

Json config_json(const RunConfig& config, const Session& s, const RayScript* script) {
  Json maps = Json::array();
  for (std::size_t i = 0; i < s.maps.size(); ++i) {
    maps.push_back({{"path", s.map_paths[i].string()}, {"source_hash", s.maps[i].source_hash()}});
  }
  Json j = {{"maps", std::move(maps)},
            {"horizon", config.horizon},
            {"delta", config.delta},
            {"budget_search", config.budget_search},
            {"budget_memory", config.budget_memory},
            {"stabilization_window", config.stabilization_window},
            {"min_occurrences", config.min_occurrences},
            {"target", config.target}};
  if (script) j["ray"] = script->text;
  return j;
}

RunConfig config_from_json(const Json& j, const RunConfig& overrides) {
  RunConfig c = overrides;
  if (overrides.maps.empty()) {
    for (const auto& m : j.at("maps")) c.maps.emplace_back(m.at("path").get<std::string>());
  }
  c.horizon = j.at("horizon").get<std::size_t>();
  c.delta = j.at("delta").get<std::size_t>();
  c.budget_search = j.at("budget_search").get<std::size_t>();
  c.budget_memory = j.at("budget_memory").get<std::size_t>();
  c.stabilization_window = j.at("stabilization_window").get<std::size_t>();
  c.min_occurrences = j.at("min_occurrences").get<std::size_t>();
  c.target = j.at("target").get<std::size_t>();
  if (j.contains("ray")) c.ray = j.at("ray").get<std::string>();
  if (j.contains("depth")) c.depth = j.at("depth").get<std::size_t>();
  if (j.contains("recurrence_window")) c.recurrence_window = j.at("recurrence_window").get<std::size_t>();
  if (j.contains("recurrence_k")) c.recurrence_k = j.at("recurrence_k").get<std::size_t>();
  c.out.reset();
  return c;
}

Json asymptotic_json(const Verdict& conical, const Verdict& injective) {
  // A tail carried by leaves is asymptotic to the lamination; a conical
  // certificate rules that out.
  std::string kind = "Unknown";
  if (conical.kind == VerdictKind::ConicalCertified) {
    kind = "NotAsymptoticEvidence";
  } else if (injective.kind == VerdictKind::NonInjectiveEvidence) {
    kind = "AsymptoticEvidence";
  }
  return {{"classifier", "asymptotic"},
          {"kind", kind},
          {"depth", conical.depth},
          {"derived_from", {"conical", "injective"}}};
}

int report_error(std::ostream& err, const std::exception& e) {
  err << "error: " << e.what() << "\n";
  return 3;
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    return report_error(err, e);
  }
}

}  // namespace

void RunConfig::validate(Command command) const {
  if (delta < 1) throw std::invalid_argument("--delta must be at least 1");
  if (horizon < 1) throw std::invalid_argument("--horizon must be at least 1");
  if (stabilization_window < 1) throw std::invalid_argument("stabilization window must be at least 1");
  if (command == Command::classify || command == Command::winf) {
    if (horizon < 100 * delta) {
      throw std::invalid_argument("--horizon must be at least 100*delta = " + std::to_string(100 * delta));
    }
    if (depth && *depth < horizon) throw std::invalid_argument("--depth must be at least the horizon");
    if (min_occurrences < 1) throw std::invalid_argument("--min-occurrences must be at least 1");
  }
  if (command == Command::classify && ray.empty()) throw std::invalid_argument("--ray is required");
  if (command == Command::cayley) {
    if (presentation.empty()) throw std::invalid_argument("--presentation is required");
    if (radii.empty()) throw std::invalid_argument("at least one radius is required");
    for (auto r : radii) {
      if (r < 1) throw std::invalid_argument("radii must be at least 1");
    }
  }
  if (command == Command::replay_certificate && certificate.empty()) {
    throw std::invalid_argument("--certificate is required");
  }
}

RayScript parse_ray_script(const std::string& inline_or_path) {
  std::string text = inline_or_path;
  if (text.find(':') == std::string::npos) {
    std::ifstream in(text);
    if (!in) throw std::invalid_argument("ray script '" + text + "' is neither inline nor a readable file");
    text.clear();
    for (std::string line; std::getline(in, line);) {
      line = trim(line.substr(0, line.find('#')));
      if (!line.empty()) {
        text = line;
        break;
      }
    }
  }
  text = trim(text);
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("ray script must look like 'kind: ...'");
  RayScript s;
  s.kind = trim(text.substr(0, colon));
  s.args = split_ws(text.substr(colon + 1));
  s.text = text;
  if (s.kind != "periodic" && s.kind != "fixed" && s.kind != "winf" && s.kind != "explicit") {
    throw std::invalid_argument("unknown ray kind '" + s.kind + "'");
  }
  if (s.args.empty()) throw std::invalid_argument("empty ray script");
  return s;
}

int cmd_build_language(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config.validate(Command::build_language);
    std::vector<std::filesystem::path> paths = session_maps(config, nullptr);
    std::vector<TrainTrackMap> maps;
    for (const auto& p : paths) maps.push_back(load_map(p));
    LanguageOptions options;
    options.stabilization_window = config.stabilization_window;
    options.memory_budget = config.budget_memory;
    const auto cached = load_or_build_language(maps, config.horizon, options, config.cache_dir);
    if (!cached.warning.empty()) err << "warning: " << cached.warning << "\n";
    const auto counts = cached.language->member_counts();
    Json doc = {{"schema", kLanguageSchema},
                {"generated_at", timestamp_now()},
                {"language", language_json(*cached.language)},
                {"member_counts", counts},
                {"cache", {{"path", cached.path.string()}, {"hit", cached.hit}}}};
    emit(doc, config, out);
    err << "language " << cached.language->hash().substr(0, 16) << " horizon " << config.horizon
        << " generation_depth " << cached.language->generation_depth() << (cached.hit ? " (cache hit)" : " (built)")
        << "\n";
    return 0;
  });
}

Json classify_document(const RunConfig& config, std::ostream& err) {
  config.validate(Command::classify);
  const RayScript script = parse_ray_script(config.ray);
  const Session s = open_session(config, &script, err);
  BuiltRay built = build_ray(config, script, s);
  const std::size_t depth = config.depth.value_or(built.scheme ? built.scheme->length : kDefaultDepth);
  if (depth < config.horizon) throw std::invalid_argument("depth must be at least the horizon");
  const ReducedWord prefix = built.ray.extend(depth);
  const std::size_t window = config.recurrence_window.value_or(depth / 4);
  const std::size_t k = std::min(config.recurrence_k.value_or(50 * config.delta), window);

  ConicalOptions conical_options;
  conical_options.min_occurrences = config.min_occurrences;
  const Verdict conical = classify_conical(prefix, *s.language, s.params, conical_options);
  const Verdict injective = classify_injective(prefix, *s.language, s.params);
  const Verdict recurrent = classify_recurrent(prefix, window, k);
  const std::vector<Verdict> verdicts{conical, injective, recurrent};
  const ConsistencyReport consistency = consistency_check(verdicts);

  const Alphabet& alphabet = s.language->alphabet();
  Json cfg = config_json(config, s, &script);
  cfg["depth"] = depth;
  cfg["recurrence_window"] = window;
  cfg["recurrence_k"] = k;
  Json ray = {{"script", script.text}, {"provenance", to_json(built.ray.provenance())}};
  if (built.scheme) ray["w_infinity_length"] = built.scheme->length;
  return {{"schema", kVerdictSchema},
          {"generated_at", timestamp_now()},
          {"config", std::move(cfg)},
          {"ray", std::move(ray)},
          {"language", language_json(*s.language)},
          {"params", to_json(s.params)},
          {"depth", depth},
          {"verdicts",
           {{"conical", to_json(conical, alphabet)},
            {"injective", to_json(injective, alphabet)},
            {"recurrent", to_json(recurrent, alphabet)},
            {"asymptotic", asymptotic_json(conical, injective)}}},
          {"consistency", to_json(consistency)}};
}

int cmd_classify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Json doc = classify_document(config, err);
    emit(doc, config, out);
    int code = 0;
    for (const auto& [name, v] : doc.at("verdicts").items()) {
      err << name << ": " << v.at("kind").get<std::string>() << "\n";
      if (name != "asymptotic" && v.at("kind") == "Unknown") code = 2;
    }
    if (!doc.at("consistency").at("passed").get<bool>()) {
      err << "consistency: FLAGGED " << doc.at("consistency").at("message").get<std::string>() << "\n";
      code = 1;
    }
    return code;
  });
}

namespace {

Json winf_document(const RunConfig& config, std::ostream& err) {
  config.validate(Command::winf);
  RayScript script;
  if (!config.ray.empty()) {
    script = parse_ray_script(config.ray);
    if (script.kind != "winf") throw std::invalid_argument("winf needs a 'winf:' ray script");
  }
  const Session s = open_session(config, config.ray.empty() ? nullptr : &script, err);
  if (config.ray.empty()) {
    script = parse_ray_script("winf: " + s.map_paths.front().stem().string() + " target " +
                              std::to_string(config.target));
  }
  BuiltRay built = build_ray(config, script, s);
  const WInfinityScheme& scheme = *built.scheme;
  const Alphabet& alphabet = s.language->alphabet();
  bool all_replay = true;
  for (const auto& stage : scheme.stages) {
    all_replay = all_replay && replay_block(stage.certificate, *s.language, s.params).ok;
  }
  const ReducedWord prefix = built.ray.prefix(scheme.length);
  Json cfg = config_json(config, s, &script);
  return {{"schema", kWInfinitySchema},
          {"generated_at", timestamp_now()},
          {"config", std::move(cfg)},
          {"language", language_json(*s.language)},
          {"params", to_json(s.params)},
          {"ray", {{"script", script.text}, {"provenance", to_json(built.ray.provenance())}}},
          {"prefix", alphabet.render(prefix)},
          {"scheme", to_json(scheme, alphabet)},
          {"checks",
           {{"blocks_replay", all_replay},
            {"local_geodesic", scheme.local_geodesic},
            {"r_factors_in_leaf", scheme.r_factors_in_leaf}}},
          {"replay", "lamina replay-certificate --certificate <this file> [--map <map files>]"}};
}

}  // namespace

int cmd_winf(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Json doc = winf_document(config, err);
    emit(doc, config, out);
    err << "w-infinity: " << doc.at("scheme").at("stages").size() << " blocks, "
        << doc.at("scheme").at("length").get<std::size_t>() << " letters\n";
    const auto& checks = doc.at("checks");
    return checks.at("blocks_replay").get<bool>() && checks.at("local_geodesic").get<bool>() ? 0 : 1;
  });
}

int cmd_cayley(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config.validate(Command::cayley);
    const Presentation p = read_presentation_file(config.presentation);
    BallOptions options;
    options.vertex_budget = config.budget_vertices;
    DeltaOptions delta_options;
    delta_options.seed = config.seed;
    Json results = Json::array();
    for (std::size_t radius : config.radii) {
      CayleyBall ball;
      try {
        ball = build_ball(p, radius, options);
      } catch (const BudgetExceeded& e) {
        err << "error: radius " << radius << ": " << e.what() << "\n";
        return 3;
      }
      const DeltaEstimate est = estimate_delta(ball, delta_options);
      results.push_back({{"radius", radius},
                         {"vertices", ball.vertex_count()},
                         {"sphere_sizes", ball.sphere_sizes()},
                         {"confirmed", ball.confirmed()},
                         {"delta", est.delta},
                         {"exhaustive", est.exhaustive},
                         {"triangles", est.triangles},
                         {"seed", est.seed}});
      err << "radius " << radius << ": " << ball.vertex_count() << " vertices, delta " << est.delta
          << (est.exhaustive ? "" : " (sampled)") << (ball.confirmed() ? "" : " [unconfirmed]") << "\n";
    }
    Json doc = {{"schema", kCayleySchema},
                {"generated_at", timestamp_now()},
                {"presentation", config.presentation.string()},
                {"generators", p.alphabet.generators()},
                {"seed", config.seed},
                {"results", std::move(results)}};
    emit(doc, config, out);
    return 0;
  });
}

int cmd_replay_certificate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config.validate(Command::replay_certificate);
    const Json doc = read_json_file(config.certificate);
    const std::string schema = doc.value("schema", "");
    const RunConfig recorded = config_from_json(doc.at("config"), config);
    Json checks = Json::array();
    bool ok = true;
    auto check = [&](const std::string& name, bool passed, const std::string& detail = "") {
      checks.push_back({{"check", name}, {"passed", passed}, {"detail", detail}});
      ok = ok && passed;
    };

    if (schema == kVerdictSchema) {
      std::ostringstream quiet;
      const Json again = classify_document(recorded, quiet);
      check("language hash", again.at("language").at("hash") == doc.at("language").at("hash"));
      const auto& conical = doc.at("verdicts").at("conical");
      if (conical.at("kind") == "ConicalCertified") {
        const RayScript script = parse_ray_script(recorded.ray);
        const Session s = open_session(recorded, &script, quiet);
        BuiltRay built = build_ray(recorded, script, s);
        const auto cert =
            conical_certificate_from_json(conical.at("payload").at("certificate"), s.language->alphabet());
        const auto r = replay_conical(cert, built.ray.extend(cert.depth), *s.language, s.params,
                                      recorded.min_occurrences);
        check("conical certificate", r.ok, r.reason);
      }
      check("verdict document", without_timestamp(again) == without_timestamp(doc));
    } else if (schema == kWInfinitySchema) {
      RunConfig c = recorded;
      const RayScript script = parse_ray_script(c.ray);
      const Session s = open_session(c, &script, err);
      check("language hash", s.language->hash() == doc.at("language").at("hash").get<std::string>());
      const auto params = params_from_json(doc.at("params"));
      for (const auto& stage : doc.at("scheme").at("stages")) {
        const auto cert = block_certificate_from_json(stage.at("certificate"), s.language->alphabet());
        const auto r = replay_block(cert, *s.language, params);
        check("block m=" + std::to_string(cert.index), r.ok, r.reason);
      }
      BuiltRay built = build_ray(c, script, s);
      check("scheme", to_json(*built.scheme, s.language->alphabet()) == doc.at("scheme"));
    } else {
      throw std::invalid_argument("unsupported document schema '" + schema + "'");
    }

    Json report = {{"schema", kReplaySchema},
                   {"generated_at", timestamp_now()},
                   {"certificate", config.certificate.string()},
                   {"replayed", ok},
                   {"checks", std::move(checks)}};
    emit(report, config, out);
    err << (ok ? "replay: exact\n" : "replay: MISMATCH\n");
    return ok ? 0 : 1;
  });
}

}  // namespace lamina
