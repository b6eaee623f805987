#include "lamina/document.hpp"

#include <chrono>
#include <ctime>
#include <iomanip>
#include <sstream>

namespace lamina {

namespace {

Json word(const Alphabet& a, const ReducedWord& w) { return a.render(w); }

ReducedWord parse_word(const Alphabet& a, const Json& j) {
  const auto letters = a.parse_letters(j.get<std::string>());
  return ReducedWord::from_reduced(letters);
}

template <typename T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace

Json to_json(const HyperbolicityParams& params) {
  return {{"delta", params.delta}, {"r", params.r}, {"D", params.D}};
}

HyperbolicityParams params_from_json(const Json& j) {
  HyperbolicityParams p;
  p.delta = j.at("delta").get<std::size_t>();
  p.r = j.at("r").get<std::size_t>();
  p.D = j.at("D").get<std::size_t>();
  p.validate();
  return p;
}

Json to_json(const Provenance& provenance) {
  return {{"source", to_string(provenance.source)},
          {"description", provenance.description},
          {"source_hash", provenance.source_hash}};
}

Json language_json(const LeafLanguage& language) {
  return {{"hash", language.hash()},
          {"horizon", language.horizon()},
          {"generation_depth", language.generation_depth()},
          {"source_hashes", language.source_hashes()},
          {"generators", language.alphabet().generators()}};
}

Json to_json(const MembershipQuery& query, const Alphabet& alphabet) {
  return {{"queried", word(alphabet, query.queried)},
          {"length", query.queried.size()},
          {"horizon", query.horizon},
          {"language_hash", query.language_hash},
          {"member", query.member}};
}

MembershipQuery membership_query_from_json(const Json& j, const Alphabet& alphabet) {
  MembershipQuery q;
  q.queried = parse_word(alphabet, j.at("queried"));
  q.horizon = j.at("horizon").get<std::size_t>();
  q.language_hash = j.at("language_hash").get<std::string>();
  q.member = j.at("member").get<bool>();
  return q;
}

Json to_json(const NonLeafBlockCertificate& c, const Alphabet& alphabet) {
  return {{"index", c.index},
          {"period", word(alphabet, c.period)},
          {"power", c.power},
          {"block", word(alphabet, c.block)},
          {"block_length", c.block.size()},
          {"truncation", word(alphabet, c.truncation)},
          {"query", to_json(c.query, alphabet)},
          {"verdict", c.non_leaf ? "non-leaf" : "leaf"}};
}

NonLeafBlockCertificate block_certificate_from_json(const Json& j, const Alphabet& alphabet) {
  NonLeafBlockCertificate c;
  c.index = j.at("index").get<std::size_t>();
  c.period = parse_word(alphabet, j.at("period"));
  c.power = j.at("power").get<std::size_t>();
  c.block = parse_word(alphabet, j.at("block"));
  c.truncation = parse_word(alphabet, j.at("truncation"));
  c.query = membership_query_from_json(j.at("query"), alphabet);
  c.non_leaf = j.at("verdict").get<std::string>() == "non-leaf";
  return c;
}

Json to_json(const WInfinityScheme& scheme, const Alphabet& alphabet) {
  Json stages = Json::array();
  for (const auto& s : scheme.stages) {
    stages.push_back({{"m", s.m},
                      {"v", word(alphabet, s.v)},
                      {"u", word(alphabet, s.u)},
                      {"t", word(alphabet, s.t)},
                      {"alpha", word(alphabet, s.alpha)},
                      {"period", s.period()},
                      {"kappa", s.kappa},
                      {"overlap_bound", s.overlap_bound},
                      {"longest_leaf_power", s.longest_leaf_power},
                      {"v_position", s.v_position},
                      {"vuv_position", s.vuv_position},
                      {"vtv_position", s.vtv_position},
                      {"offset", s.offset},
                      {"certificate", to_json(s.certificate, alphabet)}});
  }
  return {{"params", to_json(scheme.params)},
          {"language_hash", scheme.language_hash},
          {"horizon", scheme.horizon},
          {"leaf_ray", to_json(scheme.leaf)},
          {"leaf_prefix_examined", scheme.leaf_prefix_examined},
          {"length", scheme.length},
          {"local_geodesic", scheme.local_geodesic},
          {"r_factors_in_leaf", scheme.r_factors_in_leaf},
          {"stages", std::move(stages)}};
}

Json to_json(const ConicalCertificate& c, const Alphabet& alphabet) {
  return {{"tau", word(alphabet, c.tau)},
          {"tau_length", c.tau.size()},
          {"tau_position", c.tau_position},
          {"tau_truncated", word(alphabet, c.tau_truncated)},
          {"non_leaf_query", to_json(c.non_leaf_query, alphabet)},
          {"occurrences", c.occurrences},
          {"depth", c.depth},
          {"delta", c.delta}};
}

ConicalCertificate conical_certificate_from_json(const Json& j, const Alphabet& alphabet) {
  ConicalCertificate c;
  c.tau = parse_word(alphabet, j.at("tau"));
  c.tau_position = j.at("tau_position").get<std::size_t>();
  c.tau_truncated = parse_word(alphabet, j.at("tau_truncated"));
  c.non_leaf_query = membership_query_from_json(j.at("non_leaf_query"), alphabet);
  c.occurrences = j.at("occurrences").get<std::vector<std::size_t>>();
  c.depth = j.at("depth").get<std::size_t>();
  c.delta = j.at("delta").get<std::size_t>();
  return c;
}

Json to_json(const Verdict& v, const Alphabet& alphabet) {
  Json j = {{"classifier", v.classifier},
            {"kind", to_string(v.kind)},
            {"depth", v.depth},
            {"language_hash", v.language_hash},
            {"caveats",
             {{"diagonal_leaf_under_approximation", v.under_approximation},
              {"recurrence_proxy", v.recurrence_proxy}}}};
  Json payload;
  if (const auto* c = std::get_if<ConicalCertificate>(&v.payload)) {
    payload = {{"type", "conical_certificate"}, {"certificate", to_json(*c, alphabet)}};
  } else if (const auto* t = std::get_if<ConicalTranscript>(&v.payload)) {
    payload = {{"type", "conical_search"},
               {"window", t->window},
               {"windows_examined", t->windows_examined},
               {"non_leaf_windows", t->non_leaf_windows},
               {"tail_start", t->tail_start},
               {"tail_non_leaf_windows", t->tail_non_leaf_windows},
               {"max_tail_occurrences", t->max_tail_occurrences},
               {"max_tail_span", t->max_tail_span},
               {"first_non_leaf", optional_json(t->first_non_leaf)},
               {"last_non_leaf", optional_json(t->last_non_leaf)},
               {"pattern", t->pattern}};
  } else if (const auto* t = std::get_if<InjectivityTranscript>(&v.payload)) {
    Json checkpoints = Json::array();
    for (const auto& [at, found] : t->checkpoints) {
      checkpoints.push_back({{"from", at}, {"non_leaf_window", optional_json(found)}});
    }
    payload = {{"type", "injectivity_scan"},
               {"trim", t->trim},
               {"horizon", t->horizon},
               {"non_leaf_windows", t->non_leaf_windows},
               {"first_non_leaf", optional_json(t->first_non_leaf)},
               {"last_non_leaf", optional_json(t->last_non_leaf)},
               {"witness", word(alphabet, t->witness)},
               {"checkpoints", std::move(checkpoints)}};
  } else if (const auto* t = std::get_if<RecurrenceTranscript>(&v.payload)) {
    payload = {{"type", "recurrence_scan"},
               {"window", t->window},
               {"k", t->k},
               {"first_half_factors", t->first_half_factors},
               {"gap_factor", t->gap_factor ? word(alphabet, *t->gap_factor) : Json(nullptr)},
               {"gap_at", optional_json(t->gap_at)},
               {"unique_factor", t->unique_factor ? word(alphabet, *t->unique_factor) : Json(nullptr)},
               {"unique_at", optional_json(t->unique_at)}};
  }
  j["payload"] = std::move(payload);
  return j;
}

Json to_json(const ConsistencyReport& report) {
  Json kinds = Json::array();
  for (auto k : report.kinds) kinds.push_back(to_string(k));
  return {{"passed", report.passed}, {"message", report.message}, {"kinds", std::move(kinds)}};
}

std::string timestamp_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

Json without_timestamp(Json document) {
  if (document.is_object()) document.erase("generated_at");
  return document;
}

}  // namespace lamina
