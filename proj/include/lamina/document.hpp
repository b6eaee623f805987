#pragma once

// JSON documents for verdicts, w-infinity schemes and certificates. Keys are
// sorted, so two documents built from the same values serialize to the same
// bytes; the only volatile field is "generated_at".

#include <string>

#include <json.hpp>

#include "lamina/classify.hpp"
#include "lamina/leaflang.hpp"
#include "lamina/ray_stream.hpp"
#include "lamina/rays.hpp"

namespace lamina {

using Json = nlohmann::json;

inline constexpr const char* kVerdictSchema = "lamina.verdicts/1";
inline constexpr const char* kWInfinitySchema = "lamina.winf/1";
inline constexpr const char* kLanguageSchema = "lamina.language-summary/1";
inline constexpr const char* kCayleySchema = "lamina.cayley/1";

Json to_json(const HyperbolicityParams& params);
HyperbolicityParams params_from_json(const Json& j);

Json to_json(const Provenance& provenance);
Json language_json(const LeafLanguage& language);

Json to_json(const MembershipQuery& query, const Alphabet& alphabet);
MembershipQuery membership_query_from_json(const Json& j, const Alphabet& alphabet);

Json to_json(const NonLeafBlockCertificate& certificate, const Alphabet& alphabet);
NonLeafBlockCertificate block_certificate_from_json(const Json& j, const Alphabet& alphabet);

Json to_json(const WInfinityScheme& scheme, const Alphabet& alphabet);

Json to_json(const ConicalCertificate& certificate, const Alphabet& alphabet);
ConicalCertificate conical_certificate_from_json(const Json& j, const Alphabet& alphabet);

Json to_json(const Verdict& verdict, const Alphabet& alphabet);
Json to_json(const ConsistencyReport& report);

/// Current UTC time, ISO 8601.
std::string timestamp_now();
/// Copy without the "generated_at" field, for comparisons.
Json without_timestamp(Json document);

}  // namespace lamina
