#pragma once

// JSON encode/decode for every artifact the tools exchange. Key order is
// fixed (ordered_json) so identical inputs serialize to identical bytes;
// every document carries a versioned "format" tag; rationals travel as
// "p/q" strings next to their float views.

#include <string>

#include "json.hpp"

#include "bell/battery.hpp"
#include "bell/epr.hpp"
#include "bell/lhv.hpp"
#include "bell/phenomenon.hpp"
#include "bell/theory.hpp"

namespace bell {

using Json = nlohmann::ordered_json;

Json to_json(const Scenario& s);
Json to_json(const OutcomeValues& v);
Json to_json(const Phenomenon& p);
Json to_json(const Theory& t);
Json to_json(const LhvModel& m);
Json to_json(const BellCertificate& c);
Json to_json(const LhvResult& r);
Json to_json(const Witness& w);
Json to_json(const PropertyEntry& e);
Json to_json(const PropertyVector& pv);
Json to_json(const ValidationReport& r);
Json to_json(const SignalReport& r);
Json to_json(const EprReport& r);
Json to_json(const BatteryReport& r);
Json to_json(const ModelCheck& c);
Json to_json(const CertificateCheck& c);

Scenario scenario_from_json(const Json& j);
OutcomeValues values_from_json(const Json& j);
Phenomenon phenomenon_from_json(const Json& j);
Theory theory_from_json(const Json& j);
LhvModel model_from_json(const Json& j);
BellCertificate certificate_from_json(const Json& j);

// Parse a file (or stdin for "-"); InputError with the parse position on
// malformed JSON.
Json load_json_file(const std::string& path);

// Serialize with a trailing newline, 2-space indent — the one canonical
// rendering used everywhere.
std::string render_json(const Json& j);

}  // namespace bell
