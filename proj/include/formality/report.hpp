#pragma once

#include "formality/formality.hpp"
#include "formality/model.hpp"

#include <json.hpp>

namespace formality {

using Json = nlohmann::ordered_json;

/// 64-bit FNV-1a of the serialized presentation, as 16 hex digits.
std::string input_hash(const Presentation& p);

/// tool, version, command and input identification; every report starts with it.
Json report_header(const std::string& command, const Presentation& input);

/// Pretty-printed with a trailing newline; stable key order.
std::string dump(const Json& j);

Json summary_json(const Bicomplex& a);
Json verdict_json(const Bicomplex& a, const DdbarVerdict& v);
Json iso_table_json(const std::vector<IsoRow>& rows);
Json cohomology_json(const Bicomplex& a, const CohomologySpace& h);
Json zigzag_json(const ZigzagDecomposition& z);
Json pairing_json(const Bicomplex& a, const PairingReport& r);
Json certificate_json(const FreeCbba& a, const SplittingCertificate& cert);
Json verify_json(const FreeCbba& a, const VerifyReport& r);
Json psi_json(const FreeCbba& a, const PsiMorphism& psi);
Json s_strong_json(const FreeCbba& a, const SStrongResult& r);
Json completion_json(const CompletionReport& r);
Json relations_json(const RelationsReport& r);

/// Inverse of certificate_json on the same algebra; also accepts a whole
/// split, promote or model report. Throws Syntax on a
/// malformed document, UnknownReference on unknown generator names.
SplittingCertificate certificate_from_json(const FreeCbba& a, const Json& j);

Bidegree parse_bidegree(const std::string& text);

}  // namespace formality
