#pragma once

#include <string>

#include <json.hpp>

#include "lindyn/constructions.hpp"
#include "lindyn/synthesis.hpp"
#include "lindyn/verify.hpp"

namespace lindyn {

// Canonical JSON forms. Rationals render as "num/den" in lowest terms;
// sparse elements as [[index, "num/den"], ...] in increasing index order;
// operators as nested tagged records with the rightmost compose factor
// applied first. Serialization is deterministic, so serialize -> parse ->
// serialize is byte-identical on canonical files.
using json = nlohmann::ordered_json;

json rational_to_json(const Rational& r);
Rational rational_from_json(const json& j);

json vector_to_json(const SparseVector& v);
SparseVector vector_from_json(const json& j);
json functional_to_json(const SparseFunctional& f);
SparseFunctional functional_from_json(const json& j);

json operator_to_json(const OperatorExpr& op);
// Recorded inverses are re-inverted on load so their witness is recomputed,
// never trusted from the file. Throws NotInvertible if the file lies.
OperatorExpr operator_from_json(const json& j);

json grid_to_json(const GridSpec& g);
GridSpec grid_from_json(const json& j);
json schedule_to_json(const TargetSchedule& s);
TargetSchedule schedule_from_json(const json& j);
json certificate_to_json(const SynthesisCertificate& c);
SynthesisCertificate certificate_from_json(const json& j);

// Envelopes ("kind" discriminates): "synthesis_certificate",
// "disjoint_tuple", "verification_report".
json certificate_file_to_json(const TargetSchedule& schedule, const SynthesisCertificate& cert,
                              bool verified);
json artifact_to_json(const DisjointTupleArtifact& artifact);
DisjointTupleArtifact artifact_from_json(const json& j);

json orbit_report_to_json(const OrbitReport& report);
OrbitReport orbit_report_from_json(const json& j);

std::string dump_canonical(const json& j);

// File helpers; both throw IoError (missing/unreadable/unwritable files,
// malformed JSON).
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
json parse_json_file(const std::string& path);

}  // namespace lindyn
