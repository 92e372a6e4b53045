#pragma once

// JSON documents for function specs, avoidance certificates and witnesses.
//
// function spec: {"k": 2, "mode": "sieve-bounded" | "finite-support",
//                 "limit": 31, "default": 1, "assignment": [[2, 1], ...]}
// certificate:   {"k": 2, "r": 2, "B": 8, "assignment": [[2, 1], ...],
//                 "default": 0 (optional)}
// witness:       {"k": 2, "function": <function spec>,
//                 "provenance": "proof-pipeline" | "direct-search",
//                 "b_1": "1", "generators": ["9", "15"],
//                 "blocks": [[1], [3]] (optional), "b_values": [...] (optional)}
//
// Big integers are decimal strings.

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "iplab/hildebrand.hpp"
#include "iplab/multfunc.hpp"
#include "iplab/search.hpp"
#include "iplab/witness.hpp"

namespace iplab {

using json = nlohmann::ordered_json;

/// Malformed document; the message names the offending field.
class FormatError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

json to_json(const MultiplicativeFunction& f);
MultiplicativeFunction function_from_json(const json& j);

json to_json(const AvoidanceCertificate& cert);
AvoidanceCertificate certificate_from_json(const json& j);

json to_json(const IPWitness& w);
IPWitness witness_from_json(const json& j);

json to_json(const SearchStats& stats);

std::string to_string(SearchStatus s);
std::string to_string(Provenance p);

/// Decimal string or JSON integer -> positive big integer.
mpz_class parse_big(const json& j, const std::string& field);

/// "p:c,p:c" -> assignment.
PrimeAssignment parse_inline_assignment(const std::string& text);

}  // namespace iplab
