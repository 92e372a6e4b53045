#include "iplab/serialize.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <sstream>

namespace iplab {

namespace {

const json& require(const json& j, const char* field) {
  if (!j.is_object()) throw FormatError("expected a JSON object");
  auto it = j.find(field);
  if (it == j.end()) throw FormatError(std::string("missing field '") + field + "'");
  return *it;
}

std::uint64_t get_uint(const json& j, const std::string& field,
                       std::uint64_t max = std::numeric_limits<std::uint64_t>::max()) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    throw FormatError("field '" + field + "' must be a nonnegative integer");
  }
  auto v = j.get<std::uint64_t>();
  if (v > max) throw FormatError("field '" + field + "' is too large");
  return v;
}

unsigned get_unsigned(const json& j, const std::string& field) {
  return static_cast<unsigned>(get_uint(j, field, std::numeric_limits<unsigned>::max()));
}

PrimeAssignment assignment_from_json(const json& j) {
  if (!j.is_array()) throw FormatError("field 'assignment' must be a list of [prime, class] pairs");
  PrimeAssignment out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& pair = j[i];
    const std::string where = "assignment[" + std::to_string(i) + "]";
    if (!pair.is_array() || pair.size() != 2) {
      throw FormatError("field '" + where + "' must be a [prime, class] pair");
    }
    auto p = get_uint(pair[0], where + "[0]");
    auto c = get_unsigned(pair[1], where + "[1]");
    if (!out.emplace(p, c).second) {
      throw FormatError("field '" + where + "' repeats prime " + std::to_string(p));
    }
  }
  return out;
}

json assignment_to_json(const PrimeAssignment& a) {
  json out = json::array();
  for (const auto& [p, c] : a) out.push_back(json::array({p, c}));
  return out;
}

template <class Fn>
auto rethrow_as_format(const std::string& field, Fn&& fn) {
  try {
    return fn();
  } catch (const FormatError&) {
    throw;
  } catch (const std::exception& e) {
    throw FormatError("field '" + field + "': " + e.what());
  }
}

}  // namespace

std::string to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::Found: return "found";
    case SearchStatus::NotFound: return "not-found";
    case SearchStatus::Unknown: return "unknown";
  }
  return "unknown";
}

std::string to_string(Provenance p) {
  return p == Provenance::ProofPipeline ? "proof-pipeline" : "direct-search";
}

mpz_class parse_big(const json& j, const std::string& field) {
  mpz_class v;
  if (j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() > 0)) {
    v = j.get<std::uint64_t>();
  } else if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char ch) { return std::isdigit(ch); }) ||
        v.set_str(s, 10) != 0) {
      throw FormatError("field '" + field + "' must be a decimal string");
    }
  } else {
    throw FormatError("field '" + field + "' must be a decimal string");
  }
  if (sgn(v) <= 0) throw FormatError("field '" + field + "' must be positive");
  return v;
}

json to_json(const MultiplicativeFunction& f) {
  json j;
  j["k"] = f.modulus();
  if (f.mode() == FunctionMode::FiniteSupport) {
    j["mode"] = "finite-support";
  } else {
    j["mode"] = "sieve-bounded";
    j["limit"] = *f.limit();
    if (f.default_class()) j["default"] = *f.default_class();
  }
  j["assignment"] = assignment_to_json(f.assignment());
  return j;
}

MultiplicativeFunction function_from_json(const json& j) {
  const unsigned k = get_unsigned(require(j, "k"), "k");
  if (k == 0) throw FormatError("field 'k' must be at least 1");
  const std::string mode = j.value("mode", std::string("finite-support"));
  PrimeAssignment a;
  if (j.contains("assignment")) a = assignment_from_json(j["assignment"]);
  std::optional<unsigned> dflt;
  if (j.contains("default") && !j["default"].is_null()) dflt = get_unsigned(j["default"], "default");

  if (mode == "finite-support") {
    if (dflt && *dflt != 0) {
      throw FormatError("field 'default': finite-support functions send unlisted primes to 0");
    }
    return rethrow_as_format("assignment", [&] { return MultiplicativeFunction::finite_support(k, a); });
  }
  if (mode == "sieve-bounded") {
    const auto limit = static_cast<std::uint32_t>(
        get_uint(require(j, "limit"), "limit", std::numeric_limits<std::uint32_t>::max() - 1));
    return rethrow_as_format("assignment", [&] {
      return MultiplicativeFunction::sieve_bounded(k, a, limit, dflt);
    });
  }
  throw FormatError("field 'mode' must be \"finite-support\" or \"sieve-bounded\"");
}

json to_json(const AvoidanceCertificate& cert) {
  json j;
  j["k"] = cert.k;
  j["r"] = cert.r;
  j["B"] = cert.bound;
  j["assignment"] = assignment_to_json(cert.assignment);
  if (cert.default_class) j["default"] = *cert.default_class;
  return j;
}

AvoidanceCertificate certificate_from_json(const json& j) {
  AvoidanceCertificate cert;
  cert.k = get_unsigned(require(j, "k"), "k");
  cert.r = get_unsigned(require(j, "r"), "r");
  cert.bound = get_uint(require(j, "B"), "B");
  cert.assignment = assignment_from_json(require(j, "assignment"));
  if (j.contains("default") && !j["default"].is_null()) {
    cert.default_class = get_unsigned(j["default"], "default");
  }
  return cert;
}

json to_json(const IPWitness& w) {
  json j;
  j["k"] = w.f.modulus();
  j["function"] = to_json(w.f);
  j["provenance"] = to_string(w.provenance);
  j["b_1"] = w.base.get_str();
  json gens = json::array();
  for (const auto& g : w.generators) gens.push_back(g.get_str());
  j["generators"] = std::move(gens);
  if (!w.blocks.empty()) {
    json blocks = json::array();
    for (const auto& b : w.blocks) blocks.push_back(b.elements());
    j["blocks"] = std::move(blocks);
    json bv = json::array();
    for (const auto& b : w.b_values) bv.push_back(b.get_str());
    j["b_values"] = std::move(bv);
  }
  return j;
}

IPWitness witness_from_json(const json& j) {
  IPWitness w;
  w.f = function_from_json(require(j, "function"));
  if (j.contains("k") && get_unsigned(j["k"], "k") != w.f.modulus()) {
    throw FormatError("field 'k' disagrees with function.k");
  }
  const std::string prov = require(j, "provenance").is_string()
                               ? j["provenance"].get<std::string>()
                               : std::string();
  if (prov == "proof-pipeline") {
    w.provenance = Provenance::ProofPipeline;
  } else if (prov == "direct-search") {
    w.provenance = Provenance::DirectSearch;
  } else {
    throw FormatError("field 'provenance' must be \"proof-pipeline\" or \"direct-search\"");
  }
  w.base = j.contains("b_1") ? parse_big(j["b_1"], "b_1") : mpz_class(1);
  const json& gens = require(j, "generators");
  if (!gens.is_array()) throw FormatError("field 'generators' must be a list");
  for (std::size_t i = 0; i < gens.size(); ++i) {
    w.generators.push_back(parse_big(gens[i], "generators[" + std::to_string(i) + "]"));
  }
  if (j.contains("blocks")) {
    const json& blocks = j["blocks"];
    if (!blocks.is_array()) throw FormatError("field 'blocks' must be a list of index lists");
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const std::string where = "blocks[" + std::to_string(i) + "]";
      if (!blocks[i].is_array() || blocks[i].empty()) {
        throw FormatError("field '" + where + "' must be a nonempty list");
      }
      std::vector<unsigned> e;
      for (const auto& x : blocks[i]) e.push_back(get_unsigned(x, where));
      w.blocks.emplace_back(std::move(e));
    }
  }
  if (j.contains("b_values")) {
    const json& bv = j["b_values"];
    if (!bv.is_array()) throw FormatError("field 'b_values' must be a list");
    for (std::size_t i = 0; i < bv.size(); ++i) {
      w.b_values.push_back(parse_big(bv[i], "b_values[" + std::to_string(i) + "]"));
    }
  }
  return w;
}

json to_json(const SearchStats& s) {
  json j;
  j["nodes"] = s.nodes;
  j["backtracks"] = s.backtracks;
  j["max_depth"] = s.max_depth;
  j["wall_seconds"] = s.wall_seconds;
  return j;
}

PrimeAssignment parse_inline_assignment(const std::string& text) {
  PrimeAssignment out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto colon = item.find(':');
    auto digits = [](const std::string& s) {
      return !s.empty() &&
             std::all_of(s.begin(), s.end(), [](unsigned char ch) { return std::isdigit(ch); });
    };
    if (colon == std::string::npos || !digits(item.substr(0, colon)) ||
        !digits(item.substr(colon + 1))) {
      throw FormatError("field 'assign': expected p:c, got '" + item + "'");
    }
    try {
      auto p = std::stoull(item.substr(0, colon));
      auto c = std::stoul(item.substr(colon + 1));
      if (!out.emplace(p, static_cast<unsigned>(c)).second) {
        throw FormatError("field 'assign': prime " + std::to_string(p) + " given twice");
      }
    } catch (const std::out_of_range&) {
      throw FormatError("field 'assign': value out of range in '" + item + "'");
    }
  }
  return out;
}

}  // namespace iplab
