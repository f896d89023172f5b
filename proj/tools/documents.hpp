#pragma once

// JSON documents for rings, modules, maps and sheaves. Every reader rejects
// unknown keys so that typos surface as schema errors.

#include <initializer_list>
#include <string>
#include <vector>

#include <json.hpp>

#include "wps/wps.hpp"

namespace wps::cli {

using json = nlohmann::json;

constexpr int kSchemaVersion = 1;

inline void require_keys(const json& doc, const std::string& what, std::initializer_list<const char*> required,
                         std::initializer_list<const char*> optional = {}) {
  if (!doc.is_object()) throw SchemaError(what + " must be an object");
  for (const auto& [key, value] : doc.items()) {
    bool known = false;
    for (const char* k : required) known = known || key == k;
    for (const char* k : optional) known = known || key == k;
    if (!known) throw SchemaError("unknown field '" + key + "' in " + what);
  }
  for (const char* k : required)
    if (!doc.contains(k)) throw SchemaError("missing field '" + std::string(k) + "' in " + what);
}

template <class T>
T get_as(const json& doc, const char* key, const std::string& what) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw SchemaError("field '" + std::string(key) + "' in " + what + " has the wrong type");
  }
}

// ---------------------------------------------------------------------------
// Fields and rings

/// "Q", "F_p", "Fp:p", a bare prime, or {"Fp": p}.
inline FieldSpec field_from_json(const json& f) {
  if (f.is_object()) {
    require_keys(f, "field", {"Fp"});
    return FieldSpec::prime(get_as<std::uint64_t>(f, "Fp", "field"));
  }
  if (f.is_number_unsigned()) return FieldSpec::prime(f.get<std::uint64_t>());
  if (!f.is_string()) throw SchemaError("field must be \"Q\" or {\"Fp\": p}");
  const auto s = f.get<std::string>();
  if (s == "Q") return FieldSpec::rationals();
  std::string digits = s;
  for (const char* prefix : {"Fp:", "F_", "Fp"})
    if (s.rfind(prefix, 0) == 0) {
      digits = s.substr(std::string(prefix).size());
      break;
    }
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError("field '" + s + "' is neither Q nor a prime");
  return FieldSpec::prime(std::stoull(digits));
}

inline json field_to_json(const FieldSpec& f) {
  if (f.is_rational()) return "Q";
  return json{{"Fp", f.modulus()}};
}

inline json ring_to_json(const WeightedRing& R) {
  std::vector<int> w;
  for (std::size_t i = 0; i < R.num_variables(); ++i) w.push_back(R.weight(i));
  return json{{"field", field_to_json(R.field())}, {"weights", w}};
}

inline WeightedRing ring_from_json(const json& doc) {
  require_keys(doc, "ring", {"weights"}, {"field"});
  auto weights = get_as<std::vector<int>>(doc, "weights", "ring");
  for (int w : weights)
    if (w < 1) throw PreconditionError("weights must be positive");
  const FieldSpec field = doc.contains("field") ? field_from_json(doc.at("field")) : FieldSpec::rationals();
  return WeightedRing(field, std::move(weights));
}

inline std::vector<int> weights_of(const WeightedRing& R) {
  std::vector<int> w;
  for (std::size_t i = 0; i < R.num_variables(); ++i) w.push_back(R.weight(i));
  return w;
}

// ---------------------------------------------------------------------------
// Modules

template <Scalar K>
json column_to_json(const WeightedRing& R, const Column<K>& v, std::size_t rank) {
  json out = json::array();
  for (std::uint32_t c = 0; c < rank; ++c) out.push_back(to_string(column::entry(R, v, c)));
  return out;
}

template <Scalar K>
Column<K> column_from_json(const WeightedRing& R, const ModuleOrder& order, const json& entries, std::size_t rank,
                           const std::string& what) {
  if (!entries.is_array()) throw SchemaError(what + " must be a list of polynomials");
  if (entries.size() != rank)
    throw ParseError(what + " has " + std::to_string(entries.size()) + " entries, expected " + std::to_string(rank));
  std::vector<Polynomial<K>> polys;
  for (const auto& e : entries) {
    if (!e.is_string()) throw SchemaError(what + " entries must be strings");
    polys.push_back(parse_polynomial<K>(R, e.get<std::string>()));
  }
  return column::from_entries<K>(order, polys);
}

/// { "generators": [{"degree": g}], "relations": [[poly, ...]] }, with an
/// optional "ring" that must match R.
template <Scalar K>
json module_to_json(const Presentation<K>& M) {
  json gens = json::array();
  for (std::size_t i = 0; i < M.num_generators(); ++i) gens.push_back(json{{"degree", M.generator_degree(i)}});
  json rels = json::array();
  for (const auto& r : M.relations()) rels.push_back(column_to_json(M.ring(), r, M.num_generators()));
  return json{{"generators", gens}, {"relations", rels}};
}

template <Scalar K>
Presentation<K> module_from_json(const WeightedRing& R, const json& doc) {
  require_keys(doc, "module", {"generators", "relations"}, {"ring", "kind"});
  if (doc.contains("ring") && !(ring_from_json(doc.at("ring")) == R)) throw RingMismatch("module document");
  const json& gens = doc.at("generators");
  if (!gens.is_array()) throw SchemaError("generators must be a list");
  std::vector<int> degrees;
  for (const auto& g : gens) {
    require_keys(g, "generator", {"degree"});
    degrees.push_back(get_as<int>(g, "degree", "generator"));
  }
  const json& rels = doc.at("relations");
  if (!rels.is_array()) throw SchemaError("relations must be a list");
  std::vector<std::vector<Polynomial<K>>> cols;
  for (const auto& r : rels) {
    if (!r.is_array()) throw SchemaError("each relation must be a list of polynomials");
    if (r.size() != degrees.size())
      throw ParseError("relation has " + std::to_string(r.size()) + " entries, expected " +
                       std::to_string(degrees.size()));
    std::vector<Polynomial<K>> c;
    for (const auto& e : r) {
      if (!e.is_string()) throw SchemaError("relation entries must be strings");
      c.push_back(parse_polynomial<K>(R, e.get<std::string>()));
    }
    cols.push_back(std::move(c));
  }
  return present<K>(FreeModule(R, std::move(degrees)), cols);
}

// ---------------------------------------------------------------------------
// Maps: "matrix" holds one list per source generator, the image as a column
// of the target cover.

template <Scalar K>
json map_to_json(const GradedMap<K>& phi) {
  json m = json::array();
  for (const auto& v : phi.images()) m.push_back(column_to_json(phi.target().ring(), v, phi.target().num_generators()));
  return json{{"source", module_to_json(phi.source())}, {"target", module_to_json(phi.target())}, {"matrix", m}};
}

template <Scalar K>
GradedMap<K> map_from_parts(const Presentation<K>& source, const Presentation<K>& target, const json& matrix) {
  if (!matrix.is_array()) throw SchemaError("matrix must be a list of columns");
  if (matrix.size() != source.num_generators())
    throw ParseError("matrix has " + std::to_string(matrix.size()) + " columns, the source has " +
                     std::to_string(source.num_generators()) + " generators");
  std::vector<Column<K>> images;
  for (std::size_t j = 0; j < matrix.size(); ++j)
    images.push_back(column_from_json<K>(target.ring(), target.order(), matrix[j], target.num_generators(),
                                         "matrix column " + std::to_string(j)));
  return GradedMap<K>(source, target, std::move(images));
}

template <Scalar K>
GradedMap<K> map_from_json(const WeightedRing& R, const json& doc) {
  require_keys(doc, "map", {"source", "target", "matrix"}, {"kind"});
  return map_from_parts(module_from_json<K>(R, doc.at("source")), module_from_json<K>(R, doc.at("target")),
                        doc.at("matrix"));
}

// ---------------------------------------------------------------------------
// Sheaves

template <Scalar K>
json sheaf_to_json(const SheafRep<K>& S) {
  return json{{"module", module_to_json(S.module)},
              {"window", {S.window.lo, S.window.hi}},
              {"dims", S.saturated_dims},
              {"exact", S.exact},
              {"torsion_free", S.torsion_free},
              {"steps", S.steps}};
}

template <Scalar K>
SheafRep<K> sheaf_from_json(const WeightedRing& R, const json& doc) {
  require_keys(doc, "sheaf", {"module", "window", "dims", "exact", "torsion_free", "steps"}, {"kind"});
  const auto w = get_as<std::vector<int>>(doc, "window", "sheaf");
  if (w.size() != 2) throw SchemaError("window must be [lo, hi]");
  SheafRep<K> S{module_from_json<K>(R, doc.at("module")), DegreeWindow(w[0], w[1]),
                get_as<std::vector<std::size_t>>(doc, "dims", "sheaf"), get_as<bool>(doc, "torsion_free", "sheaf"),
                get_as<bool>(doc, "exact", "sheaf"), get_as<int>(doc, "steps", "sheaf")};
  if (S.saturated_dims.size() != static_cast<std::size_t>(w[1] - w[0] + 1))
    throw SchemaError("sheaf dims do not match the window");
  return S;
}

}  // namespace wps::cli
