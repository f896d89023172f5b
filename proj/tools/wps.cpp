// wps: command-line front end. Every invocation loads the session file,
// runs one subcommand, prints a result document on stdout and a one-line
// summary on stderr, and writes the session back on success.
//
// Exit codes: 0 ok, 1 malformed input, 2 violated precondition or failed
// verification, 3 exhausted budget.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

#include <CLI11.hpp>

#include "documents.hpp"
#include "scenarios.hpp"

#ifndef WPS_SCENARIO_FILE
#define WPS_SCENARIO_FILE "scenarios.json"
#endif

namespace wps::cli {
namespace {

struct Options {
  std::string session_path;
  std::string as;
  std::string expect_weights;
  std::string weights, field;
  std::string degrees, relations, doc;
  std::vector<std::string> operands;
  int from = 0, to = 0, k = 0, n = 0, index = 0, nmax = 0;
  std::vector<int> window;
  std::string source, target, matrix, against;
  std::string path;
};

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw ParseError(what + ": '" + item + "' is not an integer");
    }
    if (used != item.size()) throw ParseError(what + ": '" + item + "' is not an integer");
    out.push_back(v);
  }
  if (out.empty()) throw ParseError(what + " is empty");
  return out;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(what + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Session

class Session {
 public:
  explicit Session(std::string path) : path_(std::move(path)) {
    std::ifstream in(path_);
    if (in) {
      doc_ = validate(read_json_file(path_));
    } else {
      doc_ = json{{"schema_version", kSchemaVersion},
                  {"ring", nullptr},
                  {"config", {{"max_power", SaturationOptions{}.max_power}}},
                  {"bindings", json::object()},
                  {"current", nullptr},
                  {"counter", 0}};
    }
  }

  /// Checks the shape of a session document; bindings are parsed lazily.
  static json validate(json doc) {
    require_keys(doc, "session", {"schema_version", "ring", "config", "bindings", "current", "counter"});
    if (!doc.at("schema_version").is_number_integer() || doc.at("schema_version").get<int>() != kSchemaVersion)
      throw SchemaError("session schema_version mismatch (expected " + std::to_string(kSchemaVersion) + ")");
    if (!doc.at("ring").is_null()) ring_from_json(doc.at("ring"));
    require_keys(doc.at("config"), "config", {"max_power"});
    if (!doc.at("bindings").is_object()) throw SchemaError("bindings must be an object");
    for (const auto& [name, b] : doc.at("bindings").items()) {
      if (!b.is_object() || !b.contains("kind") || !b.at("kind").is_string())
        throw SchemaError("binding '" + name + "' has no kind");
      const auto kind = b.at("kind").get<std::string>();
      if (kind != "module" && kind != "map" && kind != "sheaf" && kind != "report")
        throw SchemaError("binding '" + name + "' has unknown kind '" + kind + "'");
    }
    if (!doc.at("current").is_null() && !doc.at("bindings").contains(doc.at("current").get<std::string>()))
      throw SchemaError("current binding does not exist");
    return doc;
  }

  bool has_ring() const { return !doc_.at("ring").is_null(); }
  WeightedRing ring() const {
    if (!has_ring()) throw PreconditionError("no ring in the session; run `ring new` first");
    return ring_from_json(doc_.at("ring"));
  }
  void set_ring(const WeightedRing& R) {
    doc_["ring"] = ring_to_json(R);
    doc_["bindings"] = json::object();
    doc_["current"] = nullptr;
  }

  int max_power() const {
    if (auto v = env("WPS_MAX_POWER")) return parse_int_list(*v, "WPS_MAX_POWER").front();
    return doc_.at("config").at("max_power").get<int>();
  }

  const json& binding(const std::string& name) const {
    const auto& b = doc_.at("bindings");
    if (!b.contains(name)) throw PreconditionError("no binding named '" + name + "'");
    return b.at(name);
  }
  std::string resolve(const std::vector<std::string>& operands, std::size_t i) const {
    if (i < operands.size()) return operands[i];
    if (i == 0 && !doc_.at("current").is_null()) return doc_.at("current").get<std::string>();
    throw PreconditionError("missing operand " + std::to_string(i + 1));
  }
  std::string bind(const std::string& requested, json value) {
    std::string name = requested;
    if (name.empty()) {
      const int c = doc_.at("counter").get<int>() + 1;
      doc_["counter"] = c;
      name = "b" + std::to_string(c);
    }
    if (name.rfind("O(", 0) == 0) throw ParseError("binding names may not start with 'O('");
    doc_["bindings"][name] = std::move(value);
    doc_["current"] = name;
    return name;
  }

  std::string canonical() const { return doc_.dump(2) + "\n"; }
  void replace(json doc) { doc_ = validate(std::move(doc)); }
  void save() const { write(path_); }
  void write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << canonical();
  }
  json config() const {
    json c{{"max_power", max_power()}};
    if (has_ring()) {
      const auto R = ring();
      c["field"] = field_to_json(R.field());
      c["weights"] = weights_of(R);
    }
    return c;
  }

 private:
  std::string path_;
  json doc_;
};

// ---------------------------------------------------------------------------
// Commands over a fixed scalar type

struct Outcome {
  json inputs = json::object();
  json result = json::object();
  std::string binding;
  std::string summary;
  int exit_code = 0;
};

template <Scalar K>
class Commands {
 public:
  Commands(Session& s, const Options& o) : s_(s), o_(o), R_(s.ring()) { opt_.max_power = s.max_power(); }

  Outcome run(const std::string& cmd) {
    if (cmd == "mod new") return mod_new();
    if (cmd == "mod hilbert") return mod_hilbert();
    if (cmd == "mod twist")
      return unary_module(cmd, json{{"k", o_.k}}, [&](const Presentation<K>& M) { return twist(M, o_.k); });
    if (cmd == "mod sym")
      return unary_module(cmd, json{{"n", o_.n}},
                          [&](const Presentation<K>& M) { return sym_presentation(M, nonneg(o_.n, "N")); });
    if (cmd == "mod sum") return binary_module(cmd, [](auto& a, auto& b) { return direct_sum(a, b).sum; });
    if (cmd == "mod tensor") return binary_module(cmd, [](auto& a, auto& b) { return tensor_presentation(a, b); });
    if (cmd == "sat") return sat();
    if (cmd == "torsion") return torsion();
    if (cmd == "is-torsion") return is_torsion_cmd();
    if (cmd == "map new") return map_new();
    if (cmd == "map epi-check" || cmd == "map mono-check" || cmd == "map iso-check") return map_check(cmd);
    if (cmd == "twist-epi") return bind_map(cmd, twist_epi<K>(R_, o_.k), json{{"k", o_.k}});
    if (cmd == "lemma-epi") return lemma();
    if (cmd == "wgg-check") return wgg();
    if (cmd == "hom") return hom();
    if (cmd == "ext") return ext();
    if (cmd == "vb-check") return vb();
    if (cmd == "tangent") return tangent();
    if (cmd == "ample-probe") return probe();
    throw ParseError("unknown command " + cmd);
  }

 private:
  static std::uint32_t nonneg(int v, const char* what) {
    if (v < 0) throw PreconditionError(std::string(what) + " must be non-negative");
    return static_cast<std::uint32_t>(v);
  }

  static std::optional<int> twist_literal(const std::string& name) {
    static const std::regex re(R"(O\((-?\d+)\))");
    std::smatch m;
    if (std::regex_match(name, m, re)) return std::stoi(m[1]);
    return std::nullopt;
  }

  Presentation<K> module(const std::string& name) const {
    if (auto k = twist_literal(name)) return shifted_ring<K>(R_, *k);
    const json& b = s_.binding(name);
    const auto kind = b.at("kind").get<std::string>();
    if (kind == "module") return module_from_json<K>(R_, b);
    if (kind == "sheaf") return sheaf_from_json<K>(R_, b).module;
    throw PreconditionError("'" + name + "' is a " + kind + ", not a module");
  }

  SheafRep<K> sheaf(const std::string& name) const {
    if (auto k = twist_literal(name)) return structure_twist<K>(R_, *k);
    const json& b = s_.binding(name);
    const auto kind = b.at("kind").get<std::string>();
    if (kind == "sheaf") return sheaf_from_json<K>(R_, b);
    if (kind == "module") {
      auto M = module_from_json<K>(R_, b);
      return saturate(M, default_window(M), opt_).sheaf;
    }
    throw PreconditionError("'" + name + "' is a " + kind + ", not a sheaf");
  }

  GradedMap<K> map(const std::string& name) const {
    const json& b = s_.binding(name);
    if (b.at("kind") != "map") throw PreconditionError("'" + name + "' is not a map");
    return map_from_json<K>(R_, b);
  }

  Outcome bind_module(const std::string& cmd, const Presentation<K>& M, json inputs) {
    Outcome out;
    out.inputs = std::move(inputs);
    json doc = module_to_json(M);
    out.result = doc;
    doc["kind"] = "module";
    out.binding = s_.bind(o_.as, std::move(doc));
    out.summary = cmd + ": module with " + std::to_string(M.num_generators()) + " generator(s) and " +
                  std::to_string(M.relations().size()) + " relation(s) bound to " + out.binding;
    return out;
  }

  Outcome bind_sheaf(const std::string& cmd, const SheafRep<K>& S, json inputs) {
    Outcome out;
    out.inputs = std::move(inputs);
    json doc = sheaf_to_json(S);
    out.result = doc;
    doc["kind"] = "sheaf";
    out.binding = s_.bind(o_.as, std::move(doc));
    out.summary = cmd + ": sheaf on window [" + std::to_string(S.window.lo) + ", " + std::to_string(S.window.hi) +
                  "], " + (S.exact ? "exact" : "window-certified") + ", bound to " + out.binding;
    return out;
  }

  Outcome bind_map(const std::string& cmd, const GradedMap<K>& phi, json inputs) {
    Outcome out;
    out.inputs = std::move(inputs);
    json doc = map_to_json(phi);
    out.result = doc;
    doc["kind"] = "map";
    out.binding = s_.bind(o_.as, std::move(doc));
    out.summary = cmd + ": map bound to " + out.binding;
    return out;
  }

  Outcome mod_new() {
    Presentation<K> M = Presentation<K>::zero(R_);
    if (!o_.doc.empty()) {
      M = module_from_json<K>(R_, read_json_file(o_.doc));
    } else {
      json doc{{"generators", json::array()}, {"relations", json::array()}};
      if (o_.degrees.empty()) throw ParseError("mod new needs --degrees or --doc");
      for (int d : parse_int_list(o_.degrees, "--degrees")) doc["generators"].push_back(json{{"degree", d}});
      if (!o_.relations.empty()) doc["relations"] = parse_json_text(o_.relations, "--relations");
      M = module_from_json<K>(R_, doc);
    }
    return bind_module("mod new", M, json::object());
  }

  Outcome mod_hilbert() {
    const auto name = s_.resolve(o_.operands, 0);
    if (o_.from > o_.to) throw PreconditionError("--from exceeds --to");
    std::vector<std::size_t> dims;
    const json* b = twist_literal(name) ? nullptr : &s_.binding(name);
    if (b && b->at("kind") == "sheaf") {
      auto S = sheaf_from_json<K>(R_, *b);
      for (int d = o_.from; d <= o_.to; ++d) dims.push_back(S.exact ? hilbert_function(S.module, d) : S.dim(d));
    } else {
      auto M = module(name);
      for (int d = o_.from; d <= o_.to; ++d) dims.push_back(hilbert_function(M, d));
    }
    Outcome out;
    out.inputs = json{{"operand", name}, {"from", o_.from}, {"to", o_.to}};
    out.result = json{{"dims", dims}};
    std::string list;
    for (auto d : dims) list += (list.empty() ? "" : ",") + std::to_string(d);
    out.summary = "dims of " + name + " on [" + std::to_string(o_.from) + ", " + std::to_string(o_.to) + "]: " + list;
    return out;
  }

  template <class F>
  Outcome unary_module(const std::string& cmd, json inputs, F f) {
    const auto name = s_.resolve(o_.operands, 0);
    inputs["operand"] = name;
    return bind_module(cmd, f(module(name)), std::move(inputs));
  }

  template <class F>
  Outcome binary_module(const std::string& cmd, F f) {
    const auto a = s_.resolve(o_.operands, 0), b = s_.resolve(o_.operands, 1);
    auto A = module(a), B = module(b);
    return bind_module(cmd, f(A, B), json{{"operands", {a, b}}});
  }

  Outcome sat() {
    const auto name = s_.resolve(o_.operands, 0);
    auto M = module(name);
    const DegreeWindow W = o_.window.empty() ? default_window(M) : DegreeWindow(o_.window[0], o_.window[1]);
    auto S = saturate(M, W, opt_).sheaf;
    return bind_sheaf("sat", S, json{{"operand", name}, {"window", {W.lo, W.hi}}});
  }

  Outcome torsion() {
    const auto name = s_.resolve(o_.operands, 0);
    auto split = torsion_submodule(module(name));
    auto out = bind_module("torsion", split.torsion, json{{"operand", name}});
    out.result["is_zero"] = split.torsion.is_zero_module();
    return out;
  }

  Outcome is_torsion_cmd() {
    const auto name = s_.resolve(o_.operands, 0);
    const auto t = check_torsion(module(name));
    Outcome out;
    out.inputs = json{{"operand", name}};
    out.result = json{{"torsion", t.torsion}};
    if (t.torsion) {
      out.result["dimension"] = t.dimension;
      out.result["top_degree"] = t.top_degree ? json(*t.top_degree) : json(nullptr);
    } else {
      out.result["witness_degree"] = t.witness_degree ? json(*t.witness_degree) : json(nullptr);
    }
    out.summary = name + (t.torsion ? " is torsion" : " is not torsion");
    return out;
  }

  Outcome map_new() {
    GradedMap<K> phi = o_.doc.empty() ? map_from_parts(module(o_.source), module(o_.target),
                                                       parse_json_text(o_.matrix, "--matrix"))
                                      : map_from_json<K>(R_, read_json_file(o_.doc));
    return bind_map("map new", phi, json{{"source", o_.source}, {"target", o_.target}});
  }

  Outcome map_check(const std::string& cmd) {
    const auto name = s_.resolve(o_.operands, 0);
    auto phi = map(name);
    Outcome out;
    out.inputs = json{{"operand", name}};
    bool holds = false;
    if (cmd == "map epi-check") {
      const auto e = is_epi_sheaf(phi);
      holds = e.holds;
      out.result["failure_degree"] = e.failure_degree ? json(*e.failure_degree) : json(nullptr);
    } else if (cmd == "map mono-check") {
      holds = is_mono_sheaf(phi);
    } else {
      holds = is_iso_sheaf(phi);
    }
    out.result["holds"] = holds;
    out.summary = cmd.substr(4) + " on " + name + ": " + (holds ? "holds" : "fails");
    return out;
  }

  Outcome lemma() {
    const auto name = s_.resolve(o_.operands, 0);
    auto phi = lemma_epi(module(name), o_.n);
    const bool epi = is_epi_sheaf(phi).holds;
    auto out = bind_map("lemma-epi", phi, json{{"operand", name}, {"n", o_.n}});
    out.result["epi"] = epi;
    out.summary += epi ? " (epi)" : " (not epi)";
    return out;
  }

  Outcome wgg() {
    const auto name = s_.resolve(o_.operands, 0);
    auto S = sheaf(name);
    const auto cert = wgg_check(S);
    Outcome out;
    out.inputs = json{{"operand", name}, {"window", {S.window.lo, S.window.hi}}};
    json gens = json::array();
    for (const auto& g : cert.generators_used)
      gens.push_back(json{{"twist", g.twist}, {"element", column_to_json(R_, g.element, S.module.num_generators())}});
    out.result = json{{"verdict", cert.verdict},
                      {"failure_degree", cert.failure_degree ? json(*cert.failure_degree) : json(nullptr)},
                      {"generators", gens}};
    out.summary = "wgg-check " + name + ": " + (cert.verdict ? "true" : "false");
    if (cert.failure_degree) out.summary += " (cokernel nonzero in degree " + std::to_string(*cert.failure_degree) + ")";
    return out;
  }

  Outcome hom() {
    const auto a = s_.resolve(o_.operands, 0), b = s_.resolve(o_.operands, 1);
    return bind_module("hom", graded_hom(module(a), module(b)).module, json{{"operands", {a, b}}});
  }

  Outcome ext() {
    const auto a = s_.resolve(o_.operands, 0);
    const std::string b = o_.operands.size() > 1 ? o_.operands[1] : "O(0)";
    auto E = graded_ext(module(a), module(b), o_.index);
    auto out = bind_module("ext", E.module, json{{"operands", {a, b}}, {"i", o_.index}});
    out.result["is_torsion"] = E.is_torsion;
    return out;
  }

  Outcome vb() {
    const auto name = s_.resolve(o_.operands, 0);
    const auto v = is_vector_bundle(sheaf(name));
    Outcome out;
    out.inputs = json{{"operand", name}};
    out.result = json{{"holds", v.holds}, {"first_failure", v.first_failure ? json(*v.first_failure) : json(nullptr)}};
    out.summary = "vb-check " + name + ": " + (v.holds ? "locally free" : "fails at Ext^" + std::to_string(*v.first_failure));
    return out;
  }

  Outcome tangent() {
    std::optional<DegreeWindow> W;
    if (!o_.window.empty()) W = DegreeWindow(o_.window[0], o_.window[1]);
    auto e = euler_tangent<K>(R_, W);
    const auto& T = e.tangent;
    return bind_sheaf("tangent", T, json{{"window", W ? json{W->lo, W->hi} : json(nullptr)}});
  }

  Outcome probe() {
    const auto name = s_.resolve(o_.operands, 0);
    if (o_.against.empty()) throw ParseError("ample-probe needs --against");
    std::vector<std::string> fs;
    std::stringstream ss(o_.against);
    for (std::string f; std::getline(ss, f, ',');) fs.push_back(f);
    auto M = sheaf(name);
    Outcome out;
    out.inputs = json{{"operand", name}, {"against", fs}, {"nmax", o_.nmax}};
    json probes = json::array();
    bool all = true;
    for (const auto& f : fs) {
      const auto p = ample_probe(M, sheaf(f), o_.nmax);
      std::vector<bool> w(p.wgg.begin(), p.wgg.end());
      probes.push_back(json{{"against", f},
                            {"wgg", w},
                            {"n0", p.n0 ? json(*p.n0) : json(nullptr)},
                            {"last_failure", p.last_failure ? json(*p.last_failure) : json(nullptr)}});
      all = all && p.n0.has_value();
      out.summary += (out.summary.empty() ? "" : "; ") + f + ": " + (p.n0 ? "n0 = " + std::to_string(*p.n0) : "no n0");
    }
    out.result = json{{"probes", probes}, {"all_found", all}};
    return out;
  }

  Session& s_;
  const Options& o_;
  WeightedRing R_;
  SaturationOptions opt_;
};

// ---------------------------------------------------------------------------

Outcome ring_new(Session& s, const Options& o) {
  std::string field = o.field;
  if (field.empty()) field = env("WPS_FIELD").value_or("Q");
  const FieldSpec f = field_from_json(json(field));
  WeightedRing R(f, parse_int_list(o.weights, "--weights"));
  s.set_ring(R);
  Outcome out;
  out.result = ring_to_json(R);
  out.summary = "ring over " + f.name() + " with weights " + o.weights;
  return out;
}

Outcome run_scenario_file(const Options& o) {
  std::optional<std::vector<int>> weights;
  if (!o.weights.empty()) {
    weights = parse_int_list(o.weights, "--weights");
    WeightedRing check(FieldSpec::rationals(), *weights);
    if (check.num_variables() < 2) throw PreconditionError("verify-paper needs at least two variables");
  }
  const std::string file = !o.path.empty() ? o.path : env("WPS_SCENARIOS").value_or(WPS_SCENARIO_FILE);
  Outcome out;
  out.inputs = json{{"scenarios", file}, {"weights", weights ? json(*weights) : json(nullptr)}};
  out.result = run_scenarios(read_json_file(file), weights, std::cerr);
  const int failed = out.result.at("failed").get<int>();
  out.summary = "verify-paper: " + std::to_string(out.result.at("passed").get<int>()) + " passed, " +
                std::to_string(failed) + " failed, " + std::to_string(out.result.at("skipped").get<int>()) +
                " skipped";
  out.exit_code = failed == 0 ? 0 : 2;
  return out;
}

int exit_code_of(ErrorKind k) { return static_cast<int>(k); }

}  // namespace
}  // namespace wps::cli

int main(int argc, char** argv) {
  using namespace wps::cli;
  Options o;
  CLI::App app{"Sheaves on weighted projective stacks"};
  app.require_subcommand(1);
  o.session_path = env("WPS_SESSION").value_or("wps-session.json");
  app.add_option("--session", o.session_path, "Session file (default $WPS_SESSION or wps-session.json)");
  app.add_option("--expect-weights", o.expect_weights, "Fail with a ring mismatch unless the session has these weights");

  std::string command;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& full, const std::string& help) {
    auto* sub = parent->add_subcommand(name, help);
    sub->callback([&command, full] { command = full; });
    return sub;
  };
  auto operands = [&](CLI::App* sub, const char* help = "Binding names or O(k); default: current binding") {
    sub->add_option("operands", o.operands, help);
  };
  auto bound = [&](CLI::App* sub) { sub->add_option("--as", o.as, "Name for the resulting binding"); };

  auto* ring = app.add_subcommand("ring", "Rings");
  ring->require_subcommand(1);
  auto* ring_new_cmd = leaf(ring, "new", "ring new", "Start a session over a weighted ring");
  ring_new_cmd->add_option("--weights", o.weights, "Comma-separated weights a0,...,an")->required();
  ring_new_cmd->add_option("--field", o.field, "Q or a prime p (default $WPS_FIELD or Q)");

  auto* mod = app.add_subcommand("mod", "Graded modules");
  mod->require_subcommand(1);
  auto* mod_new = leaf(mod, "new", "mod new", "New module from generator degrees and relations");
  mod_new->add_option("--degrees", o.degrees, "Comma-separated generator degrees");
  mod_new->add_option("--relations", o.relations, "JSON list of relation columns, e.g. [[\"x0\",\"x1\"]]");
  mod_new->add_option("--doc", o.doc, "Module description document");
  bound(mod_new);
  auto* hilb = leaf(mod, "hilbert", "mod hilbert", "Hilbert function on a degree range");
  hilb->add_option("--from", o.from)->required();
  hilb->add_option("--to", o.to)->required();
  operands(hilb);
  auto* tw = leaf(mod, "twist", "mod twist", "M[k]");
  tw->add_option("k", o.k)->required();
  operands(tw);
  bound(tw);
  for (auto [name, help] : {std::pair{"sum", "Direct sum of two modules"}, {"tensor", "Tensor product of two modules"}}) {
    auto* b = leaf(mod, name, std::string("mod ") + name, help);
    operands(b, "Two binding names");
    bound(b);
  }
  auto* sym = leaf(mod, "sym", "mod sym", "Sym^N");
  sym->add_option("N", o.n)->required();
  operands(sym);
  bound(sym);

  auto* sat = leaf(&app, "sat", "sat", "Saturate a module");
  sat->add_option("--window", o.window, "LO HI")->expected(2)->allow_extra_args(false);
  operands(sat);
  bound(sat);
  auto* tors = leaf(&app, "torsion", "torsion", "Torsion submodule");
  operands(tors);
  bound(tors);
  operands(leaf(&app, "is-torsion", "is-torsion", "Decide whether a module is torsion"));

  auto* map = app.add_subcommand("map", "Graded maps");
  map->require_subcommand(1);
  auto* map_new = leaf(map, "new", "map new", "New map from images of the source generators");
  map_new->add_option("--source", o.source);
  map_new->add_option("--target", o.target);
  map_new->add_option("--matrix", o.matrix, "JSON list with one target column per source generator");
  map_new->add_option("--doc", o.doc, "Morphism document");
  bound(map_new);
  for (const char* name : {"epi-check", "mono-check", "iso-check"}) operands(leaf(map, name, std::string("map ") + name, "Sheaf-level check"));

  auto* te = leaf(&app, "twist-epi", "twist-epi", "The epimorphism onto O(k)");
  te->add_option("k", o.k)->required();
  bound(te);
  auto* le = leaf(&app, "lemma-epi", "lemma-epi", "The epimorphism onto F(n) built from generators of F");
  le->add_option("N", o.n)->required();
  operands(le);
  bound(le);
  operands(leaf(&app, "wgg-check", "wgg-check", "Weighted global generation"));
  auto* hom = leaf(&app, "hom", "hom", "Hom(A, B)");
  operands(hom, "Two binding names");
  bound(hom);
  auto* ext = leaf(&app, "ext", "ext", "Ext^I(A, B); B defaults to O");
  ext->add_option("I", o.index)->required();
  operands(ext, "A [B]");
  bound(ext);
  operands(leaf(&app, "vb-check", "vb-check", "Vector-bundle test"));
  auto* tan = leaf(&app, "tangent", "tangent", "Tangent sheaf from the Euler sequence");
  tan->add_option("--window", o.window, "LO HI")->expected(2)->allow_extra_args(false);
  bound(tan);
  auto* ap = leaf(&app, "ample-probe", "ample-probe", "Scan wgg of F (x) Sym^n(M) for n = 1..N");
  ap->add_option("--nmax", o.nmax)->required();
  ap->add_option("--against", o.against, "Comma-separated binding names or O(k)")->required();
  operands(ap);
  auto* vp = leaf(&app, "verify-paper", "verify-paper", "Run the scenario list");
  vp->add_option("--weights", o.weights, "Run the generic scenarios on these weights only");
  vp->add_option("--scenarios", o.path, "Scenario file (default $WPS_SCENARIOS or the bundled file)");

  auto* sess = app.add_subcommand("session", "Session files");
  sess->require_subcommand(1);
  leaf(sess, "show", "session show", "Print the canonical session document");
  leaf(sess, "save", "session save", "Write the session to PATH")->add_option("PATH", o.path)->required();
  leaf(sess, "load", "session load", "Replace the session with the one in PATH")->add_option("PATH", o.path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (command == "verify-paper") {
      auto out = run_scenario_file(o);
      json doc{{"schema_version", kSchemaVersion}, {"command", command}, {"config", {{"field", "Q"}}},
               {"inputs", out.inputs}, {"result", out.result}};
      std::cout << doc.dump(2) << "\n";
      std::cerr << out.summary << "\n";
      return out.exit_code;
    }

    Session s(o.session_path);
    if (!o.expect_weights.empty() && command != "ring new") {
      const auto w = parse_int_list(o.expect_weights, "--expect-weights");
      if (!s.has_ring() || weights_of(s.ring()) != w) throw wps::RingMismatch("session (expected weights " + o.expect_weights + ")");
    }

    Outcome out;
    if (command == "ring new") {
      out = ring_new(s, o);
    } else if (command == "session show") {
      std::cout << s.canonical();
      return 0;
    } else if (command == "session save") {
      s.write(o.path);
      out.inputs = json{{"path", o.path}};
      out.summary = "session saved to " + o.path;
    } else if (command == "session load") {
      s.replace(read_json_file(o.path));
      if (s.has_ring()) s.ring();
      out.inputs = json{{"path", o.path}};
      out.summary = "session loaded from " + o.path;
    } else if (s.ring().field().is_rational()) {
      out = Commands<wps::Rational>(s, o).run(command);
    } else {
      out = Commands<wps::Fp>(s, o).run(command);
    }

    json doc{{"schema_version", kSchemaVersion}, {"command", command}, {"config", s.config()},
             {"inputs", out.inputs}, {"result", out.result}};
    if (!out.binding.empty()) doc["binding"] = out.binding;
    std::cout << doc.dump(2) << "\n";
    std::cerr << out.summary << "\n";
    s.save();
    return out.exit_code;
  } catch (const wps::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_of(e.kind());
  } catch (const json::exception& e) {
    std::cerr << "error: malformed document: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
