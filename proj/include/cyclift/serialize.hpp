#pragma once

// JSON documents for towers, algebras, certificates, Witt vectors and demo
// reports. Every document carries a versioned "schema" and, where it makes
// claims, a "certification" block with recomputable checks, a timestamp and
// an FNV-1a digest of the whole document (digest field excluded).
//
// verify() rebuilds the object from the witness fields only, re-emits it and
// requires the result to agree with the input field for field.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <string>
#include <vector>

#include <json.hpp>

#include "cyclift/algebra.hpp"
#include "cyclift/expression.hpp"

namespace cyclift {

using json = nlohmann::json;

inline constexpr const char* kTowerSchema = "cyclift.tower/1";
inline constexpr const char* kAlgebraSchema = "cyclift.algebra/1";
inline constexpr const char* kDemoSchema = "cyclift.demo/1";
inline constexpr const char* kWittSchema = "cyclift.witt/1";
inline constexpr const char* kASClassSchema = "cyclift.as-class/1";
inline constexpr const char* kPIndependenceSchema = "cyclift.p-independence/1";
inline constexpr const char* kReproducibleStamp = "reproducible";

class FormatError : public AlgebraError {
 public:
  using AlgebraError::AlgebraError;
};

struct EmitOptions {
  bool reproducible = false;
  std::string timestamp;  // overrides the clock when set
  double elapsed_s = -1;  // construction wall time; recorded when >= 0 and not reproducible
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw FormatError(what);
}

inline std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::string stamp(const EmitOptions& o) {
  if (!o.timestamp.empty()) return o.timestamp;
  return o.reproducible ? kReproducibleStamp : utc_now();
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace detail

/// Digest of a document with its certification digest removed.
inline std::string document_digest(json doc) {
  if (doc.contains("certification") && doc["certification"].is_object()) doc["certification"].erase("digest");
  return detail::hex64(detail::fnv1a(doc.dump()));
}

inline json certification_block(const std::vector<Check>& checks, const EmitOptions& o) {
  json c;
  c["checks"] = json::array();
  for (const auto& k : checks) c["checks"].push_back({{"name", k.name}, {"passed", k.passed}, {"value", k.value}});
  c["passed"] = all_passed(checks);
  c["timestamp"] = detail::stamp(o);
  if (!o.reproducible && o.elapsed_s >= 0) c["elapsed_s"] = o.elapsed_s;
  return c;
}

inline void seal(json& doc) { doc["certification"]["digest"] = document_digest(doc); }

// ---------------------------------------------------------------------------
// Base descriptors and expressions.

inline json base_json(const FieldContext& ctx) {
  return {{"p", ctx.p}, {"r", ctx.r}, {"variables", ctx.names()}, {"uniformizer", ctx.has_uniformizer}};
}

inline FieldContext base_from_json(const json& j) {
  detail::require(j.is_object(), "base: expected an object");
  const auto p = j.at("p").get<std::uint32_t>();
  const auto r = j.at("r").get<std::size_t>();
  const bool valued = j.at("uniformizer").get<bool>();
  FieldContext ctx = valued ? FieldContext::valued(p, r) : FieldContext::residue(p, r);
  detail::require(j.at("variables").get<std::vector<std::string>>() == ctx.names(), "base: variable names");
  return ctx;
}

inline std::vector<std::string> print_all(const std::vector<RationalFunction>& xs, const FieldContext& ctx) {
  std::vector<std::string> out;
  for (const auto& x : xs) out.push_back(print(x, ctx));
  return out;
}

inline std::vector<RationalFunction> parse_all(const json& j, const FieldContext& ctx) {
  std::vector<RationalFunction> out;
  for (const auto& s : j) out.push_back(parse_expression(s.get<std::string>(), ctx));
  return out;
}

/// "x1^2+x1" for p = 2, "x1^3+2*x1" for p = 3.
inline std::string artin_schreier_lhs(const std::string& g, std::uint32_t p) {
  const std::string c = p - 1 == 1 ? "" : std::to_string(p - 1) + "*";
  return g + "^" + std::to_string(p) + "+" + c + g;
}

inline std::string layer_relation(const TowerPtr& t, std::size_t i) {
  const Layer& l = t->layers().at(i);
  const std::string rhs = print_level(t, l.rhs);
  if (l.kind == LayerKind::PurelyInseparable) return l.name + "^" + std::to_string(t->p()) + " = " + rhs;
  return artin_schreier_lhs(l.name, t->p()) + " = " + rhs;
}

inline json layers_json(const TowerPtr& t) {
  json a = json::array();
  for (std::size_t i = 0; i < t->height(); ++i) {
    const Layer& l = t->layers()[i];
    json e{{"generator", l.name},
           {"kind", l.kind == LayerKind::ArtinSchreier ? "artin-schreier" : "purely-inseparable"},
           {"rhs", print_level(t, l.rhs)},
           {"relation", layer_relation(t, i)}};
    if (l.kind == LayerKind::ArtinSchreier) e["sigma_shift"] = print_level(t, l.shift);
    a.push_back(std::move(e));
  }
  return a;
}

/// Rebuilds a tower from its layer list; every σ shift is re-certified on the way.
inline TowerPtr tower_from_layers(const FieldContext& ctx, const json& layers) {
  TowerPtr t = make_base_tower(ctx);
  for (const auto& l : layers) {
    const auto name = l.at("generator").get<std::string>();
    detail::require(!name.empty() && std::isalpha(static_cast<unsigned char>(name[0])), "layer: generator name");
    for (const auto& n : t->names()) detail::require(n != name, "layer: duplicate generator name " + name);
    TowerElement r = parse_tower_element(l.at("rhs").get<std::string>(), t);
    const auto kind = l.at("kind").get<std::string>();
    if (kind == "artin-schreier")
      t = adjoin_as_layer(t, r, parse_tower_element(l.at("sigma_shift").get<std::string>(), t), name);
    else if (kind == "purely-inseparable")
      t = adjoin_inseparable_layer(t, r, name);
    else
      throw FormatError("layer: unknown kind " + kind);
  }
  return t;
}

// ---------------------------------------------------------------------------
// Certificates.

inline json to_json(const PIndependenceCertificate& c, const FieldContext& ctx) {
  const FieldContext k = ctx.residue_context();
  json j{{"schema", kPIndependenceSchema},
         {"base", base_json(k)},
         {"elements", print_all(c.elements, k)},
         {"independent", c.independent},
         {"monomial_rank", c.monomial_rank},
         {"jacobian_rank", c.jacobian_rank}};
  if (c.independent) {
    j["minor_columns"] = c.minor_columns;
    j["minor_determinant"] = print(c.minor_determinant, k);
  } else {
    j["dependency"] = print_all(c.dependency, k);
  }
  return j;
}

inline PIndependenceCertificate p_independence_from_json(const json& j) {
  detail::require(j.at("schema") == kPIndependenceSchema, "p-independence: schema");
  const FieldContext k = base_from_json(j.at("base"));
  PIndependenceCertificate c;
  c.elements = parse_all(j.at("elements"), k);
  c.independent = j.at("independent").get<bool>();
  c.monomial_rank = j.at("monomial_rank").get<std::size_t>();
  c.jacobian_rank = j.at("jacobian_rank").get<std::size_t>();
  if (c.independent) {
    c.minor_columns = j.at("minor_columns").get<std::vector<std::size_t>>();
    c.minor_determinant = parse_expression(j.at("minor_determinant").get<std::string>(), k);
  } else {
    c.dependency = parse_all(j.at("dependency"), k);
  }
  return c;
}

inline json to_json(const ASClassCertificate& c, const FieldContext& ctx) {
  const FieldContext k = ctx.residue_context();
  json j{{"schema", kASClassSchema},
         {"base", base_json(k)},
         {"f", print(c.f, k)},
         {"verdict", to_string(c.verdict)},
         {"obstruction", c.obstruction},
         {"degree", c.degree}};
  if (c.witness) j["witness"] = print(*c.witness, k);
  return j;
}

inline ASVerdict as_verdict_from_string(const std::string& s) {
  for (auto v : {ASVerdict::InImage, ASVerdict::NotInImage, ASVerdict::Undecided})
    if (s == to_string(v)) return v;
  throw FormatError("as-class: unknown verdict " + s);
}

inline ASClassCertificate as_class_from_json(const json& j) {
  detail::require(j.at("schema") == kASClassSchema, "as-class: schema");
  const FieldContext k = base_from_json(j.at("base"));
  ASClassCertificate c;
  c.f = parse_expression(j.at("f").get<std::string>(), k);
  c.verdict = as_verdict_from_string(j.at("verdict").get<std::string>());
  c.obstruction = j.at("obstruction").get<std::string>();
  c.degree = j.at("degree").get<decltype(c.degree)>();
  if (j.contains("witness")) c.witness = parse_expression(j.at("witness").get<std::string>(), k);
  return c;
}

// ---------------------------------------------------------------------------
// Witt vectors: [p, n] header plus component expressions over named variables.

inline json witt_json(const WittVector<RationalFunction>& w, const std::vector<std::string>& names) {
  std::vector<std::string> comps;
  for (const auto& x : w.x) comps.push_back(print_rational(x, names));
  return {{"schema", kWittSchema}, {"header", {w.p, w.length()}}, {"variables", names}, {"components", comps}};
}

inline WittVector<RationalFunction> witt_from_json(const json& j) {
  detail::require(j.at("schema") == kWittSchema, "witt: schema");
  const auto header = j.at("header").get<std::vector<std::size_t>>();
  detail::require(header.size() == 2, "witt: header must be [p, n]");
  const auto p = static_cast<std::uint32_t>(header[0]);
  detail::require(is_prime(p), "witt: p must be prime");
  const auto names = j.at("variables").get<std::vector<std::string>>();
  WittVector<RationalFunction> w{p, {}};
  for (const auto& s : j.at("components")) w.x.push_back(parse_rational(s.get<std::string>(), p, names));
  detail::require(w.length() == header[1], "witt: length does not match header");
  return w;
}

// ---------------------------------------------------------------------------
// Towers.

inline json to_json(const LiftedTower& lt, const EmitOptions& o = {}) {
  const TowerPtr& t = lt.field;
  const FieldContext& K = t->base();
  const FieldContext k = K.residue_context();
  json doc;
  doc["schema"] = kTowerSchema;
  doc["base"] = base_json(K);
  doc["degree"] = t->degree();
  doc["sigma_order"] = t->sigma_order();
  doc["layers"] = layers_json(t);
  json v;
  v["kind"] = lt.valuation.kind == ResidueKind::PurelyInseparable ? "purely-inseparable" : "separable";
  v["exponents"] = lt.valuation.exponents;
  std::vector<std::string> witnesses;
  for (std::size_t i = 0; i < t->height(); ++i) {
    const auto e = lt.valuation.exponents[i];
    const std::string& g = t->layers()[i].name;
    witnesses.push_back(e == 0 ? g : e == 1 ? "t*" + g : "t^" + std::to_string(e) + "*" + g);
  }
  v["integral_witnesses"] = witnesses;
  v["residue_field"] = {{"base", base_json(k)}, {"layers", layers_json(lt.valuation.residue_field)}};
  doc["valuation"] = v;
  json c;
  if (lt.kind == LiftedTower::Kind::InseparableResidue) {
    c["kind"] = "inseparable-residue";
    c["lifts"] = print_all(lt.lifts, K);
    c["residues"] = print_all(lt.residues, k);
    c["n"] = lt.n;
    c["p_independence"] = to_json(*lt.residue_certificate, K);
  } else {
    c["kind"] = "inertial";
    c["seed"] = to_json(*lt.seed_certificate, K);
    if (lt.symbol) c["symbol"] = witt_json(*lt.symbol, k.names());
  }
  doc["construction"] = c;
  doc["certification"] = certification_block(lt.checks, o);
  seal(doc);
  return doc;
}

/// Rebuilds a lifted tower from the witness fields of a tower document:
/// base, layers, valuation exponents and the construction inputs.
inline LiftedTower lifted_tower_from_json(const json& doc) {
  detail::require(doc.at("schema") == kTowerSchema, "tower: schema");
  const FieldContext K = base_from_json(doc.at("base"));
  detail::require(K.has_uniformizer, "tower: base must carry a uniformizer");
  const FieldContext k = K.residue_context();
  LiftedTower lt;
  lt.field = tower_from_layers(K, doc.at("layers"));
  const json& v = doc.at("valuation");
  lt.valuation.exponents = v.at("exponents").get<std::vector<std::uint32_t>>();
  detail::require(lt.valuation.exponents.size() == lt.field->height(), "tower: exponent count");
  const json& c = doc.at("construction");
  const auto kind = c.at("kind").get<std::string>();
  if (kind == "inseparable-residue") {
    lt.kind = LiftedTower::Kind::InseparableResidue;
    lt.lifts = parse_all(c.at("lifts"), K);
    lt.n = c.at("n").get<std::vector<std::uint32_t>>();
    for (const auto& a : lt.lifts) lt.residues.push_back(residue(a, K.t_index()));
    lt.residue_certificate = p_independent(lt.residues, K);
    lt.valuation.kind = ResidueKind::PurelyInseparable;
    lt.valuation.residue_field = inseparable_residue_field(k, lt.residues);
  } else if (kind == "inertial") {
    lt.kind = LiftedTower::Kind::Inertial;
    lt.valuation.kind = ResidueKind::Separable;
    lt.valuation.residue_field = tower_from_layers(k, v.at("residue_field").at("layers"));
    const RationalFunction seed =
        TowerElement(lt.valuation.residue_field, lt.valuation.residue_field->pad(lt.valuation.residue_field->layers().at(0).rhs))
            .base_part();
    lt.seed_certificate = not_in_AS_image(seed, k);
    if (c.contains("symbol")) lt.symbol = witt_from_json(c.at("symbol"));
  } else {
    throw FormatError("tower: unknown construction " + kind);
  }
  lt.checks = certify(lt);
  return lt;
}

// ---------------------------------------------------------------------------
// Algebras.

inline json division_json(const DivisionCertificate& d) {
  json probes = json::array();
  for (const auto& p : d.probes) probes.push_back({{"index", p.index}, {"nrd_valuation", p.nrd_valuation}, {"nonzero", p.nonzero}});
  return {{"verdict", d.verdict},
          {"refuted", d.refuted},
          {"slot_valuation", d.slot_valuation},
          {"slot_gcd", d.slot_gcd},
          {"weakly_unramified", d.weakly_unramified},
          {"weakly_unramified_kind", d.weakly_unramified_kind},
          {"residue_degree", d.residue_degree},
          {"probe_seed", d.seed},
          {"probe_count", d.probes.size()},
          {"probes", probes},
          {"assumed", "division criterion for weakly unramified cyclic subfield and slot valuation prime to p"}};
}

inline json algebra_json(const DemoAlgebra& d, const json& tower_doc, const EmitOptions& o) {
  const auto& a = *d.algebra;
  json doc;
  doc["schema"] = kAlgebraSchema;
  doc["tower"] = tower_doc;
  doc["b"] = print(a.b, a.base());
  doc["degree"] = a.degree();
  doc["division"] = division_json(d.division);
  doc["totally_ramified_subfield"] = {{"generator", "y"},
                                      {"relation", "y^" + std::to_string(d.subfield.degree) + " = " + print(a.b, a.base())},
                                      {"slot_valuation", d.subfield.slot_valuation},
                                      {"power_relation", d.subfield.power_relation},
                                      {"no_root_in_base", d.subfield.no_root_in_K},
                                      {"value_group_index", d.subfield.value_group_index}};
  doc["value_groups"] = {{"value_group_index", d.value_groups.value_group_index},
                         {"residue_degree", d.value_groups.residue_degree},
                         {"dimension", d.value_groups.algebra_dimension},
                         {"fundamental_equality", d.value_groups.fundamental_equality()}};
  doc["center_dimension"] = d.center_dimension;
  std::vector<Check> checks{
      make_check("division", d.division.verdict, std::to_string(d.division.probes.size())),
      make_check("center_dimension", d.center_dimension == 1, std::to_string(d.center_dimension)),
      make_check("associative", d.associative),
      make_check("totally_ramified_subfield", d.subfield.certified(), std::to_string(d.subfield.value_group_index)),
      make_check("fundamental_equality", d.value_groups.fundamental_equality())};
  doc["certification"] = certification_block(checks, o);
  seal(doc);
  return doc;
}

inline json to_json(const DemoAlgebra& d, const EmitOptions& o = {}) {
  return algebra_json(d, to_json(*d.algebra->lift, o), o);
}

// ---------------------------------------------------------------------------
// Demo reports.

struct DemoConfig {
  std::uint32_t p = 2;
  std::size_t m = 1;
  std::size_t r = 0;  // 0: infer (2m or m)
  PairCase which = PairCase::Rank2m;
  std::vector<std::string> gens;
  std::string as_witness;
  std::string b = "t";
  std::uint64_t seed = kDefaultSeed;
  std::size_t probes = kDefaultProbes;

  std::size_t rank() const {
    if (r) return r;
    return which == PairCase::Rank2m ? 2 * m : m;
  }
};

inline json config_json(const DemoConfig& c) {
  json j{{"p", c.p},       {"m", c.m},         {"r", c.rank()},         {"case", to_string(c.which)},
         {"gens", c.gens}, {"b", c.b},         {"seed", c.seed},        {"probes", c.probes}};
  if (c.which == PairCase::RankMPlusAS) j["as_witness"] = c.as_witness;
  return j;
}

inline PairCase pair_case_from_string(const std::string& s) {
  if (s == "rank2m") return PairCase::Rank2m;
  if (s == "rank-m-as") return PairCase::RankMPlusAS;
  throw FormatError("unknown case " + s + " (expected rank2m or rank-m-as)");
}

inline DemoConfig config_from_json(const json& j) {
  DemoConfig c;
  c.p = j.at("p").get<std::uint32_t>();
  c.m = j.at("m").get<std::size_t>();
  c.r = j.at("r").get<std::size_t>();
  c.which = pair_case_from_string(j.at("case").get<std::string>());
  c.gens = j.at("gens").get<std::vector<std::string>>();
  c.b = j.at("b").get<std::string>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.probes = j.at("probes").get<std::size_t>();
  if (c.which == PairCase::RankMPlusAS) c.as_witness = j.at("as_witness").get<std::string>();
  return c;
}

inline json intersection_json(const IntersectionCertificate& c) {
  json j{{"case", to_string(c.which)}, {"trivial", c.trivial}};
  if (c.linear_algebra) {
    const auto& r = *c.linear_algebra;
    j["dimensions"] = {{"first", r.dim_first},
                       {"second", r.dim_second},
                       {"sum", r.dim_sum},
                       {"intersection", r.dim_intersection},
                       {"ambient", r.dim_ambient}};
  } else {
    j["type_disjoint"] = c.type_disjoint;
    j["first_residue"] = "purely inseparable";
    j["second_residue"] = "separable";
  }
  return j;
}

inline json demo_json(const DemoReport& r, const DemoConfig& cfg, const EmitOptions& o = {}) {
  json doc;
  doc["schema"] = kDemoSchema;
  doc["config"] = config_json(cfg);
  json t1 = to_json(r.pair.first, o), t2 = to_json(r.pair.second, o);
  doc["towers"] = {t1, t2};
  doc["intersection"] = intersection_json(r.pair.intersection);
  doc["algebras"] = {algebra_json(r.first, t1, o), algebra_json(r.second, t2, o)};
  doc["conclusion"] = r.conclusion;
  doc["assumed"] = r.assumed;
  doc["certification"] = certification_block(r.checks, o);
  seal(doc);
  return doc;
}

/// Assembles a report from an already built pair (shared by the demo and the verifier).
inline DemoReport assemble_demo(const DemoConfig& cfg, DisjointPair pair, const RationalFunction& b) {
  DemoReport r;
  r.p = cfg.p;
  r.m = cfg.m;
  r.which = cfg.which;
  r.b = b;
  r.pair = std::move(pair);
  r.pair.intersection = certify_intersection(cfg.which, r.pair.first, r.pair.second);
  r.first = demo_algebra(r.pair.first, b, cfg.seed, cfg.probes);
  r.second = demo_algebra(r.pair.second, b, cfg.seed + 1, cfg.probes);
  r.checks = demo_checks(r);
  r.conclusion = demo_conclusion(r.passed());
  return r;
}

inline FieldContext demo_field(const DemoConfig& cfg) { return FieldContext::valued(cfg.p, cfg.rank()); }

inline DemoReport run_demo(const DemoConfig& cfg) {
  const FieldContext K = demo_field(cfg);
  std::vector<RationalFunction> gens;
  for (const auto& g : cfg.gens) gens.push_back(parse_expression(g, K));
  std::optional<RationalFunction> f;
  if (cfg.which == PairCase::RankMPlusAS) f = parse_expression(cfg.as_witness, K);
  const RationalFunction b = parse_expression(cfg.b, K);
  return theorem2_demo(K, cfg.m, cfg.which, gens, f, b, cfg.seed, cfg.probes);
}

// ---------------------------------------------------------------------------
// Offline verification.

struct VerifyResult {
  bool ok = false;
  std::string schema;
  std::vector<std::string> problems;
};

namespace detail {

/// Copies the clock-dependent fields (timestamp, elapsed time) of `from` into `to`, recursively.
inline void adopt_stamps(json& to, const json& from) {
  if (!to.is_object() || !from.is_object()) return;
  for (auto& [k, v] : to.items()) {
    if (!from.contains(k)) continue;
    if (k == "certification" && v.is_object() && from[k].is_object() && from[k].contains("timestamp")) {
      v["timestamp"] = from[k]["timestamp"];
      if (from[k].contains("elapsed_s")) v["elapsed_s"] = from[k]["elapsed_s"];
      v.erase("digest");
    }
    if (v.is_object()) adopt_stamps(v, from[k]);
    if (v.is_array() && from[k].is_array() && v.size() == from[k].size())
      for (std::size_t i = 0; i < v.size(); ++i) adopt_stamps(v[i], from[k][i]);
  }
}

/// Re-seals nested documents bottom-up after adopt_stamps.
inline void reseal(json& doc) {
  if (!doc.is_object()) return;
  for (auto& [k, v] : doc.items()) {
    if (v.is_object()) reseal(v);
    if (v.is_array())
      for (auto& e : v) reseal(e);
  }
  if (doc.contains("schema") && doc.contains("certification")) seal(doc);
}

inline void compare(const json& rebuilt, const json& given, VerifyResult& out) {
  json r = rebuilt;
  adopt_stamps(r, given);
  reseal(r);
  if (r == given) return;
  const json patch = json::diff(given, r);
  for (const auto& op : patch) out.problems.push_back("mismatch at " + op.at("path").get<std::string>());
}

inline void check_digests(const json& doc, VerifyResult& out, const std::string& where = "") {
  if (!doc.is_object()) return;
  if (doc.contains("schema") && doc.contains("certification")) {
    const json& c = doc["certification"];
    if (!c.is_object() || !c.contains("digest") || !c["digest"].is_string() ||
        c["digest"].get<std::string>() != document_digest(doc))
      out.problems.push_back("digest mismatch" + (where.empty() ? "" : " in " + where));
  }
  for (const auto& [k, v] : doc.items()) {
    if (v.is_object()) check_digests(v, out, where + "/" + k);
    if (v.is_array())
      for (std::size_t i = 0; i < v.size(); ++i) check_digests(v[i], out, where + "/" + k + "/" + std::to_string(i));
  }
}

inline void require_passed(const json& doc, VerifyResult& out) {
  const json& c = doc.at("certification");
  for (const auto& k : c.at("checks"))
    if (!k.at("passed").get<bool>()) out.problems.push_back("check failed: " + k.at("name").get<std::string>());
  if (!c.at("passed").get<bool>()) out.problems.push_back("certification not passed");
}

inline DemoAlgebra rebuild_algebra(const json& doc, const LiftedTower& lt) {
  const FieldContext& K = lt.field->base();
  const RationalFunction b = parse_expression(doc.at("b").get<std::string>(), K);
  const auto& d = doc.at("division");
  return demo_algebra(lt, b, d.at("probe_seed").get<std::uint64_t>(), d.at("probe_count").get<std::size_t>());
}

}  // namespace detail

inline VerifyResult verify(const json& doc) {
  VerifyResult out;
  try {
    out.schema = doc.at("schema").get<std::string>();
    detail::check_digests(doc, out);
    if (out.schema == kTowerSchema) {
      LiftedTower lt = lifted_tower_from_json(doc);
      detail::compare(to_json(lt), doc, out);
      detail::require_passed(doc, out);
    } else if (out.schema == kAlgebraSchema) {
      LiftedTower lt = lifted_tower_from_json(doc.at("tower"));
      DemoAlgebra d = detail::rebuild_algebra(doc, lt);
      detail::compare(to_json(d), doc, out);
      detail::require_passed(doc, out);
    } else if (out.schema == kDemoSchema) {
      DemoConfig cfg = config_from_json(doc.at("config"));
      const FieldContext K = demo_field(cfg);
      DisjointPair pair;
      pair.first = lifted_tower_from_json(doc.at("towers").at(0));
      pair.second = lifted_tower_from_json(doc.at("towers").at(1));
      detail::require(pair.first.field->base() == K && pair.second.field->base() == K, "demo: tower base differs from config");
      // The towers must be the ones the configuration asks for.
      std::vector<std::string> expected(cfg.gens.begin(), cfg.gens.begin() + std::min(cfg.m, cfg.gens.size()));
      detail::require(doc.at("towers").at(0).at("construction").at("lifts").get<std::vector<std::string>>() ==
                          print_all(parse_all(json(expected), K), K),
                      "demo: first tower lifts differ from config");
      if (cfg.which == PairCase::Rank2m) {
        std::vector<std::string> rest(cfg.gens.begin() + std::min(cfg.m, cfg.gens.size()), cfg.gens.end());
        detail::require(doc.at("towers").at(1).at("construction").at("lifts").get<std::vector<std::string>>() ==
                            print_all(parse_all(json(rest), K), K),
                        "demo: second tower lifts differ from config");
      } else {
        detail::require(pair.second.seed_certificate &&
                            pair.second.seed_certificate->f == parse_expression(cfg.as_witness, K),
                        "demo: inertial seed differs from the Artin-Schreier witness");
      }
      DemoReport r = assemble_demo(cfg, std::move(pair), parse_expression(cfg.b, K));
      detail::compare(demo_json(r, cfg), doc, out);
      detail::require_passed(doc, out);
    } else if (out.schema == kWittSchema) {
      auto w = witt_from_json(doc);
      detail::compare(witt_json(w, doc.at("variables").get<std::vector<std::string>>()), doc, out);
    } else if (out.schema == kASClassSchema) {
      auto c = as_class_from_json(doc);
      const FieldContext k = base_from_json(doc.at("base"));
      if (!verify_as_class(c, k)) out.problems.push_back("Artin-Schreier certificate does not re-verify");
      detail::compare(to_json(not_in_AS_image(c.f, k), k), doc, out);
    } else if (out.schema == kPIndependenceSchema) {
      auto c = p_independence_from_json(doc);
      const FieldContext k = base_from_json(doc.at("base"));
      if (!verify_p_independence(c, k)) out.problems.push_back("p-independence certificate does not re-verify");
      detail::compare(to_json(c, k), doc, out);
    } else {
      out.problems.push_back("unknown schema " + out.schema);
    }
  } catch (const std::exception& e) {
    out.problems.push_back(e.what());
  }
  out.ok = out.problems.empty();
  return out;
}

}  // namespace cyclift
