// cyclift: build, serialize and verify cyclic towers and cyclic p-algebras.
//
//   cyclift lift --p 2 --m 2 --gens u1,u2 [--r R] [--out tower.json] [--reproducible]
//   cyclift witt add --p 2 --len 2 1,0 1,0
//   cyclift witt layers --p 2 --len 2 w1,w2
//   cyclift demo --p 2 --m 1 --case rank2m --gens u1,u2 --b t [--seed S] [--probes N]
//   cyclift verify report.json
//
// Every subcommand accepts --config FILE (a JSON object of flag values);
// flags given on the command line take precedence.
// Exit codes: 0 success, 1 certificate failure, 2 usage error.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "cyclift/cyclift.hpp"

namespace {

using namespace cyclift;

constexpr int kPass = 0;
constexpr int kCertificateFailure = 1;
constexpr int kUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

/// Identifiers appearing in the inputs, sorted.
std::vector<std::string> infer_variables(const std::vector<std::string>& inputs) {
  std::set<std::string> names;
  for (const auto& s : inputs)
    for (std::size_t i = 0; i < s.size();) {
      if (std::isalpha(static_cast<unsigned char>(s[i]))) {
        std::size_t j = i;
        while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
        names.insert(s.substr(i, j - i));
        i = j;
      } else {
        ++i;
      }
    }
  return {names.begin(), names.end()};
}

void write_output(const json& doc, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << doc.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Config files: {"p": 2, "gens": ["u1", "u2"], "reproducible": true, ...}.
// Keys become flags (underscores to dashes); a nested object keyed by the
// subcommand name overrides the flat keys. The generated flags are placed
// before the user's, and every option keeps its last value.

std::vector<std::string> config_flags(const json& cfg, const std::string& sub) {
  std::vector<std::string> out;
  auto emit = [&](const json& obj) {
    for (const auto& [key, value] : obj.items()) {
      if (value.is_object()) continue;
      std::string flag = "--" + key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      if (value.is_boolean()) {
        if (value.get<bool>()) out.push_back(flag);
        continue;
      }
      std::string v;
      if (value.is_string()) v = value.get<std::string>();
      else if (value.is_array()) {
        std::vector<std::string> parts;
        for (const auto& e : value) parts.push_back(e.is_string() ? e.get<std::string>() : e.dump());
        v = join(parts, ",");
      } else v = value.dump();
      out.push_back(flag);
      out.push_back(v);
    }
  };
  emit(cfg);
  if (cfg.contains(sub) && cfg[sub].is_object()) emit(cfg[sub]);
  return out;
}

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  // args[0] is the program; the subcommand is the first non-flag argument.
  std::size_t sub = 1;
  while (sub < args.size() && args[sub].rfind("-", 0) == 0) ++sub;
  if (sub >= args.size()) return args;
  std::vector<std::string> rest;
  std::string path;
  for (std::size_t i = sub + 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config " + path);
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("config " + path + ": " + e.what());
  }
  if (!cfg.is_object()) throw UsageError("config " + path + ": expected a JSON object");
  std::string name = args[sub];
  std::vector<std::string> out(args.begin(), args.begin() + static_cast<std::ptrdiff_t>(sub) + 1);
  // `witt add ...`: keep the second-level subcommand in front of the flags.
  if (name == "witt" && !rest.empty() && rest[0].rfind("-", 0) != 0) {
    out.push_back(rest[0]);
    name = rest[0];
    rest.erase(rest.begin());
  }
  auto flags = config_flags(cfg, name);
  out.insert(out.end(), flags.begin(), flags.end());
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

// ---------------------------------------------------------------------------

struct LiftOptions {
  std::uint32_t p = 2;
  std::size_t m = 1;
  std::size_t r = 0;
  std::string gens;
  std::string out;
  bool reproducible = false;
};

int run_lift(const LiftOptions& o) {
  const std::size_t r = o.r ? o.r : o.m;
  if (!is_prime(o.p)) throw UsageError("--p must be prime");
  if (o.m < 1) throw UsageError("--m must be at least 1");
  const FieldContext K = FieldContext::valued(o.p, r);
  std::vector<RationalFunction> a;
  for (const auto& g : split_commas(o.gens)) a.push_back(parse_expression(g, K));
  if (a.size() != o.m) throw UsageError("--gens must list exactly m = " + std::to_string(o.m) + " elements");
  const auto start = std::chrono::steady_clock::now();
  LiftedTower lt = cyclic_lift_inseparable(K, a);
  EmitOptions e;
  e.reproducible = o.reproducible;
  e.elapsed_s = seconds_since(start);
  json doc = to_json(lt, e);
  write_output(doc, o.out);
  if (!o.out.empty() && o.out != "-")
    std::cout << "certified cyclic tower of degree " << lt.field->degree() << " written to " << o.out << "\n";
  return lt.certified() ? kPass : kCertificateFailure;
}

struct WittOptions {
  std::string op;
  std::uint32_t p = 2;
  std::size_t len = 1;
  std::size_t max_len = kDefaultMaxWittLength;
  std::vector<std::string> args;
  bool as_json = false;
};

WittVector<RationalFunction> parse_witt(const std::string& s, const WittOptions& o,
                                        const std::vector<std::string>& names) {
  WittVector<RationalFunction> w{o.p, {}};
  for (const auto& c : split_commas(s)) w.x.push_back(parse_rational(c, o.p, names));
  if (w.length() != o.len)
    throw UsageError("Witt vector '" + s + "' has " + std::to_string(w.length()) + " components, expected " +
                     std::to_string(o.len));
  return w;
}

std::string print_witt(const WittVector<RationalFunction>& w, const std::vector<std::string>& names) {
  std::vector<std::string> parts;
  for (const auto& x : w.x) parts.push_back(print_rational(x, names));
  return join(parts, ",");
}

int run_witt(const WittOptions& o) {
  if (!is_prime(o.p)) throw UsageError("--p must be prime");
  if (o.len < 1 || o.len > o.max_len)
    throw UsageError("--len must lie in [1, " + std::to_string(o.max_len) + "]");
  const std::size_t want = o.op == "add" || o.op == "sub" ? 2 : 1;
  if (o.args.size() != want) throw UsageError("witt " + o.op + " takes " + std::to_string(want) + " vector(s)");
  ghost_calculus(o.p, o.len, o.max_len);

  if (o.op == "layers") {
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= o.len; ++i) names.push_back("x" + std::to_string(i));
    for (const auto& v : infer_variables(o.args))
      if (std::find(names.begin(), names.end(), v) == names.end()) names.push_back(v);
    if (names.size() > kMaxVars) throw UsageError("too many variables");
    auto omega = parse_witt(o.args[0], o, names);
    auto sys = asw_layer_equations(omega);
    std::vector<RationalFunction> gens;
    for (std::size_t i = 0; i < o.len; ++i) gens.push_back(RationalFunction::variable(i, o.p));
    const RationalFunction one(1, o.p);
    json layers = json::array();
    for (std::size_t i = 0; i < o.len; ++i) {
      const std::vector<RationalFunction> lower(gens.begin(), gens.begin() + static_cast<std::ptrdiff_t>(i));
      const std::string rhs = print_rational(sys.rhs(i, lower, one), names);
      const std::string shift = print_rational(sys.shift(i, lower, one), names);
      const std::string g = names[i];
      const std::string rel = artin_schreier_lhs(g, o.p) + " = " + rhs;
      const std::string sig = "sigma(" + g + ") = " + g + "+" + shift;
      if (o.as_json) layers.push_back({{"generator", g}, {"relation", rel}, {"rhs", rhs}, {"sigma_shift", shift}});
      else std::cout << rel << "    " << sig << "\n";
    }
    if (o.as_json) std::cout << json{{"header", {o.p, o.len}}, {"symbol", o.args[0]}, {"layers", layers}}.dump(2) << "\n";
    return kPass;
  }

  const auto names = infer_variables(o.args);
  if (names.size() > kMaxVars) throw UsageError("too many variables");
  auto a = parse_witt(o.args[0], o, names);
  WittVector<RationalFunction> r;
  if (o.op == "add") r = witt_add(a, parse_witt(o.args[1], o, names));
  else if (o.op == "sub") r = witt_sub(a, parse_witt(o.args[1], o, names));
  else if (o.op == "neg") r = witt_neg(a);
  else if (o.op == "frobenius") r = witt_frobenius(a);
  else if (o.op == "shift") r = verschiebung(a);
  else throw UsageError("unknown witt operation " + o.op);
  if (o.as_json) std::cout << witt_json(r, names).dump(2) << "\n";
  else std::cout << print_witt(r, names) << "\n";
  return kPass;
}

struct DemoOptions {
  DemoConfig cfg;
  std::string gens, which = "rank2m", out;
  bool reproducible = false;
};

int run_demo_cmd(DemoOptions o) {
  if (!is_prime(o.cfg.p)) throw UsageError("--p must be prime");
  if (o.cfg.m < 1) throw UsageError("--m must be at least 1");
  try {
    o.cfg.which = pair_case_from_string(o.which);
  } catch (const FormatError& e) {
    throw UsageError(e.what());
  }
  o.cfg.gens = split_commas(o.gens);
  const std::size_t need = o.cfg.which == PairCase::Rank2m ? 2 * o.cfg.m : o.cfg.m;
  if (o.cfg.gens.size() != need)
    throw UsageError("--gens must list " + std::to_string(need) + " elements for case " + o.which);
  if (o.cfg.which == PairCase::RankMPlusAS && o.cfg.as_witness.empty())
    throw UsageError("case rank-m-as needs --as-witness");
  if (o.cfg.r && o.cfg.r < need) throw UsageError("--r is smaller than the number of generators");
  // Validate expressions up front so that bad input is a usage error.
  const FieldContext K = demo_field(o.cfg);
  for (const auto& g : o.cfg.gens) parse_expression(g, K);
  parse_expression(o.cfg.b, K);
  if (!o.cfg.as_witness.empty()) parse_expression(o.cfg.as_witness, K);

  const auto start = std::chrono::steady_clock::now();
  DemoReport r = run_demo(o.cfg);
  EmitOptions e;
  e.reproducible = o.reproducible;
  e.elapsed_s = seconds_since(start);
  json doc = demo_json(r, o.cfg, e);
  write_output(doc, o.out);
  if (!o.out.empty() && o.out != "-")
    std::cout << (r.passed() ? "passing" : "FAILING") << " report written to " << o.out << "\n";
  return r.passed() ? kPass : kCertificateFailure;
}

int run_verify(const std::string& path, bool quiet) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError(path + ": not valid JSON: " + e.what());
  }
  VerifyResult v = verify(doc);
  if (v.ok) {
    if (!quiet) std::cout << "PASS " << v.schema << " " << path << "\n";
    return kPass;
  }
  std::cout << "FAIL " << (v.schema.empty() ? "?" : v.schema) << " " << path << "\n";
  for (const auto& p : v.problems) std::cout << "  " << p << "\n";
  return kCertificateFailure;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  try {
    args = expand_config(args);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  CLI::App app{"Cyclic towers over k(t), cyclic p-algebras and their certificates"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  auto note_config = [](CLI::App* sub) {
    sub->add_option("--config", "JSON file of flag values (command-line flags take precedence)");
  };

  LiftOptions lift;
  auto* lift_cmd = app.add_subcommand("lift", "cyclic extension with purely inseparable residue field");
  lift_cmd->add_option("--p", lift.p, "characteristic")->required();
  lift_cmd->add_option("--m", lift.m, "number of layers")->required();
  lift_cmd->add_option("--gens", lift.gens, "comma-separated unit lifts a_1..a_m")->required();
  lift_cmd->add_option("--r", lift.r, "number of residue variables u1..ur (default m)");
  lift_cmd->add_option("--out", lift.out, "output file (default stdout)");
  lift_cmd->add_flag("--reproducible", lift.reproducible, "fixed timestamp for byte-identical output");
  note_config(lift_cmd);

  WittOptions witt;
  auto* witt_cmd = app.add_subcommand("witt", "truncated Witt vector arithmetic");
  witt_cmd->require_subcommand(1);
  for (const char* op : {"add", "sub", "neg", "frobenius", "shift", "layers"}) {
    auto* c = witt_cmd->add_subcommand(op, std::string("witt ") + op);
    c->add_option("--p", witt.p, "characteristic")->required();
    c->add_option("--len", witt.len, "Witt length")->required();
    c->add_option("--max-len", witt.max_len, "Witt length bound");
    c->add_flag("--json", witt.as_json, "JSON output");
    c->add_option("vectors", witt.args, "comma-separated components");
    note_config(c);
    c->callback([&witt, op] { witt.op = op; });
  }

  DemoOptions demo;
  auto* demo_cmd = app.add_subcommand("demo", "two division algebras with disjoint residue fields");
  demo_cmd->add_option("--p", demo.cfg.p, "characteristic")->required();
  demo_cmd->add_option("--m", demo.cfg.m, "log_p of the degree")->required();
  demo_cmd->add_option("--case", demo.which, "rank2m or rank-m-as");
  demo_cmd->add_option("--gens", demo.gens, "comma-separated p-independent elements")->required();
  demo_cmd->add_option("--as-witness", demo.cfg.as_witness, "f outside the Artin-Schreier image (rank-m-as)");
  demo_cmd->add_option("--b", demo.cfg.b, "slot b");
  demo_cmd->add_option("--r", demo.cfg.r, "number of residue variables (default from case)");
  demo_cmd->add_option("--seed", demo.cfg.seed, "seed for reduced-norm probes");
  demo_cmd->add_option("--probes", demo.cfg.probes, "number of reduced-norm probes");
  demo_cmd->add_option("--out", demo.out, "output file (default stdout)");
  demo_cmd->add_flag("--reproducible", demo.reproducible, "fixed timestamp for byte-identical output");
  note_config(demo_cmd);

  std::string verify_path;
  bool quiet = false;
  auto* verify_cmd = app.add_subcommand("verify", "re-check a serialized tower, algebra, certificate or report");
  verify_cmd->add_option("path", verify_path, "JSON document")->required();
  verify_cmd->add_flag("--quiet", quiet, "print only failures");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*lift_cmd) return run_lift(lift);
    if (*witt_cmd) return run_witt(witt);
    if (*demo_cmd) return run_demo_cmd(demo);
    if (*verify_cmd) return run_verify(verify_path, quiet);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const WittShapeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const AlgebraError& e) {
    std::cerr << "certificate failure: " << e.what() << "\n";
    return kCertificateFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
