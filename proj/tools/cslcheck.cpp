#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "cslcheck/corpus.hpp"
#include "cslcheck/hoare.hpp"
#include "cslcheck/properties.hpp"
#include "cslcheck/types.hpp"

using namespace csl;
using json = nlohmann::json;

namespace {

// Usage, parse and configuration errors map to exit status 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw UsageError("cannot write " + out);
  f << text;
}

// Leading `decl ...;` lines of a formula file are declarations.
std::string take_decls(const std::string& text, SymbolTable& syms) {
  std::istringstream in(text);
  std::string line, rest;
  bool body = false;
  while (std::getline(in, line)) {
    auto b = line.find_first_not_of(" \t");
    if (!body && b != std::string::npos && line.compare(b, 4, "decl") == 0) {
      syms.declare(parse_decl(line.substr(b)));
      continue;
    }
    if (!body && (b == std::string::npos || line[b] == '#')) continue;
    body = true;
    rest += line + "\n";
  }
  return rest;
}

Interp make_interp(const SymbolTable& syms, const std::vector<std::string>& binds) {
  Interp in;
  in.syms = syms;
  for (const auto& b : binds) {
    auto eq = b.find('=');
    if (eq == std::string::npos) throw UsageError("--bind expects sym=stub, got " + b);
    bind_stub(in, b.substr(0, eq), b.substr(eq + 1));
  }
  return in;
}

void check_budget_all(const Store& s, std::uint64_t budget) {
  for (const auto& [n, d] : s.family) {
    if (memory_bits(s.env, n) > budget)
      throw UsageError("memory of " + env_str(s.env) + " at n=" + std::to_string(n) + " needs " +
                       std::to_string(memory_bits(s.env, n)) + " bits, above the budget of " + std::to_string(budget));
  }
}

Store restrict_ns(const Store& s, const std::vector<unsigned>& ns) {
  if (ns.empty()) return s;
  Store out{s.env, {}};
  for (unsigned n : ns) {
    auto it = s.family.find(n);
    if (it == s.family.end()) throw UsageError("store has no distribution for n=" + std::to_string(n));
    out.family.emplace(n, it->second);
  }
  return out;
}

std::vector<Store> load_stores(const std::string& path) {
  std::string text = slurp(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError(path + ": malformed JSON: " + e.what());
  }
  std::vector<Store> out;
  if (j.is_object() && j.contains("stores")) {
    for (const auto& s : j["stores"]) out.push_back(parse_store(s.dump()));
  } else {
    out.push_back(parse_store(text));
  }
  return out;
}

struct Opts {
  std::vector<unsigned> ns;
  std::string epsilon = "0";
  std::uint64_t seed = 42;
  size_t cases = 200;
  std::vector<std::string> binds;
  std::string out;
  std::uint64_t budget = 22;
};

int cmd_check(const std::string& path, const std::string& axioms, bool verbose, const Opts& o) {
  ProofFile pf = parse_proof(slurp(path));
  AxiomRegistry reg = axioms.empty() ? AxiomRegistry::all() : AxiomRegistry::from_json(slurp(axioms));
  CheckResult r = check_triple(pf.root, pf.syms, reg);
  std::ostringstream os;
  if (verbose)
    for (const auto& v : r.nodes)
      os << (v.ok ? "ok    " : "FAIL  ") << v.path << " " << v.rule << (v.ok ? "" : "  " + v.reason) << "\n";
  if (r.ok)
    os << "ok: " << r.nodes.size() << " nodes checked\n";
  else
    os << "error at " << r.path << ": " << r.reason << "\n";
  emit(os.str(), o.out);
  return r.ok ? 0 : 1;
}

int cmd_run(const std::string& path, const std::string& input, const std::string& env_text, const Opts& o) {
  SymbolTable syms;
  Program p = parse_program(slurp(path), syms);
  Store s;
  if (!input.empty()) {
    s = parse_store(slurp(input));
    s = restrict_ns(s, o.ns);
  } else {
    if (env_text.empty()) throw UsageError("run needs --input or --env");
    s.env = parse_env(env_text);
    std::vector<unsigned> ns = o.ns.empty() ? std::vector<unsigned>{1, 2, 3} : o.ns;
    for (unsigned n : ns) {
      Row zero;
      for (const auto& [v, t] : s.env) zero.push_back(Value(t.width(n), '0'));
      s.family.emplace(n, dirac(s.env, n, zero));
    }
  }
  check_budget_all(s, o.budget);
  try {
    type_program(s.env, p, syms);
  } catch (const TypeError& e) {
    throw UsageError(std::string("ill-typed program: ") + e.what());
  }
  Interp in = make_interp(syms, o.binds);
  emit(store_json(store_run(p, s, in), 2) + "\n", o.out);
  return 0;
}

int cmd_eval(const std::string& fpath, const std::string& spath, const Opts& o) {
  SymbolTable syms;
  std::string body = take_decls(slurp(fpath), syms);
  Store s = restrict_ns(parse_store(slurp(spath)), o.ns);
  check_budget_all(s, o.budget);
  Formula f = parse_formula(body, syms, s.env);
  try {
    wf_formula(f, syms);
  } catch (const TypeError& e) {
    throw UsageError(std::string("ill-formed formula: ") + e.what());
  }
  if (!env_ext(f.ann, s.env)) throw UsageError("formula annotation " + env_str(f.ann) + " is not part of the store");
  Interp in = make_interp(syms, o.binds);
  Rational eps = parse_rat(o.epsilon);
  std::ostringstream os;
  bool all = true;
  for (const auto& [n, d] : s.family) {
    Store one{s.env, {{n, d}}};
    bool v = sat_formula(one, f, in, eps);
    all = all && v;
    os << "n=" << n << ": " << (v ? "true" : "false") << "\n";
  }
  os << "sat: " << (all ? "true" : "false") << "\n";
  emit(os.str(), o.out);
  return all ? 0 : 1;
}

int cmd_validate(const std::string& tpath, const std::vector<std::string>& stores, const Opts& o) {
  json j;
  try {
    j = json::parse(slurp(tpath));
  } catch (const json::parse_error& e) {
    throw UsageError(tpath + ": malformed JSON: " + e.what());
  }
  SymbolTable syms;
  if (j.contains("decls"))
    for (const auto& d : j["decls"]) syms.declare(parse_decl(d.get<std::string>()));
  for (const char* k : {"env", "pre", "program", "post"})
    if (!j.contains(k) || !j[k].is_string()) throw UsageError(tpath + ": missing string field '" + k + "'");
  HoareTriple t;
  t.env = parse_env(j["env"].get<std::string>());
  t.prog = parse_program(j["program"].get<std::string>(), syms);
  t.pre = parse_formula(j["pre"].get<std::string>(), syms, t.env);
  t.post = parse_formula(j["post"].get<std::string>(), syms, t.env);
  try {
    wf_triple(t, syms);
  } catch (const TypeError& e) {
    throw UsageError(std::string("ill-typed triple: ") + e.what());
  }
  std::vector<Store> corpus;
  for (const auto& p : stores)
    for (auto& s : load_stores(p)) {
      s = restrict_ns(s, o.ns);
      check_budget_all(s, o.budget);
      corpus.push_back(std::move(s));
    }
  Interp in = make_interp(syms, o.binds);
  ValidationReport rep = validate_triple(t, corpus, in, parse_rat(o.epsilon));
  std::ostringstream os;
  if (j.contains("note")) os << "# " << j["note"].get<std::string>() << "\n";
  os << "triple: {" << print_formula(t.pre) << "} " << print_program(t.prog) << " {" << print_formula(t.post) << "}\n";
  for (const auto& v : rep.stores) {
    os << "store " << v.index << ": ";
    if (!v.pre_holds)
      os << "precondition false, skipped\n";
    else
      os << (v.post_holds ? "pass" : "FAIL") << "\n";
    if (!v.detail.empty()) os << "  " << v.detail << "\n";
  }
  os << "checked " << rep.checked << ", failures " << rep.failures << "\n";
  emit(os.str(), o.out);
  return rep.failures == 0 ? 0 : 1;
}

int cmd_properties(const std::vector<std::string>& only, const std::string& mutant, const Opts& o) {
  PropertyConfig cfg;
  cfg.seed = o.seed;
  cfg.cases = o.cases;
  if (!o.ns.empty()) cfg.ns = o.ns;
  for (unsigned n : cfg.ns)
    if (n > 3) throw UsageError("property suites enumerate memories; n above 3 exceeds the desk-scale budget");
  if (!mutant.empty() && std::find(mutant_names().begin(), mutant_names().end(), mutant) == mutant_names().end())
    throw UsageError("unknown mutant " + mutant);
  cfg.mutant = mutant;
  std::vector<SuiteResult> res;
  if (only.empty()) {
    res = run_all(cfg);
  } else {
    for (const auto& s : only) {
      if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
        throw UsageError("unknown suite " + s);
      res.push_back(run_suite(s, cfg));
    }
  }
  emit(report_text(res), o.out);
  for (const auto& r : res)
    if (!r.ok()) return 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cslcheck: checker and test harness for Cryptographic Separation Logic proofs"};
  app.require_subcommand(1);
  Opts o;
  auto common = [&](CLI::App* c) {
    c->add_option("--n", o.ns, "tested parameters, e.g. 1,2,3")->delimiter(',');
    c->add_option("--epsilon", o.epsilon, "indistinguishability tolerance as a rational");
    c->add_option("--bind", o.binds, "bind a declared symbol to a stub: sym=identity|bitreverse|zeroextend");
    c->add_option("--out", o.out, "write the report to a file");
    c->add_option("--budget", o.budget, "maximum bits per memory");
  };

  std::string proof, axioms;
  bool verbose = false;
  auto* check = app.add_subcommand("check", "check a proof script");
  check->add_option("proof", proof)->required();
  check->add_option("--axioms", axioms, "axiom registry JSON");
  check->add_flag("--verbose", verbose, "print every node verdict");
  common(check);

  std::string program, input, env_text;
  auto* runc = app.add_subcommand("run", "run a program on an input store");
  runc->add_option("program", program)->required();
  runc->add_option("--input", input, "input store JSON");
  runc->add_option("--env", env_text, "environment for an all-zero input");
  common(runc);

  std::string formula, store;
  auto* eval = app.add_subcommand("eval", "evaluate a formula on a store");
  eval->add_option("formula", formula)->required();
  eval->add_option("store", store)->required();
  common(eval);

  std::string triple;
  std::vector<std::string> stores;
  auto* val = app.add_subcommand("validate", "validate a triple on a store corpus");
  val->add_option("triple", triple)->required();
  val->add_option("stores", stores)->required();
  common(val);

  std::vector<std::string> only;
  std::string mutant;
  auto* props = app.add_subcommand("properties", "run the property suites");
  props->add_option("--seed", o.seed);
  props->add_option("--cases", o.cases);
  props->add_option("--suite", only, "run only the named suites");
  props->add_option("--mutant", mutant, "inject a fault (test only)");
  common(props);

  unsigned h = 0;
  auto* corpus = app.add_subcommand("corpus", "write the generated key-stretching proof");
  corpus->set_help_flag("--help", "print this help message and exit");
  corpus->add_option("--h", h, "number of extra rounds")->required();
  corpus->add_option("--out", o.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*check) return cmd_check(proof, axioms, verbose, o);
    if (*runc) return cmd_run(program, input, env_text, o);
    if (*eval) return cmd_eval(formula, store, o);
    if (*val) return cmd_validate(triple, stores, o);
    if (*props) return cmd_properties(only, mutant, o);
    if (*corpus) {
      if (h > 4) throw UsageError("--h above 4 is outside the supported range");
      emit(print_proof(exp_proof(h)), o.out);
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SyntaxError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const TypeError& e) {
    std::cerr << "type error: " << e.what() << "\n";
    return 2;
  } catch (const DistError& e) {
    std::cerr << "store error: " << e.what() << "\n";
    return 2;
  } catch (const EvalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
