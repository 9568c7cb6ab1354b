#include <json.hpp>

#include "cslcheck/syntax.hpp"

namespace csl {

using json = nlohmann::json;

namespace {

const std::map<std::string, size_t> kRuleArity = {{"Skip", 0},   {"Seq", 2},   {"Assn", 0},   {"DAssn", 0},
                                                  {"SRAssn", 0}, {"SDAssn", 0}, {"RCond", 2}, {"Weak", 1},
                                                  {"Const", 1},  {"Frame", 1}};

const std::map<std::string, std::vector<std::string>> kRuleWitnesses = {
    {"Seq", {"mid"}},           {"Weak", {"pre_cert", "post_cert"}}, {"Const", {"xi", "theta"}},
    {"Frame", {"xi", "theta"}}, {"SRAssn", {"xi", "theta"}},         {"SDAssn", {"xi", "theta"}}};

const std::set<std::string> kCertRules = {"AP",    "TopI",   "BotE",   "AndI", "AndE", "StarI",
                                          "StarC", "StarA1", "StarA2", "Cut",  "Axiom"};

std::string at(const std::string& path, const std::string& field) { return path + "/" + field; }

std::string get_string(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) throw SyntaxError(path, "missing field '" + key + "'");
  if (!j[key].is_string()) throw SyntaxError(at(path, key), "expected a string");
  return j[key].get<std::string>();
}

template <typename F>
auto wrap(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const SyntaxError& e) {
    if (e.line() == 0) throw;
    throw SyntaxError(path, e.what());
  }
}

Formula formula_field(const json& j, const std::string& key, const std::string& path, SymbolTable& syms,
                      const std::optional<Env>& ctx) {
  std::string text = get_string(j, key, path);
  return wrap(at(path, key), [&] { return parse_formula(text, syms, ctx); });
}

Env env_field(const json& j, const std::string& key, const std::string& path) {
  std::string text = get_string(j, key, path);
  return wrap(at(path, key), [&] { return parse_env(text); });
}

SubstVal parse_subst_val(SchemaParam kind, const std::string& text, const std::string& path, SymbolTable& syms,
                         const std::optional<Env>& ctx) {
  SubstVal v;
  v.text = text;
  switch (kind) {
    case SchemaParam::Expr:
      v.kind = SubstVal::Kind::Expr;
      v.expr = wrap(path, [&] { return parse_expr(text, syms); });
      break;
    case SchemaParam::Env:
      v.kind = SubstVal::Kind::Env;
      v.env = wrap(path, [&] { return parse_env(text); });
      break;
    case SchemaParam::Formula:
      v.kind = SubstVal::Kind::Formula;
      v.formula = wrap(path, [&] { return parse_formula(text, syms, ctx); });
      break;
    case SchemaParam::Name:
      v.kind = SubstVal::Kind::Name;
      break;
  }
  return v;
}

Cert cert_from_json(const json& j, const std::string& path, SymbolTable& syms, std::optional<Env> ctx) {
  if (!j.is_object()) throw SyntaxError(path, "certificate node must be an object");
  Cert c;
  c.rule = get_string(j, "rule", path);
  if (!kCertRules.count(c.rule)) throw SyntaxError(path, "unknown certificate rule '" + c.rule + "'");
  if (j.contains("env")) {
    c.env = env_field(j, "env", path);
    ctx = c.env;
  }
  std::optional<Env> premise_ctx = c.rule == "StarI" ? std::nullopt : ctx;
  if (j.contains("premises")) {
    if (!j["premises"].is_array()) throw SyntaxError(at(path, "premises"), "expected an array");
    for (size_t i = 0; i < j["premises"].size(); ++i)
      c.premises.push_back(
          cert_from_json(j["premises"][i], path + "/premises/" + std::to_string(i), syms, premise_ctx));
  }
  if (j.contains("formula")) c.formula = formula_field(j, "formula", path, syms, ctx);
  if (j.contains("lhs")) c.lhs = formula_field(j, "lhs", path, syms, ctx);
  if (j.contains("rhs")) c.rhs = formula_field(j, "rhs", path, syms, ctx);
  if (j.contains("index")) {
    if (!j["index"].is_number_integer()) throw SyntaxError(at(path, "index"), "expected an integer");
    c.index = j["index"].get<int>();
  }
  if (c.rule == "Axiom") {
    if (!c.env) c.env = ctx;
    c.axiom = get_string(j, "name", path);
    if (j.contains("subst")) {
      if (!j["subst"].is_object()) throw SyntaxError(at(path, "subst"), "expected an object");
      for (const auto& [k, v] : j["subst"].items()) {
        if (!v.is_string()) throw SyntaxError(at(path, "subst/" + k), "expected a string");
        c.subst[k] = parse_subst_val(schema_param_kind(c.axiom, k), v.get<std::string>(), at(path, "subst/" + k),
                                     syms, ctx);
      }
    }
  }
  return c;
}

json cert_to_json(const Cert& c) {
  json j;
  j["rule"] = c.rule;
  if (!c.premises.empty()) {
    j["premises"] = json::array();
    for (const auto& p : c.premises) j["premises"].push_back(cert_to_json(p));
  }
  if (c.formula) j["formula"] = print_formula(*c.formula);
  if (c.lhs) j["lhs"] = print_formula(*c.lhs);
  if (c.rhs) j["rhs"] = print_formula(*c.rhs);
  if (c.env) j["env"] = env_str(*c.env);
  if (c.rule == "AndE") j["index"] = c.index;
  if (c.rule == "Axiom") {
    j["name"] = c.axiom;
    json s = json::object();
    for (const auto& [k, v] : c.subst) {
      switch (v.kind) {
        case SubstVal::Kind::Expr:
          s[k] = print_expr(*v.expr);
          break;
        case SubstVal::Kind::Env:
          s[k] = env_str(*v.env);
          break;
        case SubstVal::Kind::Formula:
          s[k] = print_formula(*v.formula);
          break;
        case SubstVal::Kind::Name:
          s[k] = v.text;
          break;
      }
    }
    j["subst"] = s;
  }
  return j;
}

ProofTree tree_from_json(const json& j, const std::string& path, SymbolTable& syms, const std::optional<Env>& inherited) {
  if (!j.is_object()) throw SyntaxError(path, "proof node must be an object");
  ProofTree t;
  t.rule = get_string(j, "rule", path);
  auto ar = kRuleArity.find(t.rule);
  if (ar == kRuleArity.end()) throw SyntaxError(path, "unknown rule name '" + t.rule + "'");
  if (!j.contains("conclusion") || !j["conclusion"].is_object()) throw SyntaxError(path, "missing field 'conclusion'");
  const json& cj = j["conclusion"];
  std::string cpath = at(path, "conclusion");
  if (cj.contains("env")) {
    t.concl.env = env_field(cj, "env", cpath);
  } else if (inherited) {
    t.concl.env = *inherited;
  } else {
    throw SyntaxError(cpath, "missing field 'env'");
  }
  t.concl.pre = formula_field(cj, "pre", cpath, syms, t.concl.env);
  t.concl.post = formula_field(cj, "post", cpath, syms, t.concl.env);
  std::string ptext = get_string(cj, "program", cpath);
  t.concl.prog = wrap(at(cpath, "program"), [&] { return parse_program(ptext, syms); });

  json wj = j.contains("witnesses") ? j["witnesses"] : json::object();
  std::string wpath = at(path, "witnesses");
  auto req = kRuleWitnesses.find(t.rule);
  if (req != kRuleWitnesses.end()) {
    for (const auto& w : req->second)
      if (!wj.contains(w)) throw SyntaxError(path, "missing witness field '" + w + "'");
  }
  if (wj.contains("mid")) t.mid = formula_field(wj, "mid", wpath, syms, t.concl.env);
  if (wj.contains("xi")) t.xi = env_field(wj, "xi", wpath);
  if (wj.contains("theta")) t.theta = env_field(wj, "theta", wpath);
  if (wj.contains("pre_cert")) t.pre_cert = cert_from_json(wj["pre_cert"], at(wpath, "pre_cert"), syms, t.concl.env);
  if (wj.contains("post_cert"))
    t.post_cert = cert_from_json(wj["post_cert"], at(wpath, "post_cert"), syms, t.concl.env);

  json kj = j.contains("children") ? j["children"] : json::array();
  if (!kj.is_array()) throw SyntaxError(at(path, "children"), "expected an array");
  if (kj.size() != ar->second)
    throw SyntaxError(path, "rule " + t.rule + " expects " + std::to_string(ar->second) + " children, got " +
                                std::to_string(kj.size()));
  std::optional<Env> child_env = t.concl.env;
  if ((t.rule == "Const" || t.rule == "Frame") && t.xi) child_env = t.xi;
  for (size_t i = 0; i < kj.size(); ++i)
    t.kids.push_back(tree_from_json(kj[i], path + "/children/" + std::to_string(i), syms, child_env));
  return t;
}

json tree_to_json(const ProofTree& t) {
  json j;
  j["rule"] = t.rule;
  j["conclusion"] = {{"env", env_str(t.concl.env)},
                     {"pre", print_formula(t.concl.pre)},
                     {"program", print_program(t.concl.prog)},
                     {"post", print_formula(t.concl.post)}};
  json w = json::object();
  if (t.mid) w["mid"] = print_formula(*t.mid);
  if (t.xi) w["xi"] = env_str(*t.xi);
  if (t.theta) w["theta"] = env_str(*t.theta);
  if (t.pre_cert) w["pre_cert"] = cert_to_json(*t.pre_cert);
  if (t.post_cert) w["post_cert"] = cert_to_json(*t.post_cert);
  if (!w.empty()) j["witnesses"] = w;
  j["children"] = json::array();
  for (const auto& k : t.kids) j["children"].push_back(tree_to_json(k));
  return j;
}

}  // namespace

SchemaParam schema_param_kind(const std::string& schema, const std::string& param) {
  static const std::map<std::string, std::map<std::string, SchemaParam>> table = {
      {"Ax_POTP", {{"x", SchemaParam::Name}, {"g", SchemaParam::Name}}},
      {"Ax_SPL", {{"r", SchemaParam::Name}, {"b", SchemaParam::Name}, {"s", SchemaParam::Name}}},
      {"Ax_MRG", {{"r", SchemaParam::Name}, {"b", SchemaParam::Name}, {"s", SchemaParam::Name}}},
      {"AuxPOTP1", {{"x", SchemaParam::Name}, {"theta", SchemaParam::Env}, {"target", SchemaParam::Env}}},
      {"AuxPOTP2",
       {{"c", SchemaParam::Name}, {"m", SchemaParam::Name}, {"d", SchemaParam::Expr}, {"xi", SchemaParam::Env}}},
      {"XorRem1", {{"k", SchemaParam::Name}, {"bit", SchemaParam::Name}}},
      {"XorRem2", {{"c", SchemaParam::Name}, {"k", SchemaParam::Name}, {"m", SchemaParam::Name}, {"bit", SchemaParam::Name}}},
      {"Relabel", {{"lhs", SchemaParam::Formula}, {"rhs", SchemaParam::Formula}}},
      {"CommAssoc", {{"lhs", SchemaParam::Formula}, {"rhs", SchemaParam::Formula}}},
      {"StarUnit", {{"lhs", SchemaParam::Formula}, {"rhs", SchemaParam::Formula}}},
  };
  static const std::set<std::string> expr_schemas = {"S0", "S1", "S2", "T0", "T1", "T2", "W1", "W2", "U1"};
  if (expr_schemas.count(schema)) return SchemaParam::Expr;
  auto it = table.find(schema);
  if (it == table.end()) return SchemaParam::Name;
  auto p = it->second.find(param);
  return p == it->second.end() ? SchemaParam::Name : p->second;
}

ProofFile parse_proof(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SyntaxError("", std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw SyntaxError("", "proof file must be a JSON object");
  ProofFile pf;
  if (j.contains("decls")) {
    if (!j["decls"].is_array()) throw SyntaxError("/decls", "expected an array");
    for (size_t i = 0; i < j["decls"].size(); ++i) {
      std::string path = "/decls/" + std::to_string(i);
      if (!j["decls"][i].is_string()) throw SyntaxError(path, "expected a string");
      FuncSym f = wrap(path, [&] { return parse_decl(j["decls"][i].get<std::string>()); });
      try {
        pf.syms.declare(f);
      } catch (const std::invalid_argument& e) {
        throw SyntaxError(path, e.what());
      }
      pf.decls.push_back(f);
    }
  }
  if (!j.contains("proof")) throw SyntaxError("", "missing field 'proof'");
  pf.root = tree_from_json(j["proof"], "/proof", pf.syms, std::nullopt);
  return pf;
}

Cert parse_cert(const std::string& json_text, SymbolTable& syms, const std::optional<Env>& ctx) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SyntaxError("", std::string("malformed JSON: ") + e.what());
  }
  return cert_from_json(j, "", syms, ctx);
}

std::string print_proof(const ProofFile& pf) {
  json j;
  j["decls"] = json::array();
  for (const auto& d : pf.decls) j["decls"].push_back(print_decl(d));
  j["proof"] = tree_to_json(pf.root);
  return j.dump(2) + "\n";
}

std::string print_cert(const Cert& c) { return cert_to_json(c).dump(2); }

}  // namespace csl
