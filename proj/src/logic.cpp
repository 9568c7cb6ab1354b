#include "cslcheck/logic.hpp"

#include <algorithm>
#include <json.hpp>

#include "cslcheck/types.hpp"

namespace csl {

using FK = Formula::Kind;

// ------------------------------------------------------------ satisfaction

namespace {

Store lenient_project(const Store& s, const Env& target) {
  if (s.env == target) return s;
  return store_project(s, target);
}

bool close(const ValueDist& a, const ValueDist& b, const Rational& eps) {
  return eps == 0 ? a == b : stat_dist(a, b) <= eps;
}

}  // namespace

bool sat_atom(const Store& s, const Formula& a, const Interp& in, const Rational& epsilon) {
  for (const auto& [n, d] : s.family) {
    switch (a.kind) {
      case FK::U: {
        Type t = type_expr(s.env, a.ops[0], in.syms);
        ValueDist vd = eval_expr(s.env, a.ops[0], d, in);
        bool ok = epsilon == 0 ? is_uniform(vd, t.width(n)) : stat_dist(vd, value_uniform(t.width(n))) <= epsilon;
        if (!ok) return false;
        break;
      }
      case FK::Ind:
        if (!close(eval_expr(s.env, a.ops[0], d, in), eval_expr(s.env, a.ops[1], d, in), epsilon)) return false;
        break;
      case FK::Eq:
        if (eval_expr(s.env, a.ops[0], d, in) != eval_expr(s.env, a.ops[1], d, in)) return false;
        break;
      case FK::ESpl:
        for (const auto& [m, q] : d.p)
          if (eval_det(s.env, a.ops[0], n, m, in) != eval_det(s.env, a.ops[1], n, m, in)) return false;
        break;
      default:
        throw std::invalid_argument("sat_atom on a non-atomic formula");
    }
  }
  return true;
}

bool independent(const Store& s, const Env& a, const Env& b, const Rational& epsilon) {
  Store t = store_project(s, env_join(a, b));
  Store prod = store_tensor(store_project(t, a), store_project(t, b));
  return store_indist(prod, t, epsilon);
}

bool sat_formula(const Store& s0, const Formula& f, const Interp& in, const Rational& epsilon) {
  Store s = lenient_project(s0, f.ann);
  switch (f.kind) {
    case FK::Top:
      return true;
    case FK::Bot:
      return false;
    case FK::And:
      return sat_formula(store_project(s, f.kids[0].ann), f.kids[0], in, epsilon) &&
             sat_formula(store_project(s, f.kids[1].ann), f.kids[1], in, epsilon);
    case FK::Star: {
      const Env& xa = f.kids[0].ann;
      const Env& xb = f.kids[1].ann;
      if (!independent(s, xa, xb, epsilon)) return false;
      return sat_formula(store_project(s, xa), f.kids[0], in, epsilon) &&
             sat_formula(store_project(s, xb), f.kids[1], in, epsilon);
    }
    default:
      return sat_atom(s, f, in, epsilon);
  }
}

namespace {

std::string show_dist(const ValueDist& d) {
  std::string out = "{";
  for (const auto& [v, q] : d) {
    if (out.size() > 1) out += ", ";
    out += (v.empty() ? "eps" : v) + ": " + q.get_str();
  }
  return out + "}";
}

std::string explain_atom(const Store& s, const Formula& a, const Interp& in, const Rational& epsilon) {
  for (const auto& [n, d] : s.family) {
    Store one{s.env, {{n, d}}};
    if (sat_atom(one, a, in, epsilon)) continue;
    std::string head = print_formula(a) + " fails at n=" + std::to_string(n) + ": ";
    if (a.kind == FK::ESpl) {
      for (const auto& [m, q] : d.p) {
        auto l = eval_det(s.env, a.ops[0], n, m, in);
        auto r = eval_det(s.env, a.ops[1], n, m, in);
        if (l != r) return head + print_expr(a.ops[0]) + " = " + l + " but " + print_expr(a.ops[1]) + " = " + r;
      }
    }
    std::string out = head + print_expr(a.ops[0]) + " ~ " + show_dist(eval_expr(s.env, a.ops[0], d, in));
    if (a.kind == FK::U) {
      Type t = type_expr(s.env, a.ops[0], in.syms);
      return out + " vs uniform on " + std::to_string(t.width(n)) + " bits";
    }
    return out + " vs " + print_expr(a.ops[1]) + " ~ " + show_dist(eval_expr(s.env, a.ops[1], d, in));
  }
  return "";
}

}  // namespace

std::string explain_failure(const Store& s0, const Formula& f, const Interp& in, const Rational& epsilon) {
  if (sat_formula(s0, f, in, epsilon)) return "";
  Store s = lenient_project(s0, f.ann);
  switch (f.kind) {
    case FK::Top:
      return "";
    case FK::Bot:
      return "F is never satisfied";
    case FK::And:
    case FK::Star: {
      if (f.kind == FK::Star && !independent(s, f.kids[0].ann, f.kids[1].ann, epsilon))
        return "parts of " + print_formula(f) + " are not independent";
      for (const auto& k : f.kids) {
        std::string e = explain_failure(store_project(s, k.ann), k, in, epsilon);
        if (!e.empty()) return e;
      }
      return "";
    }
    default:
      return explain_atom(s, f, in, epsilon);
  }
}

namespace {

bool typed_under(const Env& env, const Formula& a, const SymbolTable& syms) {
  try {
    Formula g = with_ann(a, env);
    g.kids.clear();
    wf_formula(g, syms);
    return true;
  } catch (const TypeError&) {
    return false;
  }
}

// Every pair of disjoint sub-environments of env.
template <typename F>
bool any_split(const Env& env, F&& f) {
  std::vector<std::pair<std::string, Type>> vars(env.begin(), env.end());
  size_t total = 1;
  for (size_t i = 0; i < vars.size(); ++i) total *= 3;
  for (size_t code = 0; code < total; ++code) {
    Env a, b;
    size_t c = code;
    for (const auto& v : vars) {
      if (c % 3 == 1) a.insert(v);
      if (c % 3 == 2) b.insert(v);
      c /= 3;
    }
    if (f(a, b)) return true;
  }
  return false;
}

std::optional<Formula> annotate(const Store& s, const Formula& f, const Interp& in) {
  switch (f.kind) {
    case FK::Top:
      return Formula::top(s.env);
    case FK::Bot:
      return std::nullopt;
    case FK::And: {
      auto a = annotate(s, f.kids[0], in);
      if (!a) return std::nullopt;
      auto b = annotate(s, f.kids[1], in);
      if (!b) return std::nullopt;
      return Formula::conj(*a, *b, s.env);
    }
    case FK::Star: {
      std::optional<Formula> found;
      any_split(s.env, [&](const Env& xa, const Env& xb) {
        if (!independent(s, xa, xb)) return false;
        auto a = annotate(store_project(s, xa), f.kids[0], in);
        if (!a) return false;
        auto b = annotate(store_project(s, xb), f.kids[1], in);
        if (!b) return false;
        found = Formula::star(*a, *b, s.env);
        return true;
      });
      return found;
    }
    default:
      if (!typed_under(s.env, f, in.syms)) return std::nullopt;
      if (!sat_atom(s, with_ann(f, s.env), in)) return std::nullopt;
      return with_ann(f, s.env);
  }
}

}  // namespace

bool sat_bi(const Store& s, const Formula& f, const Interp& in) {
  switch (f.kind) {
    case FK::Top:
      return true;
    case FK::Bot:
      return false;
    case FK::And:
      return sat_bi(s, f.kids[0], in) && sat_bi(s, f.kids[1], in);
    case FK::Star:
      return any_split(s.env, [&](const Env& xa, const Env& xb) {
        return independent(s, xa, xb) && sat_bi(store_project(s, xa), f.kids[0], in) &&
               sat_bi(store_project(s, xb), f.kids[1], in);
      });
    default:
      return typed_under(s.env, f, in.syms) && sat_atom(s, with_ann(f, s.env), in);
  }
}

std::optional<Formula> find_annotation(const Store& s, const Formula& f, const Interp& in) {
  return annotate(s, f, in);
}

// ---------------------------------------------------------------- axioms

const std::vector<std::string>& schema_names() {
  static const std::vector<std::string> names = {
      "S0",      "S1",     "S2",       "T0",       "T1",      "T2",      "W1",        "W2",       "U1",
      "Ax_POTP", "Ax_SPL", "Ax_MRG",   "AuxPOTP1", "AuxPOTP2", "XorRem1", "XorRem2", "Relabel", "CommAssoc",
      "StarUnit"};
  return names;
}

AxiomRegistry AxiomRegistry::all() {
  AxiomRegistry r;
  for (const auto& n : schema_names()) r.enabled.insert(n);
  return r;
}

AxiomRegistry AxiomRegistry::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  if (!j.contains("enabled") || !j["enabled"].is_array())
    throw std::invalid_argument("axiom registry needs an 'enabled' array");
  AxiomRegistry r;
  const auto& known = schema_names();
  for (const auto& e : j["enabled"]) {
    std::string n = e.get<std::string>();
    if (std::find(known.begin(), known.end(), n) == known.end())
      throw std::invalid_argument("axiom registry lists unknown schema " + n);
    r.enabled.insert(n);
  }
  return r;
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& reason) { throw ProofError(path, reason); }

const SubstVal& param(const std::map<std::string, SubstVal>& s, const std::string& k, SubstVal::Kind kind,
                      const std::string& path) {
  auto it = s.find(k);
  if (it == s.end()) fail(path, "missing substitution for '" + k + "'");
  if (it->second.kind != kind) fail(path, "substitution for '" + k + "' has the wrong kind");
  return it->second;
}

Expr p_expr(const std::map<std::string, SubstVal>& s, const std::string& k, const std::string& path) {
  return *param(s, k, SubstVal::Kind::Expr, path).expr;
}
std::string p_name(const std::map<std::string, SubstVal>& s, const std::string& k, const std::string& path) {
  return param(s, k, SubstVal::Kind::Name, path).text;
}
Env p_env(const std::map<std::string, SubstVal>& s, const std::string& k, const std::string& path) {
  return *param(s, k, SubstVal::Kind::Env, path).env;
}
Formula p_formula(const std::map<std::string, SubstVal>& s, const std::string& k, const std::string& path) {
  return *param(s, k, SubstVal::Kind::Formula, path).formula;
}

Formula atom1(FK k, const Env& a, Expr e) { return Formula::atom(k, a, {std::move(e)}); }
Formula atom2(FK k, const Env& a, Expr e, Expr g) { return Formula::atom(k, a, {std::move(e), std::move(g)}); }
Expr V(const std::string& v) { return Expr::var(v); }

Type var_type(const Env& env, const std::string& v, const std::string& path) {
  auto it = env.find(v);
  if (it == env.end()) fail(path, "side condition violated: " + v + " not in " + env_str(env));
  return it->second;
}

void need(bool cond, const std::string& path, const std::string& what) {
  if (!cond) fail(path, "side condition violated: " + what);
}

Env single(const Env& env, const std::string& v, const std::string& path) { return {{v, var_type(env, v, path)}}; }

bool relabel_ok(const Formula& a, const Formula& b) {
  if (a.kind != b.kind || a.ops != b.ops) return false;
  if (a.kind == FK::And) return relabel_ok(a.kids[0], b.kids[0]) && relabel_ok(a.kids[1], b.kids[1]);
  if (a.kind == FK::Star) {
    for (int i = 0; i < 2; ++i)
      if (!env_ext(b.kids[i].ann, a.kids[i].ann) || !relabel_ok(a.kids[i], b.kids[i])) return false;
  }
  return true;
}

// Leaves of a spine of `kind`; for the right-hand side internal Star nodes must be minimal.
bool flatten_spine(const Formula& f, FK kind, bool root, bool require_minimal, std::vector<Formula>& out, Env& covered) {
  if (f.kind != kind) {
    out.push_back(f);
    covered = f.ann;
    return true;
  }
  Env ca, cb;
  if (!flatten_spine(f.kids[0], kind, false, require_minimal, out, ca)) return false;
  if (!flatten_spine(f.kids[1], kind, false, require_minimal, out, cb)) return false;
  covered = ca;
  for (const auto& kv : cb) covered.insert(kv);
  if (kind == FK::Star && require_minimal && !root && f.ann != covered) return false;
  return true;
}

std::vector<std::string> leaf_keys(const std::vector<Formula>& leaves, bool drop_units) {
  std::vector<std::string> out;
  for (const auto& l : leaves) {
    if (drop_units && l.kind == FK::Top && l.ann.empty()) continue;
    out.push_back(print_formula(l));
  }
  std::sort(out.begin(), out.end());
  return out;
}

void comm_assoc(const Formula& lhs, const Formula& rhs, const std::string& path) {
  if (lhs.kind == FK::Star && rhs.kind == FK::Star) {
    std::vector<Formula> ll, rl;
    Env c1, c2;
    flatten_spine(lhs, FK::Star, true, false, ll, c1);
    if (!flatten_spine(rhs, FK::Star, true, true, rl, c2))
      fail(path, "side condition violated: inner separating conjunctions of the right-hand side must carry the join of their parts");
    need(leaf_keys(ll, true) == leaf_keys(rl, true), path, "the two sides have different separated parts");
    return;
  }
  if (lhs.kind == FK::And && rhs.kind == FK::And) {
    std::vector<Formula> ll, rl;
    Env c1, c2;
    flatten_spine(lhs, FK::And, true, false, ll, c1);
    flatten_spine(rhs, FK::And, true, false, rl, c2);
    auto have = leaf_keys(ll, false);
    for (const auto& r : rl) {
      if (r.kind == FK::Top) continue;
      need(std::binary_search(have.begin(), have.end(), print_formula(r)), path,
           "conjunct " + print_formula(r) + " does not occur on the left-hand side");
    }
    return;
  }
  fail(path, "side condition violated: both sides must be separating conjunctions or both conjunctions");
}

bool unit_pair(const Formula& a, const Formula& b) {
  if (a.kind != FK::Star) return false;
  for (int i = 0; i < 2; ++i) {
    const Formula& u = a.kids[i];
    const Formula& phi = a.kids[1 - i];
    if (u.kind == FK::Top && u.ann.empty() && b == with_ann(phi, a.ann) && formula_ext(phi, b)) return true;
  }
  return false;
}

}  // namespace

namespace {

Entailment instantiate_raw(const std::string& name, const std::map<std::string, SubstVal>& s,
                           const std::optional<Env>& env, const SymbolTable& syms, const std::string& path) {
  const auto& known = schema_names();
  if (std::find(known.begin(), known.end(), name) == known.end()) fail(path, "unknown schema " + name);

  if (name == "Relabel" || name == "CommAssoc" || name == "StarUnit") {
    Formula lhs = p_formula(s, "lhs", path);
    Formula rhs = p_formula(s, "rhs", path);
    need(lhs.ann == rhs.ann, path, "both sides carry the same annotation");
    if (env) need(lhs.ann == *env, path, "annotation equals " + env_str(*env));
    if (name == "Relabel")
      need(relabel_ok(lhs, rhs), path, "right-hand side relabels the left-hand side, shrinking separated parts only");
    else if (name == "CommAssoc")
      comm_assoc(lhs, rhs, path);
    else
      need(unit_pair(lhs, rhs) || unit_pair(rhs, lhs), path, "one side is the other separated from an empty truth");
    return {lhs, rhs};
  }

  if (!env) fail(path, "schema " + name + " needs an environment");
  const Env& D = *env;

  if (name == "S0" || name == "T0") {
    Expr e = p_expr(s, "e", path);
    return {Formula::top(D), atom2(name == "S0" ? FK::Ind : FK::Eq, D, e, e)};
  }
  if (name == "S1" || name == "T1") {
    FK k = name == "S1" ? FK::Ind : FK::Eq;
    Expr e = p_expr(s, "e", path), g = p_expr(s, "g", path);
    return {atom2(k, D, e, g), atom2(k, D, g, e)};
  }
  if (name == "S2" || name == "T2") {
    FK k = name == "S2" ? FK::Ind : FK::Eq;
    Expr e = p_expr(s, "e", path), g = p_expr(s, "g", path), h = p_expr(s, "h", path);
    return {Formula::conj(atom2(k, D, e, g), atom2(k, D, g, h), D), atom2(k, D, e, h)};
  }
  if (name == "W1") {
    Expr e = p_expr(s, "e", path), g = p_expr(s, "g", path);
    return {atom2(FK::Eq, D, e, g), atom2(FK::Ind, D, e, g)};
  }
  if (name == "W2") {
    Expr d = p_expr(s, "d", path), c = p_expr(s, "c", path);
    return {atom2(FK::ESpl, D, d, c), atom2(FK::Eq, D, d, c)};
  }
  if (name == "U1") {
    Expr e = p_expr(s, "e", path), g = p_expr(s, "g", path);
    return {Formula::conj(atom2(FK::Ind, D, e, g), atom1(FK::U, D, e), D), atom1(FK::U, D, g)};
  }
  if (name == "Ax_POTP") {
    std::string x = p_name(s, "x", path), g = p_name(s, "g", path);
    need(var_type(D, x, path) == Type::str(SizePoly::n()), path, "Δ(" + x + ") = Str[n]");
    const FuncSym* f = syms.find(g);
    need(f != nullptr, path, g + " is a declared symbol");
    need(f->kind == SymKind::Det && f->args.size() == 1, path, g + " is deterministic and unary");
    need(f->args[0] == Type::str(SizePoly::n()), path, g + " takes Str[n]");
    auto grow = f->result.is_bool() ? std::nullopt : f->result.size.minus(SizePoly::n());
    need(grow && !(*grow == SizePoly::constant(0)), path, g + " maps Str[n] to Str[p] with p(n) > n");
    return {atom1(FK::U, D, V(x)), atom1(FK::U, D, Expr::app(g, {V(x)}))};
  }
  if (name == "Ax_SPL" || name == "Ax_MRG") {
    std::string r = p_name(s, "r", path), b = p_name(s, "b", path), sv = p_name(s, "s", path);
    need(r != b && b != sv && r != sv, path, "r, b, s are distinct");
    Type tr = var_type(D, r, path), tb = var_type(D, b, path), ts = var_type(D, sv, path);
    need(tb.is_bool(), path, "Ξ(" + b + ") = Bool");
    need(!tr.is_bool() && !ts.is_bool(), path, r + " and " + sv + " are strings");
    if (name == "Ax_SPL") {
      need(tr.size == ts.size + SizePoly::constant(1), path, "Ξ(" + r + ") = Str[p+1] and Ξ(" + sv + ") = Str[p]");
      Formula lhs = Formula::conj(
          Formula::conj(atom1(FK::U, D, V(r)), atom2(FK::ESpl, D, V(b), Expr::app("head", {V(r)})), D),
          atom2(FK::ESpl, D, V(sv), Expr::app("tail", {V(r)})), D);
      Formula rhs = Formula::star(atom1(FK::U, single(D, b, path), V(b)), atom1(FK::U, single(D, sv, path), V(sv)), D);
      return {lhs, rhs};
    }
    need(ts.size == tr.size + SizePoly::constant(1), path, "Ξ(" + r + ") = Str[p] and Ξ(" + sv + ") = Str[p+1]");
    Env rb = {{r, tr}, {b, tb}};
    Formula lhs = Formula::conj(
        Formula::star(atom1(FK::U, single(D, r, path), V(r)), atom1(FK::U, single(D, b, path), V(b)), rb),
        atom2(FK::ESpl, D, V(sv), Expr::app("concat", {V(r), V(b)})), D);
    return {lhs, atom1(FK::U, D, V(sv))};
  }
  if (name == "AuxPOTP1") {
    std::string x = p_name(s, "x", path);
    Env theta = p_env(s, "theta", path), target = p_env(s, "target", path);
    need(var_type(D, x, path) == Type::str(SizePoly::n()), path, "Δ(" + x + ") = Str[n]");
    need(!theta.count(x), path, x + " ∉ dom(Θ)");
    need(env_ext(target, theta), path, "target ⊑ Θ");
    Env dx = single(D, x, path);
    need(env_ext(env_join(dx, theta), D), path, x + " ⊎ Θ ⊑ Δ");
    Formula lhs = Formula::star(
        Formula::conj(Formula::top({}), atom2(FK::Eq, dx, V(x), Expr::app("rnd", {})), dx), Formula::top(theta), D);
    Formula rhs = Formula::star(atom1(FK::U, dx, V(x)), Formula::top(target), D);
    return {lhs, rhs};
  }
  if (name == "AuxPOTP2") {
    std::string c = p_name(s, "c", path), m = p_name(s, "m", path);
    Expr d = p_expr(s, "d", path);
    Env xi = p_env(s, "xi", path);
    need(c != m, path, "c and m are distinct");
    Type tc = var_type(D, c, path), tm = var_type(D, m, path);
    need(!tm.is_bool() && tc == tm, path, "Δ(" + m + ") = Δ(" + c + ") = Str[p]");
    need(!xi.count(c) && !xi.count(m), path, c + ", " + m + " ∉ dom(Ξ)");
    Type td;
    try {
      td = type_expr(xi, d, syms);
    } catch (const TypeError& e) {
      fail(path, std::string("side condition violated: Ξ types d: ") + e.what());
    }
    need(td == tm, path, "Ξ ⊢ d : " + tm.str());
    need(is_det(d, syms), path, "d is deterministic");
    Env dm = single(D, m, path), dc = single(D, c, path);
    Env big = env_join(xi, env_join(dc, dm));
    need(env_ext(big, D), path, "Ξ ⊎ {" + c + ", " + m + "} ⊑ Δ");
    Formula lhs = Formula::conj(atom2(FK::ESpl, big, V(c), Expr::app("xor", {V(m), d})),
                                Formula::star(atom1(FK::U, xi, d), Formula::top(dm), D), D);
    Formula rhs = Formula::star(Formula::top(dm), atom1(FK::U, dc, V(c)), D);
    return {lhs, rhs};
  }
  if (name == "XorRem1" || name == "XorRem2") {
    std::string k = p_name(s, "k", path), bit = p_name(s, "bit", path);
    need(bit == "0" || bit == "1", path, "bit is 0 or 1");
    need(var_type(D, k, path).is_bool(), path, "Δ(" + k + ") = Bool");
    Env dk = single(D, k, path);
    Expr bv = Expr::app(bit, {});
    if (name == "XorRem1") return {atom2(FK::ESpl, D, V(k), bv), Formula::conj(Formula::top(D), atom2(FK::ESpl, dk, V(k), bv), D)};
    std::string c = p_name(s, "c", path), m = p_name(s, "m", path);
    need(c != k && c != m && k != m, path, "c, k, m are distinct");
    need(var_type(D, c, path).is_bool() && var_type(D, m, path).is_bool(), path, "c and m are Bool");
    Expr v = bit == "1" ? Expr::app("not", {V(m)}) : V(m);
    Formula lhs = Formula::conj(atom2(FK::ESpl, D, V(c), v), atom2(FK::ESpl, dk, V(k), bv), D);
    return {lhs, atom2(FK::ESpl, D, V(c), Expr::app("xor", {V(k), V(m)}))};
  }
  fail(path, "unknown schema " + name);
}

void well_formed(const Formula& f, const SymbolTable& syms, const std::string& path, const char* side) {
  try {
    wf_formula(f, syms);
  } catch (const TypeError& e) {
    fail(path, std::string("side condition violated: ill-formed ") + side + ": " + e.what());
  }
}

}  // namespace

Entailment instantiate_axiom(const std::string& name, const std::map<std::string, SubstVal>& s,
                             const std::optional<Env>& env, const SymbolTable& syms, const std::string& path) {
  Entailment out = instantiate_raw(name, s, env, syms, path);
  well_formed(out.lhs, syms, path, "left-hand side");
  well_formed(out.rhs, syms, path, "right-hand side");
  return out;
}

// ---------------------------------------------------------- Hilbert system

namespace {

std::string pp(const std::string& path, size_t i) { return path + "/premises/" + std::to_string(i); }

void arity(const Cert& c, size_t k, const std::string& path) {
  if (c.premises.size() != k)
    fail(path, c.rule + " expects " + std::to_string(k) + " premises, got " + std::to_string(c.premises.size()));
}

const Formula& field(const std::optional<Formula>& f, const char* name, const Cert& c, const std::string& path) {
  if (!f) fail(path, c.rule + " needs field '" + name + "'");
  return *f;
}

}  // namespace

Entailment check_hilbert(const Cert& c, const SymbolTable& syms, const AxiomRegistry& reg, const std::string& path) {
  Entailment out;
  bool lhs_input = false, rhs_input = false;
  if (c.rule == "AP") {
    arity(c, 0, path);
    const Formula& f = field(c.formula, "formula", c, path);
    out = {f, f};
  } else if (c.rule == "TopI") {
    arity(c, 0, path);
    const Formula& l = field(c.lhs, "lhs", c, path);
    out = {l, Formula::top(l.ann)};
    lhs_input = true;
  } else if (c.rule == "BotE") {
    arity(c, 0, path);
    const Formula& r = field(c.rhs, "rhs", c, path);
    out = {Formula::bot(r.ann), r};
    rhs_input = true;
  } else if (c.rule == "AndI") {
    arity(c, 2, path);
    Entailment a = check_hilbert(c.premises[0], syms, reg, pp(path, 0));
    Entailment b = check_hilbert(c.premises[1], syms, reg, pp(path, 1));
    if (!(a.lhs == b.lhs)) fail(path, "premises of AndI have different left-hand sides");
    const Env& D = a.lhs.ann;
    if (c.rhs) {
      const Formula& r = *c.rhs;
      if (r.kind != FK::And || r.ann != D) fail(path, "AndI conclusion must be a conjunction annotated " + env_str(D));
      if (!formula_ext(r.kids[0], a.rhs)) fail(path, "side condition violated: first conjunct does not extend to the first premise");
      if (!formula_ext(r.kids[1], b.rhs)) fail(path, "side condition violated: second conjunct does not extend to the second premise");
      out = {a.lhs, r};
    } else {
      out = {a.lhs, Formula::conj(a.rhs, b.rhs, D)};
    }
    rhs_input = true;
  } else if (c.rule == "AndE") {
    arity(c, 1, path);
    Entailment a = check_hilbert(c.premises[0], syms, reg, pp(path, 0));
    if (a.rhs.kind != FK::And) fail(path, "AndE premise does not conclude a conjunction");
    if (c.index != 1 && c.index != 2) fail(path, "AndE index must be 1 or 2, got " + std::to_string(c.index));
    out = {a.lhs, with_ann(a.rhs.kids[c.index - 1], a.rhs.ann)};
  } else if (c.rule == "StarI") {
    arity(c, 2, path);
    if (!c.env) fail(path, "StarI needs field 'env'");
    Entailment a = check_hilbert(c.premises[0], syms, reg, pp(path, 0));
    Entailment b = check_hilbert(c.premises[1], syms, reg, pp(path, 1));
    if (!env_disjoint(a.lhs.ann, b.lhs.ann)) fail(path, "side condition violated: premise environments overlap");
    if (!env_ext(env_join(a.lhs.ann, b.lhs.ann), *c.env))
      fail(path, "side condition violated: premise environments do not extend into " + env_str(*c.env));
    out = {Formula::star(a.lhs, b.lhs, *c.env), Formula::star(a.rhs, b.rhs, *c.env)};
  } else if (c.rule == "StarC") {
    arity(c, 0, path);
    const Formula& f = field(c.formula, "formula", c, path);
    if (f.kind != FK::Star) fail(path, "StarC applies to a separating conjunction");
    out = {f, Formula::star(f.kids[1], f.kids[0], f.ann)};
  } else if (c.rule == "StarA1") {
    arity(c, 0, path);
    const Formula& f = field(c.formula, "formula", c, path);
    if (f.kind != FK::Star || f.kids[0].kind != FK::Star) fail(path, "StarA1 applies to ((φ * ψ) * ξ)");
    const Formula& in = f.kids[0];
    if (!env_disjoint(in.kids[0].ann, in.kids[1].ann) || in.ann != env_join(in.kids[0].ann, in.kids[1].ann))
      fail(path, "side condition violated: inner separating conjunction must carry the join of its parts");
    if (!env_disjoint(in.kids[1].ann, f.kids[1].ann)) fail(path, "side condition violated: overlapping environments");
    Formula right = Formula::star(in.kids[1], f.kids[1], env_join(in.kids[1].ann, f.kids[1].ann));
    out = {f, Formula::star(in.kids[0], right, f.ann)};
  } else if (c.rule == "StarA2") {
    arity(c, 0, path);
    const Formula& f = field(c.formula, "formula", c, path);
    if (f.kind != FK::Star || f.kids[1].kind != FK::Star) fail(path, "StarA2 applies to (φ * (ψ * ξ))");
    const Formula& in = f.kids[1];
    if (!env_disjoint(in.kids[0].ann, in.kids[1].ann) || in.ann != env_join(in.kids[0].ann, in.kids[1].ann))
      fail(path, "side condition violated: inner separating conjunction must carry the join of its parts");
    if (!env_disjoint(f.kids[0].ann, in.kids[0].ann)) fail(path, "side condition violated: overlapping environments");
    Formula left = Formula::star(f.kids[0], in.kids[0], env_join(f.kids[0].ann, in.kids[0].ann));
    out = {f, Formula::star(left, in.kids[1], f.ann)};
  } else if (c.rule == "Cut") {
    if (c.premises.size() < 2) fail(path, "Cut expects at least 2 premises, got " + std::to_string(c.premises.size()));
    Entailment acc = check_hilbert(c.premises[0], syms, reg, pp(path, 0));
    for (size_t i = 1; i < c.premises.size(); ++i) {
      Entailment nx = check_hilbert(c.premises[i], syms, reg, pp(path, i));
      if (!(nx.lhs == acc.rhs))
        fail(pp(path, i), "left-hand side " + print_formula(nx.lhs) + " does not match the previous conclusion " +
                              print_formula(acc.rhs));
      acc.rhs = nx.rhs;
    }
    out = acc;
  } else if (c.rule == "Axiom") {
    arity(c, 0, path);
    if (!reg.enabled.count(c.axiom)) {
      const auto& known = schema_names();
      if (std::find(known.begin(), known.end(), c.axiom) == known.end()) fail(path, "unknown schema " + c.axiom);
      fail(path, "schema " + c.axiom + " is disabled in the axiom registry");
    }
    out = instantiate_axiom(c.axiom, c.subst, c.env, syms, path);
  } else {
    fail(path, "unknown certificate rule " + c.rule);
  }

  if (c.lhs && !lhs_input && !(*c.lhs == out.lhs))
    fail(path, "stated left-hand side differs from the derived " + print_formula(out.lhs));
  if (c.rhs && !rhs_input && !(*c.rhs == out.rhs))
    fail(path, "stated right-hand side differs from the derived " + print_formula(out.rhs));
  if (out.lhs.ann != out.rhs.ann)
    fail(path, "sides carry different annotations " + env_str(out.lhs.ann) + " and " + env_str(out.rhs.ann));
  well_formed(out.lhs, syms, path, "left-hand side");
  well_formed(out.rhs, syms, path, "right-hand side");
  return out;
}

}  // namespace csl
