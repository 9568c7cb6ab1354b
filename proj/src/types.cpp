#include "cslcheck/types.hpp"

namespace csl {

namespace {

std::string sub(const std::string& path, const std::string& step) { return path.empty() ? step : path + "/" + step; }

[[noreturn]] void mismatch(const std::string& path, const Type& expected, const Type& got) {
  throw TypeError(path, "expected " + expected.str() + ", got " + got.str());
}

// Width of a string-like operand: Bool counts as a one-bit string.
SizePoly bit_width(const Type& t) { return t.is_bool() ? SizePoly::constant(1) : t.size; }

void check_arity(const Expr& e, size_t k, const std::string& path) {
  if (e.args.size() != k)
    throw TypeError(path, "arity mismatch for " + e.name + ": expected " + std::to_string(k) + " arguments, got " +
                              std::to_string(e.args.size()));
}

void check_idx_count(const Expr& e, size_t max, const std::string& path) {
  if (e.idx.size() > max) throw TypeError(path, "too many size indices on " + e.name);
}

Type type_builtin(const Env& env, const Expr& e, const SymbolTable& syms, const std::string& path) {
  std::vector<Type> at;
  for (size_t i = 0; i < e.args.size(); ++i)
    at.push_back(type_expr(env, e.args[i], syms, sub(path, "args/" + std::to_string(i))));
  const std::string& f = e.name;
  if (f == "0" || f == "1") {
    check_arity(e, 0, path);
    check_idx_count(e, 0, path);
    return Type::boolean();
  }
  if (f == "rnd") {
    check_arity(e, 0, path);
    check_idx_count(e, 0, path);
    return Type::str(SizePoly::n());
  }
  if (f == "not") {
    check_arity(e, 1, path);
    check_idx_count(e, 0, path);
    if (!at[0].is_bool()) mismatch(sub(path, "args/0"), Type::boolean(), at[0]);
    return Type::boolean();
  }
  if (f == "setzero") {
    check_arity(e, 0, path);
    check_idx_count(e, 1, path);
    if (e.idx.empty()) throw TypeError(path, "unresolvable size annotation on setzero");
    return Type::str(e.idx[0]);
  }
  if (f == "head" || f == "tail") {
    check_arity(e, 1, path);
    check_idx_count(e, 1, path);
    const Type& a = at[0];
    std::string ap = sub(path, "args/0");
    if (a.is_bool()) throw TypeError(ap, "expected Str[p+1], got Bool");
    auto rest = a.size.minus(SizePoly::constant(1));
    if (!rest) throw TypeError(ap, "expected Str[p+1], got " + a.str());
    if (!e.idx.empty() && !(e.idx[0] == *rest)) mismatch(ap, Type::str(e.idx[0] + SizePoly::constant(1)), a);
    return f == "head" ? Type::boolean() : Type::str(*rest);
  }
  if (f == "xor") {
    check_arity(e, 2, path);
    check_idx_count(e, 1, path);
    if (!(at[0] == at[1])) mismatch(sub(path, "args/1"), at[0], at[1]);
    if (!e.idx.empty()) {
      Type want = Type::str(e.idx[0]);
      if (!(at[0] == want)) mismatch(sub(path, "args/0"), want, at[0]);
    }
    return at[0];
  }
  if (f == "concat") {
    check_arity(e, 2, path);
    check_idx_count(e, 2, path);
    if (e.idx.size() == 1) throw TypeError(path, "concat takes zero or two size indices");
    if (e.idx.size() == 2) {
      for (int i = 0; i < 2; ++i) {
        if (!(bit_width(at[i]) == e.idx[i])) mismatch(sub(path, "args/" + std::to_string(i)), Type::str(e.idx[i]), at[i]);
      }
    }
    return Type::str(bit_width(at[0]) + bit_width(at[1]));
  }
  throw TypeError(path, "unknown function symbol " + f);
}

void wf_rec(const Formula& f, const SymbolTable& syms, const std::string& path) {
  switch (f.kind) {
    case Formula::Kind::Top:
    case Formula::Kind::Bot:
      return;
    case Formula::Kind::U:
      type_expr(f.ann, f.ops[0], syms, sub(path, "ops/0"));
      return;
    case Formula::Kind::Ind:
    case Formula::Kind::Eq:
    case Formula::Kind::ESpl: {
      Type a = type_expr(f.ann, f.ops[0], syms, sub(path, "ops/0"));
      Type b = type_expr(f.ann, f.ops[1], syms, sub(path, "ops/1"));
      if (!(a == b)) mismatch(sub(path, "ops/1"), a, b);
      if (f.kind == Formula::Kind::ESpl) {
        for (int i = 0; i < 2; ++i)
          if (!is_det(f.ops[i], syms))
            throw TypeError(sub(path, "ops/" + std::to_string(i)), "ESpl requires deterministic expressions");
      }
      return;
    }
    case Formula::Kind::And:
      for (int i = 0; i < 2; ++i) {
        std::string kp = sub(path, "kids/" + std::to_string(i));
        if (!env_ext(f.kids[i].ann, f.ann))
          throw TypeError(kp, "annotation " + env_str(f.kids[i].ann) + " does not extend into " + env_str(f.ann));
        wf_rec(f.kids[i], syms, kp);
      }
      return;
    case Formula::Kind::Star: {
      if (!env_disjoint(f.kids[0].ann, f.kids[1].ann))
        throw TypeError(path, "overlapping domains in separating conjunction");
      Env j = env_join(f.kids[0].ann, f.kids[1].ann);
      if (!env_ext(j, f.ann))
        throw TypeError(path, "joined annotation " + env_str(j) + " does not extend into " + env_str(f.ann));
      for (int i = 0; i < 2; ++i) wf_rec(f.kids[i], syms, sub(path, "kids/" + std::to_string(i)));
      return;
    }
  }
}

bool contains_kind(const Formula& f, std::initializer_list<Formula::Kind> ks) {
  for (auto k : ks)
    if (f.kind == k) return true;
  for (const auto& c : f.kids)
    if (contains_kind(c, ks)) return true;
  return false;
}

}  // namespace

Type type_expr(const Env& env, const Expr& e, const SymbolTable& syms, const std::string& path) {
  if (e.is_var()) {
    auto it = env.find(e.name);
    if (it == env.end()) throw TypeError(path, "unbound variable " + e.name);
    return it->second;
  }
  if (SymbolTable::is_builtin(e.name)) return type_builtin(env, e, syms, path);
  const FuncSym* f = syms.find(e.name);
  if (!f) throw TypeError(path, "unknown function symbol " + e.name);
  if (!e.idx.empty()) throw TypeError(path, "declared symbol " + e.name + " takes no size indices");
  check_arity(e, f->args.size(), path);
  for (size_t i = 0; i < e.args.size(); ++i) {
    std::string ap = sub(path, "args/" + std::to_string(i));
    Type t = type_expr(env, e.args[i], syms, ap);
    if (!(t == f->args[i])) mismatch(ap, f->args[i], t);
  }
  return f->result;
}

void type_program(const Env& env, const Program& p, const SymbolTable& syms, const std::string& path) {
  switch (p.kind) {
    case Program::Kind::Skip:
      return;
    case Program::Kind::Assign: {
      auto it = env.find(p.var);
      if (it == env.end()) throw TypeError(path, "unbound variable " + p.var);
      Type t = type_expr(env, p.rhs, syms, sub(path, "rhs"));
      if (!(t == it->second)) mismatch(sub(path, "rhs"), it->second, t);
      return;
    }
    case Program::Kind::Seq:
      type_program(env, p.kids[0], syms, sub(path, "first"));
      type_program(env, p.kids[1], syms, sub(path, "second"));
      return;
    case Program::Kind::If: {
      auto it = env.find(p.var);
      if (it == env.end()) throw TypeError(path, "unbound variable " + p.var);
      if (!it->second.is_bool()) throw TypeError(sub(path, "guard"), "non-Bool guard: expected Bool, got " + it->second.str());
      type_program(env, p.kids[0], syms, sub(path, "then"));
      type_program(env, p.kids[1], syms, sub(path, "else"));
      return;
    }
  }
}

void wf_formula(const Formula& f, const SymbolTable& syms, const std::string& path) { wf_rec(f, syms, path); }

void wf_triple(const HoareTriple& t, const SymbolTable& syms, const std::string& path) {
  if (t.pre.ann != t.env) throw TypeError(sub(path, "pre"), "annotation " + env_str(t.pre.ann) + " differs from " + env_str(t.env));
  if (t.post.ann != t.env)
    throw TypeError(sub(path, "post"), "annotation " + env_str(t.post.ann) + " differs from " + env_str(t.env));
  type_program(t.env, t.prog, syms, sub(path, "program"));
  wf_formula(t.pre, syms, sub(path, "pre"));
  wf_formula(t.post, syms, sub(path, "post"));
}

bool is_det(const Expr& e, const SymbolTable& syms) {
  if (e.is_var()) return true;
  if (SymbolTable::is_builtin_randomized(e.name)) return false;
  if (const FuncSym* f = syms.find(e.name); f && f->kind == SymKind::Rand) return false;
  for (const auto& a : e.args)
    if (!is_det(a, syms)) return false;
  return true;
}

bool classify_exact(const Formula& f) {
  return !contains_kind(f, {Formula::Kind::Star, Formula::Kind::U, Formula::Kind::Ind});
}

bool classify_approx(const Formula& f) { return !contains_kind(f, {Formula::Kind::Eq, Formula::Kind::ESpl}); }

VarSet fv(const Expr& e) {
  if (e.is_var()) return {e.name};
  VarSet out;
  for (const auto& a : e.args) {
    VarSet s = fv(a);
    out.insert(s.begin(), s.end());
  }
  return out;
}

VarSet mv(const Program& p) {
  switch (p.kind) {
    case Program::Kind::Skip:
      return {};
    case Program::Kind::Assign:
      return {p.var};
    case Program::Kind::Seq:
    case Program::Kind::If: {
      VarSet a = mv(p.kids[0]);
      VarSet b = mv(p.kids[1]);
      a.insert(b.begin(), b.end());
      return a;
    }
  }
  return {};
}

VarSet dom(const Env& env) {
  VarSet out;
  for (const auto& [v, t] : env) out.insert(v);
  return out;
}

bool env_ext(const Env& sub_env, const Env& super) {
  for (const auto& [v, t] : sub_env) {
    auto it = super.find(v);
    if (it == super.end() || !(it->second == t)) return false;
  }
  return true;
}

bool env_disjoint(const Env& a, const Env& b) {
  for (const auto& [v, t] : a)
    if (b.count(v)) return false;
  return true;
}

Env env_join(const Env& a, const Env& b) {
  Env out = a;
  for (const auto& [v, t] : b) {
    if (!out.emplace(v, t).second) throw TypeError("", "environments overlap on " + v);
  }
  return out;
}

Env env_remove(const Env& env, const std::string& var) {
  Env out = env;
  out.erase(var);
  return out;
}

Env env_restrict(const Env& env, const VarSet& vars) {
  Env out;
  for (const auto& [v, t] : env)
    if (vars.count(v)) out.emplace(v, t);
  return out;
}

bool formula_ext(const Formula& f1, const Formula& f2) {
  if (f1.kind != f2.kind || !env_ext(f1.ann, f2.ann)) return false;
  switch (f1.kind) {
    case Formula::Kind::Star:
      return f1.kids == f2.kids;
    case Formula::Kind::And:
      return formula_ext(f1.kids[0], f2.kids[0]) && formula_ext(f1.kids[1], f2.kids[1]);
    default:
      return f1.ops == f2.ops;
  }
}

bool same_skeleton(const Formula& a, const Formula& b) {
  if (a.kind != b.kind || a.ops != b.ops || a.kids.size() != b.kids.size()) return false;
  for (size_t i = 0; i < a.kids.size(); ++i)
    if (!same_skeleton(a.kids[i], b.kids[i])) return false;
  return true;
}

}  // namespace csl
