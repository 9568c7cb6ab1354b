#include "cslcheck/gen.hpp"

#include <algorithm>
#include <numeric>

namespace csl {

namespace {

std::vector<std::string> vars_of(const Env& env, bool want_bool) {
  std::vector<std::string> out;
  for (const auto& [v, t] : env)
    if (t.is_bool() == want_bool && (want_bool || t.size == SizePoly::n())) out.push_back(v);
  return out;
}

std::vector<std::string> unary_syms(const SymbolTable& syms) {
  std::vector<std::string> out;
  Type s = Type::str(SizePoly::n());
  for (const auto& [name, f] : syms.decls())
    if (f.kind == SymKind::Det && f.args.size() == 1 && f.args[0] == s && f.result == s) out.push_back(f.name);
  return out;
}

}  // namespace

Env gen_env(Rng& rng, unsigned max_bool, unsigned max_str, unsigned min_bool) {
  Env env;
  unsigned nb = min_bool + static_cast<unsigned>(pick(rng, max_bool - min_bool + 1));
  unsigned ns = static_cast<unsigned>(pick(rng, max_str + 1));
  static const char* bools[] = {"a", "b", "c", "d"};
  static const char* strs[] = {"x", "y", "z"};
  for (unsigned i = 0; i < nb && i < 4; ++i) env.emplace(bools[i], Type::boolean());
  for (unsigned i = 0; i < ns && i < 3; ++i) env.emplace(strs[i], Type::str(SizePoly::n()));
  return env;
}

Env gen_subenv(Rng& rng, const Env& env) {
  Env out;
  for (const auto& kv : env)
    if (coin(rng, 50)) out.insert(kv);
  return out;
}

Expr gen_expr(Rng& rng, const Env& env, const Type& ty, const SymbolTable& syms, unsigned depth, bool allow_rand,
              bool use_syms) {
  const Type str = Type::str(SizePoly::n());
  bool leaf = depth == 0 || coin(rng, 40);
  if (ty.is_bool()) {
    auto vs = vars_of(env, true);
    if (leaf) {
      if (!vs.empty() && coin(rng, 75)) return Expr::var(vs[pick(rng, vs.size())]);
      return Expr::app(coin(rng, 50) ? "1" : "0", {});
    }
    switch (pick(rng, 3)) {
      case 0:
        return Expr::app("not", {gen_expr(rng, env, ty, syms, depth - 1, allow_rand, use_syms)});
      case 1:
        return Expr::app("xor", {gen_expr(rng, env, ty, syms, depth - 1, allow_rand, use_syms),
                                 gen_expr(rng, env, ty, syms, depth - 1, allow_rand, use_syms)});
      default:
        return Expr::app("head", {Expr::app("concat", {gen_expr(rng, env, str, syms, depth - 1, allow_rand, use_syms),
                                                      gen_expr(rng, env, ty, syms, depth - 1, allow_rand, use_syms)})});
    }
  }
  auto vs = vars_of(env, false);
  if (leaf) {
    if (!vs.empty() && coin(rng, 70)) return Expr::var(vs[pick(rng, vs.size())]);
    if (allow_rand && coin(rng, 60)) return Expr::app("rnd", {});
    return Expr::app("setzero", {}, {SizePoly::n()});
  }
  auto fs = use_syms ? unary_syms(syms) : std::vector<std::string>{};
  size_t k = pick(rng, fs.empty() ? 2 : 3);
  if (k == 0)
    return Expr::app("xor", {gen_expr(rng, env, ty, syms, depth - 1, allow_rand, use_syms),
                             gen_expr(rng, env, ty, syms, depth - 1, allow_rand, use_syms)});
  if (k == 1)
    return Expr::app("tail", {Expr::app("concat", {gen_expr(rng, env, ty, syms, depth - 1, allow_rand, use_syms),
                                                  gen_expr(rng, env, Type::boolean(), syms, depth - 1, allow_rand,
                                                           use_syms)})});
  return Expr::app(fs[pick(rng, fs.size())], {gen_expr(rng, env, ty, syms, depth - 1, allow_rand, use_syms)});
}

namespace {

Program gen_simple(Rng& rng, const Env& env, const SymbolTable& syms, const ProgramShape& shape) {
  if (coin(rng, 10)) return Program::skip();
  std::vector<std::string> all;
  for (const auto& kv : env) all.push_back(kv.first);
  std::string r = all[pick(rng, all.size())];
  return Program::assign(r, gen_expr(rng, env, env.at(r), syms, shape.depth, shape.allow_rand));
}

// Consumes at least one unit of `budget`; a conditional spends one unit per branch statement.
Program gen_block(Rng& rng, const Env& env, const SymbolTable& syms, const ProgramShape& shape, unsigned& budget) {
  auto guards = vars_of(env, true);
  if (shape.allow_if && !guards.empty() && budget >= 3 && coin(rng, 25)) {
    std::string g = guards[pick(rng, guards.size())];
    budget -= 1;
    Program then_p = gen_simple(rng, env, syms, shape);
    Program else_p = gen_simple(rng, env, syms, shape);
    budget -= 1;
    if (budget >= 2 && coin(rng, 40)) {
      then_p = Program::seq(then_p, gen_simple(rng, env, syms, shape));
      budget -= 1;
    }
    return Program::ite(g, then_p, else_p);
  }
  budget -= 1;
  return gen_simple(rng, env, syms, shape);
}

}  // namespace

Program gen_program(Rng& rng, const Env& env, const SymbolTable& syms, const ProgramShape& shape) {
  unsigned budget = 1 + static_cast<unsigned>(pick(rng, shape.max_stmts));
  Program p = gen_block(rng, env, syms, shape, budget);
  while (budget > 0) p = Program::seq(p, gen_block(rng, env, syms, shape, budget));
  return p;
}

FinDist gen_dist(Rng& rng, const Env& env, unsigned n, unsigned max_support, unsigned max_weight) {
  std::vector<Row> mems = all_memories(env, n);
  size_t k = 1 + pick(rng, std::min<size_t>(max_support, mems.size()));
  std::vector<size_t> idx(mems.size());
  std::iota(idx.begin(), idx.end(), 0);
  for (size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + pick(rng, idx.size() - i)]);
  FinDist d{env, n, {}};
  Rational total = 0;
  std::vector<Rational> w(k);
  for (size_t i = 0; i < k; ++i) {
    w[i] = 1 + static_cast<long>(pick(rng, max_weight));
    total += w[i];
  }
  for (size_t i = 0; i < k; ++i) {
    Rational q = w[i] / total;
    q.canonicalize();
    d.p.emplace(mems[idx[i]], q);
  }
  return d;
}

Store gen_store(Rng& rng, const Env& env, const std::vector<unsigned>& ns, unsigned max_support,
                unsigned max_weight) {
  Store s{env, {}};
  for (unsigned n : ns) s.family.emplace(n, gen_dist(rng, env, n, max_support, max_weight));
  return s;
}

namespace {

Type gen_atom_type(Rng& rng, const Env& ann) {
  bool has_str = !vars_of(ann, false).empty();
  if (has_str && coin(rng, 50)) return Type::str(SizePoly::n());
  return Type::boolean();
}

// Operands favour plain variables so that atoms hold on a useful share of stores.
Expr gen_operand(Rng& rng, const Env& ann, const Type& ty, const SymbolTable& syms, bool rnd) {
  std::vector<std::string> vs;
  for (const auto& [v, t] : ann)
    if (t == ty) vs.push_back(v);
  if (!vs.empty() && coin(rng, 60)) return Expr::var(vs[pick(rng, vs.size())]);
  return gen_expr(rng, ann, ty, syms, 1, rnd);
}

Formula gen_atom(Rng& rng, const Env& ann, const SymbolTable& syms, FormulaClass cls) {
  using FK = Formula::Kind;
  std::vector<FK> kinds = {FK::Top};
  if (cls != FormulaClass::Exact) kinds.insert(kinds.end(), {FK::U, FK::U, FK::Ind, FK::Ind});
  if (cls != FormulaClass::Approx) kinds.insert(kinds.end(), {FK::Eq, FK::Eq, FK::ESpl, FK::ESpl});
  if (coin(rng, 3)) return Formula::bot(ann);
  FK k = kinds[pick(rng, kinds.size())];
  if (k == FK::Top) return Formula::top(ann);
  Type ty = gen_atom_type(rng, ann);
  bool rnd = k != FK::ESpl;
  Expr a = gen_operand(rng, ann, ty, syms, rnd);
  if (k == FK::U) return Formula::atom(k, ann, {a});
  Expr b = coin(rng, 25) ? a : gen_operand(rng, ann, ty, syms, rnd);
  return Formula::atom(k, ann, {a, b});
}

}  // namespace

Formula gen_formula(Rng& rng, const Env& ann, const SymbolTable& syms, unsigned depth, FormulaClass cls) {
  if (depth == 0 || coin(rng, 35)) return gen_atom(rng, ann, syms, cls);
  bool star = cls != FormulaClass::Exact && coin(rng, 50);
  if (star) {
    Env l, r;
    for (const auto& kv : ann) {
      size_t side = pick(rng, 3);
      if (side == 0) l.insert(kv);
      if (side == 1) r.insert(kv);
    }
    return Formula::star(gen_formula(rng, l, syms, depth - 1, cls), gen_formula(rng, r, syms, depth - 1, cls), ann);
  }
  Env l = coin(rng, 50) ? ann : gen_subenv(rng, ann);
  Env r = coin(rng, 50) ? ann : gen_subenv(rng, ann);
  return Formula::conj(gen_formula(rng, l, syms, depth - 1, cls), gen_formula(rng, r, syms, depth - 1, cls), ann);
}

}  // namespace csl
