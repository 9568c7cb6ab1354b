#include "cslcheck/properties.hpp"

#include <functional>
#include <iomanip>
#include <sstream>

#include "cslcheck/hoare.hpp"
#include "cslcheck/logic.hpp"
#include "cslcheck/types.hpp"

namespace csl {

using FK = Formula::Kind;

Interp fuzz_interp() {
  Interp in;
  in.syms.declare(FuncSym{"f", {Type::str(SizePoly::n())}, Type::str(SizePoly::n()), SymKind::Det});
  bind_stub(in, "f", "bitreverse");
  return in;
}

Store biased_store(Rng& rng, const Env& env, const std::vector<unsigned>& ns) {
  std::vector<Env> groups(1 + pick(rng, 3));
  for (const auto& kv : env) groups[pick(rng, groups.size())].insert(kv);
  Store s = empty_store(ns);
  for (const auto& g : groups) {
    if (g.empty()) continue;
    Store part{g, {}};
    size_t kind = pick(rng, 100);
    for (unsigned n : ns) {
      if (kind < 30) {
        part.family.emplace(n, uniform_dist(g, n));
      } else if (kind < 55) {
        auto mems = all_memories(g, n);
        part.family.emplace(n, dirac(g, n, mems[pick(rng, mems.size())]));
      } else {
        part.family.emplace(n, gen_dist(rng, g, n, 4, 3));
      }
    }
    s = store_tensor(s, part);
  }
  return s;
}

namespace {

struct Ctx {
  Rng rng;
  const PropertyConfig& cfg;
  SuiteResult& res;
  void hit() { ++res.nonvacuous; }
  void check(bool ok, const std::function<std::string()>& why) {
    if (ok) return;
    if (res.failures++ == 0) res.first_failure = why();
  }
  unsigned n() { return cfg.ns[pick(rng, cfg.ns.size())]; }
};

std::string show(const FinDist& d) { return dist_json(d); }

Env minus(const Env& a, const Env& b) {
  Env out;
  for (const auto& kv : a)
    if (!b.count(kv.first)) out.insert(kv);
  return out;
}

Env restrict_out(const Env& env, const VarSet& vs) {
  Env out;
  for (const auto& kv : env)
    if (!vs.count(kv.first)) out.insert(kv);
  return out;
}

Program swap_branches(const Program& p) {
  Program q = p;
  for (auto& k : q.kids) k = swap_branches(k);
  if (q.kind == Program::Kind::If) std::swap(q.kids[0], q.kids[1]);
  return q;
}

// Random kernel table over the memories of `in` with outputs over `out`.
std::map<Row, FinDist> gen_kernel(Rng& rng, const Env& in, const Env& out, unsigned n) {
  std::map<Row, FinDist> k;
  for (const auto& m : all_memories(in, n)) k.emplace(m, gen_dist(rng, out, n, 3, 3));
  return k;
}

Store single(const Store& s, unsigned n) {
  Store t{s.env, {}};
  t.family.emplace(n, s.family.at(n));
  return t;
}

// ------------------------------------------------------------------ syntax and types

void suite_roundtrip(Ctx& c) {
  Interp in = fuzz_interp();
  for (size_t i = 0; i < c.cfg.cases; ++i) {
    Env env = gen_env(c.rng, 3, 2);
    Program p = gen_program(c.rng, env, in.syms);
    SymbolTable syms = in.syms;
    std::string txt = print_program(p);
    c.check(parse_program(txt, syms) == p, [&] { return "program " + txt; });
    Formula f = gen_formula(c.rng, env, in.syms, 3);
    std::string ft = print_formula(f);
    c.check(parse_formula(ft, syms) == f, [&] { return "formula " + ft; });
    c.check(parse_env(env_str(env)) == env, [&] { return "env " + env_str(env); });
    c.hit();
  }
}

void suite_types(Ctx& c) {
  for (size_t i = 0; i < c.cfg.cases; ++i) {
    std::vector<std::uint64_t> a(1 + pick(c.rng, 3)), b(1 + pick(c.rng, 3));
    for (auto& x : a) x = pick(c.rng, 3);
    for (auto& x : b) x = pick(c.rng, 3);
    SizePoly p(a), q(b);
    bool same_coeffs = p.coeffs() == q.coeffs();
    c.check((Type::str(p) == Type::str(q)) == same_coeffs, [&] { return "canonicality " + p.str() + " vs " + q.str(); });
    c.check(parse_poly(p.str()) == p, [&] { return "poly round trip " + p.str(); });
    // Insertion order does not affect serialization.
    Env e = gen_env(c.rng, 4, 3);
    Env r;
    for (auto it = e.rbegin(); it != e.rend(); ++it) r.insert(*it);
    c.check(env_str(e) == env_str(r), [&] { return "env order " + env_str(e); });
    c.hit();
  }
}

void suite_classify(Ctx& c) {
  Interp in = fuzz_interp();
  c.check(classify_exact(Formula::top({})) && classify_approx(Formula::top({})), [] { return "T in both classes"; });
  std::function<bool(const Formula&, std::initializer_list<FK>)> has = [&](const Formula& f, std::initializer_list<FK> ks) {
    for (FK k : ks)
      if (f.kind == k) return true;
    for (const auto& k : f.kids)
      if (has(k, ks)) return true;
    return false;
  };
  for (size_t i = 0; i < c.cfg.cases; ++i) {
    Env env = gen_env(c.rng, 3, 2);
    Formula f = gen_formula(c.rng, env, in.syms, 3);
    bool approx_atoms = has(f, {FK::U, FK::Ind});
    bool exact_atoms = has(f, {FK::Eq, FK::ESpl});
    if (approx_atoms && exact_atoms) {
      c.hit();
      c.check(!classify_exact(f) && !classify_approx(f), [&] { return "mixed formula classified: " + print_formula(f); });
    }
    if (classify_exact(f) && classify_approx(f))
      c.check(!approx_atoms && !exact_atoms, [&] { return "in both classes: " + print_formula(f); });
  }
}

void suite_env_order(Ctx& c) {
  Interp in = fuzz_interp();
  for (size_t i = 0; i < c.cfg.cases; ++i) {
    Env e3 = gen_env(c.rng, 4, 3);
    Env e2 = gen_subenv(c.rng, e3);
    Env e1 = gen_subenv(c.rng, e2);
    c.check(env_ext(e1, e1), [&] { return "reflexivity " + env_str(e1); });
    c.check(env_ext(e1, e2) && env_ext(e2, e3) && env_ext(e1, e3), [&] { return "transitivity " + env_str(e1); });
    if (env_ext(e2, e1)) c.check(e1 == e2, [&] { return "antisymmetry " + env_str(e1) + " " + env_str(e2); });
    Formula f = gen_formula(c.rng, e1, in.syms, 2);
    Formula f2 = with_ann(f, e2), f3 = with_ann(f, e3);
    c.check(formula_ext(f, f), [&] { return "formula_ext reflexivity " + print_formula(f); });
    c.check(formula_ext(f, f2) && formula_ext(f2, f3) && formula_ext(f, f3),
            [&] { return "formula_ext transitivity " + print_formula(f); });
    c.hit();
  }
}

// ------------------------------------------------------------------ distributions

void suite_monad(Ctx& c) {
  for (size_t i = 0; i < c.cfg.cases; ++i) {
    unsigned n = c.n();
    Env a = gen_env(c.rng, 2, 1), b = gen_env(c.rng, 2, 1), d3 = gen_env(c.rng, 2, 0);
    FinDist d = gen_dist(c.rng, a, n);
    auto k = gen_kernel(c.rng, a, b, n);
    auto h = gen_kernel(c.rng, b, d3, n);
    auto K = [&](const Row& m) { return k.at(m); };
    auto H = [&](const Row& m) { return h.at(m); };
    Row m0 = d.p.begin()->first;
    c.check(bind_dist(dirac(a, n, m0), b, K) == k.at(m0), [&] { return "left unit"; });
    c.check(bind_dist(d, a, [&](const Row& m) { return dirac(a, n, m); }) == d, [&] { return "right unit " + show(d); });
    FinDist lhs = bind_dist(bind_dist(d, b, K), d3, H);
    FinDist rhs = bind_dist(d, d3, [&](const Row& m) { return bind_dist(k.at(m), d3, H); });
    c.check(lhs == rhs, [&] { return "associativity " + show(lhs) + " vs " + show(rhs); });
    c.hit();
  }
}

void suite_mass(Ctx& c) {
  Interp in = fuzz_interp();
  for (size_t i = 0; i < c.cfg.cases; ++i) {
    unsigned n = c.n();
    Env env = gen_env(c.rng, 3, 2);
    FinDist d = gen_dist(c.rng, env, n);
    Program p = gen_program(c.rng, env, in.syms);
    FinDist out = run(env, p, d, in);
    c.check(out.mass() == 1, [&] { return "run mass " + rat_str(out.mass()) + " for " + print_program(p); });
    Env other = {{"q", Type::boolean()}};
    c.check(tensor(d, gen_dist(c.rng, other, n)).mass() == 1, [] { return "tensor mass"; });
    c.check(project(d, gen_subenv(c.rng, env)).mass() == 1, [] { return "project mass"; });
    ValueDist g = marginal(d, "a");
    if (g.size() == 2) {
      c.check(condition(d, "a", true).mass() == 1, [] { return "condition mass"; });
      c.check(convex(condition(d, "a", true), condition(d, "a", false), g).mass() == 1, [] { return "convex mass"; });
    }
    c.hit();
  }
}

void suite_distributivity(Ctx& c) {
  for (size_t i = 0; i < c.cfg.cases; ++i) {
    unsigned n = c.n();
    Env env = gen_env(c.rng, 4, 2);
    Env th, om;
    for (const auto& kv : env) (coin(c.rng, 50) ? th : om).insert(kv);
    FinDist a = gen_dist(c.rng, th, n), b = gen_dist(c.rng, om, n);
    Env t2 = gen_subenv(c.rng, th), o2 = gen_subenv(c.rng, om);
    FinDist lhs = project(tensor(a, b), env_join(t2, o2));
    FinDist rhs = tensor(project(a, t2), project(b, o2));
    c.check(lhs == rhs, [&] { return "project(a*b) " + show(lhs) + " vs " + show(rhs); });
    c.hit();
  }
}

void suite_metric(Ctx& c) {
  for (size_t i = 0; i < c.cfg.cases; ++i) {
    unsigned n = c.n();
    Env env = gen_env(c.rng, 2, 1);
    FinDist a = gen_dist(c.rng, env, n), b = coin(c.rng, 20) ? a : gen_dist(c.rng, env, n),
            d = gen_dist(c.rng, env, n);
    Rational ab = stat_dist(a, b), ba = stat_dist(b, a);
    c.check(ab == ba, [&] { return "symmetry"; });
    c.check(stat_dist(a, d) <= ab + stat_dist(b, d), [&] { return "triangle inequality"; });
    c.check((ab == 0) == (a == b), [&] { return "identity of indiscernibles"; });
    c.check(ab >= 0 && ab <= 1, [&] { return "range " + rat_str(ab); });
    c.hit();
  }
}

// ------------------------------------------------------------------ program semantics

void suite_kozen(Ctx& c) {
  Interp in = fuzz_interp();
  bool mutate = c.cfg.mutant == "kozen-swap";
  for (size_t i = 0; i < c.cfg.cases; ++i) {
    unsigned n = c.n();
    Env env = gen_env(c.rng, 3, 2);
    Program p = gen_program(c.rng, env, in.syms);
    FinDist d = gen_dist(c.rng, env, n);
    FinDist x = run(env, p, d, in);
    FinDist y = run_kozen(env, mutate ? swap_branches(p) : p, d, in);
    c.check(x == y, [&] { return "n=" + std::to_string(n) + " " + print_program(p) + ": " + show(x) + " vs " + show(y); });
    c.hit();
  }
}

void suite_linearity(Ctx& c) {
  Interp in = fuzz_interp();
  for (size_t i = 0; i < c.cfg.cases; ++i) {
    unsigned n = c.n();
    Env env = gen_env(c.rng, 3, 2);
    Program p = gen_program(c.rng, env, in.syms);
    Rational k(static_cast<long>(1 + pick(c.rng, 4)), 5);
    FinDist mu = scale(gen_dist(c.rng, env, n), k);
    FinDist nu = scale(gen_dist(c.rng, env, n), 1 - k);
    FinDist lhs = run(env, p, add(mu, nu), in);
    FinDist rhs = add(run(env, p, mu, in), run(env, p, nu, in));
    c.check(lhs == rhs, [&] { return "additivity for " + print_program(p); });
    c.check(run(env, p, mu, in) == scale(run(env, p, scale(mu, 1 / k), in), k),
            [&] { return "homogeneity for " + print_program(p); });
    c.hit();
  }
}

void suite_unit_decomposition(Ctx& c) {
  Interp in = fuzz_interp();
  for (size_t i = 0; i < c.cfg.cases; ++i) {
    unsigned n = c.n();
    Env env = gen_env(c.rng, 3, 2);
    Program p = gen_program(c.rng, env, in.syms);
    FinDist d = gen_dist(c.rng, env, n);
    FinDist lhs = run(env, p, d, in);
    FinDist rhs = bind_dist(d, env, [&](const Row& m) { return run(env, p, dirac(env, n, m), in); });
    c.check(lhs == rhs, [&] { return "unit decomposition for " + print_program(p); });
    c.hit();
  }
}

void suite_locality(Ctx& c) {
  Interp in = fuzz_interp();
  for (size_t i = 0; i < c.cfg.cases; ++i) {
    unsigned n = c.n();
    Env env = gen_env(c.rng, 3, 2);
    Env xi = gen_subenv(c.rng, env);
    if (xi.empty()) xi.insert(*env.begin());
    Program p = gen_program(c.rng, xi, in.syms);
    FinDist d = gen_dist(c.rng, env, n);
    FinDist lhs = run(xi, p, project(d, xi), in);
    FinDist rhs = project(run(env, p, d, in), xi);
    c.check(lhs == rhs, [&] { return "locality for " + print_program(p) + " under " + env_str(xi); });
    c.hit();
  }
}

void suite_frame_compat(Ctx& c) {
  Interp in = fuzz_interp();
  for (size_t i = 0; i < c.cfg.cases; ++i) {
    unsigned n = c.n();
    Env env = gen_env(c.rng, 3, 2);
    Env xi, th;
    for (const auto& kv : env) (coin(c.rng, 60) ? xi : th).insert(kv);
    if (xi.empty()) continue;
    Program p = gen_program(c.rng, xi, in.syms);
    FinDist s = gen_dist(c.rng, xi, n), r = gen_dist(c.rng, th, n);
    FinDist lhs = run(env, p, tensor(s, r), in);
    FinDist rhs = tensor(run(xi, p, s, in), r);
    c.check(lhs == rhs, [&] { return "frame compatibility for " + print_program(p); });
    c.hit();
  }
}

void suite_mv(Ctx& c) {
  Interp in = fuzz_interp();
  for (size_t i = 0; i < c.cfg.cases; ++i) {
    unsigned n = c.n();
    Env env = gen_env(c.rng, 3, 2);
    Program p = gen_program(c.rng, env, in.syms);
    FinDist d = gen_dist(c.rng, env, n);
    Env keep = restrict_out(env, mv(p));
    c.check(project(run(env, p, d, in), keep) == project(d, keep),
            [&] { return "marginal outside mv changed for " + print_program(p); });
    c.hit();
  }
}

void suite_expr_locality(Ctx& c) {
  Interp in = fuzz_interp();
  for (size_t i = 0; i < c.cfg.cases; ++i) {
    unsigned n = c.n();
    Env env = gen_env(c.rng, 3, 2);
    Env xi = gen_subenv(c.rng, env);
    Type ty = coin(c.rng, 50) ? Type::boolean() : Type::str(SizePoly::n());
    Expr e = gen_expr(c.rng, xi, ty, in.syms, 3, true);
    FinDist d = gen_dist(c.rng, env, n);
    c.check(eval_expr(env, e, d, in) == eval_expr(xi, e, project(d, xi), in),
            [&] { return "expression locality for " + print_expr(e); });
    c.hit();
  }
}

// ------------------------------------------------------------------ stores and logic

bool related(const Store& a, const Store& b) {
  return env_ext(a.env, b.env) && store_indist(a, store_project(b, a.env), 0);
}

void suite_pkrm(Ctx& c) {
  for (size_t i = 0; i < c.cfg.cases; ++i) {
    Env env = gen_env(c.rng, 3, 2);
    Env parts[3];
    for (const auto& kv : env) parts[pick(c.rng, 3)].insert(kv);
    Store s1 = gen_store(c.rng, parts[0], c.cfg.ns), s2 = gen_store(c.rng, parts[1], c.cfg.ns),
          s3 = gen_store(c.rng, parts[2], c.cfg.ns);
    Store e = empty_store(c.cfg.ns);
    c.check(store_tensor(store_tensor(s1, s2), s3) == store_tensor(s1, store_tensor(s2, s3)),
            [] { return "tensor associativity"; });
    c.check(store_tensor(s1, e) == s1 && store_tensor(e, s1) == s1, [] { return "tensor identity"; });
    // Composite order: a is indistinguishable from the restriction of b.
    Store b = store_tensor(s1, s2);
    Env x = gen_subenv(c.rng, b.env);
    Store a = store_project(b, x);
    Store a2 = store_project(a, gen_subenv(c.rng, x));
    c.check(related(b, b), [] { return "reflexivity"; });
    c.check(!(related(a2, a) && related(a, b)) || related(a2, b), [] { return "transitivity"; });
    Store a3 = store_project(s3, gen_subenv(c.rng, s3.env));
    c.check(!(related(a, b) && related(a3, s3)) || related(store_tensor(a, a3), store_tensor(b, s3)),
            [] { return "compatibility with tensor"; });
    c.hit();
  }
}

void suite_monotonicity(Ctx& c) {
  Interp in = fuzz_interp();
  for (size_t i = 0; i < c.cfg.cases; ++i) {
    Env env = gen_env(c.rng, 3, 2);
    Env a = gen_subenv(c.rng, env);
    Formula f1 = gen_formula(c.rng, a, in.syms, 2);
    Formula f2 = with_ann(f1, env);
    if (!formula_ext(f1, f2)) continue;
    Store r = biased_store(c.rng, env, c.cfg.ns);
    bool s1 = sat_formula(store_project(r, a), f1, in), s2 = sat_formula(r, f2, in);
    if (s1) c.hit();
    c.check(s1 == s2, [&] { return "monotonicity for " + print_formula(f1); });
  }
}

void suite_approx_closure(Ctx& c) {
  Interp in = fuzz_interp();
  for (size_t i = 0; i < c.cfg.cases; ++i) {
    Env env = gen_env(c.rng, 3, 2);
    Formula f = gen_formula(c.rng, env, in.syms, 2, FormulaClass::Approx);
    Store s = biased_store(c.rng, env, c.cfg.ns);
    Store t = parse_store(store_json(s));
    if (!store_indist(s, t, 0)) continue;
    bool a = sat_formula(s, f, in);
    if (a) c.hit();
    c.check(a == sat_formula(t, f, in), [&] { return "approximate closure for " + print_formula(f); });
  }
}

void suite_star(Ctx& c) {
  Interp in = fuzz_interp();
  for (size_t i = 0; i < c.cfg.cases; ++i) {
    Env env = gen_env(c.rng, 3, 2);
    Env p[3];
    for (const auto& kv : env) p[pick(c.rng, 3)].insert(kv);
    Formula a = gen_formula(c.rng, p[0], in.syms, 1, FormulaClass::Approx);
    Formula b = gen_formula(c.rng, p[1], in.syms, 1, FormulaClass::Approx);
    Formula d = gen_formula(c.rng, p[2], in.syms, 1, FormulaClass::Approx);
    Store s = biased_store(c.rng, env, c.cfg.ns);
    bool ab = sat_formula(s, Formula::star(a, b, env), in);
    if (ab) c.hit();
    c.check(ab == sat_formula(s, Formula::star(b, a, env), in), [&] { return "commutativity"; });
    Formula l = Formula::star(Formula::star(a, b, env_join(p[0], p[1])), d, env);
    Formula r = Formula::star(a, Formula::star(b, d, env_join(p[1], p[2])), env);
    c.check(sat_formula(s, l, in) == sat_formula(s, r, in), [&] { return "associativity " + print_formula(l); });
  }
}

void suite_split_merge(Ctx& c) {
  for (size_t i = 0; i < c.cfg.cases; ++i) {
    Env env = coin(c.rng, 50) ? Env{{"a", Type::boolean()}, {"b", Type::boolean()}}
                              : Env{{"b", Type::boolean()}, {"x", Type::str(SizePoly::n())}};
    Store s = biased_store(c.rng, env, c.cfg.ns);
    bool joint = true, parts = true;
    for (const auto& [n, d] : s.family) {
      joint = joint && d == uniform_dist(env, n);
      bool each = true;
      for (const auto& [v, t] : env) each = each && is_uniform(marginal(d, v), t.width(n));
      Env l{*env.begin()}, r{*env.rbegin()};
      parts = parts && each && tensor(project(d, l), project(d, r)) == d;
    }
    if (joint) c.hit();
    c.check(joint == parts, [&] { return "uniform split/merge on " + store_json(s); });
  }
}

void suite_bi(Ctx& c) {
  Interp in = fuzz_interp();
  for (size_t i = 0; i < c.cfg.cases; ++i) {
    Env env = gen_env(c.rng, 3, 1);
    Formula f = gen_formula(c.rng, env, in.syms, 2);
    Store s = biased_store(c.rng, env, c.cfg.ns);
    bool sf = sat_formula(s, f, in);
    bool sb = sat_bi(s, f, in);
    if (sf) c.check(sb, [&] { return "sat but not BI-sat: " + print_formula(f); });
    if (sb) {
      c.hit();
      auto g = find_annotation(s, f, in);
      c.check(g.has_value() && same_skeleton(*g, f) && sat_formula(s, *g, in),
              [&] { return "no annotation found for " + print_formula(f); });
    }
  }
}

// ------------------------------------------------------------------ axiom schemas

Expr pick_expr(Rng& rng, const Env& env, const Type& ty, const SymbolTable& syms, bool det) {
  std::vector<std::string> vs;
  for (const auto& [v, t] : env)
    if (t == ty) vs.push_back(v);
  if (!vs.empty() && coin(rng, 70)) return Expr::var(vs[pick(rng, vs.size())]);
  return gen_expr(rng, env, ty, syms, 1, !det);
}

SubstVal sv(const Expr& e) {
  SubstVal v;
  v.kind = SubstVal::Kind::Expr;
  v.text = print_expr(e);
  v.expr = e;
  return v;
}

SubstVal svn(const std::string& s) {
  SubstVal v;
  v.kind = SubstVal::Kind::Name;
  v.text = s;
  return v;
}

SubstVal sve(const Env& e) {
  SubstVal v;
  v.kind = SubstVal::Kind::Env;
  v.text = env_str(e);
  v.env = e;
  return v;
}

void validate(Ctx& c, const Entailment& en, const Store& s, const Interp& in) {
  if (!sat_formula(s, en.lhs, in)) return;
  c.hit();
  c.check(sat_formula(s, en.rhs, in),
          [&] { return print_formula(en.lhs) + " |= " + print_formula(en.rhs) + " fails on " + store_json(s); });
}

void suite_axiom_simple(Ctx& c, const std::string& name) {
  Interp in = fuzz_interp();
  for (size_t i = 0; i < c.cfg.cases; ++i) {
    Env env = gen_env(c.rng, 3, 2);
    Type ty = coin(c.rng, 50) ? Type::boolean() : Type::str(SizePoly::n());
    bool det = name == "W2";
    Expr e = pick_expr(c.rng, env, ty, in.syms, det), g = coin(c.rng, 25) ? e : pick_expr(c.rng, env, ty, in.syms, det),
         h = pick_expr(c.rng, env, ty, in.syms, det);
    std::map<std::string, SubstVal> s;
    if (name == "W2") {
      s = {{"d", sv(e)}, {"c", sv(g)}};
    } else {
      s = {{"e", sv(e)}, {"g", sv(g)}, {"h", sv(h)}};
      if (name[1] != '2') s.erase("h");
      if (name[1] == '0') s.erase("g");
    }
    Entailment en = instantiate_axiom(name, s, env, in.syms);
    validate(c, en, biased_store(c.rng, env, c.cfg.ns), in);
  }
}

// Schema shape U(x) |= U(g(x)) with length-preserving bijective stubs.
void suite_axiom_potp(Ctx& c) {
  for (size_t i = 0; i < c.cfg.cases; ++i) {
    Interp in;
    in.syms.declare(FuncSym{"g", {Type::str(SizePoly::n())}, Type::str(SizePoly::n()), SymKind::Det});
    bind_stub(in, "g", coin(c.rng, 50) ? "identity" : "bitreverse");
    Env env = gen_env(c.rng, 2, 2);
    env.emplace("x", Type::str(SizePoly::n()));
    Entailment en{Formula::atom(FK::U, env, {Expr::var("x")}),
                  Formula::atom(FK::U, env, {Expr::app("g", {Expr::var("x")})})};
    validate(c, en, biased_store(c.rng, env, c.cfg.ns), in);
  }
}

// Split and merge at n in {1,2,3} on stores produced from uniform inputs, plus random stores.
void suite_axiom_spl_mrg(Ctx& c, bool split) {
  Interp in = fuzz_interp();
  std::vector<unsigned> ns = {1, 2, 3};
  for (size_t i = 0; i < c.cfg.cases; ++i) {
    Env env;
    SizePoly n = SizePoly::n(), n1 = n + SizePoly::constant(1);
    env.emplace("r", Type::str(split ? n1 : n));
    env.emplace("b", Type::boolean());
    env.emplace("s", Type::str(split ? n : n1));
    if (coin(c.rng, 50)) env.emplace("a", Type::boolean());
    Entailment en = instantiate_axiom(split ? "Ax_SPL" : "Ax_MRG", {{"r", svn("r")}, {"b", svn("b")}, {"s", svn("s")}},
                                      env, in.syms);
    Store s = biased_store(c.rng, env, ns);
    if (coin(c.rng, 75)) {
      Env in_env = split ? Env{{"r", env.at("r")}} : Env{{"r", env.at("r")}, {"b", env.at("b")}};
      Store u{in_env, {}};
      for (unsigned k : ns) u.family.emplace(k, uniform_dist(in_env, k));
      Store rest = biased_store(c.rng, minus(env, in_env), ns);
      s = store_tensor(u, rest);
      SymbolTable syms;
      Program p = split ? parse_program("b := head(r); s := tail(r)", syms) : parse_program("s := concat(r, b)", syms);
      s = store_run(p, s, in);
    }
    validate(c, en, s, in);
  }
}

void suite_axiom_trusted(Ctx& c, const std::string& name) {
  Interp in = fuzz_interp();
  Type sn = Type::str(SizePoly::n());
  for (size_t i = 0; i < c.cfg.cases; ++i) {
    Env env = gen_env(c.rng, 3, 1);
    Store s;
    Entailment en;
    if (name == "XorRem1" || name == "XorRem2") {
      env = {{"c", Type::boolean()}, {"k", Type::boolean()}, {"m", Type::boolean()}};
      std::string bit = coin(c.rng, 50) ? "1" : "0";
      std::map<std::string, SubstVal> sub = {{"k", svn("k")}, {"bit", svn(bit)}};
      if (name == "XorRem2") sub.insert({{"c", svn("c")}, {"m", svn("m")}});
      en = instantiate_axiom(name, sub, env, in.syms);
      s = biased_store(c.rng, env, c.cfg.ns);
      if (coin(c.rng, 70)) {
        // Condition on the guard and assign c as the branch does.
        Store t{env, {}};
        for (const auto& [n, d] : s.family) {
          ValueDist g = marginal(d, "k");
          t.family.emplace(n, g.count(bit) ? condition(d, "k", bit == "1") : d);
        }
        SymbolTable syms;
        s = store_run(parse_program(bit == "1" ? "c := not(m)" : "c := m", syms), t, in);
      }
    } else if (name == "AuxPOTP1") {
      env.emplace("k", sn);
      Env theta = minus(env, {{"k", sn}});
      Env target = gen_subenv(c.rng, theta);
      en = instantiate_axiom(name, {{"x", svn("k")}, {"theta", sve(theta)}, {"target", sve(target)}}, env, in.syms);
      s = biased_store(c.rng, env, c.cfg.ns);
    } else {
      env = {{"c", sn}, {"k", sn}, {"m", sn}};
      if (coin(c.rng, 50)) env.emplace("a", Type::boolean());
      Expr d = Expr::app("f", {Expr::var("k")});
      en = instantiate_axiom(name, {{"c", svn("c")}, {"m", svn("m")}, {"d", sv(d)}, {"xi", sve({{"k", sn}})}}, env,
                             in.syms);
      s = biased_store(c.rng, env, c.cfg.ns);
      if (coin(c.rng, 70)) {
        SymbolTable syms = in.syms;
        s = store_run(parse_program("c := xor(m, f(k))", syms), s, in);
      }
    }
    validate(c, en, s, in);
  }
}

struct Suite {
  std::string name;
  std::function<void(Ctx&)> body;
};

const std::vector<Suite>& suites() {
  static const std::vector<Suite> all = [] {
    std::vector<Suite> v = {
        {"roundtrip", suite_roundtrip},
        {"types", suite_types},
        {"classify", suite_classify},
        {"env-order", suite_env_order},
        {"monad", suite_monad},
        {"mass", suite_mass},
        {"distributivity", suite_distributivity},
        {"metric", suite_metric},
        {"kozen", suite_kozen},
        {"linearity", suite_linearity},
        {"unit-decomposition", suite_unit_decomposition},
        {"locality", suite_locality},
        {"frame-compat", suite_frame_compat},
        {"mv-soundness", suite_mv},
        {"expr-locality", suite_expr_locality},
        {"pkrm", suite_pkrm},
        {"monotonicity", suite_monotonicity},
        {"approx-closure", suite_approx_closure},
        {"star", suite_star},
        {"split-merge", suite_split_merge},
        {"bi", suite_bi},
    };
    for (const char* a : {"S0", "S1", "S2", "T0", "T1", "T2", "W1", "W2", "U1"})
      v.push_back({std::string("axiom-") + a, [a](Ctx& c) { suite_axiom_simple(c, a); }});
    v.push_back({"axiom-Ax_POTP", suite_axiom_potp});
    v.push_back({"axiom-Ax_SPL", [](Ctx& c) { suite_axiom_spl_mrg(c, true); }});
    v.push_back({"axiom-Ax_MRG", [](Ctx& c) { suite_axiom_spl_mrg(c, false); }});
    for (const char* a : {"AuxPOTP1", "AuxPOTP2", "XorRem1", "XorRem2"})
      v.push_back({std::string("axiom-") + a, [a](Ctx& c) { suite_axiom_trusted(c, a); }});
    for (const char* r : {"Frame", "Const", "RCond", "SRAssn", "SDAssn"}) {
      v.push_back({std::string("rule-") + r, [r](Ctx& c) {
                     SuiteResult f = fuzz_rule_soundness(r, c.cfg.cases, c.rng(), c.cfg.ns, c.cfg.mutant);
                     c.res.nonvacuous = f.nonvacuous;
                     c.res.failures = f.failures;
                     c.res.first_failure = f.first_failure;
                   }});
    }
    return v;
  }();
  return all;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& s : suites()) v.push_back(s.name);
    return v;
  }();
  return names;
}

const std::vector<std::string>& mutant_names() {
  static const std::vector<std::string> v = {"kozen-swap", "const-no-mv"};
  return v;
}

SuiteResult run_suite(const std::string& name, const PropertyConfig& cfg) {
  for (const auto& s : suites()) {
    if (s.name != name) continue;
    SuiteResult res;
    res.name = name;
    res.cases = cfg.cases;
    // Each suite draws from its own stream so results do not depend on suite order.
    std::uint64_t h = cfg.seed;
    for (char ch : name) h = h * 1099511628211ULL + static_cast<unsigned char>(ch);
    Ctx c{Rng(h), cfg, res};
    try {
      if (cfg.cases > 0) s.body(c);
    } catch (const std::exception& e) {
      ++res.failures;
      if (res.first_failure.empty()) res.first_failure = std::string("exception: ") + e.what();
    }
    return res;
  }
  throw std::invalid_argument("unknown suite " + name);
}

std::vector<SuiteResult> run_all(const PropertyConfig& cfg) {
  std::vector<SuiteResult> out;
  for (const auto& n : suite_names()) out.push_back(run_suite(n, cfg));
  return out;
}

std::string report_text(const std::vector<SuiteResult>& results) {
  std::ostringstream os;
  os << std::left << std::setw(22) << "suite" << std::right << std::setw(8) << "cases" << std::setw(12) << "nonvacuous"
     << std::setw(10) << "failures" << "  status\n";
  size_t bad = 0;
  for (const auto& r : results) {
    os << std::left << std::setw(22) << r.name << std::right << std::setw(8) << r.cases << std::setw(12) << r.nonvacuous
       << std::setw(10) << r.failures << "  " << (r.ok() ? "PASS" : "FAIL") << "\n";
    if (!r.ok()) ++bad;
  }
  for (const auto& r : results)
    if (!r.ok()) os << "first failure in " << r.name << ": " << r.first_failure << "\n";
  os << (bad == 0 ? "all suites passed" : std::to_string(bad) + " suite(s) failed") << "\n";
  return os.str();
}

// ------------------------------------------------------------------ rule fuzzing

namespace {

HoareTriple triple(const Env& env, const Formula& pre, const Program& p, const Formula& post) {
  return HoareTriple{env, pre, p, post};
}

ProofTree leaf(const HoareTriple& t) {
  ProofTree k;
  k.rule = "Skip";
  k.concl = t;
  return k;
}

Env nonempty_subenv(Rng& rng, const Env& env) {
  Env x = gen_subenv(rng, env);
  if (x.empty()) x.insert(*std::next(env.begin(), static_cast<long>(pick(rng, env.size()))));
  return x;
}

Formula small_formula(Rng& rng, const Env& ann, const SymbolTable& syms, FormulaClass cls = FormulaClass::Any) {
  if (coin(rng, 30)) return Formula::top(ann);
  return gen_formula(rng, ann, syms, 1, cls);
}

// Store over env whose parts Xi and Theta are independent; the rest is random.
Store split_store(Rng& rng, const Env& env, const Env& xi, const Env& theta, const std::vector<unsigned>& ns) {
  if (coin(rng, 30)) return biased_store(rng, env, ns);
  Env rest = minus(minus(env, xi), theta);
  Store a = biased_store(rng, env_join(xi, rest), ns);
  Store b = biased_store(rng, theta, ns);
  return store_tensor(a, b);
}

constexpr int kStoresPerCase = 6;

}  // namespace

SuiteResult fuzz_rule_soundness(const std::string& rule, size_t cases, std::uint64_t seed,
                                const std::vector<unsigned>& ns, const std::string& mutant) {
  static const std::set<std::string> rules = {"Frame", "Const", "RCond", "SRAssn", "SDAssn"};
  if (!rules.count(rule)) throw std::invalid_argument("fuzzing is defined for Frame, Const, RCond, SRAssn, SDAssn");
  SuiteResult res;
  res.name = "rule-" + rule;
  res.cases = cases;
  Rng rng(seed);
  Interp in = fuzz_interp();
  const SymbolTable& syms = in.syms;
  auto fail = [&](const std::string& msg) {
    if (res.failures++ == 0) res.first_failure = msg;
  };

  for (size_t i = 0; i < cases; ++i) {
    Env env = gen_env(rng, 3, 2);
    ProofTree node;
    node.rule = rule;
    bool skip_check = false;
    // Per-store validation: returns false on a violation, sets `used` when the hypothesis held.
    std::function<bool(const Store&, bool&)> holds;

    if (rule == "SRAssn" || rule == "SDAssn") {
      bool det = rule == "SDAssn";
      std::vector<std::string> vars;
      for (const auto& kv : env) vars.push_back(kv.first);
      std::string r = vars[pick(rng, vars.size())];
      Env xi = gen_subenv(rng, env_remove(env, r));
      Env theta;
      for (const auto& kv : minus(env, xi))
        if (coin(rng, 60)) theta.insert(kv);
      Type tau = env.at(r);
      Expr e = gen_expr(rng, xi, tau, syms, 2, !det);
      Formula phi = small_formula(rng, xi, syms);
      Formula psi = with_ann(small_formula(rng, env_remove(theta, r), syms), theta);
      Env xr = xi;
      xr.emplace(r, tau);
      Formula post = Formula::star(
          Formula::conj(phi, Formula::atom(det ? FK::ESpl : FK::Eq, xr, {Expr::var(r), e}), xr),
          with_ann(psi, env_remove(theta, r)), env);
      node.concl = triple(env, Formula::star(phi, psi, env), Program::assign(r, e), post);
      node.xi = xi;
      node.theta = theta;
      holds = [&, node](const Store& s, bool& used) {
        if (!sat_formula(s, node.concl.pre, in)) return true;
        used = true;
        return sat_formula(store_run(node.concl.prog, s, in), node.concl.post, in);
      };
    } else if (rule == "Const" || rule == "Frame") {
      bool frame = rule == "Frame";
      Env xi = nonempty_subenv(rng, env);
      Program p = gen_program(rng, xi, syms, ProgramShape{3, true, true, 2});
      Env theta;
      bool mutate = !frame && mutant == "const-no-mv";
      for (const auto& kv : env) {
        bool allowed = frame ? !xi.count(kv.first) : (mutate || !mv(p).count(kv.first));
        if (allowed && coin(rng, mutate ? 80 : 50)) theta.insert(kv);
      }
      skip_check = mutate;
      Formula phi = small_formula(rng, xi, syms), psi = small_formula(rng, xi, syms);
      Formula fr = small_formula(rng, theta, syms);
      HoareTriple child = triple(xi, phi, p, psi);
      auto op = frame ? Formula::star : Formula::conj;
      node.concl = triple(env, op(phi, fr, env), p, op(psi, fr, env));
      node.xi = xi;
      node.theta = theta;
      node.kids.push_back(leaf(child));
      holds = [&, node, child](const Store& s, bool& used) {
        if (!sat_formula(s, node.concl.pre, in)) return true;
        // Premise instantiated at the restriction of this store.
        Store local = store_run(child.prog, store_project(s, child.env), in);
        if (!sat_formula(local, child.post, in)) return true;
        used = true;
        return sat_formula(store_run(node.concl.prog, s, in), node.concl.post, in);
      };
    } else {  // RCond
      std::vector<std::string> guards;
      for (const auto& [v, t] : env)
        if (t.is_bool()) guards.push_back(v);
      std::string g = guards[pick(rng, guards.size())];
      Program p1 = gen_program(rng, env, syms, ProgramShape{2, true, false, 2});
      Program p2 = gen_program(rng, env, syms, ProgramShape{2, true, false, 2});
      Formula psi = gen_formula(rng, env, syms, 2, FormulaClass::Exact);
      Program ite = Program::ite(g, p1, p2);
      node.concl = triple(env, Formula::top(env), ite, psi);
      for (int b = 1; b >= 0; --b) {
        Formula pre = Formula::atom(FK::ESpl, env, {Expr::var(g), Expr::app(b ? "1" : "0", {})});
        node.kids.push_back(leaf(triple(env, pre, b ? p1 : p2, psi)));
      }
      holds = [&, g, p1, p2, psi, ite](const Store& s, bool& used) {
        bool ok_all = true;
        for (const auto& [n, d] : s.family) {
          Store one = single(s, n);
          ValueDist gd = marginal(d, g);
          bool premises = true;
          for (int b = 1; b >= 0 && premises; --b) {
            if (!gd.count(b ? "1" : "0")) continue;
            Store cond{s.env, {}};
            cond.family.emplace(n, condition(d, g, b == 1));
            premises = sat_formula(store_run(b ? p1 : p2, cond, in), psi, in);
          }
          if (!premises) continue;
          used = true;
          ok_all = ok_all && sat_formula(store_run(ite, one, in), psi, in);
        }
        return ok_all;
      };
    }

    if (!skip_check) {
      try {
        check_node(node, syms, AxiomRegistry::all(), "/case/" + std::to_string(i));
      } catch (const ProofError& e) {
        fail(std::string("generated instance rejected: ") + e.what());
        continue;
      }
    }
    bool any = false;
    for (int k = 0; k < kStoresPerCase; ++k) {
      Store s = node.xi && node.theta ? split_store(rng, env, *node.xi, minus(*node.theta, *node.xi), ns)
                                      : biased_store(rng, env, ns);
      bool used = false;
      if (!holds(s, used)) {
        fail("case " + std::to_string(i) + ": " + print_formula(node.concl.pre) + " " + print_program(node.concl.prog) +
             " " + print_formula(node.concl.post) + " violated on " + store_json(s));
        break;
      }
      any = any || used;
    }
    if (any) ++res.nonvacuous;
  }
  return res;
}

}  // namespace csl
