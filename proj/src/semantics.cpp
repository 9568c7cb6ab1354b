#include "cslcheck/semantics.hpp"

#include <algorithm>

#include "cslcheck/types.hpp"

namespace csl {

namespace {

Value apply_builtin_det(const std::string& f, const std::vector<SizePoly>& idx, const std::vector<Value>& a,
                        unsigned n) {
  if (f == "0" || f == "1") return f;
  if (f == "not") return a[0] == "1" ? "0" : "1";
  if (f == "head") {
    if (a[0].empty()) throw EvalError("head of the empty string");
    return a[0].substr(0, 1);
  }
  if (f == "tail") {
    if (a[0].empty()) throw EvalError("tail of the empty string");
    return a[0].substr(1);
  }
  if (f == "xor") {
    if (a[0].size() != a[1].size()) throw EvalError("xor of strings of different lengths");
    Value out = a[0];
    for (size_t i = 0; i < out.size(); ++i) out[i] = (a[0][i] == a[1][i]) ? '0' : '1';
    return out;
  }
  if (f == "concat") return a[0] + a[1];
  if (f == "setzero") {
    if (idx.empty()) throw EvalError("unresolvable size annotation on setzero");
    return Value(idx[0].eval(n), '0');
  }
  throw EvalError("unknown built-in " + f);
}

// Product of argument distributions, visited as (values, weight).
void for_each_tuple(const std::vector<ValueDist>& ds, size_t i, std::vector<Value>& cur, const Rational& w,
                    const std::function<void(const std::vector<Value>&, const Rational&)>& k) {
  if (i == ds.size()) {
    k(cur, w);
    return;
  }
  for (const auto& [v, q] : ds[i]) {
    cur.push_back(v);
    for_each_tuple(ds, i + 1, cur, w * q, k);
    cur.pop_back();
  }
}

void add_value(ValueDist& d, const Value& v, const Rational& q) {
  if (q == 0) return;
  auto [it, fresh] = d.emplace(v, q);
  if (!fresh) {
    it->second += q;
    if (it->second == 0) d.erase(it);
  }
}

void check_space(const Env& env, const FinDist& d) {
  if (d.env != env) throw EvalError("distribution over " + env_str(d.env) + " does not match " + env_str(env));
}

}  // namespace

const std::vector<std::string>& stub_names() {
  static const std::vector<std::string> names = {"identity", "bitreverse", "zeroextend"};
  return names;
}

void bind_stub(Interp& in, const std::string& sym, const std::string& stub) {
  const FuncSym* f = in.syms.find(sym);
  if (!f) throw EvalError("cannot bind undeclared symbol " + sym);
  if (f->args.size() != 1) throw EvalError("stub " + stub + " needs a unary symbol, " + sym + " has arity " +
                                           std::to_string(f->args.size()));
  if (f->kind != SymKind::Det) throw EvalError("stub " + stub + " is deterministic but " + sym + " is randomized");
  Type in_t = f->args[0];
  Type out_t = f->result;
  if (stub == "identity" || stub == "bitreverse") {
    if (!(in_t == out_t))
      throw EvalError("stub " + stub + " requires equal input and output lengths, " + sym + " : " + in_t.str() + " -> " +
                      out_t.str());
    bool rev = stub == "bitreverse";
    in.impl[sym] = [rev](const std::vector<Value>& a, unsigned) {
      Value v = a[0];
      if (rev) std::reverse(v.begin(), v.end());
      return value_dirac(v);
    };
    return;
  }
  if (stub == "zeroextend") {
    SizePoly ip = in_t.is_bool() ? SizePoly::constant(1) : in_t.size;
    SizePoly op = out_t.is_bool() ? SizePoly::constant(1) : out_t.size;
    if (!op.minus(ip)) throw EvalError("stub zeroextend cannot shrink " + in_t.str() + " to " + out_t.str());
    in.impl[sym] = [op](const std::vector<Value>& a, unsigned n) {
      Value v = a[0];
      v.resize(op.eval(n), '0');
      return value_dirac(v);
    };
    return;
  }
  throw EvalError("unknown stub " + stub);
}

ValueDist eval_pre(const Env& env, const Expr& e, unsigned n, const Row& m, const Interp& in) {
  if (e.is_var()) return value_dirac(lookup(env, m, e.name));
  if (e.name == "rnd") return value_uniform(n);
  std::vector<ValueDist> args;
  args.reserve(e.args.size());
  for (const auto& a : e.args) args.push_back(eval_pre(env, a, n, m, in));
  ValueDist out;
  std::vector<Value> cur;
  if (SymbolTable::is_builtin(e.name)) {
    for_each_tuple(args, 0, cur, Rational(1), [&](const std::vector<Value>& vs, const Rational& w) {
      add_value(out, apply_builtin_det(e.name, e.idx, vs, n), w);
    });
    return out;
  }
  auto it = in.impl.find(e.name);
  if (it == in.impl.end()) throw EvalError("unbound symbol " + e.name);
  for_each_tuple(args, 0, cur, Rational(1), [&](const std::vector<Value>& vs, const Rational& w) {
    for (const auto& [v, q] : it->second(vs, n)) add_value(out, v, w * q);
  });
  return out;
}

Value eval_det(const Env& env, const Expr& d, unsigned n, const Row& m, const Interp& in) {
  ValueDist r = eval_pre(env, d, n, m, in);
  if (r.size() != 1) throw EvalError("expression " + print_expr(d) + " is not deterministic");
  return r.begin()->first;
}

ValueDist eval_expr(const Env& env, const Expr& e, const FinDist& d, const Interp& in) {
  check_space(env, d);
  ValueDist out;
  for (const auto& [m, q] : d.p)
    for (const auto& [v, w] : eval_pre(env, e, d.n, m, in)) add_value(out, v, q * w);
  return out;
}

namespace {

FinDist run_assign(const Env& env, const Program& p, const FinDist& d, const Interp& in) {
  size_t i = env_index(env, p.var);
  return bind_dist(d, env, [&](const Row& m) {
    FinDist r{env, d.n, {}};
    for (const auto& [v, q] : eval_pre(env, p.rhs, d.n, m, in)) {
      Row m2 = m;
      m2[i] = v;
      r.p[m2] += q;
    }
    return r;
  });
}

}  // namespace

FinDist run(const Env& env, const Program& p, const FinDist& d, const Interp& in) {
  check_space(env, d);
  switch (p.kind) {
    case Program::Kind::Skip:
      return d;
    case Program::Kind::Assign:
      return run_assign(env, p, d, in);
    case Program::Kind::Seq:
      return run(env, p.kids[1], run(env, p.kids[0], d, in), in);
    case Program::Kind::If: {
      size_t g = env_index(env, p.var);
      return bind_dist(d, env, [&](const Row& m) {
        const Program& branch = m[g] == "1" ? p.kids[0] : p.kids[1];
        return run(env, branch, dirac(env, d.n, m), in);
      });
    }
  }
  return d;
}

FinDist run_kozen(const Env& env, const Program& p, const FinDist& d, const Interp& in) {
  check_space(env, d);
  switch (p.kind) {
    case Program::Kind::Skip:
      return d;
    case Program::Kind::Assign:
      return run_assign(env, p, d, in);
    case Program::Kind::Seq:
      return run_kozen(env, p.kids[1], run_kozen(env, p.kids[0], d, in), in);
    case Program::Kind::If: {
      ValueDist guard = marginal(d, p.var);
      if (!guard.count("0")) return run_kozen(env, p.kids[0], d, in);
      if (!guard.count("1")) return run_kozen(env, p.kids[1], d, in);
      FinDist a = run_kozen(env, p.kids[0], condition(d, p.var, true), in);
      FinDist b = run_kozen(env, p.kids[1], condition(d, p.var, false), in);
      return convex(a, b, guard);
    }
  }
  return d;
}

Store store_project(const Store& s, const Env& target) {
  if (!env_ext(target, s.env))
    throw DistError("project: " + env_str(target) + " is not a sub-environment of " + env_str(s.env));
  Store out{target, {}};
  for (const auto& [n, d] : s.family) out.family.emplace(n, project(d, target));
  return out;
}

Store store_tensor(const Store& a, const Store& b) {
  if (!env_disjoint(a.env, b.env)) throw DistError("tensor: overlapping domains");
  Store out{env_join(a.env, b.env), {}};
  if (a.family.size() != b.family.size()) throw DistError("tensor: tested parameter sets differ");
  for (const auto& [n, d] : a.family) {
    auto it = b.family.find(n);
    if (it == b.family.end()) throw DistError("tensor: tested parameter sets differ");
    out.family.emplace(n, tensor(d, it->second));
  }
  return out;
}

bool store_ext(const Store& sub, const Store& super) {
  if (!env_ext(sub.env, super.env)) return false;
  if (sub.family.size() != super.family.size()) return false;
  for (const auto& [n, d] : super.family) {
    auto it = sub.family.find(n);
    if (it == sub.family.end() || !(project(d, sub.env) == it->second)) return false;
  }
  return true;
}

bool store_indist(const Store& a, const Store& b, const Rational& epsilon) {
  if (a.env != b.env || a.family.size() != b.family.size()) return false;
  for (const auto& [n, d] : a.family) {
    auto it = b.family.find(n);
    if (it == b.family.end()) return false;
    if (epsilon == 0 ? !(d == it->second) : stat_dist(d, it->second) > epsilon) return false;
  }
  return true;
}

Store store_run(const Program& p, const Store& s, const Interp& in) {
  Store out{s.env, {}};
  for (const auto& [n, d] : s.family) out.family.emplace(n, run(s.env, p, d, in));
  return out;
}

Store empty_store(const std::vector<unsigned>& ns) {
  Store s;
  for (unsigned n : ns) s.family.emplace(n, dirac(Env{}, n, Row{}));
  return s;
}

}  // namespace csl
