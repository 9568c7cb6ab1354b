#include "cslcheck/corpus.hpp"

namespace csl {

using FK = Formula::Kind;

Cert cert_ap(const Formula& f) {
  Cert c;
  c.rule = "AP";
  c.formula = f;
  return c;
}

Cert cert_topi(const Formula& lhs) {
  Cert c;
  c.rule = "TopI";
  c.lhs = lhs;
  return c;
}

Cert cert_ande(Cert premise, int index) {
  Cert c;
  c.rule = "AndE";
  c.index = index;
  c.premises.push_back(std::move(premise));
  return c;
}

Cert cert_andi(Cert a, Cert b, std::optional<Formula> rhs) {
  Cert c;
  c.rule = "AndI";
  c.premises = {std::move(a), std::move(b)};
  c.rhs = std::move(rhs);
  return c;
}

Cert cert_stari(Cert a, Cert b, const Env& env) {
  Cert c;
  c.rule = "StarI";
  c.env = env;
  c.premises = {std::move(a), std::move(b)};
  return c;
}

Cert cert_cut(std::vector<Cert> chain) {
  Cert c;
  c.rule = "Cut";
  c.premises = std::move(chain);
  return c;
}

Cert cert_axiom(const std::string& name, const std::optional<Env>& env, std::map<std::string, SubstVal> subst) {
  Cert c;
  c.rule = "Axiom";
  c.axiom = name;
  c.env = env;
  c.subst = std::move(subst);
  return c;
}

SubstVal sv_expr(const Expr& e) {
  SubstVal v;
  v.kind = SubstVal::Kind::Expr;
  v.text = print_expr(e);
  v.expr = e;
  return v;
}

SubstVal sv_name(const std::string& s) {
  SubstVal v;
  v.kind = SubstVal::Kind::Name;
  v.text = s;
  return v;
}

SubstVal sv_env(const Env& e) {
  SubstVal v;
  v.kind = SubstVal::Kind::Env;
  v.text = env_str(e);
  v.env = e;
  return v;
}

SubstVal sv_formula(const Formula& f) {
  SubstVal v;
  v.kind = SubstVal::Kind::Formula;
  v.text = print_formula(f);
  v.formula = f;
  return v;
}

namespace {

std::string nm(const char* base, unsigned i) { return base + std::to_string(i); }

Expr V(const std::string& v) { return Expr::var(v); }

Type str_n(unsigned extra) { return Type::str(SizePoly::n() + SizePoly::constant(extra)); }

Env sub(const Env& d, std::initializer_list<std::string> vs) {
  Env out;
  for (const auto& v : vs) out.emplace(v, d.at(v));
  return out;
}

Formula U(const Env& a, const std::string& v) { return Formula::atom(FK::U, a, {V(v)}); }

Formula top(const Env& a) { return Formula::top(a); }

Cert relabel(const Formula& lhs, const Formula& rhs) {
  return cert_axiom("Relabel", lhs.ann, {{"lhs", sv_formula(lhs)}, {"rhs", sv_formula(rhs)}});
}

Cert comm_assoc(const Formula& lhs, const Formula& rhs) {
  return cert_axiom("CommAssoc", lhs.ann, {{"lhs", sv_formula(lhs)}, {"rhs", sv_formula(rhs)}});
}

Cert star_unit(const Formula& lhs, const Formula& rhs) {
  return cert_axiom("StarUnit", lhs.ann, {{"lhs", sv_formula(lhs)}, {"rhs", sv_formula(rhs)}});
}

Cert ax2(const char* name, const Env& env, const char* p1, const Expr& e1, const char* p2, const Expr& e2) {
  return cert_axiom(name, env, {{p1, sv_expr(e1)}, {p2, sv_expr(e2)}});
}

// From (U(src)^{src} /\ ESpl(dst, e)^K)^K derive U(dst)^K, given U(e)^K follows from U(src)^K by `lift`.
Cert uniform_transfer(const Formula& l, const Env& K, const std::string& dst, const Expr& e,
                      std::optional<Cert> lift) {
  Cert ind = cert_cut({cert_ande(cert_ap(l), 2), ax2("W2", K, "d", V(dst), "c", e), ax2("W1", K, "e", V(dst), "g", e),
                       ax2("S1", K, "e", V(dst), "g", e)});
  std::vector<Cert> uchain{cert_ande(cert_ap(l), 1)};
  if (lift) uchain.push_back(*lift);
  Cert u = uchain.size() == 1 ? uchain[0] : cert_cut(uchain);
  return cert_cut({cert_andi(std::move(ind), std::move(u)), ax2("U1", K, "e", e, "g", V(dst))});
}

ProofTree node(const std::string& rule, const Env& env, const Formula& pre, const Program& p, const Formula& post) {
  ProofTree t;
  t.rule = rule;
  t.concl = HoareTriple{env, pre, p, post};
  return t;
}

// SDAssn node for r := e with pre (phi^Xi * psi^Theta)^D; returns the node, its postcondition is exact per the rule.
ProofTree sdassn(const Env& D, const Formula& phi, const Formula& psi, const std::string& r, const Expr& e,
                 const Type& tau) {
  Env xr = phi.ann;
  xr.emplace(r, tau);
  Formula pre = Formula::star(phi, psi, D);
  Formula post =
      Formula::star(Formula::conj(phi, Formula::atom(FK::ESpl, xr, {V(r), e}), xr), psi, D);
  ProofTree t = node("SDAssn", D, pre, Program::assign(r, e), post);
  t.xi = phi.ann;
  t.theta = psi.ann;
  return t;
}

ProofTree weak(const Formula& pre, Cert pre_cert, ProofTree child, Cert post_cert, const Formula& post) {
  ProofTree t = node("Weak", child.concl.env, pre, child.concl.prog, post);
  t.pre_cert = std::move(pre_cert);
  t.post_cert = std::move(post_cert);
  t.kids.push_back(std::move(child));
  return t;
}

Program seq_of(const std::vector<Program>& ps, size_t from) {
  Program p = ps[from];
  for (size_t i = from + 1; i < ps.size(); ++i) p = Program::seq(p, ps[i]);
  return p;
}

}  // namespace

Env exp_env(unsigned h) {
  Env d;
  d.emplace("k", str_n(0));
  for (unsigned i = 0; i <= h; ++i) {
    d.emplace(nm("r", i), str_n(1));
    d.emplace(nm("b", i), Type::boolean());
  }
  for (unsigned i = 0; i <= h + 1; ++i) d.emplace(nm("s", i), str_n(i));
  return d;
}

namespace {

std::vector<Program> exp_statements(unsigned h) {
  std::vector<Program> ps;
  for (unsigned i = 0; i <= h; ++i) {
    std::string r = nm("r", i);
    ps.push_back(Program::assign(r, Expr::app("g", {V("k")})));
    ps.push_back(Program::assign(nm("b", i), Expr::app("head", {V(r)})));
    ps.push_back(Program::assign("k", Expr::app("tail", {V(r)})));
  }
  ps.push_back(Program::assign("s0", V("k")));
  for (unsigned i = 0; i <= h; ++i)
    ps.push_back(Program::assign(nm("s", i + 1), Expr::app("concat", {V(nm("s", i)), V(nm("b", i))})));
  return ps;
}

}  // namespace

Program exp_program(unsigned h) { return seq_of(exp_statements(h), 0); }

ProofFile exp_proof(unsigned h) {
  ProofFile pf;
  FuncSym g{"g", {str_n(0)}, str_n(1), SymKind::Det};
  pf.syms.declare(g);
  pf.decls.push_back(g);
  const Env D = exp_env(h);

  // Left-nested separated blocks of generated bits: B_0 = T^{}, B_{i+1} = (B_i * U(b_i))^{b_0..b_i}.
  std::vector<Formula> B{top({})};
  for (unsigned i = 0; i <= h; ++i) {
    std::string b = nm("b", i);
    Env ann = B.back().ann;
    ann.emplace(b, Type::boolean());
    B.push_back(Formula::star(B.back(), U(sub(D, {b}), b), ann));
  }
  // Right-nested blocks consumed by the merge phase: C_i = (U(b_i) * C_{i+1})^{b_i..b_h}, C_{h+1} = T^{}.
  std::vector<Formula> C(h + 2, top({}));
  for (int i = static_cast<int>(h); i >= 0; --i) {
    std::string b = nm("b", i);
    Env ann = C[i + 1].ann;
    ann.emplace(b, Type::boolean());
    C[i] = Formula::star(U(sub(D, {b}), b), C[i + 1], ann);
  }

  std::vector<ProofTree> steps;
  std::vector<Formula> mids;  // mids[j] is the precondition of steps[j]
  const Env Kk = sub(D, {"k"});
  Formula phi = Formula::star(U(Kk, "k"), B[0], D);

  for (unsigned i = 0; i <= h; ++i) {
    std::string r = nm("r", i), b = nm("b", i);
    const Formula& Bi = B[i];
    // r_i := g(k)
    {
      Env K = sub(D, {"k", r});
      Expr gk = Expr::app("g", {V("k")});
      ProofTree sd = sdassn(D, U(Kk, "k"), Bi, r, gk, str_n(1));
      Formula l = sd.concl.post.kids[0];
      Cert lift = cert_axiom("Ax_POTP", K, {{"x", sv_name("k")}, {"g", sv_name("g")}});
      Formula next = Formula::star(U(K, r), Bi, D);
      Cert post = cert_stari(uniform_transfer(l, K, r, gk, lift), cert_ap(Bi), D);
      mids.push_back(phi);
      steps.push_back(weak(phi, cert_ap(phi), std::move(sd), std::move(post), next));
      phi = next;
    }
    // b_i := head(r_i)
    Env R = sub(D, {r, b});
    Formula y = Formula::conj(U(R, r), Formula::atom(FK::ESpl, R, {V(b), Expr::app("head", {V(r)})}), R);
    {
      ProofTree sd = sdassn(D, U(sub(D, {"k", r}), r), Bi, b, Expr::app("head", {V(r)}), Type::boolean());
      Formula next = Formula::star(y, Bi, D);
      Cert post = relabel(sd.concl.post, next);
      mids.push_back(phi);
      steps.push_back(weak(phi, cert_ap(phi), std::move(sd), std::move(post), next));
      phi = next;
    }
    // k := tail(r_i)
    {
      Env X = sub(D, {"k", r, b});
      ProofTree sd = sdassn(D, y, Bi, "k", Expr::app("tail", {V(r)}), str_n(0));
      Formula z = sd.concl.post.kids[0];
      Formula spl_lhs =
          Formula::conj(Formula::conj(U(X, r), Formula::atom(FK::ESpl, X, {V(b), Expr::app("head", {V(r)})}), X),
                        Formula::atom(FK::ESpl, X, {V("k"), Expr::app("tail", {V(r)})}), X);
      Cert spl = cert_cut({relabel(z, spl_lhs),
                           cert_axiom("Ax_SPL", X, {{"r", sv_name(r)}, {"b", sv_name(b)}, {"s", sv_name("k")}})});
      Formula split = Formula::star(Formula::star(U(sub(D, {b}), b), U(Kk, "k"), X), Bi, D);
      Formula next = Formula::star(U(Kk, "k"), B[i + 1], D);
      Cert post = cert_cut({cert_stari(std::move(spl), cert_ap(Bi), D), comm_assoc(split, next)});
      mids.push_back(phi);
      steps.push_back(weak(phi, cert_ap(phi), std::move(sd), std::move(post), next));
      phi = next;
    }
  }

  // s0 := k
  {
    const Formula& Bl = B[h + 1];
    Env K0 = sub(D, {"k", "s0"});
    ProofTree sd = sdassn(D, U(Kk, "k"), Bl, "s0", V("k"), str_n(0));
    Formula l = sd.concl.post.kids[0];
    Formula wide = Formula::star(U(K0, "s0"), Bl, D);
    Formula narrow = Formula::star(U(sub(D, {"s0"}), "s0"), Bl, D);
    Formula next = Formula::star(U(sub(D, {"s0"}), "s0"), C[0], D);
    Cert post = cert_cut({cert_stari(uniform_transfer(l, K0, "s0", V("k"), std::nullopt), cert_ap(Bl), D),
                          relabel(wide, narrow), comm_assoc(narrow, next)});
    mids.push_back(phi);
    steps.push_back(weak(phi, cert_ap(phi), std::move(sd), std::move(post), next));
    phi = next;
  }

  // s_{i+1} := concat(s_i, b_i)
  for (unsigned i = 0; i <= h; ++i) {
    std::string s = nm("s", i), b = nm("b", i), s1 = nm("s", i + 1);
    Env S = sub(D, {s, b});
    Env S1 = sub(D, {s, b, s1});
    Formula pair = Formula::star(U(sub(D, {s}), s), U(sub(D, {b}), b), S);
    Formula pre = Formula::star(pair, C[i + 1], D);
    Expr cat = Expr::app("concat", {V(s), V(b)});
    ProofTree sd = sdassn(D, pair, C[i + 1], s1, cat, str_n(i + 1));
    Formula wide = Formula::star(U(S1, s1), C[i + 1], D);
    Formula next = Formula::star(U(sub(D, {s1}), s1), C[i + 1], D);
    Cert mrg = cert_axiom("Ax_MRG", S1, {{"r", sv_name(s)}, {"b", sv_name(b)}, {"s", sv_name(s1)}});
    Cert post = cert_cut({cert_stari(std::move(mrg), cert_ap(C[i + 1]), D), relabel(wide, next)});
    mids.push_back(phi);
    steps.push_back(weak(phi, comm_assoc(phi, pre), std::move(sd), std::move(post), next));
    phi = next;
  }
  mids.push_back(phi);

  // Right-nested chain of Seq nodes over the statements.
  std::vector<Program> stmts;
  for (const auto& s : steps) stmts.push_back(s.concl.prog);
  ProofTree chain = steps.back();
  for (size_t j = steps.size() - 1; j-- > 0;) {
    ProofTree t = node("Seq", D, mids[j], seq_of(stmts, j), mids.back());
    t.mid = mids[j + 1];
    t.kids.push_back(std::move(steps[j]));
    t.kids.push_back(std::move(chain));
    chain = std::move(t);
  }

  // The chain's Seq nodes are built from left-nested suffixes; the root program is the whole sequence.
  Formula pre = U(D, "k");
  std::string last = nm("s", h + 1);
  Formula post = U(D, last);
  pf.root = weak(pre, star_unit(pre, mids.front()), std::move(chain), star_unit(mids.back(), post), post);
  pf.root.concl.prog = exp_program(h);
  return pf;
}

}  // namespace csl
