#include "cslcheck/hoare.hpp"

#include <deque>

#include "cslcheck/types.hpp"

namespace csl {

using FK = Formula::Kind;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& reason) { throw ProofError(path, reason); }

void need(bool cond, const std::string& path, const std::string& reason) {
  if (!cond) fail(path, reason);
}

std::string kid(const std::string& path, size_t i) { return path + "/children/" + std::to_string(i); }

void same_formula(const Formula& got, const Formula& want, const std::string& path, const std::string& what) {
  if (!(got == want)) fail(path, what + ": expected " + print_formula(want) + ", got " + print_formula(got));
}

std::string child_msg(size_t i, const std::string& what) { return "child " + std::to_string(i) + " " + what; }

void same_env(const ProofTree& child, const Env& want, const std::string& path, size_t i) {
  if (child.concl.env != want)
    fail(path, child_msg(i, "environment " + env_str(child.concl.env) + " differs from " + env_str(want)));
}

Formula top(const Env& e) { return Formula::top(e); }

void check_assign(const ProofTree& t, const SymbolTable& syms, const std::string& path) {
  const HoareTriple& c = t.concl;
  need(c.prog.kind == Program::Kind::Assign, path, t.rule + " needs an assignment");
  const std::string& r = c.prog.var;
  const Expr& e = c.prog.rhs;
  bool det = t.rule == "DAssn" || t.rule == "SDAssn";
  FK atom = det ? FK::ESpl : FK::Eq;
  if (fv(e).count(r)) fail(path, "side condition violated: " + r + " ∉ fv(e)");
  if (det && !is_det(e, syms)) fail(path, "side condition violated: right-hand side must be deterministic");

  if (t.rule == "Assn" || t.rule == "DAssn") {
    same_formula(c.pre, top(c.env), path, "precondition");
    same_formula(c.post, Formula::atom(atom, c.env, {Expr::var(r), e}), path, "postcondition");
    return;
  }
  need(t.xi.has_value() && t.theta.has_value(), path, "missing witness 'xi' or 'theta'");
  const Env& xi = *t.xi;
  const Env& theta = *t.theta;
  need(!xi.count(r), path, "side condition violated: " + r + " ∉ dom(Ξ)");
  Type tau;
  try {
    tau = type_expr(xi, e, syms);
  } catch (const TypeError& err) {
    fail(path, std::string("side condition violated: Ξ ⊢ e : τ: ") + err.what());
  }
  need(c.pre.kind == FK::Star, path, "precondition must be a separating conjunction");
  need(c.pre.kids[0].ann == xi, path, "left part of the precondition must be annotated Ξ = " + env_str(xi));
  need(c.pre.kids[1].ann == theta, path, "right part of the precondition must be annotated Θ = " + env_str(theta));
  Env xr = xi;
  xr.emplace(r, tau);
  Env rest = env_remove(theta, r);
  Formula psi = with_ann(c.pre.kids[1], rest);
  try {
    wf_formula(psi, syms);
  } catch (const TypeError& err) {
    fail(path, std::string("side condition violated: ψ well-formed under Θ \\ {r}: ") + err.what());
  }
  Formula left = Formula::conj(c.pre.kids[0], Formula::atom(atom, xr, {Expr::var(r), e}), xr);
  same_formula(c.post, Formula::star(left, psi, c.env), path, "postcondition");
}

}  // namespace

void check_node(const ProofTree& t, const SymbolTable& syms, const AxiomRegistry& reg, const std::string& path) {
  const HoareTriple& c = t.concl;
  static const std::map<std::string, size_t> arity = {{"Skip", 0},   {"Seq", 2},    {"Assn", 0},  {"DAssn", 0},
                                                      {"SRAssn", 0}, {"SDAssn", 0}, {"RCond", 2}, {"Weak", 1},
                                                      {"Const", 1},  {"Frame", 1}};
  auto ar = arity.find(t.rule);
  if (ar == arity.end()) fail(path, "unknown rule name '" + t.rule + "'");
  if (t.kids.size() != ar->second)
    fail(path, "rule " + t.rule + " expects " + std::to_string(ar->second) + " children, got " +
                   std::to_string(t.kids.size()));
  try {
    wf_triple(c, syms);
  } catch (const TypeError& e) {
    fail(path, std::string("ill-typed conclusion: ") + e.what());
  }
  const std::string& rule = t.rule;
  if (rule == "Skip") {
    need(c.prog.kind == Program::Kind::Skip, path, "Skip needs the program skip");
    same_formula(c.post, c.pre, path, "postcondition");
  } else if (rule == "Seq") {
    need(t.mid.has_value(), path, "missing witness 'mid'");
    const ProofTree& a = t.kids[0];
    const ProofTree& b = t.kids[1];
    same_env(a, c.env, path, 0);
    same_env(b, c.env, path, 1);
    auto whole = flatten_seq(c.prog);
    auto pa = flatten_seq(a.concl.prog);
    auto pb = flatten_seq(b.concl.prog);
    std::vector<Program> joined = pa;
    joined.insert(joined.end(), pb.begin(), pb.end());
    need(c.prog.kind == Program::Kind::Seq && joined == whole, path,
         "program is not the sequence of the children's programs");
    same_formula(a.concl.pre, c.pre, path, child_msg(0, "precondition"));
    same_formula(a.concl.post, *t.mid, path, child_msg(0, "postcondition"));
    same_formula(b.concl.pre, *t.mid, path, child_msg(1, "precondition"));
    same_formula(b.concl.post, c.post, path, child_msg(1, "postcondition"));
  } else if (rule == "Assn" || rule == "DAssn" || rule == "SRAssn" || rule == "SDAssn") {
    check_assign(t, syms, path);
  } else if (rule == "RCond") {
    need(c.prog.kind == Program::Kind::If, path, "RCond needs a conditional");
    need(classify_exact(c.post), path, "side condition violated: postcondition must be exact");
    same_formula(c.pre, top(c.env), path, "precondition");
    const std::string& r = c.prog.var;
    for (size_t i = 0; i < 2; ++i) {
      const ProofTree& k = t.kids[i];
      same_env(k, c.env, path, i);
      need(k.concl.prog == c.prog.kids[i], path, child_msg(i, i == 0 ? "program is not the then-branch" : "program is not the else-branch"));
      Formula guard = Formula::atom(FK::ESpl, c.env, {Expr::var(r), Expr::app(i == 0 ? "1" : "0", {})});
      same_formula(k.concl.pre, guard, path, child_msg(i, "precondition"));
      same_formula(k.concl.post, c.post, path, child_msg(i, "postcondition"));
    }
  } else if (rule == "Weak") {
    need(t.pre_cert.has_value() && t.post_cert.has_value(), path, "missing certificate");
    const ProofTree& k = t.kids[0];
    same_env(k, c.env, path, 0);
    need(k.concl.prog == c.prog, path, child_msg(0, "program differs from the conclusion's"));
    Entailment pre = check_hilbert(*t.pre_cert, syms, reg, path + "/witnesses/pre_cert");
    Entailment post = check_hilbert(*t.post_cert, syms, reg, path + "/witnesses/post_cert");
    same_formula(pre.lhs, c.pre, path + "/witnesses/pre_cert", "certificate left-hand side");
    same_formula(pre.rhs, k.concl.pre, path + "/witnesses/pre_cert", "certificate right-hand side");
    same_formula(post.lhs, k.concl.post, path + "/witnesses/post_cert", "certificate left-hand side");
    same_formula(post.rhs, c.post, path + "/witnesses/post_cert", "certificate right-hand side");
  } else if (rule == "Const" || rule == "Frame") {
    need(t.xi.has_value() && t.theta.has_value(), path, "missing witness 'xi' or 'theta'");
    const Env& xi = *t.xi;
    const Env& theta = *t.theta;
    if (rule == "Const") {
      VarSet m = mv(c.prog);
      for (const auto& [v, ty] : theta)
        if (m.count(v)) fail(path, "side condition violated: dom(Θ) ∩ mv(P) = ∅, " + v + " is modified");
    }
    const ProofTree& k = t.kids[0];
    same_env(k, xi, path, 0);
    need(k.concl.prog == c.prog, path, child_msg(0, "program differs from the conclusion's"));
    FK op = rule == "Const" ? FK::And : FK::Star;
    need(c.pre.kind == op && c.post.kind == op, path,
         rule == "Const" ? "pre- and postcondition must be conjunctions" : "pre- and postcondition must be separating conjunctions");
    same_formula(c.pre.kids[0], k.concl.pre, path, "left part of the precondition");
    same_formula(c.post.kids[0], k.concl.post, path, "left part of the postcondition");
    need(c.pre.kids[1].ann == theta, path, "framed formula must be annotated Θ = " + env_str(theta));
    same_formula(c.post.kids[1], c.pre.kids[1], path, "framed formula of the postcondition");
  } else {
    fail(path, "unknown rule name '" + rule + "'");
  }
}

CheckResult check_triple(const ProofTree& t, const SymbolTable& syms, const AxiomRegistry& reg,
                         const std::string& root_path) {
  CheckResult res;
  std::deque<std::pair<const ProofTree*, std::string>> q{{&t, root_path}};
  while (!q.empty()) {
    auto [node, path] = q.front();
    q.pop_front();
    NodeVerdict v{path, node->rule, true, ""};
    try {
      check_node(*node, syms, reg, path);
    } catch (const ProofError& e) {
      v.ok = false;
      v.reason = e.what();
      if (res.ok) {
        res.ok = false;
        res.path = e.path();
        res.reason = e.reason();
      }
    }
    res.nodes.push_back(v);
    for (size_t i = 0; i < node->kids.size(); ++i) q.emplace_back(&node->kids[i], kid(path, i));
  }
  return res;
}

ValidationReport validate_triple(const HoareTriple& t, const std::vector<Store>& corpus, const Interp& in,
                                 const Rational& epsilon) {
  ValidationReport rep;
  for (size_t i = 0; i < corpus.size(); ++i) {
    StoreVerdict v;
    v.index = i;
    v.pre_holds = sat_formula(corpus[i], t.pre, in, epsilon);
    if (v.pre_holds) {
      ++rep.checked;
      Store out = store_run(t.prog, corpus[i], in);
      v.post_holds = sat_formula(out, t.post, in, epsilon);
      if (!v.post_holds) {
        ++rep.failures;
        v.detail = explain_failure(out, t.post, in, epsilon) + "\n  output: " + store_json(out);
      }
    }
    rep.stores.push_back(std::move(v));
  }
  return rep;
}

}  // namespace csl
