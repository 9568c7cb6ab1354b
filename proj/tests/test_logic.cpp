#include <doctest.h>

#include "cslcheck/logic.hpp"
#include "cslcheck/types.hpp"

using namespace csl;

namespace {

const char* kExample = R"j({"env": "{r: Bool, s: Bool}", "dists": {
    "1": [{"mem": {"r": "0", "s": "1"}, "p": "1/2"}, {"mem": {"r": "1", "s": "0"}, "p": "1/2"}],
    "2": [{"mem": {"r": "0", "s": "1"}, "p": "1/2"}, {"mem": {"r": "1", "s": "0"}, "p": "1/2"}]}})j";

bool sat(const Store& s, const char* f, Interp in = {}, Rational eps = 0) {
  return sat_formula(s, parse_formula(f, in.syms, s.env), in, eps);
}

Store run_on(const char* env, const char* prog, std::vector<unsigned> ns) {
  Interp in;
  Env e = parse_env(env);
  Store s{e, {}};
  for (unsigned n : ns) s.family.emplace(n, dirac(e, n, all_memories(e, n).front()));
  return store_run(parse_program(prog, in.syms), s, in);
}

Entailment inst(const char* name, std::map<std::string, SubstVal> subst, const char* env, SymbolTable syms = {}) {
  return instantiate_axiom(name, subst, parse_env(env), syms);
}

SubstVal ex(const char* text) {
  SymbolTable syms;
  return SubstVal{SubstVal::Kind::Expr, text, parse_expr(text, syms), {}, {}};
}

SubstVal nm(const char* text) { return SubstVal{SubstVal::Kind::Name, text, {}, {}, {}}; }

}  // namespace

TEST_CASE("equal marginals versus equal samples") {
  Store s = parse_store(kExample);
  CHECK(sat(s, "r == s"));
  CHECK(!sat(s, "r .= s"));
  CHECK(sat(s, "r .= not(s)"));
  CHECK(sat(s, "r ~~ s"));
  CHECK(sat(s, "U(r)"));
  CHECK(!sat(s, "F"));
  CHECK(sat(s, "T"));
  // r and s are uniform but not independent.
  CHECK(sat(s, "(U(r)){r: Bool} /\\ (U(s)){s: Bool}"));
  CHECK(!sat(s, "(U(r)){r: Bool} * (U(s)){s: Bool}"));
  CHECK(sat(s, "(U(r)){r: Bool} * (T){}"));
}

TEST_CASE("OTP output satisfies the secrecy postcondition") {
  const char* env = "{c: Str[n], k: Str[n], m: Str[n]}";
  Store out = run_on(env, "k := rnd(); c := xor(m, k)", {1, 2, 3});
  CHECK(sat(out, "(T){m: Str[n]} * (U(c)){c: Str[n]}"));
  CHECK(sat(out, "(U(c)){c: Str[n]} * (U(m)){m: Str[n]}") == false);
  CHECK(!sat(out, "(U(c)){c: Str[n]} * (U(k)){k: Str[n]}"));
  // The output is a function of k when m is fixed, so c and k are not separated.
  CHECK(!sat(out, "c == m"));
}

TEST_CASE("approximate indistinguishability honours epsilon") {
  const char* text = R"j({"env": "{x: Bool}", "dists": {"1": [{"mem": {"x": "0"}, "p": "3/4"},
                        {"mem": {"x": "1"}, "p": "1/4"}]}})j";
  Store s = parse_store(text);
  CHECK(!sat(s, "U(x)"));
  CHECK(sat(s, "U(x)", {}, Rational(1, 4)));
  CHECK(!sat(s, "U(x)", {}, Rational(1, 5)));
  CHECK(sat(s, "x ~~ not(x)", {}, Rational(1, 2)));
  CHECK(!sat(s, "x ~~ not(x)", {}, Rational(1, 3)));
  // Eq is exact regardless of epsilon.
  CHECK(!sat(s, "x == not(x)", {}, Rational(1, 2)));
}

TEST_CASE("failure explanations name the differing distributions") {
  Store s = parse_store(kExample);
  Interp in;
  CHECK(explain_failure(s, parse_formula("r == s", in.syms, s.env), in).empty());
  std::string e = explain_failure(s, parse_formula("r .= s", in.syms, s.env), in);
  CHECK(e.find("r = 0 but s = 1") != std::string::npos);
  e = explain_failure(s, parse_formula("r == 0", in.syms, s.env), in);
  CHECK(e.find("r ~ {0: 1/2, 1: 1/2} vs 0 ~ {0: 1}") != std::string::npos);
  e = explain_failure(s, parse_formula("(U(r)){r: Bool} * (U(s)){s: Bool}", in.syms, s.env), in);
  CHECK(e.find("not independent") != std::string::npos);
}

TEST_CASE("annotation-free semantics and annotation search") {
  Store s = parse_store(kExample);
  Interp in;
  Formula sep = parse_formula("(U(r)){r: Bool} * (U(s)){s: Bool}", in.syms, s.env);
  CHECK(!sat_bi(s, sep, in));
  CHECK(!find_annotation(s, sep, in));
  Formula loose = parse_formula("(U(r)){r: Bool} * (T){}", in.syms, s.env);
  CHECK(sat_bi(s, loose, in));
  auto a = find_annotation(s, loose, in);
  REQUIRE(a);
  CHECK(sat_formula(s, *a, in));
  CHECK(same_skeleton(*a, loose));
}

TEST_CASE("axiom instances") {
  Entailment s0 = inst("S0", {{"e", ex("x")}}, "{x: Bool}");
  CHECK(print_formula(s0.rhs) == "(x ~~ x){x: Bool}");
  Entailment u1 = inst("U1", {{"e", ex("x")}, {"g", ex("y")}}, "{x: Bool, y: Bool}");
  CHECK(u1.rhs.kind == Formula::Kind::U);
  CHECK_THROWS_WITH_AS(inst("S0", {{"e", ex("z")}}, "{x: Bool}"), doctest::Contains("side condition"), ProofError);

  SymbolTable syms;
  syms.declare(parse_decl("decl g : Str[n] -> Str[n+1] det;"));
  syms.declare(parse_decl("decl f : Str[n] -> Str[n] det;"));
  Entailment potp = inst("Ax_POTP", {{"x", nm("k")}, {"g", nm("g")}}, "{k: Str[n]}", syms);
  CHECK(print_formula(potp.rhs) == "(U(g(k))){k: Str[n]}");
  CHECK_THROWS_WITH_AS(inst("Ax_POTP", {{"x", nm("k")}, {"g", nm("f")}}, "{k: Str[n]}", syms),
                       doctest::Contains("p(n) > n"), ProofError);

  const char* spl_env = "{b: Bool, r: Str[n+1], s: Str[n]}";
  CHECK_NOTHROW(inst("Ax_SPL", {{"r", nm("r")}, {"b", nm("b")}, {"s", nm("s")}}, spl_env));
  CHECK_THROWS_WITH_AS(inst("Ax_MRG", {{"r", nm("r")}, {"b", nm("b")}, {"s", nm("s")}}, spl_env),
                       doctest::Contains("Str[p+1]"), ProofError);
  CHECK_NOTHROW(inst("Ax_MRG", {{"r", nm("s")}, {"b", nm("b")}, {"s", nm("r")}}, spl_env));
  CHECK_THROWS_AS(inst("NoSuchAxiom", {}, "{}"), ProofError);
}

TEST_CASE("Hilbert derivations") {
  SymbolTable syms;
  auto check = [&](const char* json, const char* ctx, AxiomRegistry reg = AxiomRegistry::all()) {
    return check_hilbert(parse_cert(json, syms, parse_env(ctx)), syms, reg, "/c");
  };
  Entailment e = check(R"j({"rule": "Cut", "premises": [
      {"rule": "Axiom", "name": "T0", "subst": {"e": "x"}},
      {"rule": "Axiom", "name": "W1", "subst": {"e": "x", "g": "x"}}]})j",
                       "{x: Bool}");
  CHECK(print_formula(e.lhs) == "(T){x: Bool}");
  CHECK(print_formula(e.rhs) == "(x ~~ x){x: Bool}");

  e = check(R"j({"rule": "AndE", "index": 2, "premises": [{"rule": "AP", "formula": "(U(x)) /\\ (x == y)"}]})j",
            "{x: Bool, y: Bool}");
  CHECK(print_formula(e.rhs) == "(x == y){x: Bool, y: Bool}");

  CHECK_THROWS_WITH_AS(check(R"j({"rule": "Cut", "premises": [
      {"rule": "Axiom", "name": "T0", "subst": {"e": "x"}},
      {"rule": "Axiom", "name": "S0", "subst": {"e": "x"}}]})j",
                             "{x: Bool}"),
                       doctest::Contains("/c/premises/1"), ProofError);

  AxiomRegistry only = AxiomRegistry::from_json(R"j({"enabled": ["S0"]})j");
  CHECK(only.enabled == std::set<std::string>{"S0"});
  CHECK_THROWS_WITH_AS(check(R"j({"rule": "Axiom", "name": "T0", "subst": {"e": "x"}})j", "{x: Bool}", only),
                       doctest::Contains("disabled"), ProofError);
  CHECK(AxiomRegistry::all().enabled.size() == schema_names().size());
}
