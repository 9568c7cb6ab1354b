#include <doctest.h>

#include "cslcheck/types.hpp"

using namespace csl;

namespace {

Type ty(const char* env, const char* e, SymbolTable syms = {}) { return type_expr(parse_env(env), parse_expr(e, syms), syms); }

}  // namespace

TEST_CASE("expression typing") {
  CHECK(ty("{r: Str[n+1]}", "tail(r)") == parse_type("Str[n]"));
  CHECK(ty("{r: Str[n+1]}", "head(r)") == Type::boolean());
  CHECK(ty("{k: Str[n], b: Bool}", "concat(k, b)") == parse_type("Str[n+1]"));
  CHECK(ty("{a: Str[n], b: Str[2n]}", "concat(a, b)") == parse_type("Str[3n]"));
  CHECK(ty("{m: Str[n]}", "xor(m, rnd())") == parse_type("Str[n]"));
  CHECK(ty("{a: Bool, b: Bool}", "xor(a, not(b))") == Type::boolean());
  CHECK(ty("{}", "setzero[n+2]()") == parse_type("Str[n+2]"));
}

TEST_CASE("typing errors") {
  CHECK_THROWS_WITH_AS(ty("{k: Str[n]}", "head(k)"), doctest::Contains("expected Str[p+1]"), TypeError);
  CHECK_THROWS_WITH_AS(ty("{b: Bool}", "tail(b)"), doctest::Contains("got Bool"), TypeError);
  CHECK_THROWS_WITH_AS(ty("{}", "setzero()"), doctest::Contains("unresolvable size annotation"), TypeError);
  CHECK_THROWS_WITH_AS(ty("{}", "x"), doctest::Contains("unbound variable x"), TypeError);
  CHECK_THROWS_WITH_AS(ty("{a: Str[n], b: Str[n+1]}", "xor(a, b)"), doctest::Contains("expected"), TypeError);
  CHECK_THROWS_WITH_AS(ty("{}", "h(x)"), doctest::Contains("unknown function symbol"), SyntaxError);
  SymbolTable syms;
  syms.declare(parse_decl("decl g : Str[n] -> Str[n+1] det;"));
  CHECK(ty("{k: Str[n]}", "g(k)", syms) == parse_type("Str[n+1]"));
  CHECK_THROWS_WITH_AS(ty("{k: Str[n+1]}", "g(k)", syms), doctest::Contains("expected Str[n]"), TypeError);
}

TEST_CASE("program typing") {
  SymbolTable syms;
  Env env = parse_env("{b: Bool, k: Str[n]}");
  CHECK_NOTHROW(type_program(env, parse_program("if b then k := rnd() else skip end", syms), syms));
  CHECK_THROWS_WITH_AS(type_program(env, parse_program("if k then skip else skip end", syms), syms),
                       doctest::Contains("non-Bool guard"), TypeError);
  CHECK_THROWS_AS(type_program(env, parse_program("b := k", syms), syms), TypeError);
  CHECK_THROWS_WITH_AS(type_program(env, parse_program("z := k", syms), syms), doctest::Contains("unbound variable z"),
                       TypeError);
}

TEST_CASE("determinism, free and modified variables") {
  SymbolTable syms;
  syms.declare(parse_decl("decl g : Str[n] -> Str[n] det;"));
  syms.declare(parse_decl("decl h : Str[n] -> Str[n] rand;"));
  CHECK(is_det(parse_expr("xor(g(k), m)", syms), syms));
  CHECK(!is_det(parse_expr("xor(rnd(), m)", syms), syms));
  CHECK(!is_det(parse_expr("h(k)", syms), syms));
  CHECK(fv(parse_expr("xor(g(k), m)", syms)) == VarSet{"k", "m"});
  CHECK(fv(parse_expr("rnd()", syms)).empty());
  CHECK(mv(parse_program("if b then c := m else skip end; k := rnd()", syms)) == VarSet{"c", "k"});
  CHECK(mv(parse_program("skip", syms)).empty());
}

TEST_CASE("formula well-formedness and classes") {
  SymbolTable syms;
  auto f = [&](const char* s) { return parse_formula(s, syms); };
  CHECK_NOTHROW(wf_formula(f("((T){m: Str[n]} * (U(c)){c: Str[n]}){c: Str[n], m: Str[n]}"), syms));
  CHECK_THROWS_WITH_AS(wf_formula(f("((U(c)){c: Bool} * (T){c: Bool}){c: Bool}"), syms),
                       doctest::Contains("overlapping"), TypeError);
  CHECK_THROWS_WITH_AS(wf_formula(f("(c .= rnd()){c: Str[n]}"), syms), doctest::Contains("deterministic"), TypeError);
  CHECK_THROWS_AS(wf_formula(f("((U(c)){c: Bool} /\\ (T){d: Bool}){c: Bool}"), syms), TypeError);

  CHECK(classify_exact(f("((c .= m){c: Bool, m: Bool} /\\ (c == m){c: Bool, m: Bool}){c: Bool, m: Bool}")));
  CHECK(!classify_exact(f("(U(c)){c: Bool}")));
  CHECK(classify_approx(f("((U(c)){c: Bool} * (T){m: Bool}){c: Bool, m: Bool}")));
  CHECK(!classify_approx(f("(c .= m){c: Bool, m: Bool}")));
  CHECK(classify_exact(f("(T){}")));
  CHECK(classify_approx(f("(T){}")));
}

TEST_CASE("environment operations") {
  Env a = parse_env("{x: Bool}");
  Env b = parse_env("{y: Str[n]}");
  CHECK(env_join(a, b) == parse_env("{x: Bool, y: Str[n]}"));
  CHECK_THROWS_AS(env_join(a, a), TypeError);
  CHECK(env_ext(a, env_join(a, b)));
  CHECK(!env_ext(parse_env("{x: Str[n]}"), env_join(a, b)));
  CHECK(env_disjoint(a, b));
  CHECK(env_remove(env_join(a, b), "x") == b);
  CHECK(env_remove(b, "x") == b);
  CHECK(env_restrict(env_join(a, b), {"y", "z"}) == b);
}
