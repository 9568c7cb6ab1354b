#include <doctest.h>

#include "cslcheck/syntax.hpp"

using namespace csl;

TEST_CASE("poly_eval and canonical polynomials") {
  CHECK(poly_eval(parse_poly("n"), 3) == 3);
  CHECK(poly_eval(parse_poly("n+1"), 4) == 5);
  CHECK(poly_eval(parse_poly("2n+1"), 3) == 7);
  CHECK(poly_eval(parse_poly("2*n + n^2 + 3"), 2) == 11);
  CHECK(parse_poly("1+n") == parse_poly("n+1"));
  CHECK(parse_poly("n+n") == parse_poly("2n"));
  CHECK(parse_poly("0").coeffs().size() == 1);
  CHECK(SizePoly({1, 0, 0}) == SizePoly::constant(1));
  CHECK(parse_poly("n^2+2n+1").str() == "n^2+2n+1");
  CHECK(SizePoly::constant(0).str() == "0");
  CHECK(!parse_poly("n").minus(parse_poly("n+1")).has_value());
  CHECK(*parse_poly("2n+3").minus(parse_poly("n+1")) == parse_poly("n+2"));
}

TEST_CASE("types and environments") {
  CHECK(parse_type("Str[n+1]") == Type::str(parse_poly("n+1")));
  CHECK(!(parse_type("Str[n+1]") == parse_type("Str[n]")));
  CHECK(parse_type("Str[0]").width(5) == 0);
  Env e = parse_env("{m: Str[n], c: Bool}");
  CHECK(env_str(e) == "{c: Bool, m: Str[n]}");
  CHECK(env_str(parse_env(env_str(e))) == env_str(e));
  CHECK_THROWS_AS(parse_env("{a: Bool, a: Bool}"), SyntaxError);
  CHECK(parse_env("{}").empty());
}

TEST_CASE("program parsing") {
  SymbolTable syms;
  CHECK(parse_program("skip", syms) == Program::skip());

  SymbolTable s2;
  Program p = parse_program("decl g : Str[n] -> Str[n] det;\nc := xor(m, g(k))", s2);
  Program want = Program::assign(
      "c", Expr::app("xor", {Expr::var("m"), Expr::app("g", {Expr::var("k")})}));
  CHECK(p == want);
  CHECK(s2.find("g") != nullptr);

  SymbolTable s3;
  CHECK_THROWS_AS(parse_program("if xor(a,b) then skip else skip end", s3), SyntaxError);
  CHECK_THROWS_AS(parse_program("c := h(k)", s3), SyntaxError);
  CHECK_THROWS_AS(parse_program("c := ", s3), SyntaxError);

  try {
    parse_program("skip;\n  x := ", s3);
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("sequences are left-nested and print back") {
  SymbolTable syms;
  Program p = parse_program("a := b; c := d; e := f", syms);
  REQUIRE(p.kind == Program::Kind::Seq);
  CHECK(p.kids[0].kind == Program::Kind::Seq);
  CHECK(print_program(p) == "a := b; c := d; e := f");
  Program r = Program::seq(Program::assign("a", Expr::var("b")),
                           Program::seq(Program::assign("c", Expr::var("d")), Program::skip()));
  CHECK(print_program(r) == "a := b; { c := d; skip }");
  CHECK(parse_program(print_program(r), syms) == r);
  CHECK(flatten_seq(r).size() == 3);
}

TEST_CASE("formula parsing and annotations") {
  SymbolTable syms;
  Formula f = parse_formula("(U(k)){k: Str[n]} * (T){m: Str[n]}", syms, parse_env("{k: Str[n], m: Str[n]}"));
  REQUIRE(f.kind == Formula::Kind::Star);
  CHECK(f.kids[0].kind == Formula::Kind::U);
  CHECK(f.kids[1].ann == parse_env("{m: Str[n]}"));
  CHECK(f.ann == parse_env("{k: Str[n], m: Str[n]}"));

  Formula g = parse_formula("(r .= s){r: Bool, s: Bool}", syms);
  CHECK(g.kind == Formula::Kind::ESpl);

  Formula h = parse_formula("(r == s /\\ U(r)){r: Bool, s: Bool}", syms);
  REQUIRE(h.kind == Formula::Kind::And);
  CHECK(h.kids[0].kind == Formula::Kind::Eq);
  CHECK(h.kids[1].ann == h.ann);

  CHECK_THROWS_AS(parse_formula("U(k) * T", syms, parse_env("{k: Str[n]}")), SyntaxError);
  CHECK_THROWS_AS(parse_formula("((T){}){}", syms), SyntaxError);
  CHECK_THROWS_AS(parse_formula("U(k)", syms), SyntaxError);
}

TEST_CASE("formula round trip through the printer") {
  SymbolTable syms;
  Env d = parse_env("{c: Bool, k: Bool, m: Bool}");
  Formula f = parse_formula("(c .= xor(k, m)) /\\ (k .= 1){k: Bool}", syms, d);
  std::string txt = print_formula(f);
  CHECK(parse_formula(txt, syms) == f);
  CHECK(txt == "((c .= xor(k, m)){c: Bool, k: Bool, m: Bool} /\\ (k .= 1){k: Bool}){c: Bool, k: Bool, m: Bool}");
}

TEST_CASE("expressions with size indices") {
  SymbolTable syms;
  Expr e = parse_expr("setzero[n+1]()", syms);
  REQUIRE(e.idx.size() == 1);
  CHECK(e.idx[0] == parse_poly("n+1"));
  CHECK(print_expr(e) == "setzero[n+1]()");
  CHECK(parse_expr("0", syms) == Expr::app("0", {}));
  CHECK_THROWS_AS(parse_expr("2", syms), SyntaxError);
  CHECK_THROWS_AS(parse_expr("xor", syms), SyntaxError);
}

TEST_CASE("declarations") {
  FuncSym f = parse_decl("decl g : Str[n] -> Str[n+1] det;");
  CHECK(f.name == "g");
  CHECK(f.args.size() == 1);
  CHECK(f.result == parse_type("Str[n+1]"));
  CHECK(print_decl(f) == "decl g : Str[n] -> Str[n+1] det;");
  FuncSym z = parse_decl("decl coin : () -> Bool rand;");
  CHECK(z.args.empty());
  CHECK(z.kind == SymKind::Rand);
  CHECK_THROWS_AS(parse_decl("decl xor : Bool -> Bool det;"), SyntaxError);
  SymbolTable syms;
  syms.declare(f);
  syms.declare(f);
  CHECK_THROWS(syms.declare(parse_decl("decl g : Str[n] -> Str[n] det;")));
}

TEST_CASE("proof scripts") {
  const char* bad = R"({"proof": {"rule": "Sequ", "conclusion": {"env": "{}", "pre": "T", "program": "skip", "post": "T"}}})";
  try {
    parse_proof(bad);
    FAIL("expected an error");
  } catch (const SyntaxError& e) {
    CHECK(std::string(e.what()).find("/proof") == 0);
    CHECK(std::string(e.what()).find("Sequ") != std::string::npos);
  }
  const char* missing = R"({"proof": {"rule": "Seq", "conclusion": {"env": "{}", "pre": "T", "program": "skip; skip", "post": "T"},
    "children": []}})";
  CHECK_THROWS_WITH_AS(parse_proof(missing), doctest::Contains("missing witness field 'mid'"), SyntaxError);

  const char* ok = R"({"decls": ["decl g : Str[n] -> Str[n] det;"],
    "proof": {"rule": "Seq", "conclusion": {"env": "{a: Bool}", "pre": "T", "program": "skip; skip", "post": "T"},
      "witnesses": {"mid": "T"},
      "children": [
        {"rule": "Skip", "conclusion": {"pre": "T", "program": "skip", "post": "T"}},
        {"rule": "Skip", "conclusion": {"pre": "T", "program": "skip", "post": "T"}}]}})";
  ProofFile pf = parse_proof(ok);
  CHECK(pf.root.kids.size() == 2);
  CHECK(pf.root.kids[1].concl.env == parse_env("{a: Bool}"));
  ProofFile again = parse_proof(print_proof(pf));
  CHECK(again.root == pf.root);
  CHECK(print_proof(again) == print_proof(pf));
}
