#include <doctest.h>

#include <bitset>

#include "cslcheck/semantics.hpp"

using namespace csl;

namespace {

Row row(std::initializer_list<const char*> vs) { return Row(vs.begin(), vs.end()); }

std::string bits(unsigned v, unsigned w) { return std::bitset<8>(v).to_string().substr(8 - w); }

FinDist run_text(const char* env, const char* prog, const FinDist& d, Interp in = {}) {
  Program p = parse_program(prog, in.syms);
  return run(parse_env(env), p, d, in);
}

}  // namespace

TEST_CASE("OTP output against a brute-force enumeration") {
  const char* envs = "{c: Str[n], k: Str[n], m: Str[n]}";
  Env env = parse_env(envs);
  for (unsigned n = 1; n <= 3; ++n) {
    CAPTURE(n);
    // Message weights 1..2^n, normalized.
    unsigned size = 1u << n;
    FinDist in{env, n, {}};
    Rational total(size * (size + 1) / 2);
    for (unsigned m = 0; m < size; ++m)
      in.p.emplace(Row{bits(0, n), bits(0, n), bits(m, n)}, Rational(m + 1) / total);
    FinDist out = run_text(envs, "k := rnd(); c := xor(m, k)", in);
    std::map<Row, Rational> expect;
    for (unsigned m = 0; m < size; ++m)
      for (unsigned k = 0; k < size; ++k) {
        Rational q = Rational(m + 1) / total / size;
        q.canonicalize();
        expect[Row{bits(m ^ k, n), bits(k, n), bits(m, n)}] += q;
      }
    CHECK(out.p == expect);
    CHECK(is_uniform(marginal(out, "c"), n));
    CHECK(marginal(out, "m") == marginal(in, "m"));
  }
}

TEST_CASE("OTP at n=1 from a dirac has two equally likely outputs") {
  Env env = parse_env("{c: Str[n], k: Str[n], m: Str[n]}");
  FinDist out = run_text("{c: Str[n], k: Str[n], m: Str[n]}", "k := rnd(); c := xor(m, k)",
                         dirac(env, 1, row({"0", "0", "0"})));
  REQUIRE(out.p.size() == 2);
  CHECK(out.p.at(row({"0", "0", "0"})) == Rational(1, 2));
  CHECK(out.p.at(row({"1", "1", "0"})) == Rational(1, 2));
}

TEST_CASE("XOR program on every dirac input") {
  Env env = parse_env("{c: Bool, k: Bool, m: Bool}");
  for (unsigned k = 0; k < 2; ++k)
    for (unsigned m = 0; m < 2; ++m) {
      FinDist out = run_text("{c: Bool, k: Bool, m: Bool}", "if k then c := not(m) else c := m end",
                             dirac(env, 1, Row{"1", bits(k, 1), bits(m, 1)}));
      CHECK(out == dirac(env, 1, Row{bits(k ^ m, 1), bits(k, 1), bits(m, 1)}));
    }
}

TEST_CASE("built-in operators evaluate bitwise") {
  Interp in;
  Env env = parse_env("{b: Bool, r: Str[n+1], x: Str[n]}");
  Row m = row({"1", "011", "10"});
  auto ev = [&](const char* e) { return eval_det(env, parse_expr(e, in.syms), 2, m, in); };
  CHECK(ev("head(r)") == "0");
  CHECK(ev("tail(r)") == "11");
  CHECK(ev("concat(x, b)") == "101");
  CHECK(ev("xor(x, tail(r))") == "01");
  CHECK(ev("setzero[n+1]()") == "000");
  CHECK(ev("not(b)") == "0");
  CHECK(eval_pre(env, parse_expr("rnd()", in.syms), 2, m, in) == value_uniform(2));
  CHECK(eval_pre(env, parse_expr("xor(x, rnd())", in.syms), 2, m, in) == value_uniform(2));
  CHECK_THROWS_AS(eval_det(env, parse_expr("rnd()", in.syms), 2, m, in), EvalError);
}

TEST_CASE("stubs") {
  Interp in;
  in.syms.declare(parse_decl("decl g : Str[n] -> Str[n] det;"));
  in.syms.declare(parse_decl("decl h : Str[n] -> Str[n+1] det;"));
  Env env = parse_env("{k: Str[n]}");
  Row m = row({"110"});
  CHECK_THROWS_WITH_AS(eval_det(env, parse_expr("g(k)", in.syms), 3, m, in), doctest::Contains("unbound symbol g"),
                       EvalError);
  bind_stub(in, "g", "bitreverse");
  CHECK(eval_det(env, parse_expr("g(k)", in.syms), 3, m, in) == "011");
  bind_stub(in, "g", "identity");
  CHECK(eval_det(env, parse_expr("g(k)", in.syms), 3, m, in) == "110");
  CHECK_THROWS_AS(bind_stub(in, "h", "identity"), EvalError);
  bind_stub(in, "h", "zeroextend");
  CHECK(eval_det(env, parse_expr("h(k)", in.syms), 3, m, in) == "1100");
  CHECK_THROWS_AS(bind_stub(in, "h", "nosuchstub"), EvalError);
}

TEST_CASE("conditional with a random guard splits mass") {
  Env env = parse_env("{b: Bool, x: Bool}");
  FinDist out = run_text("{b: Bool, x: Bool}", "b := rnd(); if b then x := 1 else skip end",
                         dirac(env, 1, row({"0", "0"})));
  CHECK(out.p.at(row({"1", "1"})) == Rational(1, 2));
  CHECK(out.p.at(row({"0", "0"})) == Rational(1, 2));
  SymbolTable syms;
  Program p = parse_program("b := rnd(); if b then x := 1 else skip end", syms);
  CHECK(run_kozen(env, p, dirac(env, 1, row({"0", "0"})), {}) == out);
}

TEST_CASE("stores") {
  Env env = parse_env("{a: Bool, x: Str[n]}");
  Store s{env, {{1, uniform_dist(env, 1)}, {2, uniform_dist(env, 2)}}};
  Store pa = store_project(s, parse_env("{a: Bool}"));
  Store px = store_project(s, parse_env("{x: Str[n]}"));
  CHECK(store_tensor(pa, px) == s);
  CHECK(store_ext(pa, s));
  CHECK(!store_ext(s, pa));
  CHECK(store_indist(s, s, 0));
  Interp in;
  Store out = store_run(parse_program("a := 0", in.syms), s, in);
  CHECK(!store_indist(out, s, 0));
  CHECK(store_indist(out, s, Rational(1, 2)));
  CHECK(!store_indist(out, s, Rational(1, 3)));
  CHECK(empty_store({1, 2}).family.size() == 2);
}
