#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cslcheck/dist.hpp"
#include "cslcheck/syntax.hpp"

namespace csl {

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Concrete evaluator of a declared symbol: output distribution on argument values.
using SymImpl = std::function<ValueDist(const std::vector<Value>& args, unsigned n)>;

// Symbol table plus concrete implementations for declared symbols.
struct Interp {
  SymbolTable syms;
  std::map<std::string, SymImpl> impl;
};

// Named deterministic stubs: identity, bitreverse, zeroextend.
const std::vector<std::string>& stub_names();
// Binds a declared unary deterministic symbol to a named stub; throws EvalError on
// an unknown stub or a signature the stub cannot realize.
void bind_stub(Interp& in, const std::string& sym, const std::string& stub);

Value eval_det(const Env& env, const Expr& d, unsigned n, const Row& m, const Interp& in);
// Pre-semantics on a single memory.
ValueDist eval_pre(const Env& env, const Expr& e, unsigned n, const Row& m, const Interp& in);
ValueDist eval_expr(const Env& env, const Expr& e, const FinDist& d, const Interp& in);

FinDist run(const Env& env, const Program& p, const FinDist& d, const Interp& in);
FinDist run_kozen(const Env& env, const Program& p, const FinDist& d, const Interp& in);

Store store_project(const Store& s, const Env& target);
Store store_tensor(const Store& a, const Store& b);
bool store_ext(const Store& sub, const Store& super);
bool store_indist(const Store& a, const Store& b, const Rational& epsilon);
Store store_run(const Program& p, const Store& s, const Interp& in);
Store empty_store(const std::vector<unsigned>& ns);

}  // namespace csl
