#pragma once

#include <random>
#include <vector>

#include "cslcheck/dist.hpp"
#include "cslcheck/syntax.hpp"

namespace csl {

using Rng = std::mt19937_64;

inline size_t pick(Rng& rng, size_t k) { return static_cast<size_t>(rng() % k); }
inline bool coin(Rng& rng, unsigned percent) { return rng() % 100 < percent; }

// Bool variables a, b, c, ... and Str[n] variables x, y, ...
Env gen_env(Rng& rng, unsigned max_bool, unsigned max_str, unsigned min_bool = 1);

// Random sub-environment (each variable kept with probability 1/2).
Env gen_subenv(Rng& rng, const Env& env);

// Expression of type `ty` (Bool or Str[n]) typed under env. Unary Str[n] -> Str[n]
// deterministic symbols declared in syms may appear when `use_syms` is set.
Expr gen_expr(Rng& rng, const Env& env, const Type& ty, const SymbolTable& syms, unsigned depth, bool allow_rand,
              bool use_syms = true);

struct ProgramShape {
  unsigned max_stmts = 6;
  bool allow_rand = true;
  bool allow_if = true;
  unsigned depth = 2;
};
Program gen_program(Rng& rng, const Env& env, const SymbolTable& syms, const ProgramShape& shape = {});

// Random distribution: support of at most `max_support` memories, weights in 1..max_weight.
FinDist gen_dist(Rng& rng, const Env& env, unsigned n, unsigned max_support = 6, unsigned max_weight = 4);
Store gen_store(Rng& rng, const Env& env, const std::vector<unsigned>& ns, unsigned max_support = 6,
                unsigned max_weight = 4);

enum class FormulaClass { Any, Exact, Approx };
// Well-formed formula annotated exactly `ann`.
Formula gen_formula(Rng& rng, const Env& ann, const SymbolTable& syms, unsigned depth,
                    FormulaClass cls = FormulaClass::Any);

}  // namespace csl
