#pragma once

#include <set>
#include <stdexcept>
#include <string>

#include "cslcheck/syntax.hpp"

namespace csl {

class TypeError : public std::runtime_error {
 public:
  TypeError(const std::string& path, const std::string& msg)
      : std::runtime_error(path.empty() ? msg : path + ": " + msg), path_(path), msg_(msg) {}
  const std::string& path() const { return path_; }
  const std::string& message() const { return msg_; }

 private:
  std::string path_;
  std::string msg_;
};

using VarSet = std::set<std::string>;

Type type_expr(const Env& env, const Expr& e, const SymbolTable& syms, const std::string& path = "");
void type_program(const Env& env, const Program& p, const SymbolTable& syms, const std::string& path = "");
void wf_formula(const Formula& f, const SymbolTable& syms, const std::string& path = "");
// Annotations of pre and post equal env, program and formulas type.
void wf_triple(const HoareTriple& t, const SymbolTable& syms, const std::string& path = "");

bool is_det(const Expr& e, const SymbolTable& syms);
bool classify_exact(const Formula& f);
bool classify_approx(const Formula& f);

VarSet fv(const Expr& e);
VarSet mv(const Program& p);
VarSet dom(const Env& env);

bool env_ext(const Env& sub, const Env& super);
// Disjoint union; throws TypeError on overlap.
Env env_join(const Env& a, const Env& b);
bool env_disjoint(const Env& a, const Env& b);
Env env_remove(const Env& env, const std::string& var);
Env env_restrict(const Env& env, const VarSet& vars);

bool formula_ext(const Formula& f1, const Formula& f2);
// Same connective skeleton and atoms, annotations ignored.
bool same_skeleton(const Formula& a, const Formula& b);

}  // namespace csl
