#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace csl {

// Polynomial in the security parameter n with nonnegative coefficients.
// coeffs[i] is the coefficient of n^i; canonical form has no trailing zeros.
class SizePoly {
 public:
  SizePoly() : coeffs_{0} {}
  explicit SizePoly(std::vector<std::uint64_t> coeffs);

  static SizePoly constant(std::uint64_t c) { return SizePoly({c}); }
  static SizePoly n() { return SizePoly({0, 1}); }

  const std::vector<std::uint64_t>& coeffs() const { return coeffs_; }
  std::uint64_t eval(std::uint64_t n) const;
  SizePoly operator+(const SizePoly& o) const;
  // Coefficient-wise difference; nullopt when some coefficient would go negative.
  std::optional<SizePoly> minus(const SizePoly& o) const;
  std::string str() const;

  friend bool operator==(const SizePoly&, const SizePoly&) = default;
  friend auto operator<=>(const SizePoly&, const SizePoly&) = default;

 private:
  std::vector<std::uint64_t> coeffs_;
};

std::uint64_t poly_eval(const SizePoly& p, std::uint64_t n);

struct Type {
  enum class Kind { Bool, Str };
  Kind kind = Kind::Bool;
  SizePoly size;

  static Type boolean() { return Type{}; }
  static Type str(SizePoly p) { return Type{Kind::Str, std::move(p)}; }
  bool is_bool() const { return kind == Kind::Bool; }
  // Bit width of a value of this type at parameter n (Bool is one bit).
  std::uint64_t width(std::uint64_t n) const { return is_bool() ? 1 : size.eval(n); }
  std::string str() const;

  friend bool operator==(const Type& a, const Type& b) {
    return a.kind == b.kind && (a.kind == Kind::Bool || a.size == b.size);
  }
};

// Lexicographically ordered typing environment.
using Env = std::map<std::string, Type>;
std::string env_str(const Env& env);

enum class SymKind { Det, Rand };

struct FuncSym {
  std::string name;
  std::vector<Type> args;
  Type result;
  SymKind kind = SymKind::Det;
};

// Built-in families are handled by the type checker and evaluator; this table
// holds user declarations (the preamble of a program, formula or proof file).
class SymbolTable {
 public:
  static bool is_builtin(const std::string& name);
  static bool is_builtin_randomized(const std::string& name) { return name == "rnd"; }
  void declare(const FuncSym& f);
  const FuncSym* find(const std::string& name) const;
  bool known(const std::string& name) const { return is_builtin(name) || find(name) != nullptr; }
  const std::map<std::string, FuncSym>& decls() const { return decls_; }

 private:
  std::map<std::string, FuncSym> decls_;
};

struct Expr {
  enum class Kind { Var, App };
  Kind kind = Kind::Var;
  std::string name;
  std::vector<SizePoly> idx;  // explicit size indices, e.g. setzero[n]()
  std::vector<Expr> args;

  static Expr var(std::string v) { return Expr{Kind::Var, std::move(v), {}, {}}; }
  static Expr app(std::string f, std::vector<Expr> a, std::vector<SizePoly> i = {}) {
    return Expr{Kind::App, std::move(f), std::move(i), std::move(a)};
  }
  bool is_var() const { return kind == Kind::Var; }
  friend bool operator==(const Expr&, const Expr&) = default;
};

struct Program {
  enum class Kind { Skip, Assign, Seq, If };
  Kind kind = Kind::Skip;
  std::string var;  // assignment target or guard
  Expr rhs;
  std::vector<Program> kids;  // Seq: {first, second}; If: {then, else}

  static Program skip() { return Program{}; }
  static Program assign(std::string r, Expr e) { return Program{Kind::Assign, std::move(r), std::move(e), {}}; }
  static Program seq(Program a, Program b) { return Program{Kind::Seq, "", {}, {std::move(a), std::move(b)}}; }
  static Program ite(std::string g, Program a, Program b) {
    return Program{Kind::If, std::move(g), {}, {std::move(a), std::move(b)}};
  }
  friend bool operator==(const Program&, const Program&) = default;
};

// Statements of a program with every Seq node flattened away.
std::vector<Program> flatten_seq(const Program& p);

struct Formula {
  enum class Kind { Top, Bot, U, Ind, Eq, ESpl, And, Star };
  Kind kind = Kind::Top;
  Env ann;
  std::vector<Expr> ops;       // atom operands
  std::vector<Formula> kids;   // And/Star: {left, right}

  static Formula top(Env a) { return Formula{Kind::Top, std::move(a), {}, {}}; }
  static Formula bot(Env a) { return Formula{Kind::Bot, std::move(a), {}, {}}; }
  static Formula atom(Kind k, Env a, std::vector<Expr> o) { return Formula{k, std::move(a), std::move(o), {}}; }
  static Formula conj(Formula l, Formula r, Env a) {
    return Formula{Kind::And, std::move(a), {}, {std::move(l), std::move(r)}};
  }
  static Formula star(Formula l, Formula r, Env a) {
    return Formula{Kind::Star, std::move(a), {}, {std::move(l), std::move(r)}};
  }
  bool is_atom() const { return kind == Kind::U || kind == Kind::Ind || kind == Kind::Eq || kind == Kind::ESpl; }
  bool is_binary() const { return kind == Kind::And || kind == Kind::Star; }
  friend bool operator==(const Formula&, const Formula&) = default;
};

// Same formula with its outermost annotation replaced.
Formula with_ann(Formula f, Env a);

struct HoareTriple {
  Env env;
  Formula pre;
  Program prog;
  Formula post;
  friend bool operator==(const HoareTriple&, const HoareTriple&) = default;
};

enum class SchemaParam { Expr, Env, Formula, Name };
// Kind of a schema metavariable; unknown schemas and parameters read as names.
SchemaParam schema_param_kind(const std::string& schema, const std::string& param);

// Axiom-schema substitution value.
struct SubstVal {
  enum class Kind { Expr, Env, Formula, Name };
  Kind kind = Kind::Name;
  std::string text;  // source text, kept for printing
  std::optional<csl::Expr> expr;
  std::optional<csl::Env> env;
  std::optional<csl::Formula> formula;
  friend bool operator==(const SubstVal&, const SubstVal&) = default;
};

// Derivation in the Hilbert system for entailments.
struct Cert {
  std::string rule;  // AP TopI BotE AndI AndE StarI StarC StarA1 StarA2 Cut Axiom
  std::vector<Cert> premises;
  std::optional<Formula> formula;  // AP, StarC, StarA1, StarA2
  std::optional<Formula> lhs;      // TopI premise side, optional check on others
  std::optional<Formula> rhs;      // BotE target, AndI explicit conclusion
  std::optional<Env> env;          // StarI outer environment, Axiom environment
  int index = 0;                   // AndE conjunct (1 or 2)
  std::string axiom;
  std::map<std::string, SubstVal> subst;
  friend bool operator==(const Cert&, const Cert&) = default;
};

struct ProofTree {
  std::string rule;  // Skip Seq Assn DAssn SRAssn SDAssn RCond Weak Const Frame
  HoareTriple concl;
  std::optional<Formula> mid;
  std::optional<Env> xi;
  std::optional<Env> theta;
  std::optional<Cert> pre_cert;
  std::optional<Cert> post_cert;
  std::vector<ProofTree> kids;
  friend bool operator==(const ProofTree&, const ProofTree&) = default;
};

struct ProofFile {
  SymbolTable syms;
  std::vector<FuncSym> decls;
  ProofTree root;
};

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& msg, int line, int col)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg), line_(line), col_(col) {}
  SyntaxError(const std::string& path, const std::string& msg) : std::runtime_error(path + ": " + msg) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_ = 0;
  int col_ = 0;
};

// Parsers. Text may start with `decl` lines, which are added to `syms`.
SizePoly parse_poly(const std::string& text);
Type parse_type(const std::string& text);
Env parse_env(const std::string& text);
Expr parse_expr(const std::string& text, SymbolTable& syms);
Program parse_program(const std::string& text, SymbolTable& syms);
// `ctx` is the annotation given to an unannotated outermost formula.
Formula parse_formula(const std::string& text, SymbolTable& syms, const std::optional<Env>& ctx = std::nullopt);
FuncSym parse_decl(const std::string& text);
ProofFile parse_proof(const std::string& json_text);
Cert parse_cert(const std::string& json_text, SymbolTable& syms, const std::optional<Env>& ctx = std::nullopt);

// Printers; their output parses back to an equal value.
std::string print_expr(const Expr& e);
std::string print_program(const Program& p);
std::string print_formula(const Formula& f);
std::string print_decl(const FuncSym& f);
std::string print_proof(const ProofFile& pf);
std::string print_cert(const Cert& c);

}  // namespace csl
