#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>

#include "cslcheck/semantics.hpp"
#include "cslcheck/syntax.hpp"

namespace csl {

// A failed check, located by a JSON-pointer-like path.
class ProofError : public std::runtime_error {
 public:
  ProofError(const std::string& path, const std::string& reason)
      : std::runtime_error((path.empty() ? std::string("/") : path) + ": " + reason), path_(path), reason_(reason) {}
  const std::string& path() const { return path_; }
  const std::string& reason() const { return reason_; }

 private:
  std::string path_;
  std::string reason_;
};

bool sat_atom(const Store& s, const Formula& a, const Interp& in, const Rational& epsilon = 0);
bool sat_formula(const Store& s, const Formula& f, const Interp& in, const Rational& epsilon = 0);

// Describes the first failing subformula and the distributions that differ;
// empty when s satisfies f.
std::string explain_failure(const Store& s, const Formula& f, const Interp& in, const Rational& epsilon = 0);

// Product criterion: the projection of s on a ⊎ b equals the tensor of its marginals.
bool independent(const Store& s, const Env& a, const Env& b, const Rational& epsilon = 0);

// Annotation-free semantics; annotations on f are ignored.
bool sat_bi(const Store& s, const Formula& f, const Interp& in);
// An annotation of f rooted at s.env under which sat_formula holds, if any.
std::optional<Formula> find_annotation(const Store& s, const Formula& f, const Interp& in);

struct Entailment {
  Formula lhs;
  Formula rhs;
};

const std::vector<std::string>& schema_names();

struct AxiomRegistry {
  std::set<std::string> enabled;
  static AxiomRegistry all();
  // JSON object {"enabled": [names]}.
  static AxiomRegistry from_json(const std::string& text);
};

// Instantiates a schema; throws ProofError(path, ...) naming the failed side condition.
Entailment instantiate_axiom(const std::string& name, const std::map<std::string, SubstVal>& subst,
                             const std::optional<Env>& env, const SymbolTable& syms, const std::string& path = "");

// Checks a derivation and returns its conclusion; throws ProofError on failure.
Entailment check_hilbert(const Cert& c, const SymbolTable& syms, const AxiomRegistry& reg,
                         const std::string& path = "");

}  // namespace csl
