#pragma once

#include <string>

#include "cslcheck/syntax.hpp"

namespace csl {

// Certificate construction helpers.
Cert cert_ap(const Formula& f);
Cert cert_topi(const Formula& lhs);
Cert cert_ande(Cert premise, int index);
Cert cert_andi(Cert a, Cert b, std::optional<Formula> rhs = std::nullopt);
Cert cert_stari(Cert a, Cert b, const Env& env);
Cert cert_cut(std::vector<Cert> chain);
Cert cert_axiom(const std::string& name, const std::optional<Env>& env, std::map<std::string, SubstVal> subst);

SubstVal sv_expr(const Expr& e);
SubstVal sv_name(const std::string& s);
SubstVal sv_env(const Env& e);
SubstVal sv_formula(const Formula& f);

// Environment, program and proof of the key-stretching construction with h+1 rounds.
Env exp_env(unsigned h);
Program exp_program(unsigned h);
ProofFile exp_proof(unsigned h);

}  // namespace csl
