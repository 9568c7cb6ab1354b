#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cslcheck/gen.hpp"
#include "cslcheck/semantics.hpp"

namespace csl {

struct PropertyConfig {
  std::uint64_t seed = 42;
  size_t cases = 200;
  std::vector<unsigned> ns = {1, 2};
  // Test-only fault injection; see mutant_names().
  std::string mutant;
};

struct SuiteResult {
  std::string name;
  size_t cases = 0;
  size_t nonvacuous = 0;  // cases whose hypothesis held
  size_t failures = 0;
  std::string first_failure;
  bool ok() const { return failures == 0; }
};

const std::vector<std::string>& suite_names();
const std::vector<std::string>& mutant_names();
SuiteResult run_suite(const std::string& name, const PropertyConfig& cfg);
std::vector<SuiteResult> run_all(const PropertyConfig& cfg);
std::string report_text(const std::vector<SuiteResult>& results);

// Random well-typed instances of Frame, Const, RCond, SRAssn or SDAssn, checked by
// check_node and then validated semantically at epsilon 0.
SuiteResult fuzz_rule_soundness(const std::string& rule, size_t cases, std::uint64_t seed,
                                const std::vector<unsigned>& ns = {1, 2}, const std::string& mutant = "");

// Tensor of independent groups, each uniform, dirac or random; favours stores that
// satisfy U, Eq and separating conjunctions.
Store biased_store(Rng& rng, const Env& env, const std::vector<unsigned>& ns);

// Interpretation with f : Str[n] -> Str[n] det bound to bitreverse.
Interp fuzz_interp();

}  // namespace csl
