#pragma once

#include <string>
#include <vector>

#include "cslcheck/logic.hpp"

namespace csl {

struct NodeVerdict {
  std::string path;
  std::string rule;
  bool ok = true;
  std::string reason;
};

struct CheckResult {
  bool ok = true;
  std::string path;    // first failing node in breadth-first order
  std::string reason;
  std::vector<NodeVerdict> nodes;  // breadth-first order
};

// Checks every node of the tree; the reported failure is the shallowest one.
CheckResult check_triple(const ProofTree& t, const SymbolTable& syms, const AxiomRegistry& reg = AxiomRegistry::all(),
                         const std::string& root_path = "/proof");
// Local check of a single node against its children's conclusions; throws ProofError.
void check_node(const ProofTree& t, const SymbolTable& syms, const AxiomRegistry& reg, const std::string& path);

struct StoreVerdict {
  size_t index = 0;
  bool pre_holds = false;
  bool post_holds = false;
  std::string detail;  // output distribution on failure
};

struct ValidationReport {
  size_t checked = 0;   // stores satisfying the precondition
  size_t failures = 0;
  std::vector<StoreVerdict> stores;
};

ValidationReport validate_triple(const HoareTriple& t, const std::vector<Store>& corpus, const Interp& in,
                                 const Rational& epsilon = 0);

}  // namespace csl
