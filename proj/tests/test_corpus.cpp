#include <doctest.h>

#include "cslcheck/corpus.hpp"
#include "cslcheck/hoare.hpp"

using namespace csl;

TEST_CASE("generated key-stretching proofs check") {
  for (unsigned h = 0; h <= 2; ++h) {
    CAPTURE(h);
    ProofFile pf = exp_proof(h);
    CheckResult r = check_triple(pf.root, pf.syms);
    CHECK_MESSAGE(r.ok, r.path << ": " << r.reason);
    ProofFile again = parse_proof(print_proof(pf));
    CHECK(again.root == pf.root);
  }
}
