#include <doctest.h>

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cslcheck/hoare.hpp"

using namespace csl;
using nlohmann::json;

namespace {

json load(const std::string& name) {
  std::ifstream f(std::string(CSL_CORPUS_DIR) + "/" + name);
  std::stringstream ss;
  ss << f.rdbuf();
  return json::parse(ss.str());
}

CheckResult check_json(const json& j) {
  ProofFile pf = parse_proof(j.dump());
  return check_triple(pf.root, pf.syms);
}

CheckResult mutate(const std::string& file, const std::string& ptr, const json& value) {
  json j = load(file);
  j[json::json_pointer(ptr)] = value;
  return check_json(j);
}

CheckResult single(const char* rule, const char* env, const char* pre, const char* prog, const char* post,
                   json witnesses = json::object()) {
  json node = {{"rule", rule}, {"conclusion", {{"env", env}, {"pre", pre}, {"program", prog}, {"post", post}}}};
  if (!witnesses.empty()) node["witnesses"] = witnesses;
  return check_json({{"proof", node}});
}

}  // namespace

TEST_CASE("corpus proofs are accepted") {
  for (const char* f : {"xor.proof", "potp.proof", "exp_h0.proof", "exp_h1.proof", "exp_h2.proof"}) {
    CAPTURE(f);
    CheckResult r = check_json(load(f));
    CHECK_MESSAGE(r.ok, r.path << ": " << r.reason);
    for (const auto& v : r.nodes) CHECK(v.ok);
  }
  CHECK(check_json(load("xor.proof")).nodes.size() == 7);
  CHECK(check_json(load("potp.proof")).nodes.size() == 6);
}

TEST_CASE("RCond rejects an approximate postcondition") {
  CheckResult r = mutate("xor.proof", "/proof/conclusion/post", "(c .= xor(k, m)) /\\ (U(c)){c: Bool}");
  CHECK(!r.ok);
  CHECK(r.path == "/proof");
  CHECK(r.reason.find("exact") != std::string::npos);
}

TEST_CASE("Const rejects a frame that overlaps the modified variables") {
  CheckResult r = mutate("xor.proof", "/proof/children/0/children/0/witnesses/theta", "{c: Bool, k: Bool}");
  CHECK(!r.ok);
  CHECK(r.path == "/proof/children/0/children/0");
  CHECK(r.reason.find("side condition") != std::string::npos);
}

TEST_CASE("SRAssn rejects an assigned variable in the context") {
  CheckResult r = mutate("potp.proof", "/proof/children/0/children/0/witnesses/xi", "{k: Str[n]}");
  CHECK(!r.ok);
  CHECK(r.path == "/proof/children/0/children/0");
}

TEST_CASE("deterministic assignment rejects r in fv(e)") {
  const char* env = "{c: Bool, m: Bool}";
  CHECK(single("DAssn", env, "T", "c := not(m)", "c .= not(m)").ok);
  CheckResult r = single("DAssn", env, "T", "c := xor(c, m)", "c .= xor(c, m)");
  CHECK(!r.ok);
  CHECK(r.path == "/proof");
  CHECK(r.reason.find("fv") != std::string::npos);
}

TEST_CASE("certificate errors carry the certificate path") {
  CheckResult r = mutate("potp.proof", "/proof/children/1/witnesses/post_cert/premises/1/subst/d", "g(m)");
  CHECK(!r.ok);
  CHECK(r.path == "/proof/children/1/witnesses/post_cert/premises/1");

  json spl = {{"b", "k"}, {"r", "r0"}, {"s", "b0"}};
  r = mutate("exp_h0.proof",
             "/proof/children/0/children/1/children/1/children/0/witnesses/post_cert/premises/0/premises/0/premises/1/subst",
             spl);
  CHECK(!r.ok);
  CHECK(r.path ==
        "/proof/children/0/children/1/children/1/children/0/witnesses/post_cert/premises/0/premises/0/premises/1");
}

TEST_CASE("Seq requires the stated midpoint") {
  CheckResult r = mutate("potp.proof", "/proof/witnesses/mid", "(U(k)){k: Str[n]}");
  CHECK(!r.ok);
  CHECK(r.path == "/proof");
  CHECK(r.reason.find("child 0") != std::string::npos);
}

TEST_CASE("checking is deterministic") {
  json j = load("exp_h1.proof");
  CheckResult a = check_json(j);
  CheckResult b = check_json(j);
  REQUIRE(a.nodes.size() == b.nodes.size());
  for (size_t i = 0; i < a.nodes.size(); ++i) CHECK(a.nodes[i].path == b.nodes[i].path);
}

TEST_CASE("validation of the OTP triple") {
  Interp in;
  HoareTriple t;
  t.env = parse_env("{c: Str[n], k: Str[n], m: Str[n]}");
  t.pre = parse_formula("T", in.syms, t.env);
  t.prog = parse_program("k := rnd(); c := xor(m, k)", in.syms);
  t.post = parse_formula("(T){m: Str[n]} * (U(c)){c: Str[n]}", in.syms, t.env);
  json stores = load("otp_stores.json");
  std::vector<Store> corpus;
  for (const auto& s : stores["stores"]) corpus.push_back(parse_store(s.dump()));
  ValidationReport rep = validate_triple(t, corpus, in);
  CHECK(rep.checked == 20);
  CHECK(rep.failures == 0);

  t.post = parse_formula("c == m", in.syms, t.env);
  rep = validate_triple(t, corpus, in);
  CHECK(rep.failures > 0);
  const StoreVerdict& v = rep.stores.front();
  CHECK(!v.post_holds);
  CHECK(v.detail.find("c ~ {0: 1/2, 1: 1/2} vs m ~") != std::string::npos);
}

TEST_CASE("validation skips stores that miss the precondition") {
  Interp in;
  HoareTriple t;
  t.env = parse_env("{x: Bool}");
  t.pre = parse_formula("x .= 1", in.syms, t.env);
  t.prog = parse_program("x := not(x)", in.syms);
  t.post = parse_formula("x .= 0", in.syms, t.env);
  Store one{t.env, {{1, dirac(t.env, 1, {"1"})}}};
  Store zero{t.env, {{1, dirac(t.env, 1, {"0"})}}};
  ValidationReport rep = validate_triple(t, {one, zero}, in);
  CHECK(rep.checked == 1);
  CHECK(rep.failures == 0);
  CHECK(!rep.stores[1].pre_holds);
}
