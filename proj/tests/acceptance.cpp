// Acceptance suite: one PASS/FAIL line per criterion; exit status 0 iff all pass.
#include <cstdio>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "cslcheck/gen.hpp"
#include "cslcheck/hoare.hpp"
#include "cslcheck/properties.hpp"

using namespace csl;
using nlohmann::json;

namespace {

// Pinned tolerances and sizes.
const Rational kEpsilon = 0;
constexpr std::uint64_t kSeed = 42;
constexpr size_t kKozenCases = 500;
constexpr size_t kOtpMessages = 20;
constexpr size_t kXorRandom = 50;
constexpr size_t kPkrmCases = 300;
constexpr size_t kMetaCases = 200;
constexpr size_t kAxiomCases = 200;
constexpr size_t kRuleCases = 200;
constexpr size_t kIndepCases = 200;
constexpr unsigned kSplitMaxDen = 8;
constexpr size_t kSplitRandom = 100;
constexpr size_t kBiCases = 100;
// Witness tables hold probabilities k / kWitnessDen.
constexpr long kWitnessDen = 12;

struct Outcome {
  bool ok = true;
  std::string detail;
};

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string corpus_path(const std::string& name) { return std::string(CSL_CORPUS_DIR) + "/" + name; }

Outcome from_suites(const std::vector<std::string>& names, size_t cases, std::vector<unsigned> ns = {1, 2}) {
  PropertyConfig cfg;
  cfg.seed = kSeed;
  cfg.cases = cases;
  cfg.ns = std::move(ns);
  Outcome o;
  size_t total = 0, failures = 0;
  for (const auto& n : names) {
    SuiteResult r = run_suite(n, cfg);
    total += r.cases;
    failures += r.failures;
    if (!r.ok() && o.ok) o.detail = n + ": " + r.first_failure + "; ";
    o.ok = o.ok && r.ok();
  }
  o.detail += std::to_string(names.size()) + " suites, " + std::to_string(total) + " cases, " +
              std::to_string(failures) + " failures";
  return o;
}

// 1 -------------------------------------------------------------------------

Outcome kozen() { return from_suites({"kozen"}, kKozenCases); }

// 2 -------------------------------------------------------------------------

std::string bits(unsigned v, unsigned w) {
  std::string s(w, '0');
  for (unsigned i = 0; i < w; ++i) s[w - 1 - i] = static_cast<char>('0' + ((v >> i) & 1));
  return s;
}

unsigned unbits(const std::string& s) {
  unsigned v = 0;
  for (char ch : s) v = v * 2 + static_cast<unsigned>(ch - '0');
  return v;
}

Outcome otp() {
  Rng rng(kSeed);
  Interp in;
  Env env = parse_env("{c: Str[n], k: Str[n], m: Str[n]}");
  Env menv = parse_env("{m: Str[n]}");
  Program prog = parse_program("k := rnd(); c := xor(m, k)", in.syms);
  Formula psi = parse_formula("(T){m: Str[n]} * (U(c)){c: Str[n]}", in.syms, env);
  Outcome o;
  size_t checked = 0;
  for (size_t i = 0; i < kOtpMessages; ++i)
    for (unsigned n = 1; n <= 3; ++n) {
      FinDist md = gen_dist(rng, menv, n, 1u << n, 5);
      FinDist d{env, n, {}};
      for (const auto& [row, q] : md.p) d.p.emplace(Row{bits(0, n), bits(0, n), row[0]}, q);
      Store out = store_run(prog, Store{env, {{n, d}}}, in);
      bool sat = sat_formula(out, psi, in, kEpsilon);
      // Oracle: Pr[m, c] = Pr[m] * 2^-n for every pair, by direct counting.
      std::map<std::pair<unsigned, unsigned>, Rational> joint;
      for (const auto& [row, q] : out.family.at(n).p)
        joint[{unbits(row[2]), unbits(row[0])}] += q;
      bool product = true;
      for (unsigned m = 0; m < (1u << n); ++m) {
        auto it = md.p.find(Row{bits(m, n)});
        Rational pm = it == md.p.end() ? Rational(0) : it->second;
        for (unsigned c = 0; c < (1u << n); ++c) {
          Rational want = pm / (1u << n);
          auto jt = joint.find({m, c});
          Rational got = jt == joint.end() ? Rational(0) : jt->second;
          product = product && got == want;
        }
      }
      ++checked;
      if (!(sat && product) && o.ok) o.detail = "message " + std::to_string(i) + " n=" + std::to_string(n) + "; ";
      o.ok = o.ok && sat && product;
    }
  o.detail += std::to_string(kOtpMessages) + " messages x n=1..3, " + std::to_string(checked) + " runs";
  return o;
}

// 3 -------------------------------------------------------------------------

CheckResult check_json(const json& j) {
  ProofFile pf = parse_proof(j.dump());
  return check_triple(pf.root, pf.syms);
}

Outcome corpus_proofs() {
  Outcome o;
  std::string bad;
  for (const char* f : {"xor.proof", "potp.proof", "exp_h0.proof", "exp_h1.proof", "exp_h2.proof"}) {
    CheckResult r = check_json(json::parse(slurp(corpus_path(f))));
    if (!r.ok) bad += std::string(f) + " rejected at " + r.path + "; ";
  }
  struct Mutation {
    const char* file;
    const char* ptr;
    json value;
    const char* expect_path;
    // A deeper node whose own verdict must mention `reason`, or null.
    const char* leaf = nullptr;
    const char* reason = nullptr;
  };
  const std::vector<Mutation> muts = {
      {"xor.proof", "/proof/conclusion/post", "(c .= xor(k, m)) /\\ (U(c)){c: Bool}", "/proof"},
      {"xor.proof", "/proof/children/0/children/0/witnesses/theta", "{c: Bool, k: Bool}", "/proof/children/0/children/0"},
      {"xor.proof", "/proof/children/1/children/0/children/0/conclusion/program", "c := xor(c, m)",
       "/proof/children/1/children/0", "/proof/children/1/children/0/children/0", "fv"},
      {"potp.proof", "/proof/children/0/children/0/witnesses/xi", "{k: Str[n]}", "/proof/children/0/children/0"},
      {"potp.proof", "/proof/children/1/witnesses/post_cert/premises/1/subst/d", "g(m)",
       "/proof/children/1/witnesses/post_cert/premises/1"},
      {"exp_h1.proof",
       "/proof/children/0/children/1/children/1/children/0/witnesses/post_cert/premises/0/premises/0/premises/1/subst/s",
       "b0", "/proof/children/0/children/1/children/1/children/0/witnesses/post_cert/premises/0/premises/0/premises/1"},
  };
  size_t localized = 0;
  for (const auto& m : muts) {
    json j = json::parse(slurp(corpus_path(m.file)));
    j[json::json_pointer(m.ptr)] = m.value;
    CheckResult r;
    try {
      r = check_json(j);
    } catch (const std::exception& e) {
      bad += std::string(m.file) + m.ptr + " threw " + e.what() + "; ";
      continue;
    }
    bool leaf_ok = !m.leaf;
    for (const auto& v : r.nodes)
      if (m.leaf && v.path == m.leaf) leaf_ok = !v.ok && v.reason.find(m.reason) != std::string::npos;
    if (!r.ok && r.path == m.expect_path && leaf_ok)
      ++localized;
    else
      bad += std::string(m.file) + m.ptr + (r.ok ? " still accepted" : " reported at " + r.path) + "; ";
  }
  o.ok = bad.empty();
  o.detail = bad + "5 proofs, " + std::to_string(localized) + "/" + std::to_string(muts.size()) + " mutations localized";
  return o;
}

// 4 -------------------------------------------------------------------------

Outcome xor_validation() {
  Rng rng(kSeed);
  Interp in;
  HoareTriple t;
  t.env = parse_env("{c: Bool, k: Bool, m: Bool}");
  t.pre = parse_formula("T", in.syms, t.env);
  t.prog = parse_program("if k then c := not(m) else c := m end", in.syms);
  t.post = parse_formula("c .= xor(k, m)", in.syms, t.env);
  std::vector<Store> corpus;
  for (const Row& m : all_memories(t.env, 1)) corpus.push_back(Store{t.env, {{1, dirac(t.env, 1, m)}}});
  for (size_t i = 0; i < kXorRandom; ++i) corpus.push_back(gen_store(rng, t.env, {1, 2}, 8, 5));
  ValidationReport rep = validate_triple(t, corpus, in, kEpsilon);
  // Oracle: every output sample has c = k xor m.
  size_t oracle_bad = 0;
  for (const Store& s : corpus)
    for (const auto& [n, d] : store_run(t.prog, s, in).family)
      for (const auto& [row, q] : d.p)
        if ((row[0] == "1") != ((row[1] == "1") != (row[2] == "1"))) ++oracle_bad;
  Outcome o;
  o.ok = rep.checked == corpus.size() && rep.failures == 0 && oracle_bad == 0;
  o.detail = std::to_string(corpus.size()) + " stores, " + std::to_string(rep.failures) + " failures, " +
             std::to_string(oracle_bad) + " oracle violations";
  return o;
}

// 5-8 ----------------------------------------------------------------------

Outcome pkrm() { return from_suites({"pkrm"}, kPkrmCases); }

Outcome metatheory() {
  return from_suites({"mv-soundness", "locality", "frame-compat", "unit-decomposition", "linearity"}, kMetaCases);
}

Outcome axioms() {
  std::vector<std::string> names;
  for (const char* a : {"S0", "S1", "S2", "T0", "T1", "T2", "W1", "W2", "U1", "Ax_SPL", "Ax_MRG", "Ax_POTP"})
    names.push_back(std::string("axiom-") + a);
  return from_suites(names, kAxiomCases);
}

Outcome rules() {
  return from_suites({"rule-Frame", "rule-Const", "rule-RCond", "rule-SRAssn", "rule-SDAssn"}, kRuleCases);
}

// 9 -------------------------------------------------------------------------

// All tables of `size` nonnegative integers summing to kWitnessDen.
void tables(size_t size, std::vector<long>& cur, std::vector<std::vector<long>>& out, long left) {
  if (cur.size() + 1 == size) {
    cur.push_back(left);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (long k = 0; k <= left; ++k) {
    cur.push_back(k);
    tables(size, cur, out, left - k);
    cur.pop_back();
  }
}

const std::vector<std::vector<long>>& witness_tables(size_t size) {
  static std::map<size_t, std::vector<std::vector<long>>> cache;
  auto it = cache.find(size);
  if (it != cache.end()) return it->second;
  std::vector<long> cur;
  std::vector<std::vector<long>> out;
  tables(size, cur, out, kWitnessDen);
  return cache[size] = out;
}

// joint[a][b] scaled by kWitnessDen^2; searches witnesses P, Q with joint = P x Q.
bool witness_exists(const std::vector<std::vector<mpz_class>>& joint) {
  const auto& ps = witness_tables(joint.size());
  const auto& qs = witness_tables(joint[0].size());
  for (const auto& p : ps)
    for (const auto& q : qs) {
      bool ok = true;
      for (size_t a = 0; a < p.size() && ok; ++a)
        for (size_t b = 0; b < q.size() && ok; ++b) ok = joint[a][b] == p[a] * q[b];
      if (ok) return true;
    }
  return false;
}

Row fill(const Env& env, const std::map<std::string, Value>& vals) {
  Row r;
  for (const auto& [v, t] : env) r.push_back(vals.at(v));
  return r;
}

Outcome independence() {
  Rng rng(kSeed);
  Outcome o;
  size_t agree = 0, indep = 0;
  for (size_t i = 0; i < kIndepCases; ++i) {
    bool a_str = coin(rng, 50), b_str = coin(rng, 50), extra = coin(rng, 50), product = coin(rng, 50);
    Env env = {{"a", a_str ? Type::str(SizePoly::n()) : Type::boolean()},
               {"b", b_str ? Type::str(SizePoly::n()) : Type::boolean()}};
    if (extra) env.emplace("e", Type::boolean());
    Store s{env, {}};
    for (unsigned n = 1; n <= 2; ++n) {
      auto av = all_values(a_str ? n : 1), bv = all_values(b_str ? n : 1);
      FinDist d{env, n, {}};
      auto weights = [&](size_t k) {
        std::vector<long> w(k, 0);
        for (long u = 0; u < kWitnessDen; ++u) w[pick(rng, coin(rng, 50) ? k : 1)] += 1;
        return w;
      };
      auto put = [&](size_t x, size_t y, const Rational& q) {
        if (q == 0) return;
        if (!extra) {
          d.p[fill(env, {{"a", av[x]}, {"b", bv[y]}})] += q;
          return;
        }
        Rational h = coin(rng, 50) ? Rational(1) : Rational(1, 2);
        d.p[fill(env, {{"a", av[x]}, {"b", bv[y]}, {"e", "0"}})] += q * h;
        if (h != 1) d.p[fill(env, {{"a", av[x]}, {"b", bv[y]}, {"e", "1"}})] += q * h;
      };
      if (product) {
        auto p = weights(av.size()), q = weights(bv.size());
        for (size_t x = 0; x < av.size(); ++x)
          for (size_t y = 0; y < bv.size(); ++y) put(x, y, Rational(p[x] * q[y], kWitnessDen * kWitnessDen));
      } else {
        auto w = weights(av.size() * bv.size());
        for (size_t x = 0; x < av.size(); ++x)
          for (size_t y = 0; y < bv.size(); ++y) put(x, y, Rational(w[x * bv.size() + y], kWitnessDen));
      }
      for (auto& [r, q] : d.p) q.canonicalize();
      s.family.emplace(n, d);
    }
    bool criterion = independent(s, {{"a", env.at("a")}}, {{"b", env.at("b")}}, kEpsilon);
    bool witness = true;
    for (const auto& [n, d] : s.family) {
      auto av = all_values(a_str ? n : 1), bv = all_values(b_str ? n : 1);
      std::vector<std::vector<mpz_class>> joint(av.size(), std::vector<mpz_class>(bv.size(), 0));
      for (size_t x = 0; x < av.size(); ++x)
        for (size_t y = 0; y < bv.size(); ++y) {
          Rational q = 0;
          for (const auto& [r, pr] : d.p)
            if (lookup(env, r, "a") == av[x] && lookup(env, r, "b") == bv[y]) q += pr;
          Rational scaled = q * kWitnessDen * kWitnessDen;
          joint[x][y] = scaled.get_den() == 1 ? mpz_class(scaled.get_num()) : mpz_class(-1);
        }
      witness = witness && witness_exists(joint);
    }
    if (criterion) ++indep;
    if (criterion == witness)
      ++agree;
    else if (o.ok)
      o.detail = "disagreement on " + store_json(s) + "; ";
    o.ok = o.ok && criterion == witness;
  }
  o.detail += std::to_string(agree) + "/" + std::to_string(kIndepCases) + " agree, " + std::to_string(indep) +
              " independent";
  return o;
}

// 10 ------------------------------------------------------------------------

struct SplitCount {
  size_t cases = 0, uniform = 0, bad = 0;
  std::string first;
};

void split_case(const Store& s, const Env& env, SplitCount& c) {
  Interp in;
  auto it = env.begin();
  std::string l = it->first, r = std::next(it)->first;
  std::string text = "(U(" + l + ")){" + l + ": " + it->second.str() + "} * (U(" + r + ")){" + r + ": " +
                     std::next(it)->second.str() + "}";
  bool parts = sat_formula(s, parse_formula(text, in.syms, env), in, kEpsilon);
  // Oracle: every memory of the joint has probability 2^-bits.
  bool joint = true;
  for (const auto& [n, d] : s.family) {
    std::uint64_t bits = memory_bits(env, n);
    auto mems = all_memories(env, n);
    joint = joint && d.p.size() == mems.size();
    for (const auto& [row, q] : d.p) joint = joint && q == Rational(1, 1ul << bits);
  }
  ++c.cases;
  if (joint) ++c.uniform;
  if (joint != parts) {
    if (!c.bad) c.first = store_json(s);
    ++c.bad;
  }
}

Outcome split_merge() {
  SplitCount c;
  Env bools = parse_env("{a: Bool, b: Bool}");
  auto mems = all_memories(bools, 1);
  for (long den = 1; den <= kSplitMaxDen; ++den) {
    std::vector<long> cur;
    std::vector<std::vector<long>> ts;
    tables(4, cur, ts, den);
    for (const auto& t : ts) {
      FinDist d{bools, 1, {}};
      for (size_t i = 0; i < 4; ++i)
        if (t[i]) {
          Rational q(t[i], den);
          q.canonicalize();
          d.p.emplace(mems[i], q);
        }
      split_case(Store{bools, {{1, d}}}, bools, c);
    }
  }
  size_t exhaustive = c.cases;
  Rng rng(kSeed);
  Env mixed = parse_env("{b: Bool, x: Str[n]}");
  for (size_t i = 0; i < kSplitRandom; ++i) {
    Env env = coin(rng, 50) ? bools : mixed;
    split_case(biased_store(rng, env, {1, 2, 3}), env, c);
  }
  Outcome o;
  o.ok = c.bad == 0;
  o.detail = (c.bad ? "first mismatch " + c.first + "; " : std::string()) + std::to_string(exhaustive) +
             " enumerated + " + std::to_string(kSplitRandom) + " random stores, " + std::to_string(c.uniform) +
             " uniform, " + std::to_string(c.bad) + " mismatches";
  return o;
}

// 11 ------------------------------------------------------------------------

Outcome bi() { return from_suites({"bi"}, kBiCases); }

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"kozen-equivalence", kozen},
      {"otp-secrecy", otp},
      {"corpus-proofs", corpus_proofs},
      {"xor-validation", xor_validation},
      {"kripke-resource-monoid", pkrm},
      {"metatheory", metatheory},
      {"axiom-soundness", axioms},
      {"rule-fuzzing", rules},
      {"independence-characterization", independence},
      {"uniform-split-merge", split_merge},
      {"bi-comparison", bi},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.ok) ++failed;
    std::printf("%s %2zu %-30s %s\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
