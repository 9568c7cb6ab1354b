#pragma once

#include <gmpxx.h>

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cslcheck/syntax.hpp"

namespace csl {

using Rational = mpq_class;
// Bit string over '0'/'1'; a Bool value is a single character.
using Value = std::string;
// Memory values listed in the (lexicographic) order of the environment.
using Row = std::vector<Value>;
using ValueDist = std::map<Value, Rational>;

class DistError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Finite measure over memories of `env` at parameter n. Zero entries are never
// stored. Program semantics also runs on sub-distributions (total mass < 1).
struct FinDist {
  Env env;
  unsigned n = 1;
  std::map<Row, Rational> p;

  Rational mass() const;
  bool operator==(const FinDist& o) const { return env == o.env && n == o.n && p == o.p; }
};

// Distribution ensemble realized at the tested parameters.
struct Store {
  Env env;
  std::map<unsigned, FinDist> family;
  bool operator==(const Store& o) const { return env == o.env && family == o.family; }
};

std::string rat_str(const Rational& q);
Rational parse_rat(const std::string& s);

size_t env_index(const Env& env, const std::string& var);
const Value& lookup(const Env& env, const Row& row, const std::string& var);
std::uint64_t memory_bits(const Env& env, unsigned n);
void check_budget(const Env& env, unsigned n, std::uint64_t max_bits);

// All values of a type of the given width, in lexicographic order.
std::vector<Value> all_values(std::uint64_t width);
std::vector<Row> all_memories(const Env& env, unsigned n);

FinDist dirac(const Env& env, unsigned n, const Row& m);
FinDist uniform_dist(const Env& env, unsigned n);
FinDist bind_dist(const FinDist& d, const Env& out_env, const std::function<FinDist(const Row&)>& k);
FinDist tensor(const FinDist& a, const FinDist& b);
FinDist project(const FinDist& d, const Env& target);
FinDist condition(const FinDist& d, const std::string& r, bool b);
FinDist convex(const FinDist& a, const FinDist& b, const ValueDist& guard);
FinDist scale(const FinDist& d, const Rational& k);
FinDist add(const FinDist& a, const FinDist& b);
Rational stat_dist(const FinDist& a, const FinDist& b);

ValueDist value_dirac(const Value& v);
ValueDist value_uniform(std::uint64_t width);
Rational stat_dist(const ValueDist& a, const ValueDist& b);
bool is_uniform(const ValueDist& d, std::uint64_t width);
// Distribution of a variable under d.
ValueDist marginal(const FinDist& d, const std::string& var);

// Store text: {"env": "{x: Bool}", "dists": {"1": [{"mem": {"x": "0"}, "p": "1/2"}, ...]}}.
std::string store_json(const Store& s, int indent = -1);
// Validates widths and that each distribution sums to exactly 1.
Store parse_store(const std::string& text);
std::string dist_json(const FinDist& d, int indent = -1);

}  // namespace csl
