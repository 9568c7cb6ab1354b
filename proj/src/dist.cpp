#include "cslcheck/dist.hpp"

#include "cslcheck/types.hpp"

namespace csl {

namespace {

void add_to(std::map<Row, Rational>& p, const Row& r, const Rational& q) {
  if (q == 0) return;
  auto [it, fresh] = p.emplace(r, q);
  if (!fresh) {
    it->second += q;
    if (it->second == 0) p.erase(it);
  }
}

void same_space(const FinDist& a, const FinDist& b, const char* op) {
  if (a.env != b.env || a.n != b.n) throw DistError(std::string(op) + ": environment or parameter mismatch");
}

}  // namespace

Rational FinDist::mass() const {
  Rational s = 0;
  for (const auto& [r, q] : p) s += q;
  return s;
}

std::string rat_str(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rational parse_rat(const std::string& s) {
  Rational q;
  if (s.empty() || q.set_str(s, 10) != 0) throw DistError("malformed rational '" + s + "'");
  if (q.get_den() == 0) throw DistError("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

size_t env_index(const Env& env, const std::string& var) {
  auto it = env.find(var);
  if (it == env.end()) throw DistError("variable " + var + " not in environment");
  return static_cast<size_t>(std::distance(env.begin(), it));
}

const Value& lookup(const Env& env, const Row& row, const std::string& var) { return row.at(env_index(env, var)); }

std::uint64_t memory_bits(const Env& env, unsigned n) {
  std::uint64_t bits = 0;
  for (const auto& [v, t] : env) bits += t.width(n);
  return bits;
}

void check_budget(const Env& env, unsigned n, std::uint64_t max_bits) {
  std::uint64_t b = memory_bits(env, n);
  if (b > max_bits)
    throw DistError("memory of " + env_str(env) + " at n=" + std::to_string(n) + " needs " + std::to_string(b) +
                    " bits, above the budget of " + std::to_string(max_bits));
}

std::vector<Value> all_values(std::uint64_t width) {
  std::vector<Value> out{""};
  for (std::uint64_t i = 0; i < width; ++i) {
    std::vector<Value> next;
    next.reserve(out.size() * 2);
    for (const auto& v : out) {
      next.push_back(v + "0");
      next.push_back(v + "1");
    }
    out = std::move(next);
  }
  return out;
}

std::vector<Row> all_memories(const Env& env, unsigned n) {
  std::vector<Row> out{Row{}};
  for (const auto& [v, t] : env) {
    std::vector<Value> vals = all_values(t.width(n));
    std::vector<Row> next;
    next.reserve(out.size() * vals.size());
    for (const auto& r : out) {
      for (const auto& x : vals) {
        Row r2 = r;
        r2.push_back(x);
        next.push_back(std::move(r2));
      }
    }
    out = std::move(next);
  }
  return out;
}

FinDist dirac(const Env& env, unsigned n, const Row& m) {
  if (m.size() != env.size()) throw DistError("dirac: memory does not match environment");
  FinDist d{env, n, {}};
  d.p.emplace(m, Rational(1));
  return d;
}

FinDist uniform_dist(const Env& env, unsigned n) {
  auto ms = all_memories(env, n);
  FinDist d{env, n, {}};
  Rational q(1, ms.size());
  q.canonicalize();
  for (auto& m : ms) d.p.emplace(std::move(m), q);
  return d;
}

FinDist bind_dist(const FinDist& d, const Env& out_env, const std::function<FinDist(const Row&)>& k) {
  FinDist out{out_env, d.n, {}};
  for (const auto& [m, q] : d.p) {
    FinDist r = k(m);
    if (r.env != out_env || r.n != d.n) throw DistError("bind: continuation returned a mismatched distribution");
    for (const auto& [m2, q2] : r.p) add_to(out.p, m2, q * q2);
  }
  return out;
}

FinDist tensor(const FinDist& a, const FinDist& b) {
  if (a.n != b.n) throw DistError("tensor: parameter mismatch");
  if (!env_disjoint(a.env, b.env)) throw DistError("tensor: overlapping domains");
  Env env = env_join(a.env, b.env);
  // Interleave positions of a and b into env order.
  std::vector<std::pair<int, size_t>> src;
  for (const auto& [v, t] : env) {
    if (a.env.count(v))
      src.emplace_back(0, env_index(a.env, v));
    else
      src.emplace_back(1, env_index(b.env, v));
  }
  FinDist out{env, a.n, {}};
  for (const auto& [ma, qa] : a.p) {
    for (const auto& [mb, qb] : b.p) {
      Row r;
      r.reserve(src.size());
      for (const auto& [which, i] : src) r.push_back(which == 0 ? ma[i] : mb[i]);
      add_to(out.p, r, qa * qb);
    }
  }
  return out;
}

FinDist project(const FinDist& d, const Env& target) {
  if (!env_ext(target, d.env)) throw DistError("project: " + env_str(target) + " is not a sub-environment of " + env_str(d.env));
  std::vector<size_t> idx;
  for (const auto& [v, t] : target) idx.push_back(env_index(d.env, v));
  FinDist out{target, d.n, {}};
  for (const auto& [m, q] : d.p) {
    Row r;
    r.reserve(idx.size());
    for (size_t i : idx) r.push_back(m[i]);
    add_to(out.p, r, q);
  }
  return out;
}

FinDist condition(const FinDist& d, const std::string& r, bool b) {
  size_t i = env_index(d.env, r);
  if (!d.env.at(r).is_bool()) throw DistError("condition: " + r + " is not Bool");
  const Value want = b ? "1" : "0";
  FinDist out{d.env, d.n, {}};
  Rational total = 0;
  for (const auto& [m, q] : d.p) {
    if (m[i] == want) {
      out.p.emplace(m, q);
      total += q;
    }
  }
  if (total == 0) throw DistError("condition: event " + r + "=" + want + " has zero mass");
  for (auto& [m, q] : out.p) q /= total;
  return out;
}

FinDist convex(const FinDist& a, const FinDist& b, const ValueDist& guard) {
  same_space(a, b, "convex");
  Rational g1 = guard.count("1") ? guard.at("1") : Rational(0);
  Rational g0 = guard.count("0") ? guard.at("0") : Rational(0);
  return add(scale(a, g1), scale(b, g0));
}

FinDist scale(const FinDist& d, const Rational& k) {
  FinDist out{d.env, d.n, {}};
  if (k == 0) return out;
  for (const auto& [m, q] : d.p) out.p.emplace(m, q * k);
  return out;
}

FinDist add(const FinDist& a, const FinDist& b) {
  same_space(a, b, "add");
  FinDist out = a;
  for (const auto& [m, q] : b.p) add_to(out.p, m, q);
  return out;
}

Rational stat_dist(const FinDist& a, const FinDist& b) {
  same_space(a, b, "stat_dist");
  Rational s = 0;
  auto ia = a.p.begin();
  auto ib = b.p.begin();
  while (ia != a.p.end() || ib != b.p.end()) {
    if (ib == b.p.end() || (ia != a.p.end() && ia->first < ib->first)) {
      s += abs(ia->second);
      ++ia;
    } else if (ia == a.p.end() || ib->first < ia->first) {
      s += abs(ib->second);
      ++ib;
    } else {
      s += abs(ia->second - ib->second);
      ++ia;
      ++ib;
    }
  }
  return s / 2;
}

ValueDist value_dirac(const Value& v) { return {{v, Rational(1)}}; }

ValueDist value_uniform(std::uint64_t width) {
  auto vs = all_values(width);
  Rational q(1, vs.size());
  q.canonicalize();
  ValueDist out;
  for (auto& v : vs) out.emplace(std::move(v), q);
  return out;
}

Rational stat_dist(const ValueDist& a, const ValueDist& b) {
  Rational s = 0;
  for (const auto& [v, q] : a) {
    auto it = b.find(v);
    s += abs(q - (it == b.end() ? Rational(0) : it->second));
  }
  for (const auto& [v, q] : b)
    if (!a.count(v)) s += abs(q);
  return s / 2;
}

bool is_uniform(const ValueDist& d, std::uint64_t width) {
  if (width >= 63) return false;
  std::uint64_t size = std::uint64_t(1) << width;
  if (d.size() != size) return false;
  Rational q(1, size);
  q.canonicalize();
  for (const auto& [v, p] : d)
    if (v.size() != width || p != q) return false;
  return true;
}

ValueDist marginal(const FinDist& d, const std::string& var) {
  size_t i = env_index(d.env, var);
  ValueDist out;
  for (const auto& [m, q] : d.p) out[m[i]] += q;
  return out;
}

}  // namespace csl
