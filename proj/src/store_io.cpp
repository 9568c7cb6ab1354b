#include <json.hpp>

#include "cslcheck/dist.hpp"

namespace csl {

using json = nlohmann::json;

namespace {

json dist_to_json(const FinDist& d) {
  json arr = json::array();
  for (const auto& [m, q] : d.p) {
    json mem = json::object();
    size_t i = 0;
    for (const auto& [v, t] : d.env) mem[v] = m[i++];
    arr.push_back({{"mem", mem}, {"p", rat_str(q)}});
  }
  return arr;
}

}  // namespace

std::string dist_json(const FinDist& d, int indent) { return dist_to_json(d).dump(indent); }

std::string store_json(const Store& s, int indent) {
  json j;
  j["env"] = env_str(s.env);
  json ds = json::object();
  for (const auto& [n, d] : s.family) ds[std::to_string(n)] = dist_to_json(d);
  j["dists"] = ds;
  return j.dump(indent);
}

Store parse_store(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DistError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("env") || !j["env"].is_string() || !j.contains("dists") || !j["dists"].is_object())
    throw DistError("store needs string field 'env' and object field 'dists'");
  Store s;
  s.env = parse_env(j["env"].get<std::string>());
  for (const auto& [key, arr] : j["dists"].items()) {
    unsigned n = 0;
    try {
      size_t used = 0;
      unsigned long v = std::stoul(key, &used);
      if (used != key.size() || v == 0) throw std::invalid_argument("n");
      n = static_cast<unsigned>(v);
    } catch (const std::exception&) {
      throw DistError("parameter key '" + key + "' is not a positive integer");
    }
    if (!arr.is_array()) throw DistError("dists/" + key + " must be an array");
    FinDist d{s.env, n, {}};
    for (const auto& e : arr) {
      if (!e.is_object() || !e.contains("mem") || !e["mem"].is_object() || !e.contains("p") || !e["p"].is_string())
        throw DistError("dists/" + key + ": entries need 'mem' and 'p'");
      const json& mem = e["mem"];
      if (mem.size() != s.env.size()) throw DistError("dists/" + key + ": memory does not match the environment");
      Row r;
      for (const auto& [v, t] : s.env) {
        if (!mem.contains(v) || !mem[v].is_string()) throw DistError("dists/" + key + ": missing value for " + v);
        Value x = mem[v].get<std::string>();
        if (x.size() != t.width(n) || x.find_first_not_of("01") != std::string::npos)
          throw DistError("dists/" + key + ": value of " + v + " is not a " + t.str() + " at n=" + key);
        r.push_back(x);
      }
      Rational q = parse_rat(e["p"].get<std::string>());
      if (q <= 0) throw DistError("dists/" + key + ": probabilities must be positive");
      if (!d.p.emplace(r, q).second) throw DistError("dists/" + key + ": duplicate memory");
    }
    if (d.mass() != 1) throw DistError("dists/" + key + ": probabilities sum to " + rat_str(d.mass()) + ", not 1");
    s.family.emplace(n, std::move(d));
  }
  return s;
}

}  // namespace csl
