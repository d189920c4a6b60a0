#include "mixvote/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "mixvote/errors.hpp"

namespace mixvote::io {

namespace {

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

GoodSet goods_from_json(const Json& j, const std::map<std::string, GoodId>& index) {
  if (!j.is_array()) throw ParseError("goods must be an array of names");
  GoodSet out;
  for (const auto& name : j) {
    if (!name.is_string()) throw ParseError("good names must be strings");
    auto it = index.find(name.get<std::string>());
    if (it == index.end()) throw ParseError("unknown good '" + name.get<std::string>() + "'");
    out.push_back(it->second);
  }
  return out;
}

std::map<std::string, GoodId> good_index(const std::vector<std::string>& names) {
  std::map<std::string, GoodId> index;
  for (GoodId g = 0; g < names.size(); ++g) index.emplace(names[g], g);
  return index;
}

Json goods_json(const GoodSet& goods, const Instance& inst) {
  Json out = Json::array();
  for (GoodId g : goods) out.push_back(inst.good_names().at(g));
  return out;
}

}  // namespace

Json rational_json(const Rational& r) { return to_string(r); }

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(Integer(std::to_string(j.get<long long>())));
  throw ParseError("rationals must be strings \"p/q\" (got " + j.dump() + ")");
}

Json cake_json(const IntervalSet& s) {
  Json out = Json::array();
  for (const auto& iv : s.intervals()) out.push_back({rational_json(iv.lo), rational_json(iv.hi)});
  return out;
}

IntervalSet cake_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("cake must be an array of [lo, hi] pairs");
  std::vector<Interval> ivs;
  for (const auto& pair : j) {
    if (!pair.is_array() || pair.size() != 2) throw ParseError("cake entries must be [lo, hi] pairs");
    ivs.push_back({rational_from_json(pair[0]), rational_from_json(pair[1])});
  }
  return IntervalSet::normalize(std::move(ivs));
}

Json agent_set_json(const AgentSet& agents) {
  Json out = Json::array();
  for (AgentId i : agents) out.push_back(i);
  return out;
}

Json instance_json(const Instance& inst) {
  Json agents = Json::array();
  for (const auto& r : inst.approvals()) {
    agents.push_back({{"goods", goods_json(r.goods, inst)}, {"cake", cake_json(r.cake)}});
  }
  return {{"cake_length", rational_json(inst.cake_length())},
          {"goods", inst.good_names()},
          {"alpha", rational_json(inst.alpha())},
          {"agents", std::move(agents)}};
}

Instance instance_from_json(const Json& j) {
  try {
    Rational c = rational_from_json(require(j, "cake_length"));
    const Json& goods = require(j, "goods");
    if (!goods.is_array()) throw ParseError("goods must be an array of names");
    std::vector<std::string> names;
    for (const auto& g : goods) {
      if (!g.is_string()) throw ParseError("good names must be strings");
      names.push_back(g.get<std::string>());
    }
    const auto index = good_index(names);
    Rational alpha = rational_from_json(require(j, "alpha"));
    const Json& agents = require(j, "agents");
    if (!agents.is_array()) throw ParseError("agents must be an array");
    std::vector<Bundle> approvals;
    for (const auto& a : agents) {
      GoodSet g = a.contains("goods") ? goods_from_json(a.at("goods"), index) : GoodSet{};
      IntervalSet cake = a.contains("cake") ? cake_from_json(a.at("cake")) : IntervalSet{};
      approvals.emplace_back(std::move(cake), std::move(g));
    }
    return Instance(std::move(c), std::move(names), std::move(approvals), std::move(alpha));
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed instance: ") + e.what());
  }
}

Json allocation_json(const Bundle& a, const Instance& inst) {
  return {{"goods", goods_json(a.goods, inst)},
          {"cake", cake_json(a.cake)},
          {"size", rational_json(bundle_size(a))}};
}

Bundle allocation_from_json(const Json& j, const Instance& inst) {
  try {
    const auto index = good_index(inst.good_names());
    GoodSet g = j.contains("goods") ? goods_from_json(j.at("goods"), index) : GoodSet{};
    IntervalSet cake = j.contains("cake") ? cake_from_json(j.at("cake")) : IntervalSet{};
    Bundle b(std::move(cake), std::move(g));
    inst.check_bundle(b);
    if (j.contains("size") && rational_from_json(j.at("size")) != bundle_size(b)) {
      throw ParseError("allocation 'size' field disagrees with its contents");
    }
    return b;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed allocation: ") + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ParseError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path.string() + "'");
  out << dump(j);
}

Instance read_instance(const std::filesystem::path& path) { return instance_from_json(read_json(path)); }

void write_instance(const std::filesystem::path& path, const Instance& inst) {
  write_json(path, instance_json(inst));
}

Bundle read_allocation(const std::filesystem::path& path, const Instance& inst) {
  return allocation_from_json(read_json(path), inst);
}

void write_allocation(const std::filesystem::path& path, const Bundle& a, const Instance& inst) {
  write_json(path, allocation_json(a, inst));
}

std::string instance_digest(const Instance& inst) {
  const std::string canonical = instance_json(inst).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace mixvote::io
