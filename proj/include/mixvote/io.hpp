#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "mixvote/model.hpp"

namespace mixvote::io {

using Json = nlohmann::json;

// Instance file:
//   {"cake_length": "p/q", "goods": ["g1", ...], "alpha": "p/q",
//    "agents": [{"goods": ["g1"], "cake": [["0", "1/2"]]}, ...]}
// Allocation file:
//   {"goods": ["g1"], "cake": [["0", "9/10"]], "size": "19/10"}
// Rationals are strings "p/q" in lowest terms; integers omit "/q".

Json rational_json(const Rational& r);
Rational rational_from_json(const Json& j);

Json cake_json(const IntervalSet& s);
IntervalSet cake_from_json(const Json& j);

Json agent_set_json(const AgentSet& agents);

Json instance_json(const Instance& inst);
Instance instance_from_json(const Json& j);

// Goods are written by name, so the instance is needed to resolve them.
Json allocation_json(const Bundle& a, const Instance& inst);
Bundle allocation_from_json(const Json& j, const Instance& inst);

// Canonical serialization: sorted keys, two-space indent, trailing newline.
std::string dump(const Json& j);

Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& j);

Instance read_instance(const std::filesystem::path& path);
void write_instance(const std::filesystem::path& path, const Instance& inst);
Bundle read_allocation(const std::filesystem::path& path, const Instance& inst);
void write_allocation(const std::filesystem::path& path, const Bundle& a, const Instance& inst);

// FNV-1a over the canonical serialization; stable under key reordering in the
// source file.
std::string instance_digest(const Instance& inst);

}  // namespace mixvote::io
