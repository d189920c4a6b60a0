#pragma once

#include "doctest.h"
#include "mixvote/generate.hpp"
#include "mixvote/model.hpp"
#include "mixvote/rational.hpp"

namespace fixtures {

inline mixvote::Rational q(const char* text) { return mixvote::parse_rational(text); }

inline mixvote::IntervalSet cake(std::initializer_list<std::pair<const char*, const char*>> pieces) {
  std::vector<mixvote::Interval> v;
  for (auto [lo, hi] : pieces) v.push_back({q(lo), q(hi)});
  return mixvote::IntervalSet::normalize(std::move(v));
}

inline mixvote::Instance fig1() { return mixvote::gen_construction({.name = "fig1"}).instance; }

// Indivisible instance from approval lists.
inline mixvote::Instance goods_instance(std::size_t m, std::vector<mixvote::GoodSet> approvals,
                                        const mixvote::Rational& alpha) {
  std::vector<std::string> names;
  for (std::size_t j = 1; j <= m; ++j) names.push_back("g" + std::to_string(j));
  std::vector<mixvote::Bundle> bundles;
  for (auto& g : approvals) bundles.emplace_back(mixvote::IntervalSet{}, std::move(g));
  return mixvote::Instance(0, std::move(names), std::move(bundles), alpha);
}

// Cake instance on [0, c] from approval pieces.
inline mixvote::Instance cake_instance(const mixvote::Rational& c,
                                       std::vector<mixvote::IntervalSet> approvals,
                                       const mixvote::Rational& alpha) {
  std::vector<mixvote::Bundle> bundles;
  for (auto& s : approvals) bundles.emplace_back(std::move(s), mixvote::GoodSet{});
  return mixvote::Instance(c, {}, std::move(bundles), alpha);
}

}  // namespace fixtures
