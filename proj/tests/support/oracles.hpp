#pragma once

// Test-side oracles. They deliberately share nothing with the library's
// algorithms beyond the model types: plain series sums, subset scans over all
// 2^n agent groups, and definitional axiom checks.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mixvote/generate.hpp"
#include "mixvote/model.hpp"

namespace oracle_test {

using mixvote::AgentSet;
using mixvote::Bundle;
using mixvote::Instance;
using mixvote::Rational;

// H_x from the defining series with two million terms; the tail
// sum_{k>K} x/(k(k+x)) lies between log1p(x/(K+1)) and log1p(x/K), so the
// midpoint of the bracket is within x/(2K^2) of it.
inline long double series_harmonic(long double x) {
  constexpr long K = 2'000'000;
  long double head = 0.0L;
  for (long k = K; k >= 1; --k) head += x / (static_cast<long double>(k) * (k + x));
  const long double lo = std::log1p(x / (K + 1.0L));
  const long double hi = std::log1p(x / static_cast<long double>(K));
  return head + (lo + hi) / 2;
}

// All nonempty subsets of {0..n-1}, as sorted agent sets.
inline void for_each_group(std::size_t n, const std::function<void(const AgentSet&)>& f) {
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    AgentSet g;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) g.push_back(i);
    }
    f(g);
  }
}

// Largest exactly achievable size t <= cap inside a bundle with `goods`
// goods and `cake` cake length: the candidates are the right ends j + cake,
// the integers j and cap itself; keep those that are achievable.
inline Rational brute_exact_size(std::size_t goods, const Rational& cake, const Rational& cap) {
  Rational best = 0;
  auto achievable = [&](const Rational& t) {
    for (std::size_t j = 0; j <= goods; ++j) {
      if (Rational(static_cast<unsigned long>(j)) <= t &&
          t <= Rational(static_cast<unsigned long>(j)) + cake) {
        return true;
      }
    }
    return false;
  };
  std::vector<Rational> cands{cap};
  for (std::size_t j = 0; j <= goods; ++j) {
    cands.push_back(Rational(static_cast<unsigned long>(j)));
    cands.push_back(Rational(static_cast<unsigned long>(j)) + cake);
  }
  for (const auto& t : cands) {
    if (t > 0 && t <= cap && achievable(t) && t > best) best = t;
  }
  return best;
}

struct Violation {
  AgentSet group;
  Rational t;
};

// Definitional EJR-beta over all 2^n groups at their supremum t.
inline std::optional<Violation> brute_ejr_beta(const Instance& inst, const Bundle& a,
                                               const Rational& beta, bool strict) {
  const auto u = mixvote::utilities(inst, a);
  std::optional<Violation> bad;
  for_each_group(inst.num_agents(), [&](const AgentSet& x) {
    if (bad) return;
    const Bundle common = mixvote::common_bundle(inst, x);
    Rational t = inst.group_cap(x.size());
    const Rational s = mixvote::bundle_size(common);
    if (s < t) t = s;
    if (t <= 0) return;
    bool ok = false;
    for (auto i : x) ok = ok || (strict ? u[i] > t - beta : u[i] >= t - beta);
    if (!ok) bad = Violation{x, t};
  });
  return bad;
}

// Definitional EJR-M over all 2^n groups.
inline std::optional<Violation> brute_ejr_m(const Instance& inst, const Bundle& a) {
  const auto u = mixvote::utilities(inst, a);
  std::optional<Violation> bad;
  for_each_group(inst.num_agents(), [&](const AgentSet& x) {
    if (bad) return;
    const Bundle common = mixvote::common_bundle(inst, x);
    const Rational t = brute_exact_size(common.goods.size(), common.cake.measure(),
                                        inst.group_cap(x.size()));
    if (t <= 0) return;
    bool ok = false;
    for (auto i : x) ok = ok || u[i] >= t;
    if (!ok) bad = Violation{x, t};
  });
  return bad;
}

// Seeded random mixed instance for property suites.
inline Instance random_instance(std::uint64_t seed, std::size_t max_n, std::size_t max_m,
                                std::size_t max_atoms, bool allow_cake = true,
                                bool allow_goods = true) {
  mixvote::SplitMix64 rng(seed * 7919 + 17);
  mixvote::RandomSpec spec;
  spec.seed = seed;
  spec.n = 1 + rng.below(max_n);
  spec.m = allow_goods ? rng.below(max_m + 1) : 0;
  spec.cake_atoms = allow_cake ? rng.below(max_atoms + 1) : 0;
  if (spec.m + spec.cake_atoms == 0) {
    if (allow_goods) {
      spec.m = 1;
    } else {
      spec.cake_atoms = 1;
    }
  }
  spec.density = 0.3 + 0.5 * rng.uniform();
  const Rational total = mixvote::make_rational(static_cast<long>(spec.cake_atoms), 2) +
                         static_cast<unsigned long>(spec.m);
  spec.alpha = total * mixvote::make_rational(static_cast<long>(1 + rng.below(8)), 8);
  return mixvote::gen_random(spec);
}

}  // namespace oracle_test
