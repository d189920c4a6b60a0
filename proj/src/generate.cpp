#include "mixvote/generate.hpp"

#include <algorithm>
#include <numeric>

#include "mixvote/errors.hpp"
#include "mixvote/verify.hpp"

namespace mixvote {

using io::Json;

namespace {

std::vector<std::string> good_names(std::size_t m) {
  std::vector<std::string> names;
  for (std::size_t j = 1; j <= m; ++j) names.push_back("g" + std::to_string(j));
  return names;
}

GoodSet range_goods(std::size_t from, std::size_t count) {
  GoodSet g(count);
  std::iota(g.begin(), g.end(), from);
  return g;
}

AgentSet range_agents(std::size_t from, std::size_t count) { return range_goods(from, count); }

template <class T>
const T& need(const std::optional<T>& v, const char* construction, const char* field) {
  if (!v) {
    throw ConstructionError(std::string(construction) + " needs parameter '" + field + "'");
  }
  return *v;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConstructionError("parameter check failed: " + what);
}

long as_long(const Integer& z) { return z.get_si(); }

Json goods_json(const GoodSet& goods, const std::vector<std::string>& names) {
  Json out = Json::array();
  for (GoodId g : goods) out.push_back(names[g]);
  return out;
}

Json base_metadata(const ConstructionSpec& spec) {
  Json params = Json::object();
  auto put = [&](const char* key, const std::optional<Rational>& v) {
    if (v) params[key] = io::rational_json(*v);
  };
  put("t", spec.t);
  put("eps", spec.eps);
  put("delta", spec.delta);
  put("gamma", spec.gamma);
  put("beta", spec.beta);
  put("beta_prime", spec.beta_prime);
  if (spec.n) params["n"] = *spec.n;
  if (spec.q) params["q"] = *spec.q;
  return Json{{"construction", spec.name}, {"parameters", params}};
}

Construction fig1(const ConstructionSpec& spec) {
  const Rational c(9, 10);
  const IntervalSet cake = IntervalSet::single(0, c);
  Instance inst(c, good_names(2), {Bundle(cake, {0}), Bundle(cake, {1})}, 2);
  Json meta = base_metadata(spec);
  meta["expected"] = {{"greedy_ejr_m", {{"goods", {"g1", "g2"}}}},
                      {"gmes_payment_per_agent", "9/20"}};
  return {std::move(inst), std::move(meta), std::nullopt};
}

// Disjoint singleton approvals with alpha = beta' n < n: every agent alone is
// beta'-cohesive, so weak EJR-beta needs all n goods.
Construction prop1(const ConstructionSpec& spec) {
  const Rational& beta = need(spec.beta, "prop1", "beta");
  const Rational& bp = need(spec.beta_prime, "prop1", "beta_prime");
  const long n = need(spec.n, "prop1", "n");
  require(beta >= 0 && beta < 1, "0 <= beta < 1");
  require(bp > beta && bp < 1, "beta < beta_prime < 1");
  require(n >= 1, "n >= 1");
  const Rational alpha = bp * n;
  require(is_integer(alpha), "alpha = beta_prime * n is an integer (got " + to_string(alpha) + ")");

  std::vector<Bundle> approvals;
  for (long i = 0; i < n; ++i) approvals.push_back(Bundle({}, {static_cast<GoodId>(i)}));
  Instance inst(0, good_names(n), std::move(approvals), alpha);
  Json meta = base_metadata(spec);
  meta["alpha"] = io::rational_json(alpha);
  meta["expected"] = {{"no_weak_ejr_beta", true}, {"beta", io::rational_json(beta)}};
  return {std::move(inst), std::move(meta), std::nullopt};
}

Construction prop4(const ConstructionSpec& spec) {
  const Rational& beta = need(spec.beta, "prop4", "beta");
  require(is_integer(beta) && beta >= 1, "beta is a positive integer");
  const long gamma = beta.get_num().get_si() + 2;
  const long n = gamma * gamma + gamma;
  std::vector<Bundle> approvals;
  for (long i = 0; i < gamma * gamma; ++i) approvals.push_back(Bundle({}, range_goods(0, gamma)));
  for (long i = 0; i < gamma; ++i) {
    approvals.push_back(Bundle({}, {static_cast<GoodId>(gamma + i)}));
  }
  Instance inst(0, good_names(2 * gamma), std::move(approvals), gamma + 1);

  Json meta = base_metadata(spec);
  meta["gamma"] = gamma;
  meta["target_group"] = io::agent_set_json(range_agents(0, gamma * gamma));
  meta["target_t"] = gamma;
  Json mnw = Json::array();
  for (long j = 0; j < gamma; ++j) {
    GoodSet g = range_goods(gamma, gamma);
    g.insert(g.begin(), j);
    mnw.push_back(goods_json(g, inst.good_names()));
  }
  meta["expected"] = {{"mnw_allocations", mnw}, {"n", n}};
  return {std::move(inst), std::move(meta), std::nullopt};
}

// Cake [0, 2t], alpha = t; the first ceil(n/alpha) - 1 agents approve [0, t],
// agent i >= ceil(n/alpha) (1-based) approves [0, t + (i - n/alpha)/(n/alpha) + delta].
Construction thm4(const ConstructionSpec& spec) {
  const Rational& t = need(spec.t, "thm4", "t");
  const long n = need(spec.n, "thm4", "n");
  const Rational& delta = need(spec.delta, "thm4", "delta");
  require(t >= 1, "t >= 1");
  require(n >= 1, "n >= 1");
  require(delta > 0 && delta < 1, "0 < delta < 1");

  const Rational r = Rational(n) / t;
  const long first = as_long(ceil_of(r));
  std::vector<Bundle> approvals;
  for (long i = 1; i <= n; ++i) {
    Rational hi = t;
    if (i >= first) hi = t + (Rational(i) - r) / r + delta;
    approvals.push_back(Bundle(IntervalSet::single(0, hi), {}));
  }
  Instance inst(2 * t, {}, std::move(approvals), t);

  const Rational slack = delta * (t - 1) / t + t / (2 * Rational(n) * n) + (t - 1 + delta) / n;
  if (spec.eps) {
    require(slack <= *spec.eps, "delta (t-1)/t + t/(2n^2) + (t-1+delta)/n <= eps (excess " +
                                    to_string(slack - *spec.eps) + ")");
  }
  const Bundle a(IntervalSet::single(t, 2 * t), {});
  AgentSet everyone = range_agents(0, n);
  const Rational avg = average(utilities(inst, a));

  Json meta = base_metadata(spec);
  meta["target_group"] = io::agent_set_json(everyone);
  meta["target_t"] = io::rational_json(t);
  meta["allocation"] = io::allocation_json(a, inst);
  meta["expected"] = {{"lower_bound", io::rational_json(degree_ejr_1(t))},
                      {"slack_term", io::rational_json(slack)},
                      {"upper_bound", io::rational_json(degree_ejr_1(t) + slack)},
                      {"average_satisfaction", io::rational_json(avg)}};
  return {std::move(inst), std::move(meta), std::nullopt};
}

// Indivisible instance where one admissible GreedyEJR-M execution serves the
// target group N* = N_0 ∪ ... ∪ N_floor(t) as unevenly as EJR-M allows.
Construction thm6(const ConstructionSpec& spec) {
  const Rational& t = need(spec.t, "thm6", "t");
  const long n = need(spec.n, "thm6", "n");
  require(t >= 1, "t >= 1");
  const long ft = as_long(floor_of(t));
  const long ct = as_long(ceil_of(t));
  const long alpha = (ft * ft + ft + 2) / 2;
  require(n % alpha == 0, "n is a multiple of alpha = " + std::to_string(alpha));
  require(n >= 2 * alpha, "n >= 2 alpha = " + std::to_string(2 * alpha));
  const long r = n / alpha;
  const long ctr = as_long(ceil_of(t * r));
  require(as_long(ceil_of((t - ft) * r)) <= r - 1,
          "ceil((t - floor(t)) n/alpha) <= n/alpha - 1");
  const Rational slack = Rational(ft * (ft * ft + ft + 2)) / (t * n);
  if (spec.eps) {
    require(slack <= *spec.eps, "floor(t)(floor(t)^2 + floor(t) + 2)/(n t) <= eps (excess " +
                                    to_string(slack - *spec.eps) + ")");
  }

  // Goods: g_1..g_ceil(t), then D^G_1, ..., D^G_floor(t) with |D^G_k| = k.
  const GoodSet common = range_goods(0, ct);
  std::vector<GoodSet> dg(ft + 1);
  std::size_t next_good = ct;
  for (long k = 1; k <= ft; ++k) {
    dg[k] = range_goods(next_good, k);
    next_good += k;
  }

  // Agents: N_0, ..., N_floor(t) (together N*, the first ceil(t r)), then the
  // dummy sets D_1, ..., D_floor(t).
  std::vector<AgentSet> groups(ft + 1), dummies(ft + 1);
  std::vector<Bundle> approvals;
  auto add = [&](AgentSet& into, long count, const GoodSet& goods) {
    for (long j = 0; j < count; ++j) {
      into.push_back(approvals.size());
      approvals.push_back(Bundle({}, goods));
    }
  };
  auto with = [&](GoodSet a, const GoodSet& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    return a;
  };

  const bool case1 = t >= 2;
  add(groups[0], r - 1, common);
  for (long k = 1; k < ft; ++k) add(groups[k], r, with(common, dg[k]));
  add(groups[ft], ctr - ft * r + 1, with(common, dg[ft]));
  if (case1) {
    add(dummies[1], 1, dg[1]);
    for (long k = 2; k < ft; ++k) add(dummies[k], (k - 1) * r, dg[k]);
    add(dummies[ft], 2 * ft * r - ctr - 1, dg[ft]);
  } else {
    add(dummies[1], n - ctr, dg[1]);
  }
  require(static_cast<long>(approvals.size()) == n, "partition sizes add up to n");

  Instance inst(0, good_names(next_good), std::move(approvals), alpha);

  GreedyScript script;
  for (long k = ft; k >= 1; --k) {
    AgentSet g = groups[k];
    g.insert(g.end(), dummies[k].begin(), dummies[k].end());
    std::sort(g.begin(), g.end());
    script.rounds.emplace_back(std::move(g), Bundle({}, dg[k]));
  }

  GoodSet all_dg;
  for (long k = 1; k <= ft; ++k) all_dg.insert(all_dg.end(), dg[k].begin(), dg[k].end());
  const Bundle expected(IntervalSet{}, all_dg);
  const AgentSet target = range_agents(0, ctr);
  std::vector<Rational> target_utils;
  for (AgentId i : target) target_utils.push_back(utility(inst, i, expected));

  Json meta = base_metadata(spec);
  meta["case"] = case1 ? 1 : 2;
  meta["alpha"] = alpha;
  meta["target_group"] = io::agent_set_json(target);
  meta["target_t"] = io::rational_json(t);
  Json parts = Json::object();
  for (long k = 0; k <= ft; ++k) {
    parts["N_" + std::to_string(k)] = io::agent_set_json(groups[k]);
    if (k >= 1) {
      parts["D_" + std::to_string(k)] = io::agent_set_json(dummies[k]);
      parts["DG_" + std::to_string(k)] = goods_json(dg[k], inst.good_names());
    }
  }
  meta["partition"] = parts;
  Json rounds = Json::array();
  for (std::size_t j = 0; j < script.rounds.size(); ++j) {
    rounds.push_back({{"t_star", ft - static_cast<long>(j)},
                      {"group", io::agent_set_json(script.rounds[j].first)},
                      {"witness", io::allocation_json(script.rounds[j].second, inst)}});
  }
  meta["script"] = rounds;
  meta["allocation"] = io::allocation_json(expected, inst);
  meta["expected"] = {{"lower_bound", io::rational_json(degree_ejr_m(t))},
                      {"slack_term", io::rational_json(slack)},
                      {"upper_bound", io::rational_json(degree_ejr_m(t) + slack)},
                      {"average_satisfaction", io::rational_json(average(target_utils))}};
  return {std::move(inst), std::move(meta), std::move(script)};
}

// k = floor(t), c = t - k = p/q, gamma = p'/q. N_0 has q((k+1)c + k gamma)
// agents, N_1..N_{k+1} have q(1 - c - gamma) each; M_i = N \ N_i approves the
// k+1 goods of G_i; alpha = k + 1 - gamma.
Construction appendix(const ConstructionSpec& spec) {
  const Rational& t = need(spec.t, "appendix", "t");
  const Rational& gamma = need(spec.gamma, "appendix", "gamma");
  const long q = need(spec.q, "appendix", "q");
  require(t >= 1, "t >= 1");
  require(q >= 1, "q >= 1");
  const long k = as_long(floor_of(t));
  const Rational c = t - k;
  require(gamma > 0 && gamma < 1 - c, "0 < gamma < 1 - c");
  if (spec.eps) require(gamma < *spec.eps, "gamma < eps");
  require(is_integer(c * q) && is_integer(gamma * q), "q is a common denominator of c and gamma");

  const Rational n0 = q * ((k + 1) * c + k * gamma);
  const Rational ni = q * (1 - c - gamma);
  const long size0 = n0.get_num().get_si();
  const long size_i = ni.get_num().get_si();
  const long n = size0 + (k + 1) * size_i;
  const long groups = k + 1;

  // Agent j in N_0 is in every M_i; agent in N_i misses exactly G_i.
  std::vector<Bundle> approvals;
  std::vector<AgentSet> parts(groups + 1);
  auto goods_without = [&](long skip) {
    GoodSet g;
    for (long i = 1; i <= groups; ++i) {
      if (i == skip) continue;
      const GoodSet block = range_goods((i - 1) * groups, groups);
      g.insert(g.end(), block.begin(), block.end());
    }
    return g;
  };
  for (long j = 0; j < size0; ++j) {
    parts[0].push_back(approvals.size());
    approvals.push_back(Bundle({}, goods_without(0)));
  }
  for (long i = 1; i <= groups; ++i) {
    for (long j = 0; j < size_i; ++j) {
      parts[i].push_back(approvals.size());
      approvals.push_back(Bundle({}, goods_without(i)));
    }
  }
  const Rational alpha = Rational(k + 1) - gamma;
  Instance inst(0, good_names(groups * groups), std::move(approvals), alpha);

  const Rational bound = t - 1 + c * (1 - c) / t;
  Json meta = base_metadata(spec);
  meta["n"] = n;
  meta["alpha"] = io::rational_json(alpha);
  meta["target_t"] = io::rational_json(t);
  Json p = Json::object();
  for (long i = 0; i <= groups; ++i) p["N_" + std::to_string(i)] = io::agent_set_json(parts[i]);
  meta["partition"] = p;
  Json expected = {{"bound_without_eps", io::rational_json(bound)},
                   {"max_min_average_at_most", io::rational_json(bound + gamma)}};
  if (spec.eps) expected["bound"] = io::rational_json(bound + *spec.eps);
  meta["expected"] = expected;
  return {std::move(inst), std::move(meta), std::nullopt};
}

}  // namespace

Construction gen_construction(const ConstructionSpec& spec) {
  if (spec.name == "fig1") return fig1(spec);
  if (spec.name == "prop1") return prop1(spec);
  if (spec.name == "prop4") return prop4(spec);
  if (spec.name == "thm4") return thm4(spec);
  if (spec.name == "thm6") return thm6(spec);
  if (spec.name == "appendix") return appendix(spec);
  throw ConstructionError("unknown construction '" + spec.name +
                          "' (fig1, prop1, prop4, thm4, thm6, appendix, random)");
}

std::uint64_t SplitMix64::at(std::uint64_t counter) const {
  std::uint64_t z = seed_ + (counter + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Instance gen_random(const RandomSpec& spec) {
  if (spec.n < 1) throw DomainError("random instance needs n >= 1");
  if (spec.m + spec.cake_atoms < 1) throw DomainError("random instance needs m + cake_atoms >= 1");
  if (!(spec.density >= 0.0 && spec.density <= 1.0)) throw DomainError("density must be in [0, 1]");

  const std::size_t atoms = spec.cake_atoms;
  const Rational c = make_rational(static_cast<long>(atoms), 2);
  const Rational alpha = spec.alpha ? *spec.alpha : (c + static_cast<unsigned long>(spec.m)) / 2;
  if (!(alpha > 0 && alpha <= c + static_cast<unsigned long>(spec.m))) {
    throw DomainError("alpha must lie in (0, " + to_string(c + static_cast<unsigned long>(spec.m)) +
                      "]");
  }

  SplitMix64 rng(spec.seed);
  // Breakpoints: atoms - 1 distinct interior points of a grid of 8 * atoms
  // cells on [0, c].
  std::vector<Rational> cuts{Rational(0)};
  if (atoms > 0) {
    const unsigned long cells = 8 * atoms;
    std::vector<unsigned long> interior(cells - 1);
    std::iota(interior.begin(), interior.end(), 1ul);
    for (std::size_t j = 0; j + 1 < atoms; ++j) {
      const std::size_t pick = j + rng.below(interior.size() - j);
      std::swap(interior[j], interior[pick]);
    }
    std::sort(interior.begin(), interior.begin() + static_cast<std::ptrdiff_t>(atoms - 1));
    for (std::size_t j = 0; j + 1 < atoms; ++j) cuts.push_back(c * make_rational(static_cast<long>(interior[j]), static_cast<long>(cells)));
    cuts.push_back(c);
  }

  std::vector<Bundle> approvals(spec.n);
  bool anything = false;
  for (auto& b : approvals) {
    for (GoodId g = 0; g < spec.m; ++g) {
      if (rng.uniform() < spec.density) b.goods.push_back(g);
    }
    std::vector<Interval> pieces;
    for (std::size_t a = 0; a < atoms; ++a) {
      if (rng.uniform() < spec.density) pieces.push_back({cuts[a], cuts[a + 1]});
    }
    b.cake = IntervalSet::normalize(std::move(pieces));
    anything = anything || !b.empty();
  }
  if (!anything) {
    const std::size_t pick = rng.below(spec.m + atoms);
    if (pick < spec.m) {
      approvals[0].goods.push_back(pick);
    } else {
      const std::size_t a = pick - spec.m;
      approvals[0].cake = IntervalSet::single(cuts[a], cuts[a + 1]);
    }
  }
  return Instance(c, good_names(spec.m), std::move(approvals), alpha);
}

}  // namespace mixvote
