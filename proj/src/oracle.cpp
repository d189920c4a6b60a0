#include "mixvote/oracle.hpp"

#include <algorithm>

#include "mixvote/cohesion.hpp"
#include "mixvote/errors.hpp"
#include "mixvote/rules.hpp"

namespace mixvote {

namespace {

std::vector<Interval> grid_cells(const Instance& inst, std::size_t grid) {
  if (grid == 0) throw DomainError("grid must be positive");
  std::vector<Interval> cells;
  for (const auto& atom : atomize(inst, inst.full_cake(), GoodSet{})) {
    const Rational step = atom.interval.length() / static_cast<unsigned long>(grid);
    for (std::size_t j = 0; j < grid; ++j) {
      const Rational lo = atom.interval.lo + step * static_cast<unsigned long>(j);
      cells.push_back({lo, lo + step});
    }
  }
  return cells;
}

// Number of cell subsets from idx on that fit in the budget, saturating at
// cap. When all remaining cells fit together every subset does, which keeps
// the count cheap exactly when it is large.
std::size_t count_fitting(const std::vector<Interval>& cells, const std::vector<Rational>& suffix,
                          std::size_t idx, const Rational& budget, std::size_t cap) {
  if (idx == cells.size()) return 1;
  if (suffix[idx] <= budget) {
    const std::size_t rest = cells.size() - idx;
    return rest >= 63 ? cap : std::min<std::size_t>(cap, std::size_t{1} << rest);
  }
  std::size_t n = count_fitting(cells, suffix, idx + 1, budget, cap);
  const Rational len = cells[idx].length();
  if (n < cap && len <= budget) n += count_fitting(cells, suffix, idx + 1, budget - len, cap);
  return std::min(n, cap);
}

}  // namespace

std::size_t for_each_allocation(const Instance& inst, const EnumerationConfig& cfg,
                                const std::function<void(const Bundle&)>& f) {
  const std::vector<Interval> cells = grid_cells(inst, cfg.grid);
  const std::size_t m = inst.num_goods();
  const Integer whole = floor_of(inst.alpha());
  const std::size_t kmax = whole < static_cast<unsigned long>(m) ? whole.get_ui() : m;

  // Refuse before doing any work when the candidate count is over the limit.
  std::vector<Rational> suffix(cells.size() + 1, Rational(0));
  for (std::size_t j = cells.size(); j-- > 0;) suffix[j] = suffix[j + 1] + cells[j].length();
  const std::size_t cap = cfg.limit + 1;
  std::size_t total = 0;
  for_each_subset_up_to(m, kmax, [&](const GoodSet& goods) {
    if (total >= cap) return;
    total += count_fitting(cells, suffix, 0, inst.alpha() - static_cast<unsigned long>(goods.size()),
                           cap - total);
  });
  if (total > cfg.limit) {
    throw CapacityError("more than " + std::to_string(cfg.limit) +
                        " candidate allocations; lower the grid or raise the limit");
  }

  std::size_t count = 0;
  std::vector<Interval> chosen;
  auto emit = [&](const GoodSet& goods) {
    ++count;
    f(Bundle(IntervalSet::normalize(chosen), goods));
  };
  // Include/exclude cells left to right; "exclude" first keeps the empty
  // cake first for every good subset.
  auto cells_dfs = [&](auto&& self, std::size_t idx, const Rational& budget,
                       const GoodSet& goods) -> void {
    if (idx == cells.size()) {
      emit(goods);
      return;
    }
    self(self, idx + 1, budget, goods);
    const Rational len = cells[idx].length();
    if (len <= budget) {
      chosen.push_back(cells[idx]);
      self(self, idx + 1, budget - len, goods);
      chosen.pop_back();
    }
  };
  for_each_subset_up_to(m, kmax, [&](const GoodSet& goods) {
    cells_dfs(cells_dfs, 0, inst.alpha() - static_cast<unsigned long>(goods.size()), goods);
  });
  return count;
}

std::vector<Bundle> enumerate_allocations(const Instance& inst, const EnumerationConfig& cfg) {
  std::vector<Bundle> out;
  for_each_allocation(inst, cfg, [&](const Bundle& b) { out.push_back(b); });
  return out;
}

bool oracle_no_ejr_beta(const Instance& inst, const Rational& beta, Strictness mode,
                        const EnumerationConfig& cfg) {
  bool impossible = true;
  struct Found {};
  try {
    for_each_allocation(inst, cfg, [&](const Bundle& b) {
      if (verify_ejr_beta(inst, b, beta, mode).pass) {
        impossible = false;
        throw Found{};
      }
    });
  } catch (const Found&) {
  }
  return impossible;
}

std::optional<Rational> oracle_min_max_avg(const Instance& inst, const Rational& t,
                                           const EnumerationConfig& cfg) {
  if (t <= 0) throw DomainError("t must be positive");
  // A t-cohesive group X lies in the support of its common bundle; among all
  // X of size >= k0 inside that support the lowest average belongs to the k0
  // members with the smallest utilities.
  const Integer k0z = ceil_of(t * inst.agents_per_unit());
  const std::size_t k0 = k0z.get_ui();
  std::vector<AgentSet> supports;
  for (auto& g : closed_groups(inst)) {
    if (g.size >= t && g.support.size() >= k0) supports.push_back(std::move(g.support));
  }
  if (supports.empty()) return std::nullopt;

  std::optional<Rational> best;
  std::vector<Rational> vals;
  for_each_allocation(inst, cfg, [&](const Bundle& b) {
    const auto u = utilities(inst, b);
    std::optional<Rational> worst;
    for (const auto& s : supports) {
      vals.clear();
      for (AgentId i : s) vals.push_back(u[i]);
      std::nth_element(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(k0 - 1), vals.end());
      Rational sum = 0;
      for (std::size_t j = 0; j < k0; ++j) sum += vals[j];
      // nth_element leaves the k0 smallest in front, in some order.
      Rational avg = sum / static_cast<unsigned long>(k0);
      if (!worst || avg < *worst) worst = std::move(avg);
    }
    if (!best || *worst > *best) best = std::move(worst);
  });
  return best;
}

OracleOptimum oracle_discretized_opt(const Instance& inst, Objective objective,
                                     const EnumerationConfig& cfg, double harmonic_tol) {
  constexpr double kTieTolerance = 1e-12;
  OracleOptimum best;
  bool have = false;
  best.candidates = for_each_allocation(inst, cfg, [&](const Bundle& b) {
    const auto u = utilities(inst, b);
    if (objective == Objective::Gpav) {
      const HarmonicValue score = gpav_score(std::span<const Rational>(u), harmonic_tol);
      if (!have || score.value > best.gpav.value + kTieTolerance) {
        best.allocation = b;
        best.gpav = score;
        have = true;
      }
      return;
    }
    std::size_t positive = 0;
    Rational product = 1;
    for (const auto& x : u) {
      if (x > 0) {
        ++positive;
        product *= x;
      }
    }
    if (!have || positive > best.nash_positive ||
        (positive == best.nash_positive && product > best.nash_product)) {
      best.allocation = b;
      best.nash_positive = positive;
      best.nash_product = std::move(product);
      have = true;
    }
  });
  if (objective == Objective::Nash) {
    best.gpav = gpav_score(inst, best.allocation, harmonic_tol);
  } else {
    best.nash_product = 1;
    for (const auto& x : utilities(inst, best.allocation)) {
      if (x > 0) {
        ++best.nash_positive;
        best.nash_product *= x;
      }
    }
  }
  return best;
}

}  // namespace mixvote
