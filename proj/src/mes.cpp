#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <stdexcept>

#include "mixvote/rules.hpp"

namespace mixvote {

std::optional<Rational> mes_price(std::vector<Rational> budgets, const Rational& cost) {
  std::sort(budgets.begin(), budgets.end());
  // sum_i min(b_i, rho) is piecewise linear; on the piece where the i smallest
  // budgets are exhausted it equals prefix + rho * (k - i).
  Rational prefix = 0;
  const std::size_t k = budgets.size();
  for (std::size_t i = 0; i < k; ++i) {
    const unsigned long rest = k - i;
    if (prefix + budgets[i] * rest >= cost) return (cost - prefix) / rest;
    prefix += budgets[i];
  }
  return std::nullopt;
}

namespace {

// Distinct budget values of the active agents, so that prices can be
// computed from per-level counts instead of sorting every approver set.
struct BudgetLevels {
  std::vector<Rational> values;        // ascending, all > 0
  std::vector<std::size_t> level_of;   // per agent; meaningless for inactive agents

  void rebuild(const std::vector<Rational>& budgets, const std::vector<bool>& active) {
    std::map<Rational, std::size_t> index;
    for (std::size_t i = 0; i < budgets.size(); ++i) {
      if (active[i]) index.emplace(budgets[i], 0);
    }
    values.clear();
    for (auto& [v, idx] : index) {
      idx = values.size();
      values.push_back(v);
    }
    level_of.assign(budgets.size(), 0);
    for (std::size_t i = 0; i < budgets.size(); ++i) {
      if (active[i]) level_of[i] = index.at(budgets[i]);
    }
  }
};

std::optional<Rational> good_price(const Atom& atom, const BudgetLevels& levels,
                                   const std::vector<bool>& active,
                                   std::vector<std::size_t>& scratch) {
  scratch.assign(levels.values.size(), 0);
  std::size_t k = 0;
  for (AgentId i : atom.approvers) {
    if (!active[i]) continue;
    ++scratch[levels.level_of[i]];
    ++k;
  }
  if (k == 0) return std::nullopt;
  // Same scan as mes_price, one level at a time: within a level the test
  // prefix + b * (k - i) >= 1 does not change.
  Rational prefix = 0;
  std::size_t before = 0;
  for (std::size_t l = 0; l < levels.values.size(); ++l) {
    if (scratch[l] == 0) continue;
    const unsigned long rest = k - before;
    if (prefix + levels.values[l] * rest >= 1) return (1 - prefix) / rest;
    prefix += levels.values[l] * static_cast<unsigned long>(scratch[l]);
    before += scratch[l];
  }
  return std::nullopt;
}

}  // namespace

MesResult generalized_mes(const Instance& inst) {
  const std::size_t n = inst.num_agents();
  MesResult out;
  PaymentLedger& ledger = out.ledger;
  ledger.initial_budget = inst.alpha() / static_cast<unsigned long>(n);
  ledger.budgets.assign(n, ledger.initial_budget);
  std::vector<bool> active(n, true);

  // The breakpoints never change, and every purchase is a prefix of what is
  // left of an atom, so each cake atom only needs its current left end.
  const std::vector<Atom> atoms = atomize(inst);
  std::vector<Rational> left_end(atoms.size());
  std::vector<bool> available(atoms.size(), true);
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    if (atoms[a].is_cake()) left_end[a] = atoms[a].interval.lo;
  }

  BudgetLevels levels;
  levels.rebuild(ledger.budgets, active);
  std::vector<std::optional<Rational>> price(atoms.size());
  std::vector<bool> stale(atoms.size(), true);
  std::vector<std::size_t> scratch;
  std::vector<bool> paid(n, false);
  std::optional<Rational> last_rho;
  std::vector<Interval> bought_cake;

  // Lazy selection: an atom's price never decreases (budgets only shrink and
  // approvers only drop out), so a stale entry's key is a lower bound on its
  // current price. Ordering by (price, index) keeps goods ahead of cake and
  // lower indices ahead on ties.
  using Entry = std::pair<Rational, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  for (std::size_t a = 0; a < atoms.size(); ++a) queue.emplace(Rational(0), a);

  while (true) {
    std::optional<std::size_t> pick;
    while (!queue.empty()) {
      const std::size_t a = queue.top().second;
      if (!available[a]) {
        queue.pop();
        continue;
      }
      if (!stale[a]) {
        pick = a;
        queue.pop();
        break;
      }
      queue.pop();
      const Atom& atom = atoms[a];
      if (atom.is_cake()) {
        // Paying equally, (x - x0) rho is split among the approvers, so the
        // cheapest price is 1/|N_I| and it is always attainable for small x.
        const auto k = std::count_if(atom.approvers.begin(), atom.approvers.end(),
                                     [&](AgentId i) { return static_cast<bool>(active[i]); });
        price[a] = k == 0 ? std::nullopt
                          : std::optional<Rational>(Rational(1, static_cast<unsigned long>(k)));
      } else {
        price[a] = good_price(atom, levels, active, scratch);
      }
      stale[a] = false;
      // Unaffordable atoms stay unaffordable.
      if (price[a]) queue.emplace(*price[a], a);
    }
    if (!pick) break;

    const Atom& atom = atoms[*pick];
    const Rational rho = *price[*pick];
    if (last_rho && rho < *last_rho) throw std::logic_error("MES price decreased");
    last_rho = rho;

    Purchase p;
    p.kind = atom.kind;
    p.rho = rho;
    for (AgentId i : atom.approvers) {
      if (active[i]) p.payers.push_back(i);
    }
    if (atom.is_cake()) {
      Rational min_budget = ledger.budgets[p.payers.front()];
      for (AgentId i : p.payers) {
        if (ledger.budgets[i] < min_budget) min_budget = ledger.budgets[i];
      }
      const Rational x0 = left_end[*pick];
      Rational length = atom.interval.hi - x0;
      const Rational affordable = min_budget * static_cast<unsigned long>(p.payers.size());
      if (affordable < length) length = affordable;
      p.piece = Interval{x0, x0 + length};
      p.cost = length;
      left_end[*pick] = p.piece.hi;
      if (left_end[*pick] == atom.interval.hi) available[*pick] = false;
      bought_cake.push_back(p.piece);
      const Rational share = length * rho;
      p.payments.assign(p.payers.size(), share);
    } else {
      p.good = atom.good;
      p.cost = 1;
      available[*pick] = false;
      out.allocation.goods.push_back(atom.good);
      for (AgentId i : p.payers) {
        p.payments.push_back(ledger.budgets[i] < rho ? ledger.budgets[i] : rho);
      }
    }

    Rational total = 0;
    for (std::size_t j = 0; j < p.payers.size(); ++j) {
      const AgentId i = p.payers[j];
      ledger.budgets[i] -= p.payments[j];
      total += p.payments[j];
      if (ledger.budgets[i] < 0) throw std::logic_error("MES budget went negative");
      if (ledger.budgets[i] == 0) active[i] = false;
      paid[i] = true;
    }
    if (total != p.cost) throw std::logic_error("MES payments do not cover the cost");

    // Only prices of atoms sharing a payer can have changed.
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      if (!available[a] || stale[a]) continue;
      for (AgentId i : atoms[a].approvers) {
        if (paid[i]) {
          stale[a] = true;
          break;
        }
      }
    }
    for (AgentId i : p.payers) paid[i] = false;
    if (available[*pick]) queue.emplace(rho, *pick);
    levels.rebuild(ledger.budgets, active);
    ledger.purchases.push_back(std::move(p));
  }

  std::sort(out.allocation.goods.begin(), out.allocation.goods.end());
  out.allocation.cake = IntervalSet::normalize(std::move(bought_cake));

  Rational spent = 0;
  for (const auto& b : ledger.budgets) spent += ledger.initial_budget - b;
  if (spent != bundle_size(out.allocation)) throw std::logic_error("MES ledger does not balance");
  return out;
}

}  // namespace mixvote
