#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "mixvote/harmonic.hpp"
#include "mixvote/model.hpp"

namespace mixvote {

// ---------------------------------------------------------------- GreedyEJR-M

struct GreedyRound {
  Rational t_star;
  AgentSet group;
  Bundle witness;
};

struct GreedyTrace {
  std::vector<GreedyRound> rounds;  // rounds with t* > 0, in execution order
  AgentSet unserved;                // agents removed at t* = 0 (no resource left to justify)
};

// A scripted execution: each entry is used for one round, in order, and must
// be an admissible choice at that point (group t*-cohesive within the
// remaining agents, witness inside the group's common bundle, size exactly
// t*). Once the script runs out the default policy takes over.
struct GreedyScript {
  std::vector<std::pair<AgentSet, Bundle>> rounds;
};

struct GreedyOptions {
  std::size_t max_agents = 20;
  bool force = false;
  std::optional<GreedyScript> script;
};

struct GreedyResult {
  Bundle allocation;
  GreedyTrace trace;
};

// Default policy: among groups attaining t*, remove the largest set of
// remaining agents sharing the common bundle (lexicographically smallest on
// ties) and add the canonical witness. Throws CapacityError above the agent
// cap unless forced, DomainError for an inadmissible script round.
GreedyResult greedy_ejr_m(const Instance& inst, const GreedyOptions& opts = {});

// ------------------------------------------------------------- Generalized MES

// Smallest rho >= 0 with sum_i min(b_i, rho) = cost; nullopt when the budgets
// cannot cover the cost. Budgets need not be sorted.
std::optional<Rational> mes_price(std::vector<Rational> budgets, const Rational& cost);

struct Purchase {
  Atom::Kind kind = Atom::Kind::Good;
  GoodId good = 0;
  Interval piece;                  // purchased [x0, x] for cake
  Rational rho;                    // price per unit of utility
  Rational cost;                   // 1 for goods, x - x0 for cake
  AgentSet payers;
  std::vector<Rational> payments;  // parallel to payers
};

struct PaymentLedger {
  Rational initial_budget;            // alpha / n
  std::vector<Rational> budgets;      // final b_i
  std::vector<Purchase> purchases;
};

struct MesResult {
  Bundle allocation;
  PaymentLedger ledger;
};

// Ties in rho go to goods (by index) before cake (leftmost first). Throws
// std::logic_error if a ledger invariant breaks (never expected).
MesResult generalized_mes(const Instance& inst);

// ------------------------------------------------------------ Generalized PAV

struct CakeOptResult {
  std::vector<Rational> lengths;  // one per input atom
  HarmonicValue score;            // of fixed utilities plus the chosen lengths
  double gap = 0.0;               // certified upper bound on (optimum - score)
  std::size_t iterations = 0;
};

// Maximizes sum_i H(base_i + sum_{a ∋ i} y_a) over 0 <= y_a <= len(a),
// sum_a y_a <= budget. base holds the utility each agent already has from
// fixed goods. Lengths are rationals with power-of-two denominators.
CakeOptResult concave_cake_opt(const Instance& inst, const std::vector<Atom>& atoms,
                               const std::vector<Rational>& base, const Rational& budget,
                               double eps, double harmonic_tol = kDefaultHarmonicTol);

// Convenience overload matching the utilities of a fixed good set.
CakeOptResult concave_cake_opt(const Instance& inst, const std::vector<Atom>& atoms,
                               const GoodSet& fixed_goods, const Rational& budget, double eps,
                               double harmonic_tol = kDefaultHarmonicTol);

struct PavSolution {
  Bundle allocation;
  HarmonicValue score;
  double optimality_gap = 0.0;
  std::vector<std::pair<Interval, Rational>> atom_lengths;  // cake atom -> length taken
  std::size_t subsets_evaluated = 0;
};

struct PavOptions {
  double eps = 1e-9;
  double harmonic_tol = kDefaultHarmonicTol;
  std::size_t max_goods = 16;
  bool force = false;
  unsigned threads = 1;
};

PavSolution generalized_pav(const Instance& inst, const PavOptions& opts = {});

// ---------------------------------------------------------------------- MNW

struct MnwOptions {
  std::size_t max_goods = 16;
  bool force = false;
};

// All good subsets of size <= floor(alpha) maximizing first the number of
// agents with positive utility and then their utility product. Ordered by
// (size, lexicographic goods). Throws UnsupportedInstance when c > 0.
std::vector<Bundle> mnw_indivisible(const Instance& inst, const MnwOptions& opts = {});

// Calls f(goods) for every subset of {0..m-1} with at most k elements, by
// increasing size and lexicographically within a size.
template <class F>
void for_each_subset_up_to(std::size_t m, std::size_t k, F&& f) {
  GoodSet cur;
  f(static_cast<const GoodSet&>(cur));
  for (std::size_t size = 1; size <= std::min(k, m); ++size) {
    cur.resize(size);
    for (std::size_t i = 0; i < size; ++i) cur[i] = i;
    while (true) {
      f(static_cast<const GoodSet&>(cur));
      std::size_t i = size;
      while (i > 0 && cur[i - 1] == m - size + i - 1) --i;
      if (i == 0) break;
      ++cur[i - 1];
      for (std::size_t j = i; j < size; ++j) cur[j] = cur[j - 1] + 1;
    }
  }
}

}  // namespace mixvote
