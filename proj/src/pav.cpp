#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "mixvote/errors.hpp"
#include "mixvote/rules.hpp"

namespace mixvote {

namespace {

constexpr int kDyadicBits = 40;
constexpr std::size_t kMaxIterations = 200000;

// Dyadic rational nearest below x (x >= 0).
Rational dyadic_floor(double x) {
  const double scaled = std::floor(std::ldexp(x, kDyadicBits));
  Rational r(from_double(scaled));
  mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), kDyadicBits);
  return r;
}

struct CakeProblem {
  std::vector<std::size_t> atom_index;   // atoms with at least one approver
  std::vector<double> len;
  std::vector<const AgentSet*> approvers;
  double budget = 0.0;
};

// Frank-Wolfe gap: max over the feasible set of grad . (z - y), attained by a
// fractional knapsack in decreasing gradient order.
double frank_wolfe_gap(const CakeProblem& p, const std::vector<double>& grad,
                       const std::vector<double>& y) {
  std::vector<std::size_t> order(grad.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return grad[a] > grad[b];
  });
  double left = p.budget;
  double best = 0.0;
  for (std::size_t a : order) {
    if (left <= 0 || grad[a] <= 0) break;
    const double take = std::min(left, p.len[a]);
    best += grad[a] * take;
    left -= take;
  }
  double current = 0.0;
  for (std::size_t a = 0; a < y.size(); ++a) current += grad[a] * y[a];
  return best - current;
}

void gradient(const CakeProblem& p, const std::vector<double>& u, std::vector<double>& grad,
              std::vector<double>& dh) {
  for (std::size_t i = 0; i < u.size(); ++i) dh[i] = harmonic_derivative(u[i]);
  for (std::size_t a = 0; a < grad.size(); ++a) {
    double g = 0.0;
    for (AgentId i : *p.approvers[a]) g += dh[i];
    grad[a] = g;
  }
}

// Pairwise ascent: move mass from the used direction with the smallest
// gradient (the unused budget counts as gradient 0) to the unsaturated atom
// with the largest, with an exact bisection line search on the concave
// one-dimensional restriction.
void pairwise_ascent(const CakeProblem& p, std::vector<double>& y, std::vector<double>& u,
                     double target_gap, std::size_t& iterations) {
  const std::size_t k = y.size();
  std::vector<double> grad(k), dh(u.size());
  for (iterations = 0; iterations < kMaxIterations; ++iterations) {
    gradient(p, u, grad, dh);
    if (frank_wolfe_gap(p, grad, y) <= target_gap) return;

    double used = std::accumulate(y.begin(), y.end(), 0.0);
    const double slack = std::max(0.0, p.budget - used);
    std::optional<std::size_t> q, d;
    for (std::size_t a = 0; a < k; ++a) {
      if (y[a] < p.len[a] && (!q || grad[a] > grad[*q])) q = a;
      if (y[a] > 0 && (!d || grad[a] < grad[*d])) d = a;
    }
    if (!q) return;
    const bool from_slack = slack > 0;
    if (!from_slack && (!d || grad[*d] >= grad[*q])) return;
    if (!from_slack && *d == *q) return;

    const double room = p.len[*q] - y[*q];
    const double step_max = std::min(room, from_slack ? slack : y[*d]);
    if (!(step_max > 0)) return;

    auto shift = [&](double delta) {
      for (AgentId i : *p.approvers[*q]) u[i] += delta;
      if (!from_slack) {
        for (AgentId i : *p.approvers[*d]) u[i] -= delta;
      }
    };
    auto slope = [&](double delta) {
      shift(delta);
      double s = 0.0;
      for (AgentId i : *p.approvers[*q]) s += harmonic_derivative(u[i]);
      if (!from_slack) {
        for (AgentId i : *p.approvers[*d]) s -= harmonic_derivative(u[i]);
      }
      shift(-delta);
      return s;
    };

    double step = step_max;
    if (slope(step_max) < 0) {
      double lo = 0.0, hi = step_max;
      for (int it = 0; it < 80 && hi - lo > 1e-17 * (1.0 + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (slope(mid) > 0 ? lo : hi) = mid;
      }
      step = lo;
      if (!(step > 0)) return;
    }
    shift(step);
    y[*q] += step;
    if (!from_slack) y[*d] -= step;
    if (y[*q] > p.len[*q]) y[*q] = p.len[*q];
    if (!from_slack && y[*d] < 0) y[*d] = 0;
  }
}

}  // namespace

CakeOptResult concave_cake_opt(const Instance& inst, const std::vector<Atom>& atoms,
                               const std::vector<Rational>& base, const Rational& budget,
                               double eps, double harmonic_tol) {
  if (!(eps > 0)) throw DomainError("eps must be positive");
  if (budget < 0) throw DomainError("budget must be nonnegative");
  if (base.size() != inst.num_agents()) throw DomainError("one base utility per agent expected");

  CakeProblem p;
  Rational total_len = 0;
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    if (!atoms[a].is_cake() || atoms[a].approvers.empty()) continue;
    p.atom_index.push_back(a);
    p.len.push_back(to_double(atoms[a].size()));
    p.approvers.push_back(&atoms[a].approvers);
    total_len += atoms[a].size();
  }
  const Rational usable = budget < total_len ? budget : total_len;
  p.budget = to_double(usable);

  std::vector<double> y(p.len.size(), 0.0);
  std::vector<double> u(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) u[i] = to_double(base[i]);

  CakeOptResult out;
  if (!p.len.empty() && p.budget > 0) pairwise_ascent(p, y, u, eps / 2, out.iterations);

  // Exact rational lengths: dyadic, inside the boxes, total within budget.
  std::vector<Rational> lengths(p.len.size());
  Rational sum = 0;
  for (std::size_t j = 0; j < y.size(); ++j) {
    const Rational cap = atoms[p.atom_index[j]].size();
    // A saturated atom is taken exactly rather than as its double rounding.
    if (p.len[j] - y[j] <= std::ldexp(1.0, -kDyadicBits + 1)) {
      lengths[j] = cap;
    } else {
      lengths[j] = dyadic_floor(std::max(0.0, y[j]));
      if (lengths[j] > cap) lengths[j] = cap;
    }
    sum += lengths[j];
  }
  for (std::size_t j = lengths.size(); j-- > 0 && sum > usable;) {
    const Rational cut = sum - usable < lengths[j] ? sum - usable : lengths[j];
    lengths[j] -= cut;
    sum -= cut;
  }

  std::vector<Rational> utils = base;
  out.lengths.assign(atoms.size(), Rational(0));
  for (std::size_t j = 0; j < lengths.size(); ++j) {
    out.lengths[p.atom_index[j]] = lengths[j];
    for (AgentId i : *p.approvers[j]) utils[i] += lengths[j];
  }
  out.score = gpav_score(std::span<const Rational>(utils), harmonic_tol);

  // Certificate at the returned point.
  if (!p.len.empty()) {
    std::vector<double> yd(lengths.size()), ud(utils.size()), grad(lengths.size()),
        dh(utils.size());
    for (std::size_t j = 0; j < lengths.size(); ++j) yd[j] = to_double(lengths[j]);
    for (std::size_t i = 0; i < utils.size(); ++i) ud[i] = to_double(utils[i]);
    gradient(p, ud, grad, dh);
    out.gap = std::max(0.0, frank_wolfe_gap(p, grad, yd));
  }
  return out;
}

CakeOptResult concave_cake_opt(const Instance& inst, const std::vector<Atom>& atoms,
                               const GoodSet& fixed_goods, const Rational& budget, double eps,
                               double harmonic_tol) {
  return concave_cake_opt(inst, atoms, utilities(inst, Bundle({}, fixed_goods)), budget, eps,
                          harmonic_tol);
}

PavSolution generalized_pav(const Instance& inst, const PavOptions& opts) {
  const std::size_t m = inst.num_goods();
  if (m > opts.max_goods && !opts.force) {
    throw CapacityError("GPAV enumerates good subsets; m = " + std::to_string(m) +
                        " exceeds the cap " + std::to_string(opts.max_goods) + " (use --force)");
  }
  const Integer whole = floor_of(inst.alpha());
  const std::size_t kmax = whole < static_cast<unsigned long>(m) ? whole.get_ui() : m;

  std::vector<GoodSet> subsets;
  for_each_subset_up_to(m, kmax, [&](const GoodSet& s) { subsets.push_back(s); });

  const std::vector<Atom> atoms = atomize(inst, inst.full_cake(), GoodSet{});
  std::vector<CakeOptResult> results(subsets.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t idx = next++; idx < subsets.size(); idx = next++) {
      const Rational budget = inst.alpha() - static_cast<unsigned long>(subsets[idx].size());
      results[idx] = concave_cake_opt(inst, atoms, subsets[idx], budget, opts.eps, opts.harmonic_tol);
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(opts.threads, subsets.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  // Deterministic reduction: the first subset wins unless a later one is
  // better by more than the score noise.
  constexpr double kTieTolerance = 1e-12;
  std::size_t best = 0;
  double worst_gap = 0.0;
  for (std::size_t idx = 0; idx < results.size(); ++idx) {
    worst_gap = std::max(worst_gap, results[idx].gap);
    if (results[idx].score.value > results[best].score.value + kTieTolerance) best = idx;
  }

  PavSolution sol;
  sol.subsets_evaluated = subsets.size();
  sol.score = results[best].score;
  sol.optimality_gap = worst_gap + kTieTolerance;
  std::vector<Interval> pieces;
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    const Rational& len = results[best].lengths[a];
    if (len <= 0) continue;
    const Interval piece{atoms[a].interval.lo, atoms[a].interval.lo + len};
    pieces.push_back(piece);
    sol.atom_lengths.emplace_back(atoms[a].interval, len);
  }
  sol.allocation = Bundle(IntervalSet::normalize(std::move(pieces)), subsets[best]);
  return sol;
}

std::vector<Bundle> mnw_indivisible(const Instance& inst, const MnwOptions& opts) {
  if (inst.has_cake()) throw UnsupportedInstance("MNW is implemented for indivisible instances only");
  const std::size_t m = inst.num_goods();
  if (m > opts.max_goods && !opts.force) {
    throw CapacityError("MNW enumerates good subsets; m = " + std::to_string(m) +
                        " exceeds the cap " + std::to_string(opts.max_goods) + " (use --force)");
  }
  const Integer whole = floor_of(inst.alpha());
  const std::size_t kmax = whole < static_cast<unsigned long>(m) ? whole.get_ui() : m;

  std::size_t best_count = 0;
  Integer best_product = 0;
  std::vector<Bundle> best;
  for_each_subset_up_to(m, kmax, [&](const GoodSet& s) {
    const Bundle b({}, s);
    std::size_t count = 0;
    Integer product = 1;
    for (AgentId i = 0; i < inst.num_agents(); ++i) {
      const Rational u = utility(inst, i, b);
      if (u > 0) {
        ++count;
        product *= u.get_num();
      }
    }
    if (best.empty() || count > best_count || (count == best_count && product > best_product)) {
      best_count = count;
      best_product = product;
      best.clear();
      best.push_back(b);
    } else if (count == best_count && product == best_product) {
      best.push_back(b);
    }
  });
  return best;
}

}  // namespace mixvote
