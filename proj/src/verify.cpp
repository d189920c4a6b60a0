#include "mixvote/verify.hpp"

#include <algorithm>

#include "mixvote/errors.hpp"

namespace mixvote {

namespace {

// Members of a closed group ordered by (utility, index); the first k of them
// are the weakest group of size k with this common bundle.
std::vector<AgentId> weakest_first(const ClosedGroup& g, const std::vector<Rational>& u) {
  std::vector<AgentId> members = g.support;
  std::stable_sort(members.begin(), members.end(),
                   [&](AgentId a, AgentId b) { return u[a] < u[b]; });
  return members;
}

AgentSet first_k_sorted(const std::vector<AgentId>& members, std::size_t k) {
  AgentSet x(members.begin(), members.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(x.begin(), x.end());
  return x;
}

// Reported witness: largest t, then largest group, then lexicographically
// smallest group.
bool preferred(const AxiomWitness& a, const AxiomWitness& b) {
  if (a.t != b.t) return a.t > b.t;
  if (a.group.size() != b.group.size()) return a.group.size() > b.group.size();
  return a.group < b.group;
}

struct Candidate {
  const ClosedGroup* closed;
  const std::vector<AgentId>* members;
  std::size_t k;
  Rational cap;
  const Rational& max_utility;
};

template <class Visit>
std::size_t for_each_candidate(const Instance& inst, const std::vector<Rational>& u,
                               std::size_t limit, Visit&& visit) {
  std::size_t checked = 0;
  for (const auto& g : closed_groups(inst, limit)) {
    const auto members = weakest_first(g, u);
    for (std::size_t k = 1; k <= members.size(); ++k) {
      ++checked;
      visit(Candidate{&g, &members, k, inst.group_cap(k), u[members[k - 1]]});
    }
  }
  return checked;
}

AxiomReport check_axiom(const Instance& inst, const Bundle& allocation, std::string axiom,
                        std::size_t limit, auto&& violation) {
  inst.check_allocation(allocation);
  const auto u = utilities(inst, allocation);
  AxiomReport report;
  report.axiom = std::move(axiom);
  report.profiles_checked = for_each_candidate(inst, u, limit, [&](const Candidate& c) {
    std::optional<AxiomWitness> w = violation(c);
    if (!w) return;
    w->group = first_k_sorted(*c.members, c.k);
    if (!report.witness || preferred(*w, *report.witness)) report.witness = std::move(w);
  });
  report.pass = !report.witness.has_value();
  return report;
}

}  // namespace

Rational average(const std::vector<Rational>& values) {
  if (values.empty()) throw DomainError("average of an empty group");
  Rational sum = 0;
  for (const auto& v : values) sum += v;
  return sum / static_cast<unsigned long>(values.size());
}

std::vector<CohesiveProfile> cohesive_profiles(const Instance& inst, std::size_t limit) {
  std::vector<CohesiveProfile> out;
  for (const auto& g : closed_groups(inst, limit)) {
    for (std::size_t k = 1; k <= g.support.size(); ++k) {
      const Rational cap = inst.group_cap(k);
      CohesiveProfile p;
      p.group.assign(g.support.begin(), g.support.begin() + static_cast<std::ptrdiff_t>(k));
      p.t_cohesive_sup = cap < g.size ? cap : g.size;
      p.t_exact_max = achievable_exact_size(g.num_goods, g.cake_length, cap);
      out.push_back(std::move(p));
    }
  }
  return out;
}

std::vector<CohesiveProfile> cohesive_profiles(const Instance& inst, const Bundle& allocation,
                                               std::size_t limit) {
  inst.check_bundle(allocation);
  const auto u = utilities(inst, allocation);
  std::vector<CohesiveProfile> out;
  for_each_candidate(inst, u, limit, [&](const Candidate& c) {
    CohesiveProfile p;
    p.group = first_k_sorted(*c.members, c.k);
    p.t_cohesive_sup = c.cap < c.closed->size ? c.cap : c.closed->size;
    p.t_exact_max = achievable_exact_size(c.closed->num_goods, c.closed->cake_length, c.cap);
    for (std::size_t j = 0; j < c.k; ++j) p.group_utilities.push_back(u[(*c.members)[j]]);
    out.push_back(std::move(p));
  });
  return out;
}

AxiomReport verify_ejr_m(const Instance& inst, const Bundle& allocation, std::size_t limit) {
  return check_axiom(inst, allocation, "ejr-m", limit,
                     [](const Candidate& c) -> std::optional<AxiomWitness> {
                       Rational t = achievable_exact_size(c.closed->num_goods,
                                                          c.closed->cake_length, c.cap);
                       if (t <= 0 || c.max_utility >= t) return std::nullopt;
                       return AxiomWitness{{}, t, t, c.max_utility};
                     });
}

AxiomReport verify_ejr_beta(const Instance& inst, const Bundle& allocation, const Rational& beta,
                            Strictness mode, const Rational& margin, std::size_t limit) {
  if (beta < 0) throw DomainError("beta must be nonnegative, got " + to_string(beta));
  if (margin < 0) throw DomainError("margin must be nonnegative");
  std::string id = beta == 1 && mode == Strictness::Strict ? "ejr-1" : "ejr-beta";
  return check_axiom(inst, allocation, std::move(id), limit,
                     [&](const Candidate& c) -> std::optional<AxiomWitness> {
                       Rational t = c.cap < c.closed->size ? c.cap : c.closed->size;
                       Rational threshold = t - beta - margin;
                       const bool ok = mode == Strictness::Strict ? c.max_utility > threshold
                                                                  : c.max_utility >= threshold;
                       if (ok) return std::nullopt;
                       return AxiomWitness{{}, std::move(t), std::move(threshold), c.max_utility};
                     });
}

AxiomReport verify_ejr_1(const Instance& inst, const Bundle& allocation, const Rational& margin,
                         std::size_t limit) {
  return verify_ejr_beta(inst, allocation, 1, Strictness::Strict, margin, limit);
}

AxiomReport verify_cake_ejr(const Instance& inst, const Bundle& allocation, std::size_t limit) {
  if (inst.has_goods()) throw UnsupportedInstance("cake EJR is defined for cake instances only");
  AxiomReport r = verify_ejr_m(inst, allocation, limit);
  r.axiom = "cake-ejr";
  return r;
}

Rational degree_ejr_m(const Rational& t) {
  const Rational fl(floor_of(t));
  return fl * (1 - (fl + 1) / (2 * t));
}

Rational degree_ejr_1(const Rational& t) { return (t - 2 + 1 / t) / 2; }

Rational degree_gpav(const Rational& t) { return t - 1; }

Rational degree_mes_upper(const Rational& t) { return (Rational(ceil_of(t)) + 1) / 2; }

DegreeFunction degree_function(DegreeBound bound) {
  switch (bound) {
    case DegreeBound::EjrM: return degree_ejr_m;
    case DegreeBound::Ejr1: return degree_ejr_1;
    case DegreeBound::Gpav: return degree_gpav;
    case DegreeBound::MesUpper: return degree_mes_upper;
    case DegreeBound::Custom: break;
  }
  throw DomainError("custom degree bound needs an explicit function");
}

std::string to_string(DegreeBound bound) {
  switch (bound) {
    case DegreeBound::EjrM: return "ejr-m";
    case DegreeBound::Ejr1: return "ejr-1";
    case DegreeBound::Gpav: return "gpav";
    case DegreeBound::MesUpper: return "mes-upper";
    case DegreeBound::Custom: return "custom";
  }
  return "?";
}

DegreeBound parse_degree_bound(const std::string& name) {
  for (auto b : {DegreeBound::EjrM, DegreeBound::Ejr1, DegreeBound::Gpav, DegreeBound::MesUpper}) {
    if (to_string(b) == name) return b;
  }
  throw DomainError("unknown degree bound '" + name + "'");
}

DegreeReport audit_degree(const Instance& inst, const Bundle& allocation, DegreeBound bound,
                          const std::optional<Rational>& target_t, const DegreeFunction& custom,
                          std::size_t limit) {
  inst.check_allocation(allocation);
  if (target_t && *target_t < 1) throw DomainError("target t must be at least 1");
  const DegreeFunction f = bound == DegreeBound::Custom ? custom : degree_function(bound);
  if (!f) throw DomainError("custom degree bound needs an explicit function");

  const auto u = utilities(inst, allocation);
  DegreeReport report;
  report.bound = to_string(bound);
  std::optional<Rational> f_target;
  if (target_t) f_target = f(*target_t);

  for (const auto& g : closed_groups(inst, limit)) {
    const auto members = weakest_first(g, u);
    Rational prefix = 0;
    for (std::size_t k = 1; k <= members.size(); ++k) {
      prefix += u[members[k - 1]];
      const Rational cap = inst.group_cap(k);
      const Rational& t_sup = cap < g.size ? cap : g.size;
      Rational t;
      Rational fv;
      if (target_t) {
        // Larger groups only raise the average; the smallest admissible k is
        // the binding one, but every k is checked for simplicity of the scan.
        if (t_sup < *target_t) continue;
        t = *target_t;
        fv = *f_target;
      } else {
        if (t_sup < 1) continue;
        t = t_sup;
        fv = f(t);
      }
      ++report.groups_checked;
      Rational avg = prefix / static_cast<unsigned long>(k);
      Rational slack = avg - fv;
      AgentSet group = first_k_sorted(members, k);
      const bool better =
          !report.any_group || slack < report.min_slack ||
          (slack == report.min_slack &&
           (group.size() > report.group.size() ||
            (group.size() == report.group.size() && group < report.group)));
      if (better) {
        report.any_group = true;
        report.min_slack = std::move(slack);
        report.group = std::move(group);
        report.t = std::move(t);
        report.average = std::move(avg);
        report.bound_value = std::move(fv);
      }
    }
  }
  return report;
}

}  // namespace mixvote
