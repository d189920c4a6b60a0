#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mixvote/cohesion.hpp"
#include "mixvote/model.hpp"

namespace mixvote {

// One candidate violator per (closed group, size k): the k members of the
// closed group with the lowest utility (ties by index). Without an allocation
// the first k members by index are used and group_utilities stays empty.
struct CohesiveProfile {
  AgentSet group;
  Rational t_cohesive_sup;  // min(|X| alpha / n, s(common))
  Rational t_exact_max;     // achievable_exact_size over the common bundle
  std::vector<Rational> group_utilities;  // ascending
};

std::vector<CohesiveProfile> cohesive_profiles(const Instance& inst,
                                               std::size_t limit = kDefaultClosedGroupLimit);
std::vector<CohesiveProfile> cohesive_profiles(const Instance& inst, const Bundle& allocation,
                                               std::size_t limit = kDefaultClosedGroupLimit);

enum class Strictness { Strict, Weak };

struct AxiomWitness {
  AgentSet group;
  Rational t;
  Rational threshold;     // some member must exceed (strict) or reach (weak) this
  Rational max_utility;   // best utility inside the group
};

struct AxiomReport {
  std::string axiom;
  bool pass = true;
  std::optional<AxiomWitness> witness;
  std::size_t profiles_checked = 0;
};

// Every t-cohesive group with a commonly approved sub-bundle of size exactly t
// has a member with utility >= t.
AxiomReport verify_ejr_m(const Instance& inst, const Bundle& allocation,
                         std::size_t limit = kDefaultClosedGroupLimit);

// Every t-cohesive group has a member with utility > t - beta (>= in weak
// mode). The margin relaxes the threshold to t - beta - margin and exists only
// for allocations coming out of the numeric GPAV solver.
AxiomReport verify_ejr_beta(const Instance& inst, const Bundle& allocation, const Rational& beta,
                            Strictness mode, const Rational& margin = 0,
                            std::size_t limit = kDefaultClosedGroupLimit);

AxiomReport verify_ejr_1(const Instance& inst, const Bundle& allocation, const Rational& margin = 0,
                         std::size_t limit = kDefaultClosedGroupLimit);

// EJR-M restricted to cake instances. Throws UnsupportedInstance with goods.
AxiomReport verify_cake_ejr(const Instance& inst, const Bundle& allocation,
                            std::size_t limit = kDefaultClosedGroupLimit);

// Proportionality-degree bounds f(t), all nondecreasing in t.
enum class DegreeBound { EjrM, Ejr1, Gpav, MesUpper, Custom };

using DegreeFunction = std::function<Rational(const Rational&)>;

Rational degree_ejr_m(const Rational& t);     // floor(t) (1 - (floor(t) + 1) / 2t)
Rational degree_ejr_1(const Rational& t);     // (t - 2 + 1/t) / 2
Rational degree_gpav(const Rational& t);      // t - 1
Rational degree_mes_upper(const Rational& t); // (ceil(t) + 1) / 2

DegreeFunction degree_function(DegreeBound bound);
std::string to_string(DegreeBound bound);
DegreeBound parse_degree_bound(const std::string& name);

struct DegreeReport {
  std::string bound;
  bool any_group = false;  // false: no cohesive group with t >= 1 (or >= target)
  Rational min_slack;      // average satisfaction - f(t)
  AgentSet group;
  Rational t;
  Rational average;
  Rational bound_value;
  std::size_t groups_checked = 0;
};

// Minimum over cohesive groups of (average satisfaction - f(t)). Without a
// target every group is evaluated at its supremum t >= 1; with a target t0 >= 1
// only groups that are t0-cohesive count, evaluated at f(t0). A custom f must
// be nondecreasing.
DegreeReport audit_degree(const Instance& inst, const Bundle& allocation, DegreeBound bound,
                          const std::optional<Rational>& target_t = std::nullopt,
                          const DegreeFunction& custom = {},
                          std::size_t limit = kDefaultClosedGroupLimit);

Rational average(const std::vector<Rational>& values);

}  // namespace mixvote
