#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "mixvote/interval_set.hpp"
#include "mixvote/rational.hpp"

namespace mixvote {

using AgentId = std::size_t;
using GoodId = std::size_t;
using AgentSet = std::vector<AgentId>;  // sorted, unique
using GoodSet = std::vector<GoodId>;    // sorted, unique

// A piece of cake together with a set of indivisible goods.
struct Bundle {
  IntervalSet cake;
  GoodSet goods;

  Bundle() = default;
  Bundle(IntervalSet c, GoodSet g);

  bool empty() const { return cake.empty() && goods.empty(); }
  friend bool operator==(const Bundle&, const Bundle&) = default;
};

// s(B) = length of the cake part + number of goods.
Rational bundle_size(const Bundle& b);
Bundle intersect(const Bundle& a, const Bundle& b);
Bundle unite(const Bundle& a, const Bundle& b);
bool is_subset(const Bundle& inner, const Bundle& outer);

struct BundleHash {
  std::size_t operator()(const Bundle& b) const;
};

// Mixed-goods approval instance: cake [0, c], goods g_1..g_m, one approved
// bundle per agent and a size budget alpha. Immutable once constructed.
class Instance {
 public:
  // Throws ParseError on any violated invariant (see validate()).
  Instance(Rational cake_length, std::vector<std::string> good_names,
           std::vector<Bundle> approvals, Rational alpha);

  const Rational& cake_length() const { return cake_length_; }
  const std::vector<std::string>& good_names() const { return good_names_; }
  std::size_t num_goods() const { return good_names_.size(); }
  std::size_t num_agents() const { return approvals_.size(); }
  const std::vector<Bundle>& approvals() const { return approvals_; }
  const Bundle& approval(AgentId i) const;
  const Rational& alpha() const { return alpha_; }

  bool has_cake() const { return cake_length_ > 0; }
  bool has_goods() const { return !good_names_.empty(); }
  bool is_cake_instance() const { return !has_goods(); }
  bool is_indivisible_instance() const { return !has_cake(); }

  // The whole cake [0, c] (empty when c = 0).
  IntervalSet full_cake() const;
  GoodSet all_goods() const;
  Bundle resource() const { return {full_cake(), all_goods()}; }

  // n / alpha, the number of agents that "pays" for one unit of resource.
  Rational agents_per_unit() const;
  // |X| * alpha / n.
  Rational group_cap(std::size_t group_size) const;

  // Throws InvalidAllocation when the bundle references goods or cake outside
  // the instance. Size is not checked.
  void check_bundle(const Bundle& b) const;
  // check_bundle plus s(A) <= alpha.
  void check_allocation(const Bundle& a) const;

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  void validate() const;

  Rational cake_length_;
  std::vector<std::string> good_names_;
  std::vector<Bundle> approvals_;
  Rational alpha_;
};

// u_i(A) = s(R_i ∩ A).
Rational utility(const Instance& inst, AgentId i, const Bundle& a);
std::vector<Rational> utilities(const Instance& inst, const Bundle& a);

// Intersection of the approved bundles of every agent in the group.
// Throws DomainError for an empty group.
Bundle common_bundle(const Instance& inst, const AgentSet& group);

// A piece of the remaining resource that every agent approves entirely or
// not at all.
struct Atom {
  enum class Kind { Good, Cake };

  Kind kind = Kind::Good;
  GoodId good = 0;     // Kind::Good
  Interval interval;   // Kind::Cake
  AgentSet approvers;

  bool is_cake() const { return kind == Kind::Cake; }
  Rational size() const { return is_cake() ? interval.length() : Rational(1); }
  friend bool operator==(const Atom&, const Atom&) = default;
};

// Goods atoms (by index) followed by cake atoms (by position). Cake atoms are
// the remaining cake cut at every endpoint of every agent's approved
// intervals.
std::vector<Atom> atomize(const Instance& inst, const IntervalSet& remaining_cake,
                          const GoodSet& remaining_goods);
inline std::vector<Atom> atomize(const Instance& inst) {
  return atomize(inst, inst.full_cake(), inst.all_goods());
}

std::string describe(const Bundle& b, const Instance& inst);

}  // namespace mixvote
