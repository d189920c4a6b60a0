#include <algorithm>

#include "mixvote/cohesion.hpp"
#include "mixvote/errors.hpp"
#include "mixvote/rules.hpp"

namespace mixvote {

namespace {

struct Choice {
  Rational t;
  AgentSet group;
  const ClosedGroup* closed = nullptr;
};

AgentSet restrict_to(const AgentSet& support, const std::vector<bool>& remaining) {
  AgentSet out;
  for (AgentId i : support) {
    if (remaining[i]) out.push_back(i);
  }
  return out;
}

// Largest t* over groups of remaining agents. Every group X has its common
// bundle among the closed groups, and enlarging X to all remaining supporters
// of that bundle only raises the cap |X| alpha / n, so one candidate per closed
// group suffices.
Choice best_choice(const Instance& inst, const std::vector<ClosedGroup>& closed,
                   const std::vector<bool>& remaining) {
  Choice best;
  for (const auto& g : closed) {
    AgentSet members = restrict_to(g.support, remaining);
    if (members.empty()) continue;
    Rational t = achievable_exact_size(g.num_goods, g.cake_length, inst.group_cap(members.size()));
    const bool better = !best.closed || t > best.t ||
                        (t == best.t && (members.size() > best.group.size() ||
                                         (members.size() == best.group.size() &&
                                          members < best.group)));
    if (better) best = Choice{std::move(t), std::move(members), &g};
  }
  return best;
}

void check_script_round(const Instance& inst, const std::vector<bool>& remaining,
                        const Rational& t_star, const AgentSet& group, const Bundle& witness,
                        std::size_t round) {
  const std::string where = "script round " + std::to_string(round + 1) + ": ";
  if (group.empty()) throw DomainError(where + "empty group");
  if (!std::is_sorted(group.begin(), group.end()) ||
      std::adjacent_find(group.begin(), group.end()) != group.end()) {
    throw DomainError(where + "group must be sorted and duplicate-free");
  }
  for (AgentId i : group) {
    if (i >= inst.num_agents() || !remaining[i]) {
      throw DomainError(where + "agent " + std::to_string(i) + " is not available");
    }
  }
  inst.check_bundle(witness);
  const Rational size = bundle_size(witness);
  if (size != t_star) {
    throw DomainError(where + "witness has size " + to_string(size) + " but t* = " +
                      to_string(t_star));
  }
  if (inst.group_cap(group.size()) < t_star) {
    throw DomainError(where + "group of " + std::to_string(group.size()) +
                      " agents is not " + to_string(t_star) + "-cohesive");
  }
  if (!is_subset(witness, common_bundle(inst, group))) {
    throw DomainError(where + "witness is not commonly approved by the group");
  }
}

}  // namespace

GreedyResult greedy_ejr_m(const Instance& inst, const GreedyOptions& opts) {
  const std::size_t n = inst.num_agents();
  if (n > opts.max_agents && !opts.force) {
    throw CapacityError("GreedyEJR-M is exhaustive; n = " + std::to_string(n) + " exceeds the cap " +
                        std::to_string(opts.max_agents) + " (use --force)");
  }
  const auto closed = closed_groups(inst);
  std::vector<bool> remaining(n, true);
  std::size_t left = n;
  GreedyResult result;
  std::size_t round = 0;

  while (left > 0) {
    Choice best = best_choice(inst, closed, remaining);
    if (!best.closed || best.t == 0) {
      // Nothing of positive size is justified any more; the remaining agents
      // are removed at t* = 0 without adding resource.
      for (AgentId i = 0; i < n; ++i) {
        if (remaining[i]) result.trace.unserved.push_back(i);
      }
      break;
    }

    AgentSet group;
    Bundle witness;
    if (opts.script && round < opts.script->rounds.size()) {
      const auto& [g, w] = opts.script->rounds[round];
      check_script_round(inst, remaining, best.t, g, w, round);
      group = g;
      witness = w;
    } else {
      group = std::move(best.group);
      witness = canonical_witness(best.closed->common, best.t);
    }

    for (AgentId i : group) remaining[i] = false;
    left -= group.size();
    result.allocation = unite(result.allocation, witness);
    result.trace.rounds.push_back(GreedyRound{best.t, std::move(group), std::move(witness)});
    ++round;
  }
  return result;
}

}  // namespace mixvote
