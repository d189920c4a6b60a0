#include "mixvote/cohesion.hpp"

#include <algorithm>
#include <unordered_map>

#include "mixvote/errors.hpp"

namespace mixvote {

std::vector<ClosedGroup> closed_groups(const Instance& inst, std::size_t limit) {
  const std::size_t n = inst.num_agents();
  std::vector<Bundle> family;
  std::unordered_map<Bundle, std::size_t, BundleHash> seen;

  auto offer = [&](Bundle b) {
    if (b.empty() || seen.contains(b)) return;
    if (family.size() >= limit) {
      throw CapacityError("more than " + std::to_string(limit) +
                          " distinct common bundles; raise the limit or use --force");
    }
    seen.emplace(b, family.size());
    family.push_back(std::move(b));
  };

  for (AgentId i = 0; i < n; ++i) offer(inst.approval(i));
  // Closure under intersection with single approvals reaches every
  // intersection of approvals.
  for (std::size_t idx = 0; idx < family.size(); ++idx) {
    for (AgentId i = 0; i < n; ++i) {
      Bundle next = intersect(family[idx], inst.approval(i));
      if (next == family[idx]) continue;
      offer(std::move(next));
    }
  }

  std::vector<ClosedGroup> out;
  out.reserve(family.size());
  for (auto& b : family) {
    ClosedGroup g;
    for (AgentId i = 0; i < n; ++i) {
      if (is_subset(b, inst.approval(i))) g.support.push_back(i);
    }
    g.num_goods = b.goods.size();
    g.cake_length = b.cake.measure();
    g.size = g.cake_length + static_cast<unsigned long>(g.num_goods);
    g.common = std::move(b);
    out.push_back(std::move(g));
  }
  std::sort(out.begin(), out.end(),
            [](const ClosedGroup& a, const ClosedGroup& b) { return a.support < b.support; });
  return out;
}

Rational achievable_exact_size(std::size_t goods, const Rational& cake, const Rational& cap) {
  Rational upper = cake + static_cast<unsigned long>(goods);
  if (cap < upper) upper = cap;
  if (upper <= 0) return 0;
  // Largest block start j <= upper; the block [j, j + cake] either reaches
  // upper or ends in a gap below it.
  Integer j = floor_of(upper);
  if (j > static_cast<unsigned long>(goods)) j = static_cast<unsigned long>(goods);
  Rational block_end = Rational(j) + cake;
  return upper <= block_end ? upper : block_end;
}

Bundle canonical_witness(const Bundle& b, const Rational& size) {
  Integer whole = floor_of(size);
  std::size_t take = b.goods.size();
  if (whole < static_cast<unsigned long>(take)) take = whole.get_ui();
  Bundle out;
  out.goods.assign(b.goods.begin(), b.goods.begin() + static_cast<std::ptrdiff_t>(take));
  const Rational rest = size - static_cast<unsigned long>(take);
  if (rest > 0) {
    if (rest > b.cake.measure()) {
      throw DomainError("size " + to_string(size) + " is not achievable inside the bundle");
    }
    out.cake = b.cake.prefix(rest);
  }
  return out;
}

}  // namespace mixvote
