#pragma once

#include <cstddef>
#include <vector>

#include "mixvote/model.hpp"

namespace mixvote {

inline constexpr std::size_t kDefaultClosedGroupLimit = std::size_t{1} << 20;

// A bundle that is the intersection of some agents' approvals, together with
// every agent approving all of it. Any group X has common_bundle(X) equal to
// the bundle of exactly one closed group, whose support contains X.
struct ClosedGroup {
  Bundle common;
  AgentSet support;
  Rational size;            // s(common)
  std::size_t num_goods = 0;  // goods in common
  Rational cake_length;     // cake length in common
};

// All closed groups whose common bundle has positive size, ordered by support
// (lexicographically). Throws CapacityError past `limit` distinct bundles.
std::vector<ClosedGroup> closed_groups(const Instance& inst,
                                       std::size_t limit = kDefaultClosedGroupLimit);

// Largest t <= min(cap, goods + cake) that is the exact size of some
// sub-bundle of a bundle with `goods` goods and `cake` cake length, i.e. the
// maximum of  [0, min(cap, goods + cake)] ∩ ⋃_{j=0..goods} [j, j + cake].
Rational achievable_exact_size(std::size_t goods, const Rational& cake, const Rational& cap);

// Sub-bundle of exactly the given size: lowest-index goods first, then the
// leftmost cake. Precondition: size is achievable inside b.
Bundle canonical_witness(const Bundle& b, const Rational& size);

}  // namespace mixvote
