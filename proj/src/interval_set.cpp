#include "mixvote/interval_set.hpp"

#include <algorithm>

#include "mixvote/errors.hpp"

namespace mixvote {

IntervalSet IntervalSet::normalize(std::vector<Interval> intervals) {
  for (auto& iv : intervals) {
    // Fractions built from a raw (num, den) pair are not reduced by GMP.
    iv.lo.canonicalize();
    iv.hi.canonicalize();
    if (iv.lo > iv.hi) {
      throw ParseError("malformed interval [" + to_string(iv.lo) + ", " + to_string(iv.hi) +
                       "]: lo > hi");
    }
    if (iv.lo < 0) throw ParseError("interval endpoint " + to_string(iv.lo) + " is negative");
  }
  std::erase_if(intervals, [](const Interval& iv) { return iv.lo == iv.hi; });
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });

  std::vector<Interval> merged;
  merged.reserve(intervals.size());
  for (auto& iv : intervals) {
    if (!merged.empty() && iv.lo <= merged.back().hi) {
      if (iv.hi > merged.back().hi) merged.back().hi = iv.hi;
    } else {
      merged.push_back(std::move(iv));
    }
  }
  return IntervalSet(std::move(merged));
}

IntervalSet IntervalSet::single(Rational lo, Rational hi) {
  return normalize({Interval{std::move(lo), std::move(hi)}});
}

Rational IntervalSet::measure() const {
  Rational total = 0;
  for (const auto& iv : intervals_) total += iv.hi - iv.lo;
  return total;
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
  std::vector<Interval> out;
  std::size_t i = 0;
  std::size_t j = 0;
  const auto& a = intervals_;
  const auto& b = other.intervals_;
  while (i < a.size() && j < b.size()) {
    const Rational& lo = a[i].lo < b[j].lo ? b[j].lo : a[i].lo;
    const Rational& hi = a[i].hi < b[j].hi ? a[i].hi : b[j].hi;
    if (lo < hi) out.push_back({lo, hi});
    if (a[i].hi < b[j].hi) {
      ++i;
    } else {
      ++j;
    }
  }
  // Inputs are canonical, so the sweep output is sorted and separated.
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
  std::vector<Interval> all = intervals_;
  all.insert(all.end(), other.intervals_.begin(), other.intervals_.end());
  return normalize(std::move(all));
}

IntervalSet IntervalSet::subtract(const IntervalSet& other) const {
  std::vector<Interval> out;
  std::size_t j = 0;
  const auto& b = other.intervals_;
  for (const auto& iv : intervals_) {
    Rational cursor = iv.lo;
    while (j < b.size() && b[j].hi <= cursor) ++j;
    std::size_t k = j;
    while (k < b.size() && b[k].lo < iv.hi) {
      if (b[k].lo > cursor) out.push_back({cursor, b[k].lo});
      if (b[k].hi > cursor) cursor = b[k].hi;
      if (cursor >= iv.hi) break;
      ++k;
    }
    if (cursor < iv.hi) out.push_back({cursor, iv.hi});
  }
  return normalize(std::move(out));
}

bool IntervalSet::contains(const IntervalSet& other) const { return other.subtract(*this).empty(); }

bool IntervalSet::contains_point(const Rational& x) const {
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), x,
                             [](const Rational& v, const Interval& iv) { return v < iv.lo; });
  if (it == intervals_.begin()) return false;
  --it;
  return x <= it->hi;
}

IntervalSet IntervalSet::prefix(const Rational& length) const {
  std::vector<Interval> out;
  Rational left = length;
  for (const auto& iv : intervals_) {
    if (left <= 0) break;
    Rational len = iv.hi - iv.lo;
    if (len <= left) {
      out.push_back(iv);
      left -= len;
    } else {
      out.push_back({iv.lo, iv.lo + left});
      left = 0;
    }
  }
  return IntervalSet(std::move(out));
}

}  // namespace mixvote
