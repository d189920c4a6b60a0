#pragma once

#include <vector>

#include "mixvote/rational.hpp"

namespace mixvote {

struct Interval {
  Rational lo;
  Rational hi;

  Rational length() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

// A piece of cake: a finite union of disjoint closed intervals, kept in
// canonical form. Intervals are sorted by lo, have positive length, and are
// separated by gaps of positive length (touching intervals are merged).
// Single points carry no measure, so two sets that differ only in finitely
// many points compare equal after normalization.
class IntervalSet {
 public:
  IntervalSet() = default;

  // Throws ParseError for a reversed pair or a negative endpoint.
  static IntervalSet normalize(std::vector<Interval> intervals);
  static IntervalSet single(Rational lo, Rational hi);

  const std::vector<Interval>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }
  std::size_t size() const { return intervals_.size(); }

  Rational measure() const;

  IntervalSet intersect(const IntervalSet& other) const;
  IntervalSet unite(const IntervalSet& other) const;
  IntervalSet subtract(const IntervalSet& other) const;

  // True when other \ *this has measure zero.
  bool contains(const IntervalSet& other) const;
  // True when the point lies in some closed interval of the set.
  bool contains_point(const Rational& x) const;

  // Leftmost sub-piece of the given length; the length is clamped to measure().
  IntervalSet prefix(const Rational& length) const;

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  explicit IntervalSet(std::vector<Interval> canonical) : intervals_(std::move(canonical)) {}

  std::vector<Interval> intervals_;
};

inline IntervalSet normalize(std::vector<Interval> intervals) {
  return IntervalSet::normalize(std::move(intervals));
}
inline Rational measure(const IntervalSet& s) { return s.measure(); }
inline IntervalSet intersect(const IntervalSet& a, const IntervalSet& b) { return a.intersect(b); }

}  // namespace mixvote
