#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace mixvote {

// Exact arbitrary-precision fraction. mpq_class keeps results of arithmetic in
// canonical form (positive denominator, lowest terms); values built through
// the helpers below are canonicalized as well.
using Rational = mpq_class;
using Integer = mpz_class;

// Parses "p/q" or "p" (optional leading '-'). Rejects q = 0 and garbage.
Rational parse_rational(std::string_view text);

// "p/q" in lowest terms, or "p" when the denominator is 1.
std::string to_string(const Rational& r);

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Integer floor_of(const Rational& r);
Integer ceil_of(const Rational& r);

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

inline double to_double(const Rational& r) { return r.get_d(); }

// Exact conversion of a finite double (doubles are dyadic rationals).
Rational from_double(double x);


}  // namespace mixvote
