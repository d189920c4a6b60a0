#pragma once

#include <span>

#include "mixvote/model.hpp"
#include "mixvote/rational.hpp"

namespace mixvote {

inline constexpr double kDefaultHarmonicTol = 1e-12;
// Below this the double result itself cannot be certified.
inline constexpr double kMinHarmonicTol = 1e-14;

struct HarmonicValue {
  double value = 0.0;
  double abs_error_bound = 0.0;
};

// Generalized harmonic number H_x = sum_{k>=1} x / (k (x + k)) for real x >= 0.
// Integer arguments up to kExactHarmonicLimit come from an exactly summed
// rational table; everything else is a truncated sum with a certified
// Euler-Maclaurin tail. Throws DomainError for x < 0 or tol < kMinHarmonicTol.
HarmonicValue harmonic(double x, double tol = kDefaultHarmonicTol);
HarmonicValue harmonic(const Rational& x, double tol = kDefaultHarmonicTol);

inline constexpr long kExactHarmonicLimit = 1000;

// H'_x = sum_{k>=1} 1 / (x + k)^2. Decreasing in x, equal to pi^2/6 at 0.
double harmonic_derivative(double x);

// GPAV score: sum over agents of H_{u_i}.
HarmonicValue gpav_score(std::span<const Rational> utilities, double tol = kDefaultHarmonicTol);
HarmonicValue gpav_score(const Instance& inst, const Bundle& a, double tol = kDefaultHarmonicTol);

}  // namespace mixvote
