#include "mixvote/harmonic.hpp"

#include <array>
#include <cfloat>
#include <cmath>

#include "mixvote/errors.hpp"

namespace mixvote {

namespace {

// B_{2j} / (2j)! for j = 1..4.
constexpr long double kEulerMaclaurin[4] = {1.0L / 12.0L, -1.0L / 720.0L, 1.0L / 30240.0L,
                                            -1.0L / 1209600.0L};

const std::array<double, kExactHarmonicLimit + 1>& exact_table() {
  static const auto table = [] {
    std::array<double, kExactHarmonicLimit + 1> t{};
    Rational sum = 0;
    t[0] = 0.0;
    for (long k = 1; k <= kExactHarmonicLimit; ++k) {
      sum += Rational(1, k);
      t[k] = sum.get_d();
    }
    return t;
  }();
  return table;
}

// Remainder after the B_8 term is at most 2 zeta(8) / (2 pi)^8 * |f^(7)(K)|,
// and |f^(7)(K)| <= 7! / K^8 for f(k) = 1/k - 1/(k + x).
double tail_remainder_bound(long cut) { return 1.0 / (240.0 * std::pow(double(cut), 8)); }

long choose_cut(double tol) {
  long cut = 8;
  while (tail_remainder_bound(cut) > tol / 4) ++cut;
  return cut;
}

// sum_{k>=1} (1/k - 1/(k+x)) split at the cut: explicit head, Euler-Maclaurin tail.
long double series(double x, long cut) {
  const long double xl = x;
  long double head = 0.0L;
  for (long k = cut - 1; k >= 1; --k) head += xl / (static_cast<long double>(k) * (k + xl));

  const long double K = cut;
  const long double Kx = K + xl;
  long double tail = std::log1p(xl / K);
  tail += 0.5L * (1.0L / K - 1.0L / Kx);
  // f^(2j-1)(K) = -(2j-1)! (K^-2j - (K+x)^-2j)
  long double fact = 1.0L;  // (2j-1)!
  for (int j = 1; j <= 4; ++j) {
    const int order = 2 * j - 1;
    if (order > 1) fact *= static_cast<long double>(order) * (order - 1);
    const long double deriv = -fact * (std::pow(K, -2.0L * j) - std::pow(Kx, -2.0L * j));
    tail -= kEulerMaclaurin[j - 1] * deriv;
  }
  return head + tail;
}

void check_tol(double tol) {
  if (!(tol >= kMinHarmonicTol)) {
    throw DomainError("harmonic tolerance must be at least 1e-14");
  }
}

}  // namespace

HarmonicValue harmonic(double x, double tol) {
  check_tol(tol);
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("harmonic number needs x >= 0");
  if (x == std::floor(x) && x <= kExactHarmonicLimit) {
    const double v = exact_table()[static_cast<std::size_t>(x)];
    return {v, 0.5 * DBL_EPSILON * v};
  }
  const long cut = choose_cut(tol);
  const long double v = series(x, cut);
  const double value = static_cast<double>(v);
  // Tail remainder, summation rounding in long double, final rounding to double.
  const double rounding = 4.0 * cut * LDBL_EPSILON * (std::fabs(static_cast<double>(v)) + 1.0) +
                          DBL_EPSILON * std::fabs(value);
  return {value, tail_remainder_bound(cut) + rounding};
}

HarmonicValue harmonic(const Rational& x, double tol) {
  if (x < 0) throw DomainError("harmonic number needs x >= 0, got " + to_string(x));
  if (is_integer(x) && x <= kExactHarmonicLimit) return harmonic(x.get_d(), tol);
  const double xd = x.get_d();
  HarmonicValue out = harmonic(xd, tol);
  // Conversion moves x by at most |x| * eps/2; H' <= pi^2/6 < 2.
  out.abs_error_bound += std::fabs(xd) * DBL_EPSILON;
  return out;
}

double harmonic_derivative(double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("harmonic derivative needs x >= 0");
  constexpr long cut = 20;
  const long double xl = x;
  long double head = 0.0L;
  for (long k = cut - 1; k >= 1; --k) {
    const long double d = xl + k;
    head += 1.0L / (d * d);
  }
  // g(k) = (x+k)^-2, g^(m)(k) = (-1)^m (m+1)! (x+k)^-(m+2)
  const long double Kx = xl + cut;
  long double tail = 1.0L / Kx + 0.5L / (Kx * Kx);
  long double fact = 2.0L;  // (order+1)! with order = 1
  for (int j = 1; j <= 4; ++j) {
    const int order = 2 * j - 1;
    if (order > 1) fact *= static_cast<long double>(order + 1) * order;
    const long double deriv = -fact * std::pow(Kx, -static_cast<long double>(order + 2));
    tail -= kEulerMaclaurin[j - 1] * deriv;
  }
  return static_cast<double>(head + tail);
}

HarmonicValue gpav_score(std::span<const Rational> utilities, double tol) {
  HarmonicValue out;
  for (const auto& u : utilities) {
    const HarmonicValue h = harmonic(u, tol);
    out.value += h.value;
    out.abs_error_bound += h.abs_error_bound;
  }
  out.abs_error_bound += utilities.size() * DBL_EPSILON * std::fabs(out.value);
  return out;
}

HarmonicValue gpav_score(const Instance& inst, const Bundle& a, double tol) {
  const auto u = utilities(inst, a);
  return gpav_score(std::span<const Rational>(u), tol);
}

}  // namespace mixvote
