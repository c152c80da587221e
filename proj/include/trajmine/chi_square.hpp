#pragma once
// Pearson chi-square test for 2x2 contingency tables (1 degree of freedom).
// The p-value comes from the upper regularized incomplete gamma function
// Q(1/2, x/2), evaluated by series expansion for small arguments and a
// modified Lentz continued fraction otherwise.

#include <cmath>
#include <cstdint>
#include <limits>

#include "trajmine/events.hpp"

namespace trajmine {

namespace detail {

inline constexpr int kGammaMaxIter = 500;
inline constexpr double kGammaEps = 1e-16;
inline constexpr double kGammaTiny = 1e-300;

// Lower regularized incomplete gamma P(a,x) by its power series; valid and
// fast for x < a + 1.
inline double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < kGammaMaxIter; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kGammaEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized incomplete gamma Q(a,x) by continued fraction (modified
// Lentz); valid for x >= a + 1.
inline double gamma_q_contfrac(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kGammaTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kGammaMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kGammaTiny) d = kGammaTiny;
    c = b + an / c;
    if (std::fabs(c) < kGammaTiny) c = kGammaTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kGammaEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

} // namespace detail

inline double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw Error("regularized_gamma_q: invalid arguments");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
  return detail::gamma_q_contfrac(a, x);
}

// Survival probability of a chi-square(1) variate at the given statistic.
inline double chi_square_p(double statistic) {
  if (statistic <= 0.0) return 1.0;
  return regularized_gamma_q(0.5, statistic / 2.0);
}

struct Chi2x2 {
  double statistic = 0.0;
  double p_value = 1.0;
  int residual_sign_g1 = 0; // sign of (observed - expected) for G1 presence
  bool degenerate = false;  // a zero margin: test carries no information
};

// Table layout: rows are groups, columns are (contains, does-not-contain):
//   [ a  b ]   a = G1 with pattern, b = G1 without
//   [ c  d ]   c = G2 with pattern, d = G2 without
inline Chi2x2 chi_square_2x2(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  Chi2x2 r;
  const double ad = static_cast<double>(a) * static_cast<double>(d);
  const double bc = static_cast<double>(b) * static_cast<double>(c);
  const double n = static_cast<double>(a + b + c + d);
  const double r1 = static_cast<double>(a + b);
  const double r2 = static_cast<double>(c + d);
  const double c1 = static_cast<double>(a + c);
  const double c2 = static_cast<double>(b + d);

  if (r1 == 0.0 || r2 == 0.0 || c1 == 0.0 || c2 == 0.0) {
    r.degenerate = true;
    return r;
  }

  const double diff = ad - bc; // = n * (observed_a - expected_a)
  r.statistic = n * diff * diff / (r1 * r2 * c1 * c2);
  r.p_value = chi_square_p(r.statistic);
  r.residual_sign_g1 = diff > 0.0 ? 1 : (diff < 0.0 ? -1 : 0);
  return r;
}

} // namespace trajmine
