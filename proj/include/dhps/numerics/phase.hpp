#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace dhps {

using cplx = std::complex<double>;

/// Fractional part of t*x with the product's rounding error recovered by fma,
/// so e(t*x) stays accurate when |t*x| is in the billions.
inline double frac_product(double t, double x) {
  const double p = t * x;
  const double err = std::fma(t, x, -p);
  return (p - std::floor(p)) + err;
}

/// e(u) = exp(2 pi i u).
inline cplx expi2pi(double u) {
  u -= std::nearbyint(u);
  const double a = 2.0 * std::numbers::pi * u;
  return {std::cos(a), std::sin(a)};
}

/// e(t*x), with the argument reduced mod 1 before the trig call.
inline cplx expi2pi(double t, double x) { return expi2pi(frac_product(t, x)); }

}  // namespace dhps
