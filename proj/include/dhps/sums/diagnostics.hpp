#pragma once

// Empirical checks of the growth bounds the sums are known to satisfy.
// All implied constants and the arbitrarily-small exponent slack are
// replaced by explicit numbers supplied by the caller.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "dhps/numerics/rational.hpp"
#include "dhps/sums/exp_sums.hpp"

namespace dhps {

/// X^(-27/29) log X, the half-width of the central t-range.
inline double central_width(double x_max) {
  return std::pow(x_max, -27.0 / 29.0) * std::log(x_max);
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("loglog_slope: need >= 2 paired points");
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw std::invalid_argument("loglog_slope: values must be positive");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

inline std::vector<double> uniform_grid(double lo, double hi, std::size_t points) {
  if (points < 2) throw std::invalid_argument("uniform_grid: need >= 2 points");
  std::vector<double> g(points);
  const double h = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) g[i] = lo + h * static_cast<double>(i);
  g.back() = hi;
  return g;
}

enum class GapKind {
  /// sup over the grid of |S_{k,k}(t) - gamma Sigma_k(t)|
  s_vs_sigma,
  /// trapezoid over the grid of |Sigma_k(t) - U_k(t)|^2
  sigma_vs_u,
};

/// One gap measurement at a single X on an explicit t grid.
inline double gap_measure(GapKind kind, int k, const GammaParam& gamma,
                          double x_max, double lambda0,
                          std::span<const double> t_grid) {
  if (t_grid.empty()) throw std::invalid_argument("gap_measure: empty t grid");
  const PrimeTable all = build_prime_window(x_max, lambda0, k);
  if (kind == GapKind::s_vs_sigma) {
    const PrimeTable ps = build_table(gamma, x_max, lambda0, k);
    std::vector<double> gaps(t_grid.size());
    parallel_chunks(t_grid.size(), 128,
                    [&](std::size_t, std::size_t b, std::size_t e) {
                      for (std::size_t i = b; i < e; ++i) {
                        const double t = t_grid[i];
                        gaps[i] = std::abs(table_sum(ps.view(), t) -
                                           gamma.value() * table_sum(all.view(), t));
                      }
                    });
    return *std::max_element(gaps.begin(), gaps.end());
  }
  if (t_grid.size() < 2) throw std::invalid_argument("gap_measure: L2 needs >= 2 nodes");
  const IntWindow window = power_window(x_max, lambda0, k);
  std::vector<double> sq(t_grid.size());
  parallel_chunks(t_grid.size(), 128,
                  [&](std::size_t, std::size_t b, std::size_t e) {
                    for (std::size_t i = b; i < e; ++i) {
                      const double t = t_grid[i];
                      sq[i] = std::norm(table_sum(all.view(), t) -
                                        integer_sum(window, k, t));
                    }
                  });
  return pairwise_sum<double>(0, t_grid.size() - 1, [&](std::size_t i) {
    return 0.5 * (t_grid[i + 1] - t_grid[i]) * (sq[i] + sq[i + 1]);
  });
}

struct GapLadder {
  std::vector<double> x_values;
  std::vector<double> gaps;
  /// NaN when fewer than two X values or some gap is zero.
  double fit_exponent = std::numeric_limits<double>::quiet_NaN();

  /// Largest measured gap over the ladder.
  double sup_gap() const {
    return gaps.empty() ? 0.0 : *std::max_element(gaps.begin(), gaps.end());
  }
};

/// Gap over t in [0, Delta(X)] (S vs Sigma; the gap is even in t) or over
/// [-Delta(X), Delta(X)] (Sigma vs U) for each X, plus the fitted growth
/// exponent of gap against X.
inline GapLadder gap_ladder(GapKind kind, int k, const GammaParam& gamma,
                            std::span<const double> x_values, double lambda0,
                            std::size_t grid_points) {
  GapLadder out;
  for (const double x : x_values) {
    const double d = central_width(x);
    const auto grid = kind == GapKind::s_vs_sigma
                          ? uniform_grid(0.0, d, grid_points)
                          : uniform_grid(-d, d, grid_points);
    out.x_values.push_back(x);
    out.gaps.push_back(gap_measure(kind, k, gamma, x, lambda0, grid));
  }
  // A zero gap has no logarithm; the fit is then left as NaN.
  const bool positive = std::all_of(out.gaps.begin(), out.gaps.end(),
                                    [](double g) { return g > 0.0; });
  if (out.x_values.size() >= 2)
    out.fit_exponent = positive ? loglog_slope(out.x_values, out.gaps)
                                : std::numeric_limits<double>::quiet_NaN();
  return out;
}

/// Exponent of the S_{k,k} - gamma Sigma_k approximation error.
inline double approximation_exponent(int k, double gamma) {
  switch (k) {
    case 2: return (21.0 - 7.0 * gamma) / 29.0;
    case 3: return (143.0 - 48.0 * gamma) / 288.0;
    case 4: return (149.0 - 50.0 * gamma) / 398.0;
    default: throw std::invalid_argument("approximation_exponent: k must be 2, 3 or 4");
  }
}

struct WeylCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  Rational approximant;
  bool ok = false;
};

/// |sum_{p <= N} e(t p^2) log p| against
/// C N^(1+d) (1/q + N^(-1/2) + q/N^2)^(1/4), q from dirichlet_approx(t, N).
inline WeylCheck weyl_bound_check(double t, std::uint64_t n, double constant = 10.0,
                                  double slack = 0.05) {
  if (n < 2 || n > 1000000) throw std::invalid_argument("weyl_bound_check: need 2 <= N <= 1e6");
  std::vector<PrimeEntry> entries;
  for (const std::uint64_t p : sieve_primes(2, n))
    entries.push_back({p, std::log(static_cast<double>(p)),
                       static_cast<double>(p) * static_cast<double>(p)});
  WeylCheck c;
  c.lhs = std::abs(table_sum(entries, t));
  c.approximant = dirichlet_approx(t, static_cast<std::int64_t>(n));
  const double q = static_cast<double>(c.approximant.den());
  const double nd = static_cast<double>(n);
  c.rhs = constant * std::pow(nd, 1.0 + slack) *
          std::pow(1.0 / q + 1.0 / std::sqrt(nd) + q / (nd * nd), 0.25);
  c.ok = c.lhs <= c.rhs;
  return c;
}

/// |I_k(t)| / (X^(1/k - 1) min(X, 1/|t|)).
inline double integral_decay_ratio(int k, double x_max, double lambda0, double t) {
  const double i = std::abs(integral_sum(x_max, lambda0, k, t).value);
  const double cap = t == 0.0 ? x_max : std::min(x_max, 1.0 / std::abs(t));
  return i / (std::pow(x_max, 1.0 / k - 1.0) * cap);
}

/// |I_k(t) - U_k(t)| / (1 + |t| X).
inline double euler_gap_ratio(int k, double x_max, double lambda0, double t) {
  const cplx i = integral_sum(x_max, lambda0, k, t).value;
  const cplx u = integer_sum(power_window(x_max, lambda0, k), k, t);
  return std::abs(i - u) / (1.0 + std::abs(t) * x_max);
}

}  // namespace dhps
