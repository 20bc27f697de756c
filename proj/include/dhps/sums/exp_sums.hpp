#pragma once

// The four exponential-sum families over the window lambda0*X < n^k <= X:
//
//   S      sum over PS primes  p^(1-gamma) e(t p^k) log p
//   Sigma  sum over primes     e(t p^k) log p
//   U      sum over integers   e(t n^k)
//   I      integral            e(t y^k) dy  over [(lambda0 X)^(1/k), X^(1/k)]

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "dhps/error.hpp"
#include "dhps/numerics/phase.hpp"
#include "dhps/numerics/quadrature.hpp"
#include "dhps/parallel.hpp"
#include "dhps/primes/table.hpp"

namespace dhps {

enum class SumFamily { S, Sigma, U, I };

inline const char* to_string(SumFamily f) {
  switch (f) {
    case SumFamily::S: return "S";
    case SumFamily::Sigma: return "Sigma";
    case SumFamily::U: return "U";
    case SumFamily::I: return "I";
  }
  return "?";
}

struct SumSpec {
  SumFamily family = SumFamily::S;
  int k = 2;
  /// Required for S, ignored otherwise.
  std::optional<GammaParam> gamma;
  double x_max = 0.0;
  double lambda0 = 0.1;

  void validate() const {
    if (k < 2 || k > 4) throw std::invalid_argument("SumSpec: k must be 2, 3 or 4");
    if (!(lambda0 > 0.0 && lambda0 < 1.0))
      throw std::invalid_argument("SumSpec: lambda0 outside (0, 1)");
    if (!(x_max > 0.0)) throw std::invalid_argument("SumSpec: x_max <= 0");
    if (family == SumFamily::S && !gamma)
      throw std::invalid_argument("SumSpec: family S needs gamma");
  }

  /// The spec a table was built for: S for PS tables, Sigma otherwise.
  static SumSpec of(const PrimeTable& t) {
    return {t.gamma ? SumFamily::S : SumFamily::Sigma, t.k, t.gamma, t.x_max,
            t.lambda0};
  }
};

inline void check_table(const SumSpec& spec, const PrimeTable& table) {
  auto fail = [&](const std::string& why) {
    throw SpecMismatch(std::string("eval_sum(") + to_string(spec.family) +
                       "): " + why);
  };
  if (table.k != spec.k) fail("table k differs");
  if (table.x_max != spec.x_max) fail("table X differs");
  if (table.lambda0 != spec.lambda0) fail("table lambda0 differs");
  if (spec.family == SumFamily::S) {
    if (!table.gamma) fail("table is not PS-filtered");
    if (!(*table.gamma == *spec.gamma)) fail("table gamma differs");
  } else if (table.gamma) {
    fail("table is PS-filtered");
  }
}

/// sum of weight * e(t * p^k) over the entries, pairwise.
inline cplx table_sum(std::span<const PrimeEntry> entries, double t) {
  return pairwise_sum<cplx>(0, entries.size(), [&](std::size_t i) {
    return entries[i].weight * expi2pi(t, entries[i].power);
  });
}

inline cplx integer_sum(const IntWindow& w, int k, double t) {
  return pairwise_sum<cplx>(0, w.size(), [&](std::size_t i) {
    return expi2pi(t, static_cast<double>(ipow(w.first + i, k)));
  });
}

/// Limits of the continuous window [(lambda0 X)^(1/k), X^(1/k)].
inline std::pair<double, double> continuous_window(double x_max, double lambda0,
                                                   int k) {
  return {std::pow(lambda0 * x_max, 1.0 / k), std::pow(x_max, 1.0 / k)};
}

inline QuadratureResult integral_sum(double x_max, double lambda0, int k,
                                     double t, double rel_tol = 1e-10) {
  const auto [lo, hi] = continuous_window(x_max, lambda0, k);
  QuadratureSpec q;
  q.lo = lo;
  q.hi = hi;
  q.max_frequency = std::abs(t) * k * std::pow(x_max, (k - 1.0) / k);
  q.rel_tol = rel_tol;
  return oscillatory_integral(
      [&](double y) { return expi2pi(t, std::pow(y, k)); }, q);
}

/// Value of the sum named by `spec` at t. S and Sigma read `table`, which
/// must have been built for the same (k, X, lambda0) and, for S, gamma.
inline cplx eval_sum(const SumSpec& spec, double t,
                     const PrimeTable* table = nullptr) {
  spec.validate();
  switch (spec.family) {
    case SumFamily::S:
    case SumFamily::Sigma:
      if (!table) throw SpecMismatch("eval_sum: S and Sigma need a table");
      check_table(spec, *table);
      return table_sum(table->view(), t);
    case SumFamily::U:
      return integer_sum(power_window(spec.x_max, spec.lambda0, spec.k), spec.k, t);
    case SumFamily::I:
      return integral_sum(spec.x_max, spec.lambda0, spec.k, t).value;
  }
  return {};
}

inline cplx eval_sum(const SumSpec& spec, double t, const PrimeTable& table) {
  return eval_sum(spec, t, &table);
}

/// min(|sum(lambda1 t)|, |sum(lambda2 t)|).
inline double min_pair(const SumSpec& spec, double t, double lambda1,
                       double lambda2, const PrimeTable* table = nullptr) {
  return std::min(std::abs(eval_sum(spec, lambda1 * t, table)),
                  std::abs(eval_sum(spec, lambda2 * t, table)));
}

struct MomentResult {
  int m = 2;
  double value = 0.0;
  std::size_t grid_points = 0;
  double x_max = 0.0;
  /// |T(N) - T(N/2)| / T(N) for the trapezoid sums on N and N/2 intervals.
  double refinement_change = 0.0;
};

/// Trapezoid approximation of the integral of |sum(t)|^m over [lo, hi] on
/// `grid_points` equal intervals.
inline MomentResult moment_integral(const SumSpec& spec, int m, double lo,
                                    double hi, std::size_t grid_points,
                                    const PrimeTable* table = nullptr) {
  if (m != 2 && m != 4 && m != 8 && m != 16)
    throw std::invalid_argument("moment_integral: m must be 2, 4, 8 or 16");
  if (grid_points < 256 || grid_points % 2 != 0)
    throw std::invalid_argument("moment_integral: grid_points must be even and >= 256");
  if (!(lo < hi)) throw std::invalid_argument("moment_integral: lo >= hi");
  spec.validate();
  if (table && spec.family != SumFamily::U && spec.family != SumFamily::I)
    check_table(spec, *table);

  const std::size_t n = grid_points;
  const double h = (hi - lo) / static_cast<double>(n);
  std::vector<double> f(n + 1);
  parallel_chunks(n + 1, 1024, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const double t = i == n ? hi : lo + h * static_cast<double>(i);
      const double a = std::abs(eval_sum(spec, t, table));
      double p = a * a;
      for (int j = 2; j < m; j *= 2) p *= p;
      f[i] = p;
    }
  });
  auto trapezoid = [&](std::size_t stride) {
    const std::size_t count = n / stride;
    const double interior = pairwise_sum<double>(
        1, count, [&](std::size_t i) { return f[i * stride]; });
    return h * static_cast<double>(stride) * (interior + 0.5 * (f[0] + f[n]));
  };
  const double fine = trapezoid(1);
  const double coarse = trapezoid(2);
  const double change = fine > 0.0 ? std::abs(fine - coarse) / fine : 0.0;
  return {m, fine, grid_points, spec.x_max, change};
}

struct TScanRow {
  double t = 0.0;
  cplx value;
};

inline std::vector<TScanRow> scan_sum(const SumSpec& spec,
                                      std::span<const double> t_grid,
                                      const PrimeTable* table = nullptr) {
  std::vector<TScanRow> rows(t_grid.size());
  parallel_chunks(t_grid.size(), 256,
                  [&](std::size_t, std::size_t b, std::size_t e) {
                    for (std::size_t i = b; i < e; ++i)
                      rows[i] = {t_grid[i], eval_sum(spec, t_grid[i], table)};
                  });
  return rows;
}

/// CSV `t,re,im,abs`.
inline void write_scan_csv(std::span<const TScanRow> rows, std::ostream& os) {
  os << "t,re,im,abs\n";
  for (const auto& r : rows)
    os << format17(r.t) << ',' << format17(r.value.real()) << ','
       << format17(r.value.imag()) << ',' << format17(std::abs(r.value)) << '\n';
}

}  // namespace dhps
