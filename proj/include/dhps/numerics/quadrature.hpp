#pragma once

// Panelized Gauss-Legendre quadrature for oscillatory integrands.
//
// The interval is cut into panels no wider than a quarter period of the
// fastest oscillation present, so on each panel the integrand is close to a
// low-degree polynomial. A fixed number of nodes is used on every panel and
// doubled until two successive totals agree.

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "dhps/error.hpp"
#include "dhps/numerics/phase.hpp"
#include "dhps/parallel.hpp"

namespace dhps {

struct QuadratureSpec {
  double lo = 0.0;
  double hi = 1.0;
  /// Largest |d(phase)/dt| / (2 pi) of the integrand, in cycles per unit.
  double max_frequency = 0.0;
  double rel_tol = 1e-10;
  /// Lower bound on the panel count, for integrands whose smooth envelope
  /// needs resolving even when max_frequency is small.
  std::size_t min_panels = 1;
  int initial_nodes = 8;
  int max_nodes = 1024;

  void validate() const {
    if (!(lo < hi)) throw std::invalid_argument("QuadratureSpec: lo >= hi");
    if (!(max_frequency >= 0.0) || !std::isfinite(max_frequency))
      throw std::invalid_argument("QuadratureSpec: bad max_frequency");
    if (!(rel_tol > 0.0 && rel_tol <= 0.1))
      throw std::invalid_argument("QuadratureSpec: rel_tol outside (0, 0.1]");
    if (initial_nodes < 1 || max_nodes < initial_nodes)
      throw std::invalid_argument("QuadratureSpec: bad node counts");
  }

  std::size_t panel_count() const {
    std::size_t n = 1;
    if (max_frequency > 0.0) {
      const double panels = std::ceil((hi - lo) * 4.0 * max_frequency);
      if (panels > 1e12)
        throw CapacityExceeded("quadrature: more than 1e12 panels required");
      n = static_cast<std::size_t>(panels);
    }
    return std::max<std::size_t>({n, min_panels, 1});
  }
};

struct QuadratureResult {
  cplx value;
  /// |I(2n) - I(n)| at the accepted doubling.
  double error_estimate = 0.0;
  /// Quadrature estimate of the integral of |f|.
  double l1_norm = 0.0;
  int nodes_per_panel = 0;
  std::size_t panels = 0;
};

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendreRule(int n) : nodes(n), weights(n) {
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = 0.0;
        for (int j = 1; j <= n; ++j) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        const double dz = p0 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      // Recompute the derivative at the converged root for the weight.
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double w = 2.0 / ((1.0 - z * z) * dp * dp);
      nodes[i] = -z;
      nodes[n - 1 - i] = z;
      weights[i] = w;
      weights[n - 1 - i] = w;
    }
  }
};

namespace detail {

struct PanelSums {
  cplx value;
  double l1 = 0.0;
};

template <class F>
PanelSums integrate_panels(F& f, double lo, double width, std::size_t panels,
                           const GaussLegendreRule& rule) {
  // Fixed chunking: the reduction order never depends on the thread count.
  constexpr std::size_t kChunk = 256;
  const std::size_t chunks = (panels + kChunk - 1) / kChunk;
  std::vector<cplx> values(chunks);
  std::vector<double> norms(chunks);
  const std::size_t n = rule.nodes.size();
  parallel_chunks(panels, kChunk,
                  [&](std::size_t c, std::size_t b, std::size_t e) {
                    std::vector<cplx> pv(e - b);
                    std::vector<double> pn(e - b);
                    for (std::size_t k = b; k < e; ++k) {
                      const double a = lo + width * static_cast<double>(k);
                      const double half = 0.5 * width;
                      const double mid = a + half;
                      cplx s{};
                      double s1 = 0.0;
                      for (std::size_t i = 0; i < n; ++i) {
                        const cplx v = f(mid + half * rule.nodes[i]);
                        s += rule.weights[i] * v;
                        s1 += rule.weights[i] * std::abs(v);
                      }
                      pv[k - b] = half * s;
                      pn[k - b] = half * s1;
                    }
                    values[c] = pairwise_sum(pv);
                    norms[c] = pairwise_sum(pn);
                  });
  return {pairwise_sum(values), pairwise_sum(norms)};
}

}  // namespace detail

/// Integral of f over [spec.lo, spec.hi]. f maps double -> complex (or
/// anything convertible). Node counts double from spec.initial_nodes until
/// |I(2n) - I(n)| <= rel_tol * |I(2n)|, or until the difference sits at the
/// roundoff floor of the integrand's L1 norm.
template <class F>
QuadratureResult oscillatory_integral(F&& f, const QuadratureSpec& spec) {
  spec.validate();
  const std::size_t panels = spec.panel_count();
  const double width = (spec.hi - spec.lo) / static_cast<double>(panels);
  auto eval = [&](double t) -> cplx { return cplx(f(t)); };

  int n = spec.initial_nodes;
  auto prev = detail::integrate_panels(eval, spec.lo, width, panels,
                                       GaussLegendreRule(n));
  while (2 * n <= spec.max_nodes) {
    n *= 2;
    const auto cur = detail::integrate_panels(eval, spec.lo, width, panels,
                                              GaussLegendreRule(n));
    const double diff = std::abs(cur.value - prev.value);
    const double floor =
        64.0 * std::numeric_limits<double>::epsilon() * cur.l1;
    if (diff <= spec.rel_tol * std::abs(cur.value) || diff <= floor) {
      return {cur.value, diff, cur.l1, n, panels};
    }
    prev = cur;
  }
  throw NonConvergence("oscillatory_integral: no agreement within " +
                       std::to_string(spec.max_nodes) +
                       " nodes per panel on [" + std::to_string(spec.lo) +
                       ", " + std::to_string(spec.hi) + "]");
}

}  // namespace dhps
