#pragma once

// Gamma_k(X): the kernel-weighted count of prime quintuples near the form's
// zero set, evaluated directly and as the t-integral of the product of the
// five sums split at Delta and H.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dhps/dh/params.hpp"
#include "dhps/error.hpp"
#include "dhps/numerics/kernel.hpp"
#include "dhps/numerics/quadrature.hpp"
#include "dhps/search/quintet.hpp"
#include "dhps/sums/exp_sums.hpp"

namespace dhps {

/// PS prime tables for the four square slots and the k-th power slot.
struct QuintetTables {
  PrimeTable squares;
  PrimeTable top;

  bool any_empty() const { return squares.empty() || top.empty(); }
  const PrimeTable& slot(std::size_t j) const { return j < 4 ? squares : top; }
};

inline QuintetTables build_quintet_tables(const ProblemInstance& inst, double x_max,
                                          const SieveOptions& opts = {}) {
  QuintetTables t;
  t.squares = build_table(inst.gamma, x_max, inst.lambda0, 2, opts);
  t.top = inst.k == 2 ? t.squares : build_table(inst.gamma, x_max, inst.lambda0, inst.k, opts);
  return t;
}

inline QuintetProblem make_problem(const ProblemInstance& inst, const QuintetTables& t) {
  QuintetProblem pr;
  pr.lambdas = inst.lambdas;
  pr.eta = inst.eta;
  pr.powers = {2, 2, 2, 2, inst.k};
  for (std::size_t j = 0; j < 5; ++j) pr.tables[j] = t.slot(j).view();
  pr.theorem_exponent = theorem_exponent(inst.k, inst.gamma.value(), inst.theta);
  return pr;
}

/// (prod caps) (1/l) (4l / (pi eps H))^l.
inline double tail_bound(double eps, double h, int l, const std::array<double, 5>& caps) {
  if (l < 1) throw std::invalid_argument("tail_bound: l must be >= 1");
  double prod = 1.0;
  for (const double c : caps) {
    if (!(c >= 0.0)) throw std::invalid_argument("tail_bound: caps must be >= 0");
    prod *= c;
  }
  if (prod == 0.0) return 0.0;
  const double base = 4.0 * l / (std::numbers::pi * eps * h);
  return prod / l * std::pow(base, l);
}

inline double tail_bound(const DhParams& p, int l, const std::array<double, 5>& caps) {
  return tail_bound(p.eps, p.H, l, caps);
}

/// The sums' values at t = 0, which bound them everywhere.
inline std::array<double, 5> sum_caps(const QuintetTables& t) {
  return {t.squares.total_weight(), t.squares.total_weight(), t.squares.total_weight(),
          t.squares.total_weight(), t.top.total_weight()};
}

struct DirectResult {
  double value = 0.0;
  /// Quintuples with |form| < eps, i.e. inside the kernel's support.
  std::uint64_t count = 0;
};

/// Sum over quintuples of theta(form) * prod p^(1-gamma) log p, visiting only
/// quintuples inside the kernel's support. Throws BudgetExceeded when the
/// pair array plus the streamed triples exceed `max_evaluations`.
inline DirectResult gamma_direct(const ProblemInstance& inst, const SmoothingKernel& kern,
                                 const QuintetTables& tables,
                                 double max_evaluations = 1e9,
                                 std::size_t memory_mb = 2048) {
  if (tables.any_empty()) return {};
  const double n2 = static_cast<double>(tables.squares.size());
  const double work = n2 * n2 + n2 * n2 * static_cast<double>(tables.top.size());
  if (work > max_evaluations)
    throw BudgetExceeded("gamma_direct: " + std::to_string(work) +
                         " partial sums exceed budget " + std::to_string(max_evaluations));
  const QuintetProblem pr = make_problem(inst, tables);
  const std::size_t chunks = pr.tables[2].size();
  std::vector<std::vector<double>> terms(chunks);
  detail::scan_mitm(pr, kern.support(), memory_mb,
                    [&](std::size_t c, const QuintetSolution& s) {
                      terms[c].push_back(kern.value(static_cast<double>(s.value)) *
                                         s.weight);
                    });
  DirectResult out;
  std::vector<double> partial(chunks);
  for (std::size_t c = 0; c < chunks; ++c) {
    partial[c] = pairwise_sum(terms[c]);
    out.count += terms[c].size();
  }
  out.value = pairwise_sum(partial);
  return out;
}

struct GammaDecomposition {
  cplx A;
  cplx B;
  double C_bound = 0.0;
  cplx total;
  std::optional<double> direct;
  std::optional<std::uint64_t> direct_count;
  /// |total - direct| / direct, when direct is known and nonzero.
  std::optional<double> rel_gap;
  /// Sum of the two regions' node-doubling differences.
  double quad_tolerance = 0.0;
  int smoothness = 0;
};

struct IntegralOptions {
  /// Minimum number of panels in each region.
  std::size_t grid = 512;
  double rel_tol = 1e-8;
  int max_nodes = 1024;
};

namespace detail {

/// Distinct (table, lambda) factors of the integrand with multiplicities.
struct Factor {
  const PrimeTable* table;
  double lambda;
  int power;
};

inline std::vector<Factor> integrand_factors(const ProblemInstance& inst,
                                             const QuintetTables& t) {
  std::vector<Factor> out;
  for (std::size_t j = 0; j < 5; ++j) {
    const PrimeTable* tab = &t.slot(j);
    bool merged = false;
    for (auto& f : out)
      if (f.table == tab && f.lambda == inst.lambdas[j]) {
        ++f.power;
        merged = true;
      }
    if (!merged) out.push_back({tab, inst.lambdas[j], 1});
  }
  return out;
}

}  // namespace detail

/// A (|t| < Delta) and B (Delta <= |t| <= H) by quadrature; the integrand
/// at -t is the conjugate of that at t, so each is twice the real part of
/// the integral over t > 0. C_bound is tail_bound on the kernel's eps and l.
inline GammaDecomposition gamma_integral(const ProblemInstance& inst, const DhParams& params,
                                         const SmoothingKernel& kern,
                                         const QuintetTables& tables,
                                         const IntegralOptions& opts = {}) {
  if (opts.grid < 512) throw std::invalid_argument("gamma_integral: grid must be >= 512");
  GammaDecomposition d;
  d.smoothness = kern.smoothness();
  d.C_bound = tail_bound(kern.epsilon(), params.H, kern.smoothness(), sum_caps(tables));
  if (tables.any_empty()) return d;

  const auto factors = detail::integrand_factors(inst, tables);
  double freq = std::abs(inst.eta) + kern.epsilon();
  for (const auto& f : factors) freq += f.power * std::abs(f.lambda) * f.table->max_power();
  auto integrand = [&](double t) {
    cplx v = kern.transform(t) * expi2pi(inst.eta, t);
    for (const auto& f : factors) {
      const cplx s = table_sum(f.table->view(), f.lambda * t);
      for (int i = 0; i < f.power; ++i) v *= s;
    }
    return v;
  };
  auto region = [&](double lo, double hi) {
    QuadratureSpec q;
    q.lo = lo;
    q.hi = hi;
    q.max_frequency = freq;
    q.rel_tol = opts.rel_tol;
    q.min_panels = opts.grid;
    q.max_nodes = opts.max_nodes;
    return oscillatory_integral(integrand, q);
  };
  const auto a = region(0.0, params.Delta);
  d.A = {2.0 * a.value.real(), 0.0};
  if (params.H > params.Delta) {
    const auto b = region(params.Delta, params.H);
    d.B = {2.0 * b.value.real(), 0.0};
    d.quad_tolerance = 2.0 * (a.error_estimate + b.error_estimate);
  } else {
    d.quad_tolerance = 2.0 * a.error_estimate;
  }
  d.total = d.A + d.B;
  return d;
}

/// Records the direct value in `d` together with the relative gap.
inline void attach_direct(GammaDecomposition& d, const DirectResult& direct) {
  d.direct = direct.value;
  d.direct_count = direct.count;
  if (direct.value != 0.0) d.rel_gap = std::abs(d.total - direct.value) / direct.value;
}

/// |total - direct| <= max(rel * direct, C_bound + quad_tolerance).
inline bool decomposition_consistent(const GammaDecomposition& d, double rel = 0.05) {
  if (!d.direct) return false;
  const double gap = std::abs(d.total - *d.direct);
  return gap <= std::max(rel * *d.direct, d.C_bound + d.quad_tolerance);
}

}  // namespace dhps
