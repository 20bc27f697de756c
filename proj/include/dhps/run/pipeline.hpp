#pragma once

// One run: parameters, tables, Gamma both ways, the quintuple search, the
// t-scan and the diagnostics, assembled into a RunReport.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dhps/dh/gamma.hpp"
#include "dhps/dh/params.hpp"
#include "dhps/numerics/kernel.hpp"
#include "dhps/run/config.hpp"
#include "dhps/run/report.hpp"
#include "dhps/search/quintet.hpp"
#include "dhps/sums/diagnostics.hpp"

namespace dhps {

enum class RunMode {
  /// Gamma, search, t-scan and the cheap consistency diagnostics.
  report,
  /// Everything in report plus the seeded property diagnostics.
  verify,
};

namespace detail {

/// Wall-clock budget, checked between stages.
class Stopwatch {
 public:
  explicit Stopwatch(double limit_s)
      : start_(std::chrono::steady_clock::now()), limit_(limit_s) {}

  void check(const char* stage) const {
    const double s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    if (s > limit_)
      throw BudgetExceeded(std::string("time budget of ") + std::to_string(limit_) +
                           " s exhausted after " + stage);
  }

 private:
  std::chrono::steady_clock::time_point start_;
  double limit_;
};

}  // namespace detail

/// Prime tables that own their storage, for randomized search instances.
struct OwnedQuintetProblem {
  std::array<std::vector<PrimeEntry>, 5> tables;
  std::array<double, 5> lambdas{};
  double eta = 0.0;
  std::array<int, 5> powers{2, 2, 2, 2, 2};
  double theorem_exponent = 0.0;
  double radius = 1.0;

  QuintetProblem view() const {
    QuintetProblem pr;
    pr.lambdas = lambdas;
    pr.eta = eta;
    pr.powers = powers;
    for (std::size_t j = 0; j < 5; ++j) pr.tables[j] = tables[j];
    pr.theorem_exponent = theorem_exponent;
    return pr;
  }
};

/// A random small search instance: mixed-sign coefficients, PS-prime
/// tables of at most `max_primes` entries, a radius wide enough to usually
/// admit some solutions.
inline OwnedQuintetProblem random_search_problem(std::mt19937_64& rng,
                                                 std::size_t max_primes = 30) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    OwnedQuintetProblem out;
    const int k = 2 + static_cast<int>(rng() % 3);
    const GammaParam gamma(0.9 + 0.099 * unit(rng));
    const double x2 = 200.0 * std::pow(1000.0, unit(rng));  // up to 2e5; larger draws hit the cap
    const double lambda0 = 0.05 + 0.45 * unit(rng);
    for (std::size_t j = 0; j < 5; ++j) {
      const double sign = j == 4 ? -1.0 : (unit(rng) < 0.3 ? -1.0 : 1.0);
      out.lambdas[j] = sign * (0.1 + 2.9 * unit(rng));
    }
    out.eta = 2.0 * unit(rng) - 1.0;
    out.powers = {2, 2, 2, 2, k};
    out.theorem_exponent = theorem_exponent(k, gamma.value(), 0.001);
    out.radius = 0.1 + 20.0 * unit(rng);
    bool empty = false;
    for (std::size_t j = 0; j < 5; ++j) {
      const int power = out.powers[j];
      const double x = std::pow(x2, power / 2.0);
      auto entries = build_table(gamma, x, lambda0, power).entries;
      if (entries.size() > max_primes) entries.resize(max_primes);
      empty = empty || entries.empty();
      out.tables[j] = std::move(entries);
    }
    if (!empty) return out;
  }
}

/// The existence statement's radius over the run's windows: the largest
/// (p)^e for p at either end of any table.
inline double theorem_radius(const ProblemInstance& inst, const QuintetTables& t) {
  const double e = theorem_exponent(inst.k, inst.gamma.value(), inst.theta);
  double r = 0.0;
  for (const PrimeTable* tab : {&t.squares, &t.top}) {
    if (tab->empty()) continue;
    for (const auto p : {tab->entries.front().p, tab->entries.back().p})
      r = std::max(r, std::pow(static_cast<double>(p), e));
  }
  return r;
}

/// |S(t)| for the square-window table on t in [0, 1.25 H], sampled densely
/// on each region.
inline std::vector<TScanPoint> build_tscan(const DhParams& p, const PrimeTable& table,
                                           std::size_t points_a = 256,
                                           std::size_t points_b = 1024,
                                           std::size_t points_c = 256) {
  std::vector<double> ts;
  auto add = [&](double lo, double hi, std::size_t n, bool include_hi) {
    const double h = (hi - lo) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) ts.push_back(lo + h * static_cast<double>(i));
    if (include_hi) ts.push_back(hi);
  };
  add(0.0, p.Delta, points_a, false);
  add(p.Delta, p.H, points_b, true);
  add(p.H, 1.25 * p.H, points_c, true);
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  std::vector<TScanPoint> rows(ts.size());
  parallel_chunks(ts.size(), 128, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const double t = ts[i];
      const Region region = t < p.Delta ? Region::A : (t <= p.H ? Region::B : Region::C);
      rows[i] = {t, table_sum(table.view(), t), region};
    }
  });
  return rows;
}

/// max |Theta(x)| / bound(x) over `points` log-spaced x in [lo/eps, hi/eps].
inline double kernel_bound_ratio(const SmoothingKernel& kern, std::size_t points = 1000,
                                 double lo = 1e-2, double hi = 1e2) {
  double worst = 0.0;
  const double a = std::log(lo / kern.epsilon()), b = std::log(hi / kern.epsilon());
  for (std::size_t i = 0; i < points; ++i) {
    const double x = std::exp(a + (b - a) * static_cast<double>(i) /
                                      static_cast<double>(points - 1));
    worst = std::max(worst, std::abs(kern.transform(x)) / kern.transform_bound(x));
  }
  return worst;
}

/// Number of primes p <= limit where is_ps_prime disagrees with the
/// 113-bit test.
inline std::uint64_t ps_disagreements(const GammaParam& gamma, std::uint64_t limit) {
  std::uint64_t bad = 0;
  for (const auto p : sieve_primes(2, limit))
    if (is_ps_prime(p, gamma).member != detail::ps_member_quad(p, gamma.value())) ++bad;
  return bad;
}

/// Search instances (seeded) where search_mitm and brute_oracle differ.
inline std::uint64_t search_disagreements(std::mt19937_64& rng, std::size_t instances) {
  std::uint64_t bad = 0;
  for (std::size_t i = 0; i < instances; ++i) {
    const auto owned = random_search_problem(rng);
    const auto pr = owned.view();
    SearchOptions opts;
    opts.limit = 1u << 20;
    const auto fast = search_mitm(pr, owned.radius, opts);
    const auto slow = brute_oracle(pr, owned.radius, opts.limit);
    if (fast.solutions != slow.solutions || fast.found != slow.found) ++bad;
  }
  return bad;
}

inline RunReport run_pipeline(const RunConfig& cfg, RunMode mode = RunMode::report) {
  const ProblemInstance& inst = cfg.instance;
  check_admissible(inst);
  const detail::Stopwatch clock(cfg.budgets.time_s);
  RunReport r;
  r.params = cfg.x_max ? params_from_x(inst, *cfg.x_max)
                       : derive_params(inst, cfg.q0, cfg.q0_floor);
  const QuintetTables tables = build_quintet_tables(inst, r.params.X);
  const int l = cfg.smoothness > 0 ? cfg.smoothness : default_smoothness(r.params.X);
  const SmoothingKernel kern(r.params.eps, l);
  clock.check("tables");

  IntegralOptions iopts;
  iopts.grid = cfg.grid;
  iopts.max_nodes = cfg.budgets.max_nodes;
  r.decomposition = gamma_integral(inst, r.params, kern, tables, iopts);
  clock.check("integral");
  attach_direct(r.decomposition,
                gamma_direct(inst, kern, tables, cfg.budgets.max_evaluations,
                             cfg.budgets.memory_mb));
  clock.check("direct evaluation");

  r.radius = cfg.radius.theorem ? theorem_radius(inst, tables) : cfg.radius.value;
  if (!tables.any_empty() && r.radius > 0.0) {
    SearchOptions sopts;
    sopts.limit = cfg.limit;
    sopts.memory_mb = cfg.budgets.memory_mb;
    auto found = search_mitm(make_problem(inst, tables), r.radius, sopts);
    r.solutions = std::move(found.solutions);
    r.solutions_found = found.found;
  }
  clock.check("search");
  r.tscan = build_tscan(r.params, tables.squares);

  const auto& d = r.decomposition;
  const double gap = std::abs(d.total - d.direct.value_or(0.0));
  r.diagnostics.push_back(make_diagnostic(
      "decomposition_gap", gap, "<=",
      std::max(0.05 * d.direct.value_or(0.0), d.C_bound + d.quad_tolerance)));
  r.diagnostics.push_back(
      make_diagnostic("abs_A_minus_abs_B", std::abs(d.A) - std::abs(d.B), ">", 0.0));
  r.diagnostics.push_back(
      make_diagnostic("abs_A_minus_C_bound", std::abs(d.A) - d.C_bound, ">", 0.0));
  r.diagnostics.push_back(make_diagnostic("kernel_bound_ratio", kernel_bound_ratio(kern), "<=", 1.0));
  const auto root = static_cast<std::uint64_t>(std::floor(std::sqrt(r.params.X)));
  if (root >= 16)
    r.diagnostics.push_back(make_diagnostic(
        "ps_density_deviation_sqrtX", std::abs(ps_density_ratio(inst.gamma, root) - 1.0),
        "<=", 0.3));
  clock.check("diagnostics");
  if (mode == RunMode::report) return r;

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  r.diagnostics.push_back(make_diagnostic(
      "ps_disagreements_1e5", static_cast<double>(ps_disagreements(inst.gamma, 100000)),
      "<=", 0.0));
  r.diagnostics.push_back(make_diagnostic(
      "ps_density_deviation_1e6", std::abs(ps_density_ratio(inst.gamma, 1000000) - 1.0),
      "<=", 0.3));
  clock.check("prime diagnostics");

  double weyl = 0.0;
  for (int i = 0; i < 8; ++i) {
    const auto w = weyl_bound_check(unit(rng), 100000);
    weyl = std::max(weyl, w.lhs / w.rhs);
  }
  r.diagnostics.push_back(make_diagnostic("weyl_ratio", weyl, "<=", 1.0));

  double decay = 0.0, euler = 0.0, conj = 0.0;
  const double cap = tables.squares.total_weight();
  for (int i = 0; i < 16; ++i) {
    const double t = (2.0 * unit(rng) - 1.0) * r.params.H;
    decay = std::max(decay, integral_decay_ratio(inst.k, r.params.X, inst.lambda0, t));
    euler = std::max(euler, euler_gap_ratio(inst.k, r.params.X, inst.lambda0, t));
    if (cap > 0.0) {
      const cplx a = table_sum(tables.squares.view(), t);
      const cplx b = table_sum(tables.squares.view(), -t);
      conj = std::max(conj, std::abs(b - std::conj(a)) / cap);
    }
  }
  r.diagnostics.push_back(make_diagnostic("integral_decay_ratio", decay, "<=", 2.0));
  r.diagnostics.push_back(make_diagnostic("euler_gap_ratio", euler, "<=", 4.0));
  r.diagnostics.push_back(make_diagnostic("conjugate_symmetry", conj, "<=", 1e-12));
  clock.check("sum diagnostics");

  if (!tables.squares.empty()) {
    std::size_t n = 1024;
    while (static_cast<double>(n) < 4.0 * tables.squares.max_power()) n *= 2;
    const auto m = moment_integral(SumSpec::of(tables.squares), 4, 0.0, 1.0, n,
                                   &tables.squares);
    r.diagnostics.push_back(
        make_diagnostic("moment4_refinement_change", m.refinement_change, "<=", 0.01));
  }
  const std::vector<double> ladder{r.params.X, 4.0 * r.params.X, 16.0 * r.params.X};
  if (inst.gamma.approximates_sigma(2)) {
    const auto g = gap_ladder(GapKind::s_vs_sigma, 2, inst.gamma, ladder, inst.lambda0, 513);
    // A vanishing gap (possible on tiny windows) leaves no exponent to fit.
    if (std::all_of(g.gaps.begin(), g.gaps.end(), [](double v) { return v > 0.0; }))
      r.diagnostics.push_back(make_diagnostic(
          "gap_fit_exponent", g.fit_exponent, "<=",
          approximation_exponent(2, inst.gamma.value()) + 0.25));
  }
  clock.check("moment diagnostics");

  r.diagnostics.push_back(make_diagnostic(
      "search_oracle_disagreements", static_cast<double>(search_disagreements(rng, 10)),
      "<=", 0.0));
  clock.check("search diagnostics");
  return r;
}

}  // namespace dhps
