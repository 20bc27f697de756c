#pragma once

// Prime quintuples with |l1 q1 + l2 q2 + l3 q3 + l4 q4 + l5 q5 + eta| < radius,
// q_j = p_j^(k_j), by meet in the middle: L = {l1 q1 + l2 q2} is sorted once,
// and each r in R = {l3 q3 + l4 q4 + l5 q5 + eta} (streamed, never stored)
// binary-searches L for entries near -r.
//
// Partial sums are doubles. Anything within radius + guard passes to a
// 113-bit recomputation, so no true solution is lost to rounding and no
// false one survives.

#include <quadmath.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "dhps/error.hpp"
#include "dhps/parallel.hpp"
#include "dhps/primes/table.hpp"

namespace dhps {

struct QuintetProblem {
  std::array<double, 5> lambdas{};
  double eta = 0.0;
  std::array<int, 5> powers{2, 2, 2, 2, 2};
  std::array<std::span<const PrimeEntry>, 5> tables{};
  /// Solutions with |value| < (max p)^theorem_exponent are flagged.
  double theorem_exponent = 0.0;
};

struct QuintetSolution {
  std::array<std::uint64_t, 5> p{};
  long double value = 0.0L;
  double weight = 0.0;
  std::uint64_t max_p = 0;
  bool meets_theorem_radius = false;

  friend bool operator==(const QuintetSolution&, const QuintetSolution&) = default;
};

/// |value| ascending, then p lexicographically.
inline bool solution_order(const QuintetSolution& a, const QuintetSolution& b) {
  const long double x = std::abs(a.value), y = std::abs(b.value);
  if (x != y) return x < y;
  return a.p < b.p;
}

struct SearchOptions {
  std::size_t limit = 100;
  /// Budget for the sorted pair array (16 bytes per entry).
  std::size_t memory_mb = 2048;
};

struct SearchResult {
  /// The first `limit` solutions in solution_order.
  std::vector<QuintetSolution> solutions;
  /// Every certified solution, not only the retained ones.
  std::uint64_t found = 0;
  /// Candidates that needed the extended-precision recheck.
  std::uint64_t rechecked = 0;
};

namespace detail {

inline __float128 exact_value(const QuintetProblem& pr,
                              const std::array<std::uint64_t, 5>& p) {
  __float128 s = pr.eta;
  for (std::size_t j = 0; j < 5; ++j)
    s += static_cast<__float128>(pr.lambdas[j]) *
         static_cast<__float128>(ipow(p[j], pr.powers[j]));
  return s;
}

inline void check_problem(const QuintetProblem& pr, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("quintet search: radius must be > 0");
  for (std::size_t j = 0; j < 5; ++j) {
    if (pr.tables[j].empty())
      throw EmptyWindow("quintet search: prime window " + std::to_string(j + 1) +
                        " is empty");
    if (pr.powers[j] < 1 || pr.powers[j] > 4)
      throw std::invalid_argument("quintet search: powers must lie in 1..4");
  }
}

/// Largest |partial sum| over each side, for the guard band.
inline double guard_band(const QuintetProblem& pr) {
  double scale = std::abs(pr.eta);
  for (std::size_t j = 0; j < 5; ++j) {
    double m = 0.0;
    for (const auto& e : pr.tables[j]) m = std::max(m, e.power);
    scale += std::abs(pr.lambdas[j]) * m;
  }
  return 1e-12 * scale + std::numeric_limits<double>::min();
}

/// Builds the solution record for indices that passed the double filter, or
/// returns false when the exact value lies outside the radius.
inline bool certify(const QuintetProblem& pr, const std::array<std::size_t, 5>& idx,
                    double radius, QuintetSolution& out) {
  std::array<std::uint64_t, 5> p{};
  double weight = 1.0;
  for (std::size_t j = 0; j < 5; ++j) {
    const PrimeEntry& e = pr.tables[j][idx[j]];
    p[j] = e.p;
    weight *= e.weight;
  }
  const __float128 v = exact_value(pr, p);
  if (!(fabsq(v) < static_cast<__float128>(radius))) return false;
  out.p = p;
  out.value = static_cast<long double>(v);
  out.weight = weight;
  out.max_p = *std::max_element(p.begin(), p.end());
  const double theorem_radius =
      std::pow(static_cast<double>(out.max_p), pr.theorem_exponent);
  out.meets_theorem_radius = fabsq(v) < static_cast<__float128>(theorem_radius);
  return true;
}

/// Keeps the best `limit` solutions in solution_order. Items are trimmed
/// with nth_element whenever twice the limit accumulates.
class TopList {
 public:
  explicit TopList(std::size_t limit) : limit_(limit) {}

  void add(const QuintetSolution& s) {
    if (limit_ == 0) return;
    items_.push_back(s);
    if (items_.size() >= 2 * limit_) trim();
  }

  /// The retained solutions, sorted.
  std::vector<QuintetSolution>& items() {
    trim();
    std::sort(items_.begin(), items_.end(), solution_order);
    return items_;
  }

 private:
  void trim() {
    if (items_.size() <= limit_) return;
    std::nth_element(items_.begin(), items_.begin() + static_cast<std::ptrdiff_t>(limit_),
                     items_.end(), solution_order);
    items_.resize(limit_);
  }

  std::size_t limit_;
  std::vector<QuintetSolution> items_;
};

inline std::vector<QuintetSolution> merge_top(std::vector<std::vector<QuintetSolution>>& parts,
                                              std::size_t limit) {
  TopList top(limit);
  for (auto& part : parts)
    for (const auto& s : part) top.add(s);
  return std::move(top.items());
}

struct PairArray {
  std::vector<double> sums;
  std::vector<std::uint32_t> first;
  std::vector<std::uint32_t> second;
};

inline PairArray build_pairs(const QuintetProblem& pr, std::size_t memory_mb) {
  const std::size_t n1 = pr.tables[0].size(), n2 = pr.tables[1].size();
  const long double bytes = static_cast<long double>(n1) * n2 * 16.0L;
  if (bytes > static_cast<long double>(memory_mb) * 1048576.0L)
    throw CapacityExceeded("quintet search: pair array needs " +
                           std::to_string(static_cast<double>(bytes) / 1048576.0) +
                           " MB, budget " + std::to_string(memory_mb) + " MB");
  struct Row {
    double s;
    std::uint32_t a, b;
  };
  std::vector<Row> rows;
  rows.reserve(n1 * n2);
  for (std::uint32_t a = 0; a < n1; ++a)
    for (std::uint32_t b = 0; b < n2; ++b)
      rows.push_back({pr.lambdas[0] * pr.tables[0][a].power +
                          pr.lambdas[1] * pr.tables[1][b].power,
                      a, b});
  std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
    if (x.s != y.s) return x.s < y.s;
    return x.a != y.a ? x.a < y.a : x.b < y.b;
  });
  PairArray out;
  out.sums.reserve(rows.size());
  out.first.reserve(rows.size());
  out.second.reserve(rows.size());
  for (const Row& r : rows) {
    out.sums.push_back(r.s);
    out.first.push_back(r.a);
    out.second.push_back(r.b);
  }
  return out;
}

/// First index i >= 0 with v[i] >= x, found by galloping out from `hint`.
/// Consecutive queries from the scan move by small steps.
inline std::size_t lower_bound_from(const std::vector<double>& v, std::size_t hint,
                                    double x) {
  const std::size_t n = v.size();
  std::size_t lo = 0, hi = n;
  if (hint < n && v[hint] < x) {
    std::size_t step = 1;
    lo = hint + 1;
    while (lo + step - 1 < n && v[lo + step - 1] < x) {
      lo += step;
      step *= 2;
    }
    hi = std::min(n, lo + step - 1);
  } else {
    std::size_t step = 1;
    hi = std::min(hint, n);
    while (hi >= step && v[hi - step] >= x) {
      hi -= step;
      step *= 2;
    }
    lo = hi >= step ? hi - step + 1 : 0;
  }
  return static_cast<std::size_t>(
      std::lower_bound(v.begin() + lo, v.begin() + hi, x) - v.begin());
}

/// Calls visit(chunk, solution) for every certified solution. Chunks are
/// indexed by position in table 3; within a chunk the visiting order is
/// fixed, so per-chunk accumulators combined in chunk order are
/// deterministic.
template <class Visit>
std::uint64_t scan_mitm(const QuintetProblem& pr, double radius, std::size_t memory_mb,
                        Visit&& visit) {
  check_problem(pr, radius);
  const PairArray left = build_pairs(pr, memory_mb);
  const double reach = radius + guard_band(pr);
  const auto& t3 = pr.tables[2];
  const auto& t4 = pr.tables[3];
  const auto& t5 = pr.tables[4];
  std::vector<std::uint64_t> rechecks(t3.size(), 0);
  parallel_chunks(t3.size(), 1, [&](std::size_t c, std::size_t, std::size_t) {
    std::uint64_t local = 0;
    std::size_t hint = left.sums.size() / 2;
    const double r3 = pr.lambdas[2] * t3[c].power + pr.eta;
    for (std::size_t i4 = 0; i4 < t4.size(); ++i4) {
      const double r34 = r3 + pr.lambdas[3] * t4[i4].power;
      for (std::size_t i5 = 0; i5 < t5.size(); ++i5) {
        const double r = r34 + pr.lambdas[4] * t5[i5].power;
        hint = lower_bound_from(left.sums, hint, -r - reach);
        for (auto it = left.sums.begin() + static_cast<std::ptrdiff_t>(hint);
             it != left.sums.end() && *it <= -r + reach; ++it) {
          if (!(std::abs(*it + r) < reach)) continue;
          ++local;
          const auto at = static_cast<std::size_t>(it - left.sums.begin());
          QuintetSolution s;
          if (certify(pr, {left.first[at], left.second[at], c, i4, i5}, radius, s))
            visit(c, s);
        }
      }
    }
    rechecks[c] = local;
  });
  std::uint64_t total = 0;
  for (const auto v : rechecks) total += v;
  return total;
}

}  // namespace detail

/// Meet-in-the-middle search. Throws EmptyWindow when a table is empty and
/// CapacityExceeded when the pair array exceeds the memory budget.
inline SearchResult search_mitm(const QuintetProblem& pr, double radius,
                                const SearchOptions& opts = {}) {
  const std::size_t chunks = pr.tables[2].size();
  std::vector<detail::TopList> tops(chunks, detail::TopList(opts.limit));
  std::vector<std::uint64_t> counts(chunks, 0);
  SearchResult out;
  out.rechecked = detail::scan_mitm(pr, radius, opts.memory_mb,
                                    [&](std::size_t c, const QuintetSolution& s) {
                                      ++counts[c];
                                      tops[c].add(s);
                                    });
  std::vector<std::vector<QuintetSolution>> parts;
  parts.reserve(chunks);
  for (auto& t : tops) parts.push_back(std::move(t.items()));
  out.solutions = detail::merge_top(parts, opts.limit);
  for (const auto c : counts) out.found += c;
  return out;
}

/// Five nested loops with the same filter, recheck and ordering. Empty
/// tables give no solutions. Throws CapacityExceeded beyond 1e8 quintuples.
inline SearchResult brute_oracle(const QuintetProblem& pr, double radius,
                                 std::size_t limit = 100) {
  if (!(radius > 0.0)) throw std::invalid_argument("brute_oracle: radius must be > 0");
  long double total = 1.0L;
  for (const auto& t : pr.tables) total *= static_cast<long double>(t.size());
  if (total == 0.0L) return {};
  if (total > 1e8L)
    throw CapacityExceeded("brute_oracle: " + std::to_string(static_cast<double>(total)) +
                           " quintuples exceed 1e8");
  const auto& [t1, t2, t3, t4, t5] = pr.tables;
  const auto& l = pr.lambdas;
  // An infinite radius must still admit every quintuple.
  const double reach = std::isinf(radius) ? radius : radius + detail::guard_band(pr);
  SearchResult out;
  detail::TopList top(limit);
  for (std::size_t a = 0; a < t1.size(); ++a) {
    const double s1 = pr.eta + l[0] * t1[a].power;
    for (std::size_t b = 0; b < t2.size(); ++b) {
      const double s2 = s1 + l[1] * t2[b].power;
      for (std::size_t c = 0; c < t3.size(); ++c) {
        const double s3 = s2 + l[2] * t3[c].power;
        for (std::size_t d = 0; d < t4.size(); ++d) {
          const double s4 = s3 + l[3] * t4[d].power;
          for (std::size_t e = 0; e < t5.size(); ++e) {
            const double s5 = s4 + l[4] * t5[e].power;
            if (!(std::abs(s5) < reach)) continue;
            ++out.rechecked;
            QuintetSolution s;
            if (detail::certify(pr, {a, b, c, d, e}, radius, s)) {
              ++out.found;
              top.add(s);
            }
          }
        }
      }
    }
  }
  out.solutions = std::move(top.items());
  return out;
}

}  // namespace dhps
