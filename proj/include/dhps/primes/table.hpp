#pragma once

// Weighted prime tables over the window lambda0*X < p^k <= X.
//
// A table built with a gamma holds only Piatetski-Shapiro primes of that type
// with weights p^(1-gamma) log p; a plain table holds every prime in the
// window with weight log p.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "dhps/error.hpp"
#include "dhps/primes/ps_prime.hpp"
#include "dhps/primes/sieve.hpp"

namespace dhps {

struct PrimeEntry {
  std::uint64_t p = 0;
  double weight = 0.0;
  /// p^k, exact while p^k < 2^53.
  double power = 0.0;

  friend bool operator==(const PrimeEntry&, const PrimeEntry&) = default;
};

/// Integers n with lambda0*X < n^k <= X, as [first, last]; empty when
/// first > last.
struct IntWindow {
  std::uint64_t first = 1;
  std::uint64_t last = 0;
  bool empty() const noexcept { return first > last; }
  std::uint64_t size() const noexcept { return empty() ? 0 : last - first + 1; }
};

inline unsigned __int128 ipow(std::uint64_t n, int k) {
  unsigned __int128 r = 1;
  for (int i = 0; i < k; ++i) r *= n;
  return r;
}

inline IntWindow power_window(double x_max, double lambda0, int k) {
  if (k < 1 || k > 4) throw std::invalid_argument("power_window: k outside 1..4");
  if (!(x_max > 0.0) || x_max > 0x1p62)
    throw std::invalid_argument("power_window: x_max outside (0, 2^62]");
  if (!(lambda0 > 0.0 && lambda0 < 1.0))
    throw std::invalid_argument("power_window: lambda0 outside (0, 1)");
  const long double hi = x_max;
  const long double lo = static_cast<long double>(lambda0) * x_max;
  auto pow_le = [&](std::uint64_t n, long double bound) {
    return static_cast<long double>(ipow(n, k)) <= bound;
  };
  auto root = static_cast<std::uint64_t>(std::pow(hi, 1.0L / k));
  while (root > 0 && !pow_le(root, hi)) --root;
  while (pow_le(root + 1, hi)) ++root;
  auto first = static_cast<std::uint64_t>(std::pow(lo, 1.0L / k));
  while (first > 1 && !pow_le(first - 1, lo)) --first;
  while (pow_le(first, lo)) ++first;
  return {first, root};
}

struct PrimeTable {
  int k = 2;
  double x_max = 0.0;
  double lambda0 = 0.1;
  /// Set for Piatetski-Shapiro tables.
  std::optional<GammaParam> gamma;
  std::vector<PrimeEntry> entries;

  bool empty() const noexcept { return entries.empty(); }
  std::size_t size() const noexcept { return entries.size(); }
  std::span<const PrimeEntry> view() const noexcept { return entries; }

  /// Sum of all weights, i.e. the value of the table's sum at t = 0.
  double total_weight() const {
    return pairwise_sum<double>(0, entries.size(),
                                [&](std::size_t i) { return entries[i].weight; });
  }

  double max_power() const { return entries.empty() ? 0.0 : entries.back().power; }
};

inline double ps_weight(std::uint64_t p, double gamma) {
  const double pd = static_cast<double>(p);
  return std::pow(pd, 1.0 - gamma) * std::log(pd);
}

namespace detail {

inline PrimeTable build_window_table(std::optional<GammaParam> gamma,
                                     double x_max, double lambda0, int k,
                                     const SieveOptions& opts) {
  if (k < 2 || k > 4) throw std::invalid_argument("prime table: k must be 2, 3 or 4");
  PrimeTable t{k, x_max, lambda0, gamma, {}};
  const IntWindow w = power_window(x_max, lambda0, k);
  if (w.empty() || w.last < 2) return t;
  const std::uint64_t lo = std::max<std::uint64_t>(2, w.first);
  for (const std::uint64_t p : sieve_primes(lo, w.last, opts)) {
    if (gamma && !is_ps_prime(p, *gamma).member) continue;
    const double weight = gamma ? ps_weight(p, gamma->value())
                                : std::log(static_cast<double>(p));
    t.entries.push_back({p, weight, static_cast<double>(ipow(p, k))});
  }
  return t;
}

}  // namespace detail

/// Piatetski-Shapiro primes of type gamma with lambda0*X < p^k <= X.
inline PrimeTable build_table(const GammaParam& gamma, double x_max,
                              double lambda0, int k,
                              const SieveOptions& opts = {}) {
  return detail::build_window_table(gamma, x_max, lambda0, k, opts);
}

/// Every prime with lambda0*X < p^k <= X, weighted by log p.
inline PrimeTable build_prime_window(double x_max, double lambda0, int k,
                                     const SieveOptions& opts = {}) {
  return detail::build_window_table(std::nullopt, x_max, lambda0, k, opts);
}

/// Number of Piatetski-Shapiro primes of type gamma up to T.
inline std::uint64_t count_ps_primes(const GammaParam& gamma, std::uint64_t limit,
                                     const SieveOptions& opts = {}) {
  if (limit < 2) return 0;
  std::uint64_t n = 0;
  for (const std::uint64_t p : sieve_primes(2, limit, opts))
    if (is_ps_prime(p, gamma).member) ++n;
  return n;
}

/// count / (T^gamma / log T); tends to 1 in the density range of gamma.
inline double ps_density_ratio(const GammaParam& gamma, std::uint64_t limit,
                               const SieveOptions& opts = {}) {
  const double t = static_cast<double>(limit);
  const double expected = std::pow(t, gamma.value()) / std::log(t);
  return static_cast<double>(count_ps_primes(gamma, limit, opts)) / expected;
}

inline std::string format17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// CSV with header `p,weight`, weights at 17 significant digits.
inline void write_table_csv(const PrimeTable& table, std::ostream& os) {
  os << "p,weight\n";
  for (const auto& e : table.entries) os << e.p << ',' << format17(e.weight) << '\n';
}

/// Reads a `p,weight` CSV written for the table described by `shape` (k, X,
/// lambda0, gamma; its entries are ignored) and checks every row against
/// that description.
inline PrimeTable read_table_csv(std::istream& is, const PrimeTable& shape) {
  PrimeTable t{shape.k, shape.x_max, shape.lambda0, shape.gamma, {}};
  std::string line;
  if (!std::getline(is, line) || line != "p,weight")
    throw SpecMismatch("table csv: missing `p,weight` header");
  const IntWindow w = power_window(shape.x_max, shape.lambda0, shape.k);
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw SpecMismatch("table csv row " + std::to_string(row) + ": no comma");
    std::uint64_t p = 0;
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + comma, p);
    if (ec != std::errc{} || ptr != line.data() + comma)
      throw SpecMismatch("table csv row " + std::to_string(row) + ": bad prime");
    const std::string field = line.substr(comma + 1);
    std::size_t used = 0;
    double weight = 0.0;
    try {
      weight = std::stod(field, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != field.size())
      throw SpecMismatch("table csv row " + std::to_string(row) + ": bad weight");
    if (p < w.first || p > w.last)
      throw SpecMismatch("table csv row " + std::to_string(row) + ": p outside window");
    if (!t.entries.empty() && p <= t.entries.back().p)
      throw SpecMismatch("table csv row " + std::to_string(row) + ": not increasing");
    if (!is_prime_u64(p))
      throw SpecMismatch("table csv row " + std::to_string(row) + ": not prime");
    if (shape.gamma && !is_ps_prime(p, *shape.gamma).member)
      throw SpecMismatch("table csv row " + std::to_string(row) + ": not a PS prime");
    if (!(weight > 0.0))
      throw SpecMismatch("table csv row " + std::to_string(row) + ": weight <= 0");
    t.entries.push_back({p, weight, static_cast<double>(ipow(p, shape.k))});
  }
  return t;
}

}  // namespace dhps
