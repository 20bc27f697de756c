#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dhps/error.hpp"
#include "dhps/parallel.hpp"

namespace dhps {

struct SieveOptions {
  /// Largest hi - lo + 1 accepted in one call.
  std::uint64_t max_span = std::uint64_t{1} << 34;
  /// Largest sqrt(hi) for the base-prime sieve (one byte per integer).
  std::uint64_t max_base = std::uint64_t{1} << 32;
  std::uint64_t segment = std::uint64_t{1} << 18;
};

inline std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && static_cast<unsigned __int128>(r) * r > n) --r;
  while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

/// Deterministic Miller-Rabin for 64-bit integers (bases of Sinclair).
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    if (n % p == 0) return n == p;
  }
  auto mulmod = [n](std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % n);
  };
  auto powmod = [&](std::uint64_t a, std::uint64_t e) {
    std::uint64_t r = 1;
    for (a %= n; e; e >>= 1, a = mulmod(a, a))
      if (e & 1) r = mulmod(r, a);
    return r;
  };
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ull, 325ull, 9375ull, 28178ull, 450775ull, 9780504ull,
                          1795265022ull}) {
    a %= n;
    if (a == 0) continue;
    std::uint64_t x = powmod(a, d);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s && composite; ++r) {
      x = mulmod(x, x);
      if (x == n - 1) composite = false;
    }
    if (composite) return false;
  }
  return true;
}

/// Primes <= n by the plain sieve; used for base primes.
inline std::vector<std::uint32_t> small_primes(std::uint64_t n) {
  std::vector<std::uint32_t> out;
  if (n < 2) return out;
  std::vector<char> composite(n + 1, 0);
  for (std::uint64_t i = 2; i * i <= n; ++i)
    if (!composite[i])
      for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = 1;
  for (std::uint64_t i = 2; i <= n; ++i)
    if (!composite[i]) out.push_back(static_cast<std::uint32_t>(i));
  return out;
}

/// All primes in [lo, hi], ascending. Segmented Eratosthenes; segments are
/// sieved in parallel and concatenated in order.
inline std::vector<std::uint64_t> sieve_primes(std::uint64_t lo,
                                               std::uint64_t hi,
                                               const SieveOptions& opts = {}) {
  if (lo < 2 || lo > hi)
    throw std::invalid_argument("sieve_primes: need 2 <= lo <= hi");
  if (hi > static_cast<std::uint64_t>(INT64_MAX))
    throw std::invalid_argument("sieve_primes: hi exceeds 2^63 - 1");
  const std::uint64_t span = hi - lo + 1;
  if (span > opts.max_span)
    throw CapacityExceeded("sieve_primes: span " + std::to_string(span) +
                           " exceeds budget " + std::to_string(opts.max_span));
  const std::uint64_t root = isqrt(hi);
  if (root > opts.max_base)
    throw CapacityExceeded("sieve_primes: base primes up to " +
                           std::to_string(root) + " exceed budget");
  const auto base = small_primes(root);

  const std::uint64_t seg = std::max<std::uint64_t>(opts.segment, 1024);
  const std::size_t segments = static_cast<std::size_t>((span + seg - 1) / seg);
  std::vector<std::vector<std::uint64_t>> found(segments);
  parallel_chunks(segments, 1, [&](std::size_t s, std::size_t, std::size_t) {
    const std::uint64_t a = lo + s * seg;
    const std::uint64_t b = std::min(hi, a + seg - 1);
    std::vector<char> composite(b - a + 1, 0);
    for (const std::uint64_t p : base) {
      const unsigned __int128 pp = static_cast<unsigned __int128>(p) * p;
      if (pp > b) break;
      std::uint64_t start = std::max<std::uint64_t>(
          static_cast<std::uint64_t>(pp), (a + p - 1) / p * p);
      for (std::uint64_t m = start; m <= b; m += p) {
        composite[m - a] = 1;
        if (m > b - p) break;  // guards wraparound near 2^63
      }
    }
    auto& out = found[s];
    for (std::uint64_t i = a; i <= b; ++i) {
      if (!composite[i - a]) out.push_back(i);
      if (i == b) break;
    }
  });
  std::vector<std::uint64_t> primes;
  std::size_t total = 0;
  for (const auto& f : found) total += f.size();
  primes.reserve(total);
  for (const auto& f : found) primes.insert(primes.end(), f.begin(), f.end());
  return primes;
}

}  // namespace dhps
