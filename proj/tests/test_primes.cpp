#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <cmath>
#include <sstream>
#include <vector>

#include "dhps/primes/ps_prime.hpp"
#include "dhps/primes/sieve.hpp"
#include "dhps/primes/table.hpp"

using namespace dhps;
using big = boost::multiprecision::cpp_dec_float_50;

namespace {

bool trial_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// 50-digit decision of ceil(p^g) < (p+1)^g; g is taken at its exact binary
// value.
bool ps_oracle(std::uint64_t p, double g) {
  const big gb(g);
  const big a = boost::multiprecision::pow(big(p), gb);
  const big b = boost::multiprecision::pow(big(p + 1), gb);
  return boost::multiprecision::ceil(a) < b;
}

}  // namespace

TEST(Sieve, SmallRange) {
  const auto p = sieve_primes(2, 100);
  const std::vector<std::uint64_t> want{2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                        43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};
  EXPECT_EQ(p, want);
  EXPECT_EQ(sieve_primes(90, 96), std::vector<std::uint64_t>{});
  EXPECT_EQ(sieve_primes(97, 97), std::vector<std::uint64_t>{97});
}

TEST(Sieve, MatchesTrialDivisionAcrossSegments) {
  SieveOptions opts;
  opts.segment = 1024;  // many segment boundaries
  for (const auto& [lo, hi] : {std::pair<std::uint64_t, std::uint64_t>{2, 50000},
                              {1000003, 1040000},
                              {4294967000ULL, 4294977000ULL}}) {
    const auto got = sieve_primes(lo, hi, opts);
    std::vector<std::uint64_t> want;
    for (std::uint64_t n = lo; n <= hi; ++n)
      if (trial_prime(n)) want.push_back(n);
    EXPECT_EQ(got, want) << lo << ".." << hi;
  }
}

TEST(Sieve, CountUpTo1e6) { EXPECT_EQ(sieve_primes(2, 1000000).size(), 78498u); }

TEST(Sieve, RejectsBadRanges) {
  EXPECT_THROW(sieve_primes(1, 10), std::invalid_argument);
  EXPECT_THROW(sieve_primes(10, 5), std::invalid_argument);
  SieveOptions tight;
  tight.max_span = 100;
  EXPECT_THROW(sieve_primes(2, 1000, tight), CapacityExceeded);
}

TEST(Sieve, MillerRabinAgreesWithTrialDivision) {
  for (std::uint64_t n = 0; n < 20000; ++n) EXPECT_EQ(is_prime_u64(n), trial_prime(n)) << n;
  EXPECT_TRUE(is_prime_u64(18446744073709551557ULL));
  EXPECT_FALSE(is_prime_u64(3215031751ULL));  // strong pseudoprime to 2, 3, 5, 7
}

TEST(PsPrime, PinnedValues) {
  EXPECT_TRUE(is_ps_prime(7, GammaParam(0.9)).member);
  EXPECT_FALSE(is_ps_prime(13, GammaParam(0.9)).member);
  EXPECT_TRUE(is_ps_prime(2, GammaParam(0.999999)).member);
}

TEST(PsPrime, MatchesHighPrecisionOracle) {
  const auto primes = sieve_primes(2, 20000);
  for (const double g : {0.87, 0.9, 0.95, 0.99, 0.999}) {
    const GammaParam gp(g);
    for (const auto p : primes) ASSERT_EQ(is_ps_prime(p, gp).member, ps_oracle(p, g)) << p << ' ' << g;
  }
}

TEST(PsPrime, QuadFallbackAgreesWithOracle) {
  // The 113-bit path is what decides near-boundary cases; check it directly.
  for (const double g : {0.9, 0.99}) {
    for (const auto p : sieve_primes(2, 5000))
      ASSERT_EQ(detail::ps_member_quad(p, g), ps_oracle(p, g)) << p << ' ' << g;
  }
}

TEST(PsPrime, GammaNearOneKeepsEveryPrime) {
  // For 1 - g tiny, (p+1)^g - p^g is close to 1 and each interval holds p.
  const GammaParam gp(0.9999999);
  for (const auto p : sieve_primes(2, 2000)) EXPECT_TRUE(is_ps_prime(p, gp).member) << p;
}

TEST(GammaParam, Thresholds) {
  EXPECT_TRUE(GammaParam(0.99).admissible_for(2));
  EXPECT_FALSE(GammaParam(0.95).admissible_for(2));
  EXPECT_FALSE(GammaParam(0.99).admissible_for(3));  // 129/130 = 0.99231
  EXPECT_TRUE(GammaParam(0.993).admissible_for(3));
  EXPECT_TRUE(GammaParam(0.996).admissible_for(4));  // 245/246 = 0.99593
  EXPECT_FALSE(GammaParam(0.995).admissible_for(4));
  EXPECT_TRUE(GammaParam(0.87).in_density_range());
  EXPECT_FALSE(GammaParam(0.86).in_density_range());
  EXPECT_TRUE(GammaParam(0.95).approximates_sigma(2));
  EXPECT_FALSE(GammaParam(0.97).approximates_sigma(3));
  EXPECT_THROW(GammaParam(1.0), std::invalid_argument);
  EXPECT_THROW(GammaParam(0.0), std::invalid_argument);
  EXPECT_THROW(theorem_threshold(5), std::invalid_argument);
}

TEST(PowerWindow, MatchesLinearScan) {
  for (const int k : {2, 3, 4}) {
    for (const double x : {1.0, 3.0, 60.0, 1000.0, 1e6, 123456789.0}) {
      for (const double l0 : {0.1, 0.5, 0.9}) {
        const IntWindow w = power_window(x, l0, k);
        std::uint64_t first = 0, last = 0, count = 0;
        for (std::uint64_t n = 1; std::pow(static_cast<double>(n), k) <= x; ++n) {
          if (std::pow(static_cast<double>(n), k) > l0 * x) {
            if (!count) first = n;
            last = n;
            ++count;
          }
        }
        EXPECT_EQ(w.size(), count) << k << ' ' << x << ' ' << l0;
        if (count) {
          EXPECT_EQ(w.first, first);
          EXPECT_EQ(w.last, last);
        }
      }
    }
  }
}

TEST(Table, PinnedSingleEntry) {
  const PrimeTable t = build_table(GammaParam(0.9), 100.0, 0.25, 2);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t.entries[0].p, 7u);
  EXPECT_EQ(t.entries[0].power, 49.0);
  EXPECT_NEAR(t.entries[0].weight, 2.3639, 1e-4);
  EXPECT_DOUBLE_EQ(t.entries[0].weight, std::pow(7.0, 0.1) * std::log(7.0));
}

TEST(Table, EmptyWindow) {
  EXPECT_TRUE(build_table(GammaParam(0.9), 3.0, 0.1, 2).empty());
  EXPECT_TRUE(build_prime_window(3.0, 0.1, 2).empty());
}

TEST(Table, MatchesBruteForceFilter) {
  const double g = 0.95;
  const PrimeTable t = build_table(GammaParam(g), 1e6, 0.1, 2);
  std::vector<std::uint64_t> want;
  for (std::uint64_t n = 2; n * n <= 1000000; ++n)
    if (n * n > 100000 && trial_prime(n) && ps_oracle(n, g)) want.push_back(n);
  std::vector<std::uint64_t> got;
  for (const auto& e : t.entries) got.push_back(e.p);
  EXPECT_EQ(got, want);
  for (const auto& e : t.entries) {
    const big w = boost::multiprecision::pow(big(e.p), big(1.0 - g)) * boost::multiprecision::log(big(e.p));
    EXPECT_NEAR(e.weight, w.convert_to<double>(), 1e-13 * e.weight);
  }
}

TEST(Table, PrimeWindowWeightsAreLogs) {
  const PrimeTable t = build_prime_window(1e5, 0.1, 3);
  ASSERT_FALSE(t.empty());
  for (const auto& e : t.entries) {
    EXPECT_TRUE(trial_prime(e.p));
    EXPECT_GT(e.power, 1e4);
    EXPECT_LE(e.power, 1e5);
    EXPECT_DOUBLE_EQ(e.weight, std::log(static_cast<double>(e.p)));
  }
  EXPECT_EQ(t.max_power(), t.entries.back().power);
}

TEST(TableCsv, RoundTrip) {
  const PrimeTable t = build_table(GammaParam(0.95), 1e6, 0.1, 2);
  std::stringstream ss;
  write_table_csv(t, ss);
  const PrimeTable back = read_table_csv(ss, t);
  EXPECT_EQ(back.entries, t.entries);
}

TEST(TableCsv, RejectsBadRows) {
  const PrimeTable shape = build_table(GammaParam(0.9), 1e4, 0.1, 2);
  auto parse = [&](const std::string& body) {
    std::istringstream is(body);
    return read_table_csv(is, shape);
  };
  EXPECT_THROW(parse("p,w\n"), SpecMismatch);
  EXPECT_THROW(parse("p,weight\n37\n"), SpecMismatch);
  EXPECT_THROW(parse("p,weight\nx,1\n"), SpecMismatch);
  EXPECT_THROW(parse("p,weight\n37,abc\n"), SpecMismatch);
  EXPECT_THROW(parse("p,weight\n37,1.5x\n"), SpecMismatch);
  EXPECT_THROW(parse("p,weight\n7,1.5\n"), SpecMismatch);     // below the window
  EXPECT_THROW(parse("p,weight\n51,1.5\n"), SpecMismatch);    // composite
  EXPECT_THROW(parse("p,weight\n37,-1\n"), SpecMismatch);
  const auto& e = shape.entries;
  ASSERT_GE(e.size(), 2u);
  const std::string a = std::to_string(e[0].p), b = std::to_string(e[1].p);
  EXPECT_THROW(parse("p,weight\n" + b + ",1\n" + a + ",1\n"), SpecMismatch);
  // A prime in the window that is not of type 0.9.
  std::uint64_t non_ps = 0;
  const IntWindow w = power_window(1e4, 0.1, 2);
  for (std::uint64_t p = w.first; p <= w.last; ++p)
    if (trial_prime(p) && !ps_oracle(p, 0.9)) {
      non_ps = p;
      break;
    }
  ASSERT_NE(non_ps, 0u);
  EXPECT_THROW(parse("p,weight\n" + std::to_string(non_ps) + ",1\n"), SpecMismatch);
  EXPECT_EQ(parse("p,weight\n" + a + ",1\n").size(), 1u);
}

TEST(Density, RatioNearOne) {
  const double r = ps_density_ratio(GammaParam(0.9), 100000);
  EXPECT_GT(r, 0.7);
  EXPECT_LT(r, 1.3);
  std::uint64_t n = 0;
  for (std::uint64_t p = 2; p <= 100000; ++p)
    if (trial_prime(p) && ps_oracle(p, 0.9)) ++n;
  EXPECT_EQ(count_ps_primes(GammaParam(0.9), 100000), n);
}
