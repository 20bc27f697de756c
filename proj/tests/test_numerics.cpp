#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "dhps/numerics/kernel.hpp"
#include "dhps/numerics/quadrature.hpp"
#include "dhps/numerics/rational.hpp"

using namespace dhps;

namespace {

// Irwin-Hall density of n unit uniforms by the alternating sum; exact up to
// rounding for the small n used here.
long double irwin_hall_pdf(int n, long double x) {
  if (x <= 0 || x >= n) return 0;
  long double s = 0, binom = 1, fact = 1;
  for (int i = 1; i < n; ++i) fact *= i;
  for (int k = 0; k <= static_cast<int>(std::floor(x)); ++k) {
    s += (k % 2 ? -1 : 1) * binom * std::pow(x - k, static_cast<long double>(n - 1));
    binom = binom * (n - k) / (k + 1);
  }
  return s / fact;
}

// theta(y) = P(|y - S| <= 7e/8), with S the centered sum of l boxes of width
// e/(4l). The allowed range of the Irwin-Hall variable is cut at the integers,
// and on each cut piece the density is a polynomial, so Gauss-Legendre is exact.
double theta_oracle(double eps, int l, double y) {
  const long double w = eps / (4.0L * l);
  const long double a = 0.875L * eps;
  const long double ulo = (y - a) / w + 0.5L * l, uhi = (y + a) / w + 0.5L * l;
  const GaussLegendreRule rule(16);
  long double total = 0;
  for (int piece = 0; piece < l; ++piece) {
    const long double lo = std::max<long double>(piece, ulo);
    const long double hi = std::min<long double>(piece + 1, uhi);
    if (hi <= lo) continue;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const long double u = 0.5L * (lo + hi) + 0.5L * (hi - lo) * rule.nodes[i];
      total += 0.5L * (hi - lo) * rule.weights[i] * irwin_hall_pdf(l, u);
    }
  }
  return static_cast<double>(total);
}

// 2 * integral_0^eps theta(y) cos(2 pi x y) dy by composite Gauss-Legendre
// with breakpoints at every kink of theta.
double transform_by_quadrature(const SmoothingKernel& k, double x) {
  const double eps = k.epsilon();
  const int l = k.smoothness();
  const double w = eps / (4.0 * l);
  std::vector<double> knots{0.0};
  for (int j = 0; j <= l; ++j) knots.push_back(0.75 * eps + j * w);
  const GaussLegendreRule rule(24);
  long double total = 0;
  for (std::size_t s = 0; s + 1 < knots.size(); ++s) {
    const int sub = 64;
    const double h = (knots[s + 1] - knots[s]) / sub;
    for (int p = 0; p < sub; ++p) {
      const double mid = knots[s] + h * (p + 0.5);
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double y = mid + 0.5 * h * rule.nodes[i];
        total += 0.5L * h * rule.weights[i] * k.value(y) *
                 std::cos(2.0L * std::numbers::pi_v<long double> * x * y);
      }
    }
  }
  return static_cast<double>(2 * total);
}

}  // namespace

TEST(Kernel, PinnedValues) {
  const SmoothingKernel k3(0.1, 3);
  EXPECT_EQ(k3.value(0.0), 1.0);
  EXPECT_EQ(k3.value(0.1), 0.0);
  EXPECT_NEAR(k3.value(0.0875), 0.5, 1e-14);
  const SmoothingKernel k2(0.1, 2);
  const double v = k2.value(0.08);
  EXPECT_GT(v, 0.0);
  EXPECT_LT(v, 1.0);
  EXPECT_NEAR(v, theta_oracle(0.1, 2, 0.08), 1e-13);
  EXPECT_NEAR(v, 0.92, 1e-13);
}

TEST(Kernel, MatchesConvolutionOracle) {
  for (const int l : {1, 2, 3, 5, 8}) {
    const SmoothingKernel k(0.3, l);
    for (int i = 0; i <= 200; ++i) {
      const double y = -0.33 + 0.0033 * i;
      EXPECT_NEAR(k.value(y), theta_oracle(0.3, l, y), 1e-12) << "l=" << l << " y=" << y;
    }
  }
}

TEST(Kernel, RegimesHoldPointwise) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double eps = std::pow(10.0, -3.0 + 3.0 * u(rng));
    const int l = 1 + static_cast<int>(rng() % 12);
    const double y = (2.0 * u(rng) - 1.0) * 1.2 * eps;
    const SmoothingKernel k(eps, l);
    const double v = k.value(y);
    if (std::abs(y) <= 0.75 * eps) {
      EXPECT_EQ(v, 1.0);
    } else if (std::abs(y) >= eps) {
      EXPECT_EQ(v, 0.0);
    } else {
      EXPECT_GT(v, 0.0);
      EXPECT_LT(v, 1.0);
    }
    EXPECT_EQ(v, k.value(-y));
  }
}

TEST(Kernel, RejectsBadParameters) {
  EXPECT_THROW(SmoothingKernel(0.0, 2), std::invalid_argument);
  EXPECT_THROW(SmoothingKernel(0.1, 0), std::invalid_argument);
}

TEST(KernelTransform, PinnedValues) {
  const SmoothingKernel k(0.1, 5);
  EXPECT_DOUBLE_EQ(k.transform(0.0), 0.175);
  EXPECT_NEAR(k.transform(4.0 / 0.7), 0.0, 1e-15);
  const SmoothingKernel k2(0.1, 2);
  const double q = transform_by_quadrature(k2, 1.0);
  EXPECT_NEAR(k2.transform(1.0), q, 1e-8 * std::abs(q));
}

TEST(KernelTransform, BoundHoldsWithoutSlack) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double eps = std::pow(10.0, -3.0 + 3.0 * u(rng));
    const int l = 1 + static_cast<int>(rng() % 12);
    const double x = (u(rng) < 0.5 ? -1 : 1) * std::pow(10.0, -2.0 + 4.0 * u(rng)) / eps;
    const SmoothingKernel k(eps, l);
    EXPECT_LE(std::abs(k.transform(x)), k.transform_bound(x)) << eps << ' ' << l << ' ' << x;
  }
}

TEST(KernelTransform, TailMassBoundsTheIntegral) {
  const SmoothingKernel k(0.5, 3);
  const double h = 40.0;
  // 2 * integral_h^inf of |Theta|; midpoint sum, the rest past 4000 is
  // below 1e-12.
  const std::size_t n = 4000000;
  const double step = (4000.0 - h) / n;
  long double body = 0;
  for (std::size_t i = 0; i < n; ++i) body += std::abs(k.transform(h + step * (i + 0.5)));
  body *= step;
  EXPECT_LE(2.0 * static_cast<double>(body), k.tail_mass(h));
}

TEST(ContinuedFraction, Sqrt2) {
  const auto c = cf_convergents(std::sqrt(2.0), 4);
  ASSERT_EQ(c.size(), 4u);
  EXPECT_EQ(c[0], Rational(1, 1));
  EXPECT_EQ(c[1], Rational(3, 2));
  EXPECT_EQ(c[2], Rational(7, 5));
  EXPECT_EQ(c[3], Rational(17, 12));
}

TEST(ContinuedFraction, RationalTerminates) {
  const auto c = cf_convergents(7.0 / 3.0, 10);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0], Rational(2, 1));
  EXPECT_EQ(c[1], Rational(7, 3));
}

TEST(ContinuedFraction, GoldenRatio) {
  const auto c = cf_convergents((1.0 + std::sqrt(5.0)) / 2.0, 5);
  const std::vector<Rational> want{{1, 1}, {2, 1}, {3, 2}, {5, 3}, {8, 5}};
  EXPECT_EQ(c, want);
}

TEST(ContinuedFraction, RecurrenceAndProperties) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double alpha = u(rng);
    const auto c = cf_convergents(alpha, 12);
    ASSERT_FALSE(c.empty());
    // Independent expansion in long double, checked term by term.
    long double x = alpha;
    long long p1 = 1, q1 = 0, p2 = 0, q2 = 1;
    for (std::size_t i = 0; i < c.size(); ++i) {
      const long double a = std::floor(x);
      const long long ai = static_cast<long long>(a);
      const long long p = ai * p1 + p2, q = ai * q1 + q2;
      if (i + 1 < c.size()) {
        EXPECT_EQ(c[i], Rational(p, q)) << alpha << " term " << i;
      }
      p2 = p1; q2 = q1; p1 = p; q1 = q;
      x = 1.0L / (x - a);
      // Past q ~ 1e6 the errors sit at rounding level and prove nothing.
      if (c[i].den() > 1000000) continue;
      const double err = std::abs(alpha - c[i].value());
      const double q_d = static_cast<double>(c[i].den());
      EXPECT_LT(err, 1.0 / (q_d * q_d));
      if (i > 0 && err > 0) {
        const double prev = alpha - c[i - 1].value();
        EXPECT_LT(prev * (alpha - c[i].value()), 0.0) << "convergents must alternate";
      }
    }
  }
}

TEST(ContinuedFraction, RejectsNonFinite) {
  EXPECT_THROW(cf_convergents(std::nan(""), 3), std::invalid_argument);
  EXPECT_THROW(dirichlet_approx(INFINITY, 3), std::invalid_argument);
}

namespace {

// Best a/q with q <= Q satisfying |alpha - a/q| <= 1/(q(Q+1)); ties go to
// the smallest q. Exhaustive over q.
Rational dirichlet_scan(double alpha, long long max_den) {
  bool have = false;
  Rational best;
  double best_err = 0;
  for (long long q = 1; q <= max_den; ++q) {
    for (const long long a : {static_cast<long long>(std::floor(alpha * q)),
                              static_cast<long long>(std::ceil(alpha * q))}) {
      const double r = std::abs(std::fma(alpha, static_cast<double>(q), -static_cast<double>(a)));
      if (r * (static_cast<double>(max_den) + 1.0) > 1.0) continue;
      const double err = r / static_cast<double>(q);
      if (!have || err < best_err) {
        best = Rational(a, q);
        best_err = err;
        have = true;
      }
    }
  }
  return best;
}

}  // namespace

TEST(Dirichlet, PinnedValues) {
  EXPECT_EQ(dirichlet_approx(std::sqrt(2.0), 10), Rational(7, 5));
  EXPECT_LE(std::abs(std::sqrt(2.0) - 1.4), 1.0 / 55.0);
  EXPECT_EQ(dirichlet_approx(0.5, 10), Rational(1, 2));
  EXPECT_EQ(dirichlet_approx(std::numbers::pi, 10), Rational(22, 7));
  EXPECT_NEAR(std::abs(std::numbers::pi - 22.0 / 7.0), 0.00126, 1e-5);
}

TEST(Dirichlet, MatchesExhaustiveScan) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int trial = 0; trial < 300; ++trial) {
    const double alpha = u(rng);
    for (const long long big_q : {1LL, 2LL, 7LL, 10LL, 37LL, 100LL}) {
      const Rational r = dirichlet_approx(alpha, big_q);
      EXPECT_EQ(r, dirichlet_scan(alpha, big_q)) << alpha << " Q=" << big_q;
      EXPECT_LE(r.den(), big_q);
    }
  }
}

TEST(Dirichlet, BoundAtLargeQ) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double alpha = u(rng);
    for (const long long big_q : {1000LL, 100000LL, 1000000LL}) {
      const Rational r = dirichlet_approx(alpha, big_q);
      ASSERT_LE(r.den(), big_q);
      EXPECT_LE(approx_error(alpha, r.num(), r.den()) * r.den() * (big_q + 1.0), 1.0 + 1e-9);
    }
  }
}

TEST(Rational, Normalizes) {
  const Rational r(6, -4);
  EXPECT_EQ(r.num(), -3);
  EXPECT_EQ(r.den(), 2);
  EXPECT_THROW(Rational(1, 0), std::invalid_argument);
}

TEST(Quadrature, Constant) {
  QuadratureSpec q;
  q.lo = 0.0;
  q.hi = 1.0;
  q.max_frequency = 0.0;
  const auto r = oscillatory_integral([](double) { return 1.0; }, q);
  EXPECT_NEAR(r.value.real(), 1.0, 1e-15);
  EXPECT_EQ(r.panels, 1u);
}

TEST(Quadrature, FullPeriod) {
  QuadratureSpec q;
  q.lo = 0.0;
  q.hi = 1.0;
  q.max_frequency = 1.0;
  const auto r = oscillatory_integral([](double y) { return expi2pi(y); }, q);
  EXPECT_LT(std::abs(r.value), 1e-13);
}

TEST(Quadrature, FresnelAgainstRiemannSum) {
  QuadratureSpec q;
  q.lo = 5.0;
  q.hi = 10.0;
  q.max_frequency = 20.0;
  q.rel_tol = 1e-12;
  const auto r = oscillatory_integral([](double y) { return expi2pi(y * y); }, q);
  // Midpoint sum on 10^6 cells.
  const std::size_t n = 1000000;
  const double h = 5.0 / n;
  std::complex<long double> s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const long double y = 5.0L + h * (i + 0.5L);
    const long double ph = 2 * std::numbers::pi_v<long double> * y * y;
    s += std::complex<long double>(std::cos(ph), std::sin(ph));
  }
  const std::complex<double> oracle(static_cast<double>(s.real() * h),
                                    static_cast<double>(s.imag() * h));
  EXPECT_LT(std::abs(r.value - oracle), 1e-6);
}

TEST(Quadrature, ThrowsWhenUnderresolved) {
  QuadratureSpec q;
  q.lo = 0.0;
  q.hi = 1.0;
  q.max_frequency = 1.0;
  q.max_nodes = 16;
  q.rel_tol = 1e-14;
  // |y - 1/3| has a kink inside a panel; 16 nodes cannot reach 1e-14.
  EXPECT_THROW(oscillatory_integral([](double y) { return std::sqrt(std::abs(y - 1.0 / 3.0)); }, q),
               NonConvergence);
}

TEST(Quadrature, ValidatesSpec) {
  QuadratureSpec q;
  q.lo = 1.0;
  q.hi = 0.0;
  EXPECT_THROW(q.validate(), std::invalid_argument);
  q.hi = 2.0;
  q.rel_tol = 0.5;
  EXPECT_THROW(q.validate(), std::invalid_argument);
}

TEST(Phase, FracProductKeepsLowBits) {
  // t * x with x ~ 1e12 loses the fractional phase in a plain product.
  const double t = 0.1;
  const double x = 1e12 + 7.0;
  EXPECT_NEAR(frac_product(t, x), 0.7, 1e-4);
  const cplx e = expi2pi(t, 3.0);
  EXPECT_NEAR(e.real(), std::cos(2 * std::numbers::pi * 0.3), 1e-15);
}
