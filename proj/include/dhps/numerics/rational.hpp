#pragma once

// Continued fractions of double-precision reals and Dirichlet-style rational
// approximation.

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace dhps {

/// a/q in lowest terms with q >= 1.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
  }

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  double value() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.num_ << '/' << r.den_;
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// |alpha - a/q| with the product alpha*q formed by fma, so the error is
/// relative to the (small) difference rather than to alpha.
inline double approx_error(double alpha, std::int64_t a, std::int64_t q) {
  const double r = std::fma(alpha, static_cast<double>(q),
                            -static_cast<double>(a));
  return std::abs(r) / static_cast<double>(q);
}

namespace detail {

inline void require_finite(double alpha, const char* who) {
  if (!std::isfinite(alpha))
    throw std::invalid_argument(std::string(who) + ": alpha must be finite");
  if (std::abs(alpha) >= 0x1p62)
    throw std::invalid_argument(std::string(who) + ": |alpha| too large");
}

struct ContinuedFraction {
  std::vector<std::int64_t> terms;
  std::vector<Rational> convergents;
};

// Expand until `max_terms` convergents exist, a convergent's denominator
// exceeds `max_den`, or a convergent reproduces alpha to rounding level.
inline ContinuedFraction expand(double alpha, std::size_t max_terms,
                                std::int64_t max_den) {
  ContinuedFraction cf;
  constexpr std::int64_t kDenCap = std::int64_t{1} << 32;
  // p_{-1}=1, p_{-2}=0, q_{-1}=0, q_{-2}=1.
  std::int64_t p1 = 1, p2 = 0, q1 = 0, q2 = 1;
  long double x = alpha;
  bool exact = false;
  while (cf.convergents.size() < max_terms) {
    const long double a_ld = std::floor(x);
    const auto a = static_cast<std::int64_t>(a_ld);
    const __int128 p = static_cast<__int128>(a) * p1 + p2;
    const __int128 q = static_cast<__int128>(a) * q1 + q2;
    if (q > kDenCap || p > std::numeric_limits<std::int64_t>::max() / 4 ||
        p < std::numeric_limits<std::int64_t>::min() / 4)
      break;
    const auto pi = static_cast<std::int64_t>(p);
    const auto qi = static_cast<std::int64_t>(q);
    const double err = approx_error(alpha, pi, qi);
    // Floating error in x eventually corrupts the terms; a convergent that
    // no longer satisfies |alpha - p/q| < 1/q^2 marks that point.
    if (!(err * static_cast<double>(qi) * static_cast<double>(qi) < 1.0) &&
        err != 0.0)
      break;
    cf.terms.push_back(a);
    cf.convergents.emplace_back(pi, qi);
    p2 = p1;
    p1 = pi;
    q2 = q1;
    q1 = qi;
    if (qi > max_den) break;
    const long double frac = x - a_ld;
    if (frac == 0.0L || err <= 4.0 * std::numeric_limits<double>::epsilon() *
                                  std::max(1.0, std::abs(alpha))) {
      exact = true;
      break;
    }
    x = 1.0L / frac;
  }
  // [..., a, 1] and [..., a + 1] denote the same rational; prefer the
  // canonical short form when the expansion terminated.
  if (exact && cf.terms.size() >= 2 && cf.terms.back() == 1) {
    // The last convergent is unchanged; only the penultimate one goes.
    cf.terms.pop_back();
    cf.terms.back() += 1;
    cf.convergents.erase(cf.convergents.end() - 2);
  }
  return cf;
}

}  // namespace detail

/// The first min(n, available) continued-fraction convergents of alpha.
/// Expansion stops early when a convergent reproduces alpha to within a few
/// ulps, so rational inputs such as 7/3 terminate.
inline std::vector<Rational> cf_convergents(double alpha, std::size_t n) {
  detail::require_finite(alpha, "cf_convergents");
  if (n == 0) return {};
  return detail::expand(alpha, n, std::numeric_limits<std::int64_t>::max())
      .convergents;
}

/// Closest a/q to alpha among those with 1 <= q <= Q and
/// |alpha - a/q| <= 1/(q(Q+1)); ties go to the smallest q. Such an optimum
/// is a convergent or a semiconvergent, so only those are examined; the last
/// convergent with q <= Q always qualifies, hence a result always exists.
inline Rational dirichlet_approx(double alpha, std::int64_t max_den) {
  detail::require_finite(alpha, "dirichlet_approx");
  if (max_den < 1) throw std::invalid_argument("dirichlet_approx: Q < 1");
  const auto cf = detail::expand(alpha, std::numeric_limits<std::size_t>::max(),
                                 max_den);
  const double bound_scale = static_cast<double>(max_den) + 1.0;
  bool have = false, have_any = false;
  Rational best, best_any;
  double best_err = 0.0, best_any_err = 0.0;
  auto consider = [&](std::int64_t a, std::int64_t q) {
    if (q < 1 || q > max_den) return;
    const double r = std::abs(std::fma(alpha, static_cast<double>(q),
                                       -static_cast<double>(a)));
    const double err = r / static_cast<double>(q);
    if (!have_any || err < best_any_err ||
        (err == best_any_err && q < best_any.den())) {
      best_any = Rational(a, q);
      best_any_err = err;
      have_any = true;
    }
    if (r * bound_scale > 1.0) return;
    if (!have || err < best_err || (err == best_err && q < best.den())) {
      best = Rational(a, q);
      best_err = err;
      have = true;
    }
  };
  std::int64_t p1 = 1, q1 = 0, p2 = 0, q2 = 1;
  for (std::size_t i = 0; i < cf.terms.size(); ++i) {
    const std::int64_t a = cf.terms[i];
    // Semiconvergents (p2 + j p1)/(q2 + j q1), j = 1..a-1, lie between the
    // previous-but-one convergent and this one.
    if (q1 > 0) {
      for (std::int64_t j = 1; j < a; ++j) {
        const std::int64_t q = q2 + j * q1;
        if (q > max_den) break;
        consider(p2 + j * p1, q);
      }
    }
    const Rational& c = cf.convergents[i];
    consider(c.num(), c.den());
    p2 = p1;
    q2 = q1;
    p1 = c.num();
    q1 = c.den();
    if (q1 > max_den) break;
  }
  // The bound can only fail for every candidate when rounding truncated the
  // expansion below Q; the closest candidate is then the honest answer.
  if (!have) return best_any;
  return best;
}

}  // namespace dhps
