#pragma once

// Piatetski-Shapiro primes of type gamma: primes p = floor(n^(1/gamma)), or
// equivalently primes p whose interval [p^gamma, (p+1)^gamma) holds an
// integer.

#include <quadmath.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace dhps {

/// Lower gamma ranges of the three theorems (k = 2, 3, 4), of the density
/// asymptotic, and of the S-versus-Sigma approximations.
struct GammaThreshold {
  int num;
  int den;
  double value() const { return static_cast<double>(num) / den; }
  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

inline GammaThreshold theorem_threshold(int k) {
  switch (k) {
    case 2: return {71, 72};
    case 3: return {129, 130};
    case 4: return {245, 246};
    default: throw std::invalid_argument("theorem_threshold: k must be 2, 3 or 4");
  }
}

inline GammaThreshold approximation_threshold(int k) {
  switch (k) {
    case 2: return {13, 14};
    case 3: return {47, 48};
    case 4: return {99, 100};
    default: throw std::invalid_argument("approximation_threshold: k must be 2, 3 or 4");
  }
}

inline constexpr GammaThreshold kDensityThreshold{2426, 2817};

class GammaParam {
 public:
  GammaParam() = default;
  explicit GammaParam(double gamma) : gamma_(gamma) {
    if (!(gamma > 0.0 && gamma < 1.0))
      throw std::invalid_argument("GammaParam: gamma must lie in (0, 1)");
  }

  double value() const noexcept { return gamma_; }

  // gamma > num/den, decided exactly: gamma*den is formed by fma.
  static bool exceeds(double gamma, GammaThreshold t) {
    return std::fma(gamma, t.den, -static_cast<double>(t.num)) > 0.0;
  }
  bool admissible_for(int k) const { return exceeds(gamma_, theorem_threshold(k)); }
  bool in_density_range() const { return exceeds(gamma_, kDensityThreshold); }
  bool approximates_sigma(int k) const {
    return exceeds(gamma_, approximation_threshold(k));
  }

  friend bool operator==(const GammaParam&, const GammaParam&) = default;

 private:
  double gamma_ = 0.99;
};

enum class Certainty {
  /// Both double evaluations were clear of integer boundaries.
  guarded,
  /// Decided by the 113-bit fallback.
  escalated,
};

struct PsCheck {
  bool member = false;
  Certainty certainty = Certainty::guarded;
  explicit operator bool() const noexcept { return member; }
};

namespace detail {

inline bool ps_member_quad(std::uint64_t p, double gamma) {
  const __float128 g = gamma;
  const __float128 a = powq(static_cast<__float128>(p), g);
  const __float128 b = powq(static_cast<__float128>(p) + 1, g);
  const __float128 n = ceilq(a);
  return n < b;
}

}  // namespace detail

/// Distance, in the caller's units, at which a double pow result is trusted
/// to sit on the correct side of an integer.
inline double ps_guard(double x) {
  return std::max(1e-9, 64.0 * std::numeric_limits<double>::epsilon() * x);
}

/// Whether the prime p is a Piatetski-Shapiro prime of type gamma. The
/// double-precision verdict (n = ceil(p^gamma) < (p+1)^gamma, cross-checked
/// by floor(n^(1/gamma)) == p) is used only when p^gamma and (p+1)^gamma are
/// both at least ps_guard away from an integer; otherwise the test is redone
/// in 113-bit arithmetic.
inline PsCheck is_ps_prime(std::uint64_t p, const GammaParam& gamma) {
  const double g = gamma.value();
  const double pd = static_cast<double>(p);
  const double a = std::pow(pd, g);
  const double b = std::pow(pd + 1.0, g);
  const bool clear = std::abs(a - std::nearbyint(a)) >= ps_guard(a) &&
                     std::abs(b - std::nearbyint(b)) >= ps_guard(b);
  if (clear) {
    const double n = std::ceil(a);
    const bool member = n < b;
    if (!member) return {false, Certainty::guarded};
    const double back = std::pow(n, 1.0 / g);
    if (std::floor(back) == pd &&
        std::abs(back - std::nearbyint(back)) >= ps_guard(back))
      return {true, Certainty::guarded};
  }
  return {detail::ps_member_quad(p, g), Certainty::escalated};
}

}  // namespace dhps
