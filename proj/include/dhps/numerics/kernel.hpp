#pragma once

// Compactly supported smoothing kernel with closed-form Fourier transform.
//
//   theta = 1_[-7e/8, 7e/8] * B * ... * B      (l boxes)
//
// where B is the unit-mass box of width e/(4l). The l boxes smear the edge
// of the indicator by l * e/(8l) = e/8 on each side, so theta == 1 on
// |y| <= 3e/4, theta == 0 on |y| >= e, and theta lies strictly between on
// the ramps. The transform is a product of sincs:
//
//   Theta(x) = sin(7 pi e x / 4) / (pi x) * [sin(pi e x/(4l)) / (pi e x/(4l))]^l
//
// and obeys |Theta(x)| <= min(7e/4, 1/(pi|x|), (1/(pi|x|)) (l/(2 pi |x| e/8))^l).

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace dhps {

namespace detail {

/// CDF of the sum of n independent U(0,1) variables (Irwin-Hall), evaluated
/// by F_n(x) = (x F_{n-1}(x) + (n-x) F_{n-1}(x-1)) / n. Unlike the
/// alternating closed form this recursion does not lose digits as n grows.
inline double irwin_hall_cdf(int n, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= n) return 1.0;
  // level[i] holds F_j(x - i) for i = 0..n-j.
  std::vector<double> level(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) level[i] = (x - i) > 0.0 ? 1.0 : 0.0;
  for (int j = 1; j <= n; ++j) {
    for (int i = 0; i <= n - j; ++i) {
      const double z = x - i;
      double v;
      if (z <= 0.0) {
        v = 0.0;
      } else if (z >= j) {
        v = 1.0;
      } else {
        v = (z * level[i] + (j - z) * level[i + 1]) / j;
      }
      level[i] = v;
    }
  }
  return std::clamp(level[0], 0.0, 1.0);
}

inline double sinc(double u) {
  if (std::abs(u) < 1e-5) return 1.0 - u * u / 6.0;
  return std::sin(u) / u;
}

}  // namespace detail

class SmoothingKernel {
 public:
  SmoothingKernel(double epsilon, int smoothness)
      : epsilon_(epsilon), smoothness_(smoothness) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
      throw std::invalid_argument("SmoothingKernel: epsilon must be > 0");
    if (smoothness < 1)
      throw std::invalid_argument("SmoothingKernel: smoothness must be >= 1");
  }

  double epsilon() const noexcept { return epsilon_; }
  int smoothness() const noexcept { return smoothness_; }

  /// Start of the ramp (3e/4) and end of the support (e).
  double plateau() const noexcept { return 0.75 * epsilon_; }
  double support() const noexcept { return epsilon_; }

  /// theta(y). Even, total, values in [0, 1].
  double value(double y) const {
    const double a = std::abs(y);
    if (!(a < support())) return 0.0;  // also maps NaN to 0
    if (a <= plateau()) return 1.0;
    // On the ramp theta(y) = P(S >= y - 7e/8) with S the box sum; by the
    // symmetry of S this is the Irwin-Hall CDF at l/2 - (y - 7e/8)/w.
    const double width = epsilon_ / (4.0 * smoothness_);
    const double u = 0.5 * smoothness_ + (0.875 * epsilon_ - a) / width;
    const double v = detail::irwin_hall_cdf(smoothness_, u);
    // The true value is strictly inside (0, 1) here.
    if (v >= 1.0) return std::nextafter(1.0, 0.0);
    if (v <= 0.0) return std::numeric_limits<double>::min();
    return v;
  }

  double operator()(double y) const { return value(y); }

  /// Theta(x) = integral of theta(y) e(-xy) dy. Real and even.
  double transform(double x) const {
    const double ax = std::abs(x);
    if (ax == 0.0) return 1.75 * epsilon_;
    constexpr double pi = std::numbers::pi;
    const double lead = std::sin(1.75 * pi * epsilon_ * ax) / (pi * ax);
    const double box = detail::sinc(pi * epsilon_ * ax / (4.0 * smoothness_));
    return lead * std::pow(box, smoothness_);
  }

  /// The three-way bound on |Theta(x)|.
  double transform_bound(double x) const {
    const double ax = std::abs(x);
    const double flat = 1.75 * epsilon_;
    if (ax == 0.0) return flat;
    constexpr double pi = std::numbers::pi;
    const double slow = 1.0 / (pi * ax);
    const double ratio = smoothness_ / (2.0 * pi * ax * epsilon_ / 8.0);
    const double fast = slow * std::pow(ratio, smoothness_);
    return std::min({flat, slow, fast});
  }

  /// Bound on the integral of |Theta| over |t| > h. Uses the fast-decay
  /// branch: 2 * int_h^inf (1/(pi t)) (4l/(pi e t))^l dt.
  double tail_mass(double h) const {
    constexpr double pi = std::numbers::pi;
    const int l = smoothness_;
    return 2.0 / (pi * l) * std::pow(4.0 * l / (pi * epsilon_ * h), l);
  }

 private:
  double epsilon_;
  int smoothness_;
};

}  // namespace dhps
