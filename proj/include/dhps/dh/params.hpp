#pragma once

// Problem instances and the derived scale parameters q0, X, Delta, eps_k, H_k.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>

#include "dhps/error.hpp"
#include "dhps/numerics/rational.hpp"
#include "dhps/primes/ps_prime.hpp"

namespace dhps {

/// |l1 p1^2 + l2 p2^2 + l3 p3^2 + l4 p4^2 + l5 p5^k + eta| small.
struct ProblemInstance {
  std::array<double, 5> lambdas{std::sqrt(2.0), 1.0, 1.0, 1.0, -3.0};
  double eta = 0.0;
  int k = 2;
  GammaParam gamma{0.99};
  double theta = 0.001;
  double lambda0 = 0.1;

  friend bool operator==(const ProblemInstance&, const ProblemInstance&) = default;
};

namespace detail {

inline std::string fmt_num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace detail

/// Shape checks that do not involve gamma: nonzero coefficients with mixed
/// signs, k in {2,3,4}, theta > 0, lambda0 in (0,1), finite eta.
inline void check_shape(const ProblemInstance& inst) {
  bool pos = false, neg = false;
  for (std::size_t j = 0; j < 5; ++j) {
    const double l = inst.lambdas[j];
    if (!std::isfinite(l) || l == 0.0)
      throw AdmissibilityError("lambda" + std::to_string(j + 1) +
                               " must be finite and nonzero");
    (l > 0.0 ? pos : neg) = true;
  }
  if (!(pos && neg))
    throw AdmissibilityError(std::string("lambdas are all ") +
                             (pos ? "positive" : "negative") +
                             "; they must be not all of the same sign");
  if (inst.k < 2 || inst.k > 4)
    throw AdmissibilityError("k=" + std::to_string(inst.k) + " outside {2, 3, 4}");
  if (!(inst.theta > 0.0) || !std::isfinite(inst.theta))
    throw AdmissibilityError("theta must be > 0");
  if (!(inst.lambda0 > 0.0 && inst.lambda0 < 1.0))
    throw AdmissibilityError("lambda0 must lie in (0, 1)");
  if (!std::isfinite(inst.eta)) throw AdmissibilityError("eta must be finite");
}

/// Full check, including the gamma range required for k.
inline void check_admissible(const ProblemInstance& inst) {
  check_shape(inst);
  if (!inst.gamma.admissible_for(inst.k)) {
    const auto t = theorem_threshold(inst.k);
    throw AdmissibilityError("gamma=" + detail::fmt_num(inst.gamma.value()) +
                             " < " + t.str() + " for k=" + std::to_string(inst.k) +
                             " (need gamma > " + detail::fmt_num(t.value()) + ")");
  }
}

struct DhParams {
  /// 0 when X was given directly rather than derived from a convergent.
  std::uint64_t q0 = 0;
  double X = 0.0;
  double Delta = 0.0;
  double eps = 0.0;
  double H = 0.0;
};

/// Exponent e with eps_k = X^e.
inline double eps_exponent(int k, double gamma, double theta) {
  switch (k) {
    case 2: return (71.0 - 72.0 * gamma) / 58.0 + theta;
    case 3: return (129.0 - 130.0 * gamma) / 116.0 + theta;
    case 4: return (245.0 - 246.0 * gamma) / 232.0 + theta;
    default: throw std::invalid_argument("eps_exponent: k must be 2, 3 or 4");
  }
}

/// Exponent e of the radius (max p)^e in the existence statements.
inline double theorem_exponent(int k, double gamma, double theta) {
  switch (k) {
    case 2: return (71.0 - 72.0 * gamma) / 29.0 + theta;
    case 3: return (129.0 - 130.0 * gamma) / 58.0 + theta;
    case 4: return (245.0 - 246.0 * gamma) / 116.0 + theta;
    default: throw std::invalid_argument("theorem_exponent: k must be 2, 3 or 4");
  }
}

inline DhParams params_from_x(const ProblemInstance& inst, double x_max,
                              std::uint64_t q0 = 0) {
  if (!(x_max > 1.0) || !std::isfinite(x_max))
    throw std::invalid_argument("params_from_x: X must exceed 1");
  DhParams p;
  p.q0 = q0;
  p.X = x_max;
  const double lx = std::log(x_max);
  p.Delta = std::pow(x_max, -27.0 / 29.0) * lx;
  p.eps = std::pow(x_max, eps_exponent(inst.k, inst.gamma.value(), inst.theta));
  p.H = lx * lx / p.eps;
  return p;
}

inline DhParams params_from_q0(const ProblemInstance& inst, std::uint64_t q0) {
  if (q0 < 2) throw std::invalid_argument("params_from_q0: q0 must be >= 2");
  return params_from_x(inst, std::pow(static_cast<double>(q0), 58.0 / 27.0), q0);
}

/// Smallest convergent denominator q >= floor of lambda1/lambda2.
inline std::uint64_t select_q0(const ProblemInstance& inst, std::uint64_t floor = 2) {
  const double ratio = inst.lambdas[0] / inst.lambdas[1];
  for (const Rational& c : cf_convergents(ratio, 64)) {
    if (c.den() >= 2 && static_cast<std::uint64_t>(c.den()) >= floor)
      return static_cast<std::uint64_t>(c.den());
  }
  throw DegenerateRatio("lambda1/lambda2 = " + detail::fmt_num(ratio) +
                        " has no convergent denominator >= " + std::to_string(floor));
}

/// Parameters for q0 (when given) or for the convergent chosen by select_q0.
inline DhParams derive_params(const ProblemInstance& inst,
                              std::optional<std::uint64_t> q0 = std::nullopt,
                              std::uint64_t floor = 2) {
  check_shape(inst);
  return params_from_q0(inst, q0 ? *q0 : select_q0(inst, floor));
}

/// l = max(1, floor(log X)).
inline int default_smoothness(double x_max) {
  return std::max(1, static_cast<int>(std::floor(std::log(x_max))));
}

}  // namespace dhps
