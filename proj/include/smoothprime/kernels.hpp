#pragma once

// Integer-detecting kernels, unit bumps, and bell combs. Every function here
// is pure and thread-safe.
//
// All kernels are periodic with period 1 and are evaluated through the same
// argument reduction: w = z - nearbyint(z), s2 = sin^2(pi*w). The reduction
// keeps w in [-1/2, 1/2] and makes the value at exact integers exactly the
// limit value (s2 == 0.0, no rounding residue from sin(pi*k)).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "smoothprime/errors.hpp"

namespace smoothprime {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

enum class KernelFamily {
  kSine,                // (s2 / (s2 + eps))^p
  kModifiedGaussian,    // 1 - exp(-s2 / eps)
  kSingularExponential, // exp(-c / (eps * s2)), 0 at integers
  kInversePolynomial,   // 1 / (1 + (s2 / eps)^p); equals 1 at integers
};

struct KernelParams {
  double epsilon = 1e-5;
  int p = 8;
  double c = 1.0;
};

inline const char* kernel_family_name(KernelFamily f) {
  switch (f) {
    case KernelFamily::kSine: return "sine";
    case KernelFamily::kModifiedGaussian: return "modified-gaussian";
    case KernelFamily::kSingularExponential: return "singular-exponential";
    case KernelFamily::kInversePolynomial: return "inverse-polynomial";
  }
  return "?";
}

inline std::optional<KernelFamily> parse_kernel_family(const std::string& s) {
  if (s == "sine") return KernelFamily::kSine;
  if (s == "modified-gaussian") return KernelFamily::kModifiedGaussian;
  if (s == "singular-exponential") return KernelFamily::kSingularExponential;
  if (s == "inverse-polynomial") return KernelFamily::kInversePolynomial;
  return std::nullopt;
}

inline void validate_kernel_params(const KernelParams& kp) {
  if (!(kp.epsilon > 0.0)) throw argument_error("kernel epsilon must be > 0");
  if (kp.p < 1) throw argument_error("kernel exponent p must be >= 1");
  if (!(kp.c > 0.0)) throw argument_error("kernel constant c must be > 0");
}

namespace detail {

// sin^2(pi * (z - nearest integer)). Exactly 0.0 at integers.
inline double s2_of(double z) {
  const double w = z - std::nearbyint(z);
  const double s = std::sin(kPi * w);
  return s * s;
}

// base^p for base >= 0. Large p with base < 1 goes through exp/log so the
// result underflows gradually instead of losing accuracy to repeated
// multiplication.
inline double pow_pos(double base, int p) {
  if (base <= 0.0) return 0.0;
  if (p > 32 && base < 1.0) {
    return std::exp(static_cast<double>(p) * std::log(base));
  }
  return std::pow(base, static_cast<double>(p));
}

}  // namespace detail

// Kernel value at z. Range [0, 1] for every family.
inline double kernel_eval(KernelFamily family, const KernelParams& kp, double z) {
  validate_kernel_params(kp);
  const double s2 = detail::s2_of(z);
  switch (family) {
    case KernelFamily::kSine:
      return detail::pow_pos(s2 / (s2 + kp.epsilon), kp.p);
    case KernelFamily::kModifiedGaussian:
      return 1.0 - std::exp(-s2 / kp.epsilon);
    case KernelFamily::kSingularExponential:
      // Below ~1e-300 the division would overflow before exp underflows.
      if (s2 < 1e-300) return 0.0;
      return std::exp(-kp.c / (kp.epsilon * s2));
    case KernelFamily::kInversePolynomial:
      return 1.0 / (1.0 + detail::pow_pos(s2 / kp.epsilon, kp.p));
  }
  throw argument_error("unknown kernel family");
}

// Derivative of the kernel at z0, orders 0 through 4. Order 0 is the plain
// value. Higher orders use central five-point stencils with one Richardson
// step; the step size scales with the kernel width sqrt(epsilon) but never
// drops below 1e-4.
inline double kernel_derivative_at(KernelFamily family, const KernelParams& kp,
                                   double z0, int order) {
  validate_kernel_params(kp);
  if (order < 0 || order > 4) {
    throw argument_error("derivative order must be in [0, 4]");
  }
  if (order == 0) return kernel_eval(family, kp, z0);

  const auto f = [&](double z) { return kernel_eval(family, kp, z); };
  const auto stencil = [&](double h, int ord) {
    const double f1 = f(z0 + h), f2 = f(z0 + 2 * h);
    const double fm1 = f(z0 - h), fm2 = f(z0 - 2 * h);
    switch (ord) {
      case 1: return (-f2 + 8 * f1 - 8 * fm1 + fm2) / (12 * h);
      case 2: return (-f2 + 16 * f1 - 30 * f(z0) + 16 * fm1 - fm2) / (12 * h * h);
      case 3: return (f2 - 2 * f1 + 2 * fm1 - fm2) / (2 * h * h * h);
      case 4: return (f2 - 4 * f1 + 6 * f(z0) - 4 * fm1 + fm2) / (h * h * h * h);
    }
    return 0.0;
  };

  const double h = std::max(1e-4, std::sqrt(kp.epsilon) / 100.0);
  // Leading truncation order of each stencil: h^4 for orders 1-2, h^2 for 3-4.
  const int lead = (order <= 2) ? 4 : 2;
  const double coarse = stencil(h, order);
  const double fine = stencil(h / 2, order);
  const double w = std::pow(2.0, lead);
  return (w * fine - coarse) / (w - 1.0);
}

// ---------------------------------------------------------------------------
// Unit bumps psi: [0, 1] -> [0, 1], zero at both endpoints.

enum class BumpFamily {
  kSineSquared,         // sin^2(pi t), peak 1 at t = 1/2
  kQuartic,             // t^2 (1-t)^2, peak 1/16; optional scaling to peak 1
  kCompactExponential,  // exp(-1 / (t (1-t))), flat to all orders at endpoints
};

struct BumpChoice {
  BumpFamily family = BumpFamily::kSineSquared;
  bool normalized = false;  // quartic only: scale by 16 so the peak is 1
};

inline const char* bump_family_name(BumpFamily f) {
  switch (f) {
    case BumpFamily::kSineSquared: return "sine-squared";
    case BumpFamily::kQuartic: return "quartic";
    case BumpFamily::kCompactExponential: return "compact-exponential";
  }
  return "?";
}

inline std::optional<BumpFamily> parse_bump_family(const std::string& s) {
  if (s == "sine-squared") return BumpFamily::kSineSquared;
  if (s == "quartic") return BumpFamily::kQuartic;
  if (s == "compact-exponential") return BumpFamily::kCompactExponential;
  return std::nullopt;
}

inline double bump_eval(const BumpChoice& choice, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw argument_error("bump argument must lie in [0, 1]");
  }
  switch (choice.family) {
    case BumpFamily::kSineSquared:
      // Same reduction as the kernels: exact zeros at t = 0 and t = 1, and
      // exact symmetry about t = 1/2.
      return detail::s2_of(t);
    case BumpFamily::kQuartic: {
      const double v = t * t * (1.0 - t) * (1.0 - t);
      return choice.normalized ? 16.0 * v : v;
    }
    case BumpFamily::kCompactExponential: {
      const double d = t * (1.0 - t);
      if (d <= 0.0) return 0.0;
      return std::exp(-1.0 / d);
    }
  }
  throw argument_error("unknown bump family");
}

// ---------------------------------------------------------------------------
// Bell profiles Phi and integer combs.

enum class BellFamily {
  kGaussian,         // exp(-x^2), unbounded support
  kCompactBump,      // exp(-1 / (1 - x^2)) on |x| < 1
  kSineSquaredBell,  // cos^2(pi x) on |x| < 1/2, peak 1 at x = 0
};

struct BellChoice {
  BellFamily family = BellFamily::kGaussian;
  double sigma = 0.05;
  double truncation_radius = 8.0;  // gaussian support cutoff, in units of sigma
};

inline const char* bell_family_name(BellFamily f) {
  switch (f) {
    case BellFamily::kGaussian: return "gaussian";
    case BellFamily::kCompactBump: return "compact-bump";
    case BellFamily::kSineSquaredBell: return "sine-squared-bell";
  }
  return "?";
}

inline std::optional<BellFamily> parse_bell_family(const std::string& s) {
  if (s == "gaussian") return BellFamily::kGaussian;
  if (s == "compact-bump") return BellFamily::kCompactBump;
  if (s == "sine-squared-bell") return BellFamily::kSineSquaredBell;
  return std::nullopt;
}

inline void validate_bell_choice(const BellChoice& b) {
  if (!(b.sigma > 0.0)) throw argument_error("bell sigma must be > 0");
  if (!(b.truncation_radius >= 4.0)) {
    throw argument_error("bell truncation radius must be >= 4");
  }
}

// Unscaled profile in the normalized coordinate x. Even in x, peak at x = 0.
inline double bell_profile_eval(const BellChoice& choice, double x) {
  validate_bell_choice(choice);
  switch (choice.family) {
    case BellFamily::kGaussian:
      if (std::abs(x) > choice.truncation_radius) return 0.0;
      return std::exp(-x * x);
    case BellFamily::kCompactBump: {
      const double d = 1.0 - x * x;
      if (d <= 0.0) return 0.0;
      return std::exp(-1.0 / d);
    }
    case BellFamily::kSineSquaredBell: {
      if (std::abs(x) >= 0.5) return 0.0;
      const double cx = std::cos(kPi * x);
      return cx * cx;
    }
  }
  throw argument_error("unknown bell family");
}

// Support half-width of the profile in the normalized coordinate.
inline double bell_support_radius(const BellChoice& choice) {
  switch (choice.family) {
    case BellFamily::kGaussian: return choice.truncation_radius;
    case BellFamily::kCompactBump: return 1.0;
    case BellFamily::kSineSquaredBell: return 0.5;
  }
  return 0.0;
}

// Comb of bells centered at the integers k >= k_min (and k <= k_max when
// given): sum_k Phi((m - k) / sigma). For the gaussian family at the default
// truncation radius 8 the dropped tail is below 2e-28 of the peak, far under
// double round-off for the sums formed here. At least the nearest eligible
// integer is always inspected, so the comb is strictly positive between
// consecutive in-range centers for the gaussian family.
inline double bell_comb_eval(const BellChoice& choice, double m, int k_min,
                             std::optional<int> k_max = std::nullopt) {
  validate_bell_choice(choice);
  const double half =
      std::max(bell_support_radius(choice) * choice.sigma, 0.5);
  int lo = static_cast<int>(std::ceil(m - half));
  int hi = static_cast<int>(std::floor(m + half));
  lo = std::max(lo, k_min);
  if (k_max) hi = std::min(hi, *k_max);
  double sum = 0.0;
  for (int k = lo; k <= hi; ++k) {
    sum += bell_profile_eval(choice, (m - k) / choice.sigma);
  }
  return sum;
}

}  // namespace smoothprime
