#pragma once

// Exact integer ground truth and brute-force reference evaluation of the
// P variants, used as test oracles.

#include <cmath>

#include "smoothprime/errors.hpp"
#include "smoothprime/parallel.hpp"
#include "smoothprime/primality.hpp"

namespace smoothprime {

struct PrimalityFact {
  long long n = 0;
  bool is_prime = false;
  long long smallest_divisor = 0;  // n itself when prime
};

inline PrimalityFact primality_fact(long long n) {
  if (n < 2) throw argument_error("n must be >= 2");
  if (n % 2 == 0) return {n, n == 2, n == 2 ? n : 2};
  for (long long d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return {n, false, d};
  }
  return {n, true, n};
}

// Reference evaluation with Simpson grids of the given resolution on every
// axis. The triple variants iterate candidate divisors in parallel and keep
// the literal three-axis form.
inline double brute_force_p(double n, Variant variant,
                            const SmoothParams& params, int resolution) {
  validate_smooth_params(params);
  if (resolution < 256) throw argument_error("resolution must be >= 256");
  const bool triple = variant == Variant::kTripleSingle ||
                      variant == Variant::kSummedTriple ||
                      variant == Variant::kSmoothedIntegral;
  if (triple) {
    const double cube = static_cast<double>(resolution) * resolution *
                        static_cast<double>(resolution);
    if (cube > 1e9) {
      throw argument_error(
          "resolution^3 exceeds 1e9 for a triple-integral variant");
    }
  }
  IntegrationSpec spec;
  spec.method = IntegrationMethod::kSimpson;
  spec.q = resolution;

  if (variant == Variant::kSummedTriple && n > 2.0) {
    // Candidate divisors are independent; evaluate them concurrently and
    // average in index order.
    const long long ni = static_cast<long long>(n);
    const std::size_t count = static_cast<std::size_t>(ni - 2);
    std::vector<double> per_m(count);
    parallel_for(count, default_jobs(), [&](std::size_t idx) {
      const double m = static_cast<double>(idx) + 2.0;
      const double delta = params.delta;
      per_m[idx] = integrate_3d(
                       [&](double t, double /*u*/, double v) {
                         const double x = n + delta * detail::psi(params, t);
                         const double y = m + delta * detail::psi(params, v);
                         return detail::kval(params, x / y);
                       },
                       spec)
                       .value;
    });
    double sum = 0.0;
    for (const double v : per_m) sum += v;
    return sum / static_cast<double>(count);
  }
  return evaluate_variant(n, variant, params, spec).value;
}

}  // namespace smoothprime
