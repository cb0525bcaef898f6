#pragma once

// The five P(n) variants.
//
//   triple-single      triple integral of K(x/y) with x = n + delta*psi(t),
//                      y = 2 + (n-2)u + delta*psi(v)
//   summed-triple      mean over m = 2..n-1 of the triple integral with
//                      y = m + delta*psi(v)
//   reduced-1d         mean over m of a single t-integral with the same psi
//                      path in numerator and denominator
//   smoothed-integral  bell-comb weighted outer integral over m in [2, n) of
//                      the summed-triple inner integral, normalized
//   smoothed-1d        same outer treatment of the reduced inner integral
//
// The discrete variants (summed-triple, reduced-1d) require integer n; the
// smooth ones accept real n and are differentiable in n.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smoothprime/errors.hpp"
#include "smoothprime/integrate.hpp"
#include "smoothprime/kernels.hpp"

namespace smoothprime {

enum class Variant {
  kTripleSingle,
  kSummedTriple,
  kReduced1D,
  kSmoothedIntegral,
  kSmoothed1D,
};

inline const char* variant_name(Variant v) {
  switch (v) {
    case Variant::kTripleSingle: return "triple-single";
    case Variant::kSummedTriple: return "summed-triple";
    case Variant::kReduced1D: return "reduced-1d";
    case Variant::kSmoothedIntegral: return "smoothed-integral";
    case Variant::kSmoothed1D: return "smoothed-1d";
  }
  return "?";
}

inline std::optional<Variant> parse_variant(const std::string& s) {
  if (s == "triple-single") return Variant::kTripleSingle;
  if (s == "summed-triple") return Variant::kSummedTriple;
  if (s == "reduced-1d") return Variant::kReduced1D;
  if (s == "smoothed-integral") return Variant::kSmoothedIntegral;
  if (s == "smoothed-1d") return Variant::kSmoothed1D;
  return std::nullopt;
}

// The divisor sum of these variants is discrete, so they reject non-integer n.
inline bool variant_requires_integer_n(Variant v) {
  return v == Variant::kSummedTriple || v == Variant::kReduced1D;
}

struct SmoothParams {
  double delta = 0.05;  // perturbation amplitude, must stay in (0, 1)
  KernelFamily kernel = KernelFamily::kSine;
  KernelParams kernel_params{};
  BumpChoice bump{};
  BellChoice bell{};  // smoothed variants only
  enum class Phi { kUniform } phi = Phi::kUniform;
  // Fast path for summed-triple: its integrand is constant in u, so the
  // u-axis may be dropped. Off by default to keep the literal cost profile.
  bool collapse_u = false;
};

inline void validate_smooth_params(const SmoothParams& sp) {
  if (!(sp.delta > 0.0)) throw argument_error("delta must be > 0");
  if (!(sp.delta < 1.0)) throw argument_error("delta must be < 1");
  validate_kernel_params(sp.kernel_params);
  validate_bell_choice(sp.bell);
}

struct EvalResult {
  double n = 0.0;
  Variant variant = Variant::kTripleSingle;
  double value = 0.0;
  double error_estimate = 0.0;
  std::uint64_t evaluations = 0;
  SmoothParams params;
};

struct ParamSchedule {
  enum class DeltaRule { kFixed, kInverseSquare, kInverseLog };
  enum class EpsilonRule { kFixed, kPower };
  DeltaRule delta_rule = DeltaRule::kFixed;
  double fixed_delta = 0.05;
  EpsilonRule epsilon_rule = EpsilonRule::kFixed;
  double fixed_epsilon = 1e-5;
  double power_c = 2.0;  // epsilon(n) = n^{-c}
};

// ---------------------------------------------------------------------------

namespace detail {

inline double psi(const SmoothParams& sp, double t) {
  return bump_eval(sp.bump, t);
}

inline double kval(const SmoothParams& sp, double z) {
  return kernel_eval(sp.kernel, sp.kernel_params, z);
}

// Highest bell-comb center used by the smoothed variants. Capping at
// floor(n) - 1 keeps the comb aligned with the discrete divisor range
// m = 2..n-1, so the sigma -> 0 limit matches the discrete variants.
inline int comb_center_cap(double n) {
  return static_cast<int>(std::floor(n)) - 1;
}

inline double comb(const SmoothParams& sp, double n, double m) {
  return bell_comb_eval(sp.bell, m, 2, comb_center_cap(n));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Discrete-denominator variants.

inline EvalResult p_triple_single(double n, const SmoothParams& params,
                                  const IntegrationSpec& integ) {
  validate_smooth_params(params);
  if (!(n >= 2.0)) throw argument_error("n must be >= 2");
  const double delta = params.delta;
  const IntegralEstimate est = integrate_3d(
      [&](double t, double u, double v) {
        const double x = n + delta * detail::psi(params, t);
        const double y = 2.0 + (n - 2.0) * u + delta * detail::psi(params, v);
        return detail::kval(params, x / y);
      },
      integ);
  return {n, Variant::kTripleSingle, est.value, est.error_estimate,
          est.evaluations, params};
}

inline EvalResult p_summed_triple(long long n, const SmoothParams& params,
                                  const IntegrationSpec& integ) {
  validate_smooth_params(params);
  if (n < 2) throw argument_error("n must be >= 2");
  EvalResult out{static_cast<double>(n), Variant::kSummedTriple,
                 1.0, 0.0, 0, params};
  if (n == 2) return out;  // no candidate divisors: 1.0 by definition

  const bool grid_method = integ.method == IntegrationMethod::kMidpoint ||
                           integ.method == IntegrationMethod::kTrapezoid ||
                           integ.method == IntegrationMethod::kSimpson;
  if (params.collapse_u && !grid_method) {
    throw argument_error("collapse_u requires a fixed-grid method");
  }

  const double delta = params.delta;
  double value_sum = 0.0, err_sum = 0.0;
  for (long long m = 2; m < n; ++m) {
    const double md = static_cast<double>(m);
    IntegralEstimate est;
    if (params.collapse_u) {
      est = integrate_2d_grid(
          [&](double t, double v) {
            const double x = n + delta * detail::psi(params, t);
            const double y = md + delta * detail::psi(params, v);
            return detail::kval(params, x / y);
          },
          integ.method, integ.q);
    } else {
      est = integrate_3d(
          [&](double t, double /*u*/, double v) {
            const double x = n + delta * detail::psi(params, t);
            const double y = md + delta * detail::psi(params, v);
            return detail::kval(params, x / y);
          },
          integ);
    }
    value_sum += est.value;
    err_sum += est.error_estimate;
    out.evaluations += est.evaluations;
  }
  out.value = value_sum / static_cast<double>(n - 2);
  out.error_estimate = err_sum / static_cast<double>(n - 2);
  return out;
}

inline EvalResult p_reduced_1d(long long n, const SmoothParams& params,
                               const IntegrationSpec& integ) {
  validate_smooth_params(params);
  if (n < 2) throw argument_error("n must be >= 2");
  EvalResult out{static_cast<double>(n), Variant::kReduced1D,
                 1.0, 0.0, 0, params};
  if (n == 2) return out;

  const double delta = params.delta;
  double value_sum = 0.0, err_sum = 0.0;
  for (long long m = 2; m < n; ++m) {
    const double md = static_cast<double>(m);
    const IntegralEstimate est = integrate_1d(
        [&](double t) {
          const double b = delta * detail::psi(params, t);
          return detail::kval(params, (n + b) / (md + b));
        },
        integ);
    value_sum += est.value;
    err_sum += est.error_estimate;
    out.evaluations += est.evaluations;
  }
  out.value = value_sum / static_cast<double>(n - 2);
  out.error_estimate = err_sum / static_cast<double>(n - 2);
  return out;
}

// ---------------------------------------------------------------------------
// Bell-smoothed variants: outer integral over m in [2, n).

namespace detail {

struct OuterGrid {
  std::vector<double> m;
  std::vector<double> w;  // Simpson weights including the spacing factor
  int q = 0;
  double h = 0.0;
};

// Outer Simpson interval count: at least 20 intervals per unit of m and at
// least 10 per sigma, whichever is larger; an explicit request can only
// densify. Rounded to a multiple of 4 so the halved grid is Simpson-valid
// for the refinement error estimate.
inline int outer_interval_count(double len, double sigma, int requested) {
  const double rule = std::max(20.0 * len, 10.0 * len / sigma);
  int q = std::max(requested, static_cast<int>(std::ceil(rule)));
  q = std::max(q, 4);
  q += (4 - q % 4) % 4;
  return q;
}

inline OuterGrid make_outer_grid(double a, double b, double sigma,
                                 int requested) {
  OuterGrid g;
  g.q = outer_interval_count(b - a, sigma, requested);
  g.h = (b - a) / g.q;
  g.m.resize(g.q + 1);
  g.w.resize(g.q + 1);
  for (int i = 0; i <= g.q; ++i) {
    g.m[i] = (i == g.q) ? b : a + g.h * i;
    g.w[i] = simpson_raw_weight(i, g.q) * g.h / 3.0;
  }
  return g;
}

struct SmoothedAccum {
  double value = 0.0;
  double error = 0.0;
  std::uint64_t evaluations = 0;
};

// Shared outer loop of both smoothed variants: Simpson over m of
// comb(m) * inner(m), normalized by the comb mass on [2, n). The refinement
// error estimate reuses the stored node values on the halved grid. inner(m)
// must return an IntegralEstimate.
template <typename Inner>
SmoothedAccum smoothed_outer(double n, const SmoothParams& params,
                             int requested_outer_q, Inner&& inner) {
  if (!(n > 2.0)) throw argument_error("n must be > 2");
  const OuterGrid g = make_outer_grid(2.0, n, params.bell.sigma,
                                      requested_outer_q);
  std::vector<double> phi(g.q + 1), weighted(g.q + 1, 0.0);
  SmoothedAccum acc;
  for (int i = 0; i <= g.q; ++i) {
    phi[i] = comb(params, n, g.m[i]);
    if (phi[i] > 0.0) {
      const IntegralEstimate est = inner(g.m[i]);
      weighted[i] = phi[i] * est.value;
      acc.evaluations += est.evaluations;
    }
  }
  double mass_fine = 0.0, num_fine = 0.0;
  for (int i = 0; i <= g.q; ++i) {
    mass_fine += g.w[i] * phi[i];
    num_fine += g.w[i] * weighted[i];
  }
  if (!(mass_fine > 1e-12)) {
    throw numerical_error(
        "degenerate localization: bell comb mass on [2, n) is below 1e-12");
  }
  acc.value = num_fine / mass_fine;
  double mass_coarse = 0.0, num_coarse = 0.0;
  for (int j = 0; j <= g.q / 2; ++j) {
    const double w = simpson_raw_weight(j, g.q / 2) * 2.0 * g.h / 3.0;
    mass_coarse += w * phi[2 * j];
    num_coarse += w * weighted[2 * j];
  }
  if (mass_coarse > 1e-12) {
    acc.error = std::abs(acc.value - num_coarse / mass_coarse);
  }
  return acc;
}

}  // namespace detail

inline EvalResult p_smoothed_integral(double n, const SmoothParams& params,
                                      const IntegrationSpec& integ_inner,
                                      const IntegrationSpec& integ_outer) {
  validate_smooth_params(params);
  validate_integration_spec(integ_inner);
  const double delta = params.delta;
  const detail::SmoothedAccum acc = detail::smoothed_outer(
      n, params, integ_outer.q, [&](double m) {
        // The u coordinate of the inner triple integral is exactly constant,
        // so the (t, v) double integral is the same value.
        return integrate_2d(
            [&](double t, double v) {
              const double x = n + delta * detail::psi(params, t);
              const double y = m + delta * detail::psi(params, v);
              return detail::kval(params, x / y);
            },
            integ_inner);
      });
  return {n, Variant::kSmoothedIntegral, acc.value, acc.error,
          acc.evaluations, params};
}

inline EvalResult p_smoothed_1d(double n, const SmoothParams& params,
                                const IntegrationSpec& integ_inner,
                                const IntegrationSpec& integ_outer) {
  validate_smooth_params(params);
  validate_integration_spec(integ_inner);
  const double delta = params.delta;
  const detail::SmoothedAccum acc = detail::smoothed_outer(
      n, params, integ_outer.q, [&](double m) {
        return integrate_1d(
            [&](double t) {
              const double b = delta * detail::psi(params, t);
              return detail::kval(params, (n + b) / (m + b));
            },
            integ_inner);
      });
  return {n, Variant::kSmoothed1D, acc.value, acc.error, acc.evaluations,
          params};
}

// ---------------------------------------------------------------------------
// Parameter schedules and classification.

inline SmoothParams resolve_schedule(const ParamSchedule& schedule,
                                     const SmoothParams& base, double n) {
  SmoothParams out = base;
  switch (schedule.delta_rule) {
    case ParamSchedule::DeltaRule::kFixed:
      out.delta = schedule.fixed_delta;
      break;
    case ParamSchedule::DeltaRule::kInverseSquare:
      if (!(n > 1.0)) throw argument_error("inverse-square rule requires n > 1");
      out.delta = 1.0 / (n * n);
      break;
    case ParamSchedule::DeltaRule::kInverseLog:
      // log n must exceed 1 or delta leaves (0, 1).
      if (!(n > 2.718281828459045)) {
        throw argument_error("inverse-log rule requires n > e");
      }
      out.delta = 1.0 / std::log(n);
      break;
  }
  switch (schedule.epsilon_rule) {
    case ParamSchedule::EpsilonRule::kFixed:
      out.kernel_params.epsilon = schedule.fixed_epsilon;
      break;
    case ParamSchedule::EpsilonRule::kPower:
      if (!(schedule.power_c > 0.0)) {
        throw argument_error("power rule exponent c must be > 0");
      }
      if (!(n > 1.0)) throw argument_error("power rule requires n > 1");
      out.kernel_params.epsilon = std::pow(n, -schedule.power_c);
      break;
  }
  validate_smooth_params(out);
  return out;
}

// Evaluates any variant through one entry point. The smoothed variants use
// integ as the inner spec; their outer m-grid follows the density rule (an
// explicit outer request is available via the direct functions).
inline EvalResult evaluate_variant(double n, Variant variant,
                                   const SmoothParams& params,
                                   const IntegrationSpec& integ) {
  if (variant_requires_integer_n(variant)) {
    if (std::floor(n) != n) {
      throw argument_error(std::string(variant_name(variant)) +
                           " requires integer n");
    }
  }
  IntegrationSpec outer;  // density rule only
  outer.q = 2;
  switch (variant) {
    case Variant::kTripleSingle: return p_triple_single(n, params, integ);
    case Variant::kSummedTriple:
      return p_summed_triple(static_cast<long long>(n), params, integ);
    case Variant::kReduced1D:
      return p_reduced_1d(static_cast<long long>(n), params, integ);
    case Variant::kSmoothedIntegral:
      return p_smoothed_integral(n, params, integ, outer);
    case Variant::kSmoothed1D:
      return p_smoothed_1d(n, params, integ, outer);
  }
  throw argument_error("unknown variant");
}

struct Classification {
  EvalResult eval;
  bool likely_prime = false;
};

inline Classification classify(double n, Variant variant,
                               const SmoothParams& params,
                               const IntegrationSpec& integ,
                               double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw argument_error("threshold must lie in (0, 1)");
  }
  Classification c;
  c.eval = evaluate_variant(n, variant, params, integ);
  c.likely_prime = c.eval.value > threshold;
  return c;
}

}  // namespace smoothprime
