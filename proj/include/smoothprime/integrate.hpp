#pragma once

// Quadrature backends over the unit interval and unit cube.
//
// Contracts shared by every backend:
//   * a non-finite integrand value raises numerical_error carrying the node,
//   * evaluation counts report actual calls to the integrand,
//   * identical inputs (including seed) give bit-identical results at any
//     parallelism degree; Monte Carlo achieves this with counter-based
//     deviates summed in fixed-size chunks combined in index order.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smoothprime/errors.hpp"
#include "smoothprime/parallel.hpp"
#include "smoothprime/rng.hpp"

namespace smoothprime {

enum class IntegrationMethod {
  kMidpoint,
  kTrapezoid,
  kSimpson,
  kMonteCarlo,
  kAdaptive,
};

inline const char* integration_method_name(IntegrationMethod m) {
  switch (m) {
    case IntegrationMethod::kMidpoint: return "midpoint";
    case IntegrationMethod::kTrapezoid: return "trapezoid";
    case IntegrationMethod::kSimpson: return "simpson";
    case IntegrationMethod::kMonteCarlo: return "monte-carlo";
    case IntegrationMethod::kAdaptive: return "adaptive";
  }
  return "?";
}

inline std::optional<IntegrationMethod> parse_integration_method(
    const std::string& s) {
  if (s == "midpoint") return IntegrationMethod::kMidpoint;
  if (s == "trapezoid") return IntegrationMethod::kTrapezoid;
  if (s == "simpson") return IntegrationMethod::kSimpson;
  if (s == "monte-carlo") return IntegrationMethod::kMonteCarlo;
  if (s == "adaptive") return IntegrationMethod::kAdaptive;
  return std::nullopt;
}

struct IntegrationSpec {
  IntegrationMethod method = IntegrationMethod::kSimpson;
  int q = 32;                    // grid intervals for fixed rules
  long long samples = 10000;     // Monte Carlo sample count
  std::uint64_t seed = 42;       // Monte Carlo stream seed
  double abs_tol = 1e-6;         // adaptive target
  int max_subdivisions = 20;     // adaptive recursion depth limit
  unsigned jobs = 1;             // Monte Carlo chunk parallelism
};

struct IntegralEstimate {
  double value = 0.0;
  double error_estimate = 0.0;
  std::uint64_t evaluations = 0;
  bool converged = true;
  std::string note;
};

inline void validate_integration_spec(const IntegrationSpec& spec) {
  if (spec.q < 1) throw argument_error("grid interval count must be >= 1");
  if (spec.samples < 1) throw argument_error("sample count must be >= 1");
  if (!(spec.abs_tol > 0.0)) throw argument_error("abs_tol must be > 0");
  if (spec.max_subdivisions < 1) {
    throw argument_error("max_subdivisions must be >= 1");
  }
}

namespace detail {

template <typename F>
double checked_eval_1d(F& f, double x) {
  const double v = f(x);
  if (!std::isfinite(v)) {
    throw numerical_error("integrand evaluated to a non-finite value", x);
  }
  return v;
}

template <typename F>
double checked_eval_3d(F& f, double x, double y, double z) {
  const double v = f(x, y, z);
  if (!std::isfinite(v)) {
    throw numerical_error("integrand evaluated to a non-finite value at (" +
                              std::to_string(x) + ", " + std::to_string(y) +
                              ", " + std::to_string(z) + ")",
                          x);
  }
  return v;
}

// Composite Simpson weight for node i of q intervals (q even), without the
// 1/(3q) scale.
inline double simpson_raw_weight(int i, int q) {
  if (i == 0 || i == q) return 1.0;
  return (i % 2 == 1) ? 4.0 : 2.0;
}

// Composite Simpson over stored node values (q even), spacing h.
inline double simpson_of_values(const std::vector<double>& fs, double h) {
  const int q = static_cast<int>(fs.size()) - 1;
  double s = fs[0] + fs[q];
  for (int i = 1; i < q; ++i) s += simpson_raw_weight(i, q) * fs[i];
  return s * h / 3.0;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// One-dimensional backends over [0, 1].

template <typename F>
IntegralEstimate integrate_midpoint_1d(F&& f, int q) {
  IntegralEstimate out;
  double sum = 0.0, sum_even = 0.0, sum_odd = 0.0;
  int n_even = 0, n_odd = 0;
  for (int i = 0; i < q; ++i) {
    const double v = detail::checked_eval_1d(f, (i + 0.5) / q);
    sum += v;
    if (i % 2 == 0) {
      sum_even += v;
      ++n_even;
    } else {
      sum_odd += v;
      ++n_odd;
    }
  }
  out.value = sum / q;
  out.evaluations = static_cast<std::uint64_t>(q);
  if (q >= 2) {
    // The even- and odd-index sublattices are two interleaved midpoint-like
    // rules; half their disagreement estimates the error of the full rule.
    out.error_estimate = std::abs(sum_even / n_even - sum_odd / n_odd) / 2.0;
  } else {
    out.note = "single-node rule has no internal error estimate";
  }
  return out;
}

template <typename F>
IntegralEstimate integrate_trapezoid_1d(F&& f, int q) {
  IntegralEstimate out;
  std::vector<double> fs(q + 1);
  for (int i = 0; i <= q; ++i) {
    fs[i] = detail::checked_eval_1d(f, static_cast<double>(i) / q);
  }
  double s = 0.5 * (fs[0] + fs[q]);
  for (int i = 1; i < q; ++i) s += fs[i];
  out.value = s / q;
  out.evaluations = static_cast<std::uint64_t>(q) + 1;
  if (q >= 2) {
    // Coarse rule over every other node (plus the final node when q is odd);
    // composite trapezoid on the kept, possibly non-uniform partition.
    double coarse = 0.0;
    int prev = 0;
    for (int i = 2; i <= q; i += 2) {
      coarse += (fs[i] + fs[prev]) * (i - prev) / (2.0 * q);
      prev = i;
    }
    if (prev != q) coarse += (fs[q] + fs[prev]) * (q - prev) / (2.0 * q);
    out.error_estimate = std::abs(out.value - coarse);
  } else {
    out.note = "single-interval rule has no internal error estimate";
  }
  return out;
}

template <typename F>
IntegralEstimate integrate_simpson_1d(F&& f, int q) {
  IntegralEstimate out;
  if (q % 2 == 1) {
    ++q;
    out.note = "grid rounded up to an even interval count";
  }
  std::vector<double> fs(q + 1);
  for (int i = 0; i <= q; ++i) {
    fs[i] = detail::checked_eval_1d(f, static_cast<double>(i) / q);
  }
  out.value = detail::simpson_of_values(fs, 1.0 / q);
  out.evaluations = static_cast<std::uint64_t>(q) + 1;
  if (q % 4 == 0) {
    std::vector<double> coarse(q / 2 + 1);
    for (int j = 0; j <= q / 2; ++j) coarse[j] = fs[2 * j];
    out.error_estimate =
        std::abs(out.value - detail::simpson_of_values(coarse, 2.0 / q));
  } else {
    // Halved grid would be odd; compare against the trapezoid rule on the
    // even-index nodes instead.
    double t = 0.5 * (fs[0] + fs[q]);
    for (int j = 1; j < q / 2; ++j) t += fs[2 * j];
    out.error_estimate = std::abs(out.value - t * 2.0 / q);
  }
  return out;
}

namespace detail {

// Shared Monte Carlo accumulation. sampler(i) must return the checked
// integrand value of sample i. Chunked partial sums are combined in index
// order, so the result is bit-identical for any jobs value.
template <typename Sampler>
IntegralEstimate monte_carlo_mean(Sampler&& sampler, long long n,
                                  unsigned jobs) {
  constexpr long long kChunk = 4096;
  const long long nchunks = (n + kChunk - 1) / kChunk;
  std::vector<std::array<double, 2>> parts(
      static_cast<std::size_t>(nchunks), {0.0, 0.0});
  parallel_for(static_cast<std::size_t>(nchunks), jobs, [&](std::size_t c) {
    const long long lo = static_cast<long long>(c) * kChunk;
    const long long hi = std::min(n, lo + kChunk);
    double s = 0.0, s2 = 0.0;
    for (long long i = lo; i < hi; ++i) {
      const double v = sampler(i);
      s += v;
      s2 += v * v;
    }
    parts[c] = {s, s2};
  });
  double total = 0.0, total_sq = 0.0;
  for (const auto& p : parts) {
    total += p[0];
    total_sq += p[1];
  }
  IntegralEstimate out;
  out.value = total / n;
  out.evaluations = static_cast<std::uint64_t>(n);
  if (n > 1) {
    const double var =
        std::max(0.0, (total_sq - n * out.value * out.value) / (n - 1));
    out.error_estimate = std::sqrt(var / n);
  }
  return out;
}

}  // namespace detail

template <typename F>
IntegralEstimate integrate_monte_carlo_1d(F&& f, long long samples,
                                          std::uint64_t seed, unsigned jobs) {
  return detail::monte_carlo_mean(
      [&](long long i) {
        return detail::checked_eval_1d(f, uniform01_at(seed, i));
      },
      samples, jobs);
}

namespace detail {

template <typename F>
struct AdaptiveState {
  F& f;
  double abs_tol;
  int max_depth;
  std::uint64_t evals = 0;
  double err_sum = 0.0;
  bool converged = true;

  double eval(double x) {
    ++evals;
    return checked_eval_1d(f, x);
  }

  static double simpson3(double fa, double fm, double fb, double len) {
    return len * (fa + 4.0 * fm + fb) / 6.0;
  }

  // fa, fm, fb are the endpoint and midpoint values of [a, b]; s1 the
  // one-panel Simpson value. Accepts when the two-panel refinement moves the
  // value by at most 15 * abs_tol scaled by the interval length, so local
  // budgets sum to abs_tol over any partition of [0, 1].
  double refine(double a, double b, double fa, double fm, double fb, double s1,
                int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = eval(lm), frm = eval(rm);
    const double half = 0.5 * (b - a);
    const double sl = simpson3(fa, flm, fm, half);
    const double sr = simpson3(fm, frm, fb, half);
    const double s2 = sl + sr;
    const double d = s2 - s1;
    if (std::abs(d) <= 15.0 * abs_tol * (b - a) || depth >= max_depth) {
      if (std::abs(d) > 15.0 * abs_tol * (b - a)) converged = false;
      err_sum += std::abs(d) / 15.0;
      return s2 + d / 15.0;
    }
    return refine(a, m, fa, flm, fm, sl, depth + 1) +
           refine(m, b, fm, frm, fb, sr, depth + 1);
  }
};

}  // namespace detail

template <typename F>
IntegralEstimate integrate_adaptive_1d(F&& f, double abs_tol,
                                       int max_subdivisions) {
  detail::AdaptiveState<F> st{f, abs_tol, max_subdivisions};
  const double fa = st.eval(0.0), fm = st.eval(0.5), fb = st.eval(1.0);
  const double s1 = detail::AdaptiveState<F>::simpson3(fa, fm, fb, 1.0);
  IntegralEstimate out;
  out.value = st.refine(0.0, 1.0, fa, fm, fb, s1, 0);
  out.error_estimate = st.err_sum;
  out.evaluations = st.evals;
  out.converged = st.converged;
  if (!st.converged) {
    out.note = "maximum subdivision depth reached before tolerance";
  }
  return out;
}

// Integral of f over [0, 1].
template <typename F>
IntegralEstimate integrate_1d(F&& f, const IntegrationSpec& spec) {
  validate_integration_spec(spec);
  switch (spec.method) {
    case IntegrationMethod::kMidpoint:
      return integrate_midpoint_1d(f, spec.q);
    case IntegrationMethod::kTrapezoid:
      return integrate_trapezoid_1d(f, spec.q);
    case IntegrationMethod::kSimpson:
      return integrate_simpson_1d(f, spec.q);
    case IntegrationMethod::kMonteCarlo:
      return integrate_monte_carlo_1d(f, spec.samples, spec.seed, spec.jobs);
    case IntegrationMethod::kAdaptive:
      return integrate_adaptive_1d(f, spec.abs_tol, spec.max_subdivisions);
  }
  throw argument_error("unknown integration method");
}

// ---------------------------------------------------------------------------
// Tensor-product rules on the unit cube.

namespace detail {

// Relative weights plus one divisor per axis keep constants exact: the raw
// weights sum to exactly `scale` in floating point (small integers and 0.5).
struct Axis {
  std::vector<double> nodes;
  std::vector<double> weights;
  double scale = 1.0;
};

inline Axis grid_axis(IntegrationMethod method, int q) {
  Axis ax;
  switch (method) {
    case IntegrationMethod::kMidpoint:
      for (int i = 0; i < q; ++i) {
        ax.nodes.push_back((i + 0.5) / q);
        ax.weights.push_back(1.0);
      }
      ax.scale = q;
      return ax;
    case IntegrationMethod::kTrapezoid:
      for (int i = 0; i <= q; ++i) {
        ax.nodes.push_back(static_cast<double>(i) / q);
        ax.weights.push_back((i == 0 || i == q) ? 0.5 : 1.0);
      }
      ax.scale = q;
      return ax;
    case IntegrationMethod::kSimpson:
      for (int i = 0; i <= q; ++i) {
        ax.nodes.push_back(static_cast<double>(i) / q);
        ax.weights.push_back(simpson_raw_weight(i, q));
      }
      ax.scale = 3.0 * q;
      return ax;
    default:
      throw argument_error("tensor grids require a fixed-grid method");
  }
}

template <typename F>
double tensor3_pass(F& f, const Axis& ax, std::uint64_t* evals) {
  double sum = 0.0;
  const std::size_t n = ax.nodes.size();
  for (std::size_t i = 0; i < n; ++i) {
    double sj = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double sk = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        sk += ax.weights[k] *
              checked_eval_3d(f, ax.nodes[i], ax.nodes[j], ax.nodes[k]);
      }
      sj += ax.weights[j] * sk;
    }
    sum += ax.weights[i] * sj;
  }
  *evals += static_cast<std::uint64_t>(n) * n * n;
  return sum / (ax.scale * ax.scale * ax.scale);
}

template <typename F2>
double tensor2_pass(F2& f, const Axis& ax, std::uint64_t* evals) {
  double sum = 0.0;
  const std::size_t n = ax.nodes.size();
  for (std::size_t i = 0; i < n; ++i) {
    double sj = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = f(ax.nodes[i], ax.nodes[j]);
      if (!std::isfinite(v)) {
        throw numerical_error("integrand evaluated to a non-finite value",
                              ax.nodes[i]);
      }
      sj += ax.weights[j] * v;
    }
    sum += ax.weights[i] * sj;
  }
  *evals += static_cast<std::uint64_t>(n) * n;
  return sum / (ax.scale * ax.scale);
}

// True when the same method admits a halved grid for a refinement estimate.
inline bool has_coarse_grid(IntegrationMethod method, int q) {
  if (q < 2) return false;
  if (method == IntegrationMethod::kSimpson) return q % 4 == 0;
  return q % 2 == 0;
}

}  // namespace detail

// Integral of f over the unit cube. Fixed-grid methods add a half-resolution
// second pass for the error estimate when the halved grid is valid, and its
// evaluations are included in the count. Adaptive subdivision is
// one-dimensional only.
template <typename F>
IntegralEstimate integrate_3d(F&& f, const IntegrationSpec& spec) {
  validate_integration_spec(spec);
  if (spec.method == IntegrationMethod::kAdaptive) {
    throw argument_error("adaptive integration is one-dimensional only");
  }
  if (spec.method == IntegrationMethod::kMonteCarlo) {
    return detail::monte_carlo_mean(
        [&](long long i) {
          const std::uint64_t base = 3 * static_cast<std::uint64_t>(i);
          return detail::checked_eval_3d(f, uniform01_at(spec.seed, base),
                                         uniform01_at(spec.seed, base + 1),
                                         uniform01_at(spec.seed, base + 2));
        },
        spec.samples, spec.jobs);
  }

  int q = spec.q;
  IntegralEstimate out;
  if (spec.method == IntegrationMethod::kSimpson && q % 2 == 1) {
    ++q;
    out.note = "grid rounded up to an even interval count";
  }
  const detail::Axis fine = detail::grid_axis(spec.method, q);
  out.value = detail::tensor3_pass(f, fine, &out.evaluations);
  if (detail::has_coarse_grid(spec.method, q)) {
    const detail::Axis coarse = detail::grid_axis(spec.method, q / 2);
    const double cv = detail::tensor3_pass(f, coarse, &out.evaluations);
    out.error_estimate = std::abs(out.value - cv);
  } else {
    out.note = out.note.empty() ? "no refinement estimate for this grid"
                                : out.note;
  }
  return out;
}

// Fixed-grid integral of f over the unit square. Used where an inner
// coordinate of a triple integral separates out exactly.
template <typename F2>
IntegralEstimate integrate_2d_grid(F2&& f, IntegrationMethod method, int q) {
  if (q < 1) throw argument_error("grid interval count must be >= 1");
  IntegralEstimate out;
  if (method == IntegrationMethod::kSimpson && q % 2 == 1) {
    ++q;
    out.note = "grid rounded up to an even interval count";
  }
  const detail::Axis fine = detail::grid_axis(method, q);
  out.value = detail::tensor2_pass(f, fine, &out.evaluations);
  if (detail::has_coarse_grid(method, q)) {
    const detail::Axis coarse = detail::grid_axis(method, q / 2);
    const double cv = detail::tensor2_pass(f, coarse, &out.evaluations);
    out.error_estimate = std::abs(out.value - cv);
  }
  return out;
}

// Method-dispatching unit-square integral; adaptive subdivision stays
// one-dimensional only.
template <typename F2>
IntegralEstimate integrate_2d(F2&& f, const IntegrationSpec& spec) {
  validate_integration_spec(spec);
  if (spec.method == IntegrationMethod::kAdaptive) {
    throw argument_error("adaptive integration is one-dimensional only");
  }
  if (spec.method == IntegrationMethod::kMonteCarlo) {
    return detail::monte_carlo_mean(
        [&](long long i) {
          const std::uint64_t base = 2 * static_cast<std::uint64_t>(i);
          const double x = uniform01_at(spec.seed, base);
          const double y = uniform01_at(spec.seed, base + 1);
          const double v = f(x, y);
          if (!std::isfinite(v)) {
            throw numerical_error("integrand evaluated to a non-finite value",
                                  x);
          }
          return v;
        },
        spec.samples, spec.jobs);
  }
  return integrate_2d_grid(f, spec.method, spec.q);
}

}  // namespace smoothprime
