#pragma once

// Resonance analysis: the reordered integral, localized moments mu_r(k; t),
// the truncated-moment amplitudes A_k(n), the moment-based composite
// estimate, and soft compositeness detection.
//
// A resonance at integer k means the perturbed ratio z(m, t) =
// (n + delta*psi(t)) / (m + delta*psi(t)) sits near k for m near n/k. When k
// divides n the bell at m = n/k pins z to the integer, the kernel suppresses
// the neighborhood, and A_k dips far below its bell-mass baseline.
//
// The resonance ops accept delta = 0 (the unperturbed path); the P variants
// themselves require delta > 0.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "smoothprime/errors.hpp"
#include "smoothprime/integrate.hpp"
#include "smoothprime/kernels.hpp"
#include "smoothprime/primality.hpp"

namespace smoothprime {

struct MomentSpec {
  int truncation_order = 4;  // highest retained Taylor order R
  int k_min = 2;
  int k_max = 2;
};

inline void validate_moment_spec(const MomentSpec& spec) {
  if (spec.truncation_order < 0 || spec.truncation_order > 8) {
    throw argument_error("truncation order must lie in [0, 8]");
  }
  if (spec.k_min < 2) throw argument_error("k_min must be >= 2");
  if (spec.k_min > spec.k_max) throw argument_error("k_min must be <= k_max");
}

struct ResonanceEntry {
  int k = 0;
  double amplitude = 0.0;
  double baseline = 0.0;       // bell-mass share times the null kernel mean
  double relative_drop = 0.0;  // (baseline - amplitude) / baseline
  double mass_share = 0.0;     // window comb mass over total comb mass
  bool excluded = false;       // empty window or mass below the floor
};

struct ResonanceMap {
  double n = 0.0;
  std::vector<ResonanceEntry> entries;  // ascending k
  SmoothParams params;
  MomentSpec spec;
  double comb_mass = 0.0;  // normalization Z over [2, n)
};

namespace detail {

// delta = 0 is admissible here, unlike in the P variants.
inline void validate_resonance_params(const SmoothParams& sp) {
  if (!(sp.delta >= 0.0 && sp.delta < 1.0)) {
    throw argument_error("delta must lie in [0, 1)");
  }
  validate_kernel_params(sp.kernel_params);
  validate_bell_choice(sp.bell);
}

inline double factorial_of(int r) {
  double f = 1.0;
  for (int i = 2; i <= r; ++i) f *= i;
  return f;
}

// K^(r)(0) / r! for r = 0..order. By periodicity the derivatives at every
// integer equal those at 0, so they are computed once.
inline std::vector<double> kernel_taylor_coeffs(const SmoothParams& sp,
                                                int order) {
  if (order > 4) {
    throw argument_error(
        "kernel derivatives are available to order 4; reduce the truncation "
        "order");
  }
  std::vector<double> c(order + 1);
  for (int r = 0; r <= order; ++r) {
    c[r] = kernel_derivative_at(sp.kernel, sp.kernel_params, 0.0, r) /
           factorial_of(r);
  }
  return c;
}

struct Window {
  double a = 0.0, b = 0.0;
};

// m-window of resonance k: n/k plus/minus the bell truncation width mapped
// through the inverse ratio (a z-ball of radius ~ trunc*sigma around k pulls
// back to an m-interval of half-width ~ trunc*sigma*n/k^2), clipped to the
// comb domain [2, n).
inline std::optional<Window> resonance_window(double n, int k,
                                              const BellChoice& bell) {
  const double center = n / k;
  const double half = bell.truncation_radius * bell.sigma * n / (k * k);
  const double a = std::max(2.0, center - half);
  const double b = std::min(n, center + half);
  if (!(a < b)) return std::nullopt;
  return Window{a, b};
}

// Simpson grid over a window at the comb density rule; comb values cached.
struct WindowGrid {
  std::vector<double> m;
  std::vector<double> w;
  std::vector<double> phi;
  double mass = 0.0;
};

inline WindowGrid window_grid(double n, const Window& win,
                              const SmoothParams& params, int requested_q) {
  WindowGrid g;
  const int q =
      outer_interval_count(win.b - win.a, params.bell.sigma, requested_q);
  const double h = (win.b - win.a) / q;
  g.m.resize(q + 1);
  g.w.resize(q + 1);
  g.phi.resize(q + 1);
  for (int i = 0; i <= q; ++i) {
    g.m[i] = (i == q) ? win.b : win.a + h * i;
    g.w[i] = simpson_raw_weight(i, q) * h / 3.0;
    g.phi[i] = comb(params, n, g.m[i]);
    g.mass += g.w[i] * g.phi[i];
  }
  return g;
}

// mu_0..mu_R of resonance k at fixed t, over a prepared window grid.
inline void moments_at(const WindowGrid& g, double n, int k, double t,
                       const SmoothParams& params, int order,
                       std::vector<double>* mu) {
  mu->assign(order + 1, 0.0);
  const double b = params.delta * bump_eval(params.bump, t);
  for (std::size_t i = 0; i < g.m.size(); ++i) {
    const double dev = (n + b) / (g.m[i] + b) - k;
    double powr = g.w[i] * g.phi[i];
    for (int r = 0; r <= order; ++r) {
      (*mu)[r] += powr;
      powr *= dev;
    }
  }
}

// Total comb mass Z over [2, n) on the density-rule grid, shared by the
// smoothed variants and the resonance normalization.
inline double comb_mass_total(double n, const SmoothParams& params) {
  if (!(n > 2.0)) throw argument_error("n must be > 2");
  const OuterGrid g = make_outer_grid(2.0, n, params.bell.sigma, 0);
  double z = 0.0;
  for (int i = 0; i <= g.q; ++i) z += g.w[i] * comb(params, n, g.m[i]);
  return z;
}

// Mass of one isolated bell, sigma * integral of the profile.
inline double single_bell_mass(const BellChoice& bell) {
  const double r = bell_support_radius(bell);
  const int q = 400;
  std::vector<double> vals(q + 1);
  for (int i = 0; i <= q; ++i) {
    vals[i] = bell_profile_eval(bell, -r + 2.0 * r * i / q);
  }
  return bell.sigma * simpson_of_values(vals, 2.0 * r / q);
}

}  // namespace detail

// r-th localized moment of resonance k at fixed t:
// integral over the k-window of comb(m) * (z(m, t) - k)^r dm.
// An empty window yields exactly 0.
inline double localized_moment(int r, int k, double t, double n,
                               const SmoothParams& params,
                               const IntegrationSpec& integ_m) {
  detail::validate_resonance_params(params);
  if (r < 0 || r > 8) throw argument_error("moment order must lie in [0, 8]");
  if (k < 2) throw argument_error("resonance index k must be >= 2");
  if (!(t >= 0.0 && t <= 1.0)) throw argument_error("t must lie in [0, 1]");
  const auto win = detail::resonance_window(n, k, params.bell);
  if (!win) return 0.0;
  const detail::WindowGrid g = detail::window_grid(n, *win, params, integ_m.q);
  std::vector<double> mu;
  detail::moments_at(g, n, k, t, params, r, &mu);
  return mu[r];
}

// Truncated-moment amplitude A_k(n) = (1/Z) * integral over t of
// sum_{r<=R} K^(r)(0)/r! * mu_r(k; t). Empty windows give 0.
inline double resonance_amplitude(int k, double n, const SmoothParams& params,
                                  const MomentSpec& spec,
                                  const IntegrationSpec& integ_t) {
  detail::validate_resonance_params(params);
  validate_moment_spec(spec);
  if (k < spec.k_min || k > spec.k_max) {
    throw argument_error("k must lie in [k_min, k_max]");
  }
  const auto win = detail::resonance_window(n, k, params.bell);
  if (!win) return 0.0;
  const double z_total = detail::comb_mass_total(n, params);
  if (!(z_total > 1e-12)) {
    throw numerical_error(
        "degenerate localization: bell comb mass on [2, n) is below 1e-12");
  }
  const std::vector<double> coeffs =
      detail::kernel_taylor_coeffs(params, spec.truncation_order);
  const detail::WindowGrid g = detail::window_grid(n, *win, params, 0);

  int qt = std::max(2, integ_t.q);
  if (qt % 2 == 1) ++qt;
  std::vector<double> integrand(qt + 1);
  std::vector<double> mu;
  for (int i = 0; i <= qt; ++i) {
    const double t = static_cast<double>(i) / qt;
    detail::moments_at(g, n, k, t, params, spec.truncation_order, &mu);
    double s = 0.0;
    for (int r = 0; r <= spec.truncation_order; ++r) s += coeffs[r] * mu[r];
    integrand[i] = s;
  }
  return detail::simpson_of_values(integrand, 1.0 / qt) / z_total;
}

// Full map over k = k_min..k_max. Windows whose comb mass falls below
// mass_floor_frac of a single bell's mass are flagged excluded: they carry
// too little weight for their relative drop to mean anything.
inline ResonanceMap resonance_map(double n, const SmoothParams& params,
                                  const MomentSpec& spec,
                                  const IntegrationSpec& integ_t,
                                  double mass_floor_frac = 0.01) {
  detail::validate_resonance_params(params);
  validate_moment_spec(spec);
  if (spec.k_max > static_cast<int>(std::floor(n / 2.0)) + 1) {
    throw argument_error(
        "k_max must be <= floor(n/2)+1; larger k have empty windows");
  }
  ResonanceMap map;
  map.n = n;
  map.params = params;
  map.spec = spec;
  map.comb_mass = detail::comb_mass_total(n, params);
  if (!(map.comb_mass > 1e-12)) {
    throw numerical_error(
        "degenerate localization: bell comb mass on [2, n) is below 1e-12");
  }
  const std::vector<double> coeffs =
      detail::kernel_taylor_coeffs(params, spec.truncation_order);
  const double floor_mass =
      mass_floor_frac * detail::single_bell_mass(params.bell);
  const double trunc_width =
      params.bell.truncation_radius * params.bell.sigma;

  int qt = std::max(2, integ_t.q);
  if (qt % 2 == 1) ++qt;
  std::vector<double> integrand(qt + 1);
  std::vector<double> mu;

  for (int k = spec.k_min; k <= spec.k_max; ++k) {
    ResonanceEntry e;
    e.k = k;
    const auto win = detail::resonance_window(n, k, params.bell);
    if (!win) {
      e.excluded = true;
      map.entries.push_back(e);
      continue;
    }
    const detail::WindowGrid g = detail::window_grid(n, *win, params, 0);
    e.mass_share = g.mass / map.comb_mass;
    if (g.mass < floor_mass) {
      e.excluded = true;
      map.entries.push_back(e);
      continue;
    }
    for (int i = 0; i <= qt; ++i) {
      const double t = static_cast<double>(i) / qt;
      detail::moments_at(g, n, k, t, params, spec.truncation_order, &mu);
      double s = 0.0;
      for (int r = 0; r <= spec.truncation_order; ++r) s += coeffs[r] * mu[r];
      integrand[i] = s;
    }
    e.amplitude =
        detail::simpson_of_values(integrand, 1.0 / qt) / map.comb_mass;

    // Null model: no resonance alignment, deviation uniform on [-B, B]. B is
    // the bell truncation width capped by k^2/(2n), the largest deviation the
    // nearest integer ratio can reach inside the window.
    const double b_cap = std::min(trunc_width, k * k / (2.0 * n));
    double null_mean = 0.0;
    double bpow = 1.0;
    for (int r = 0; r <= spec.truncation_order; ++r) {
      if (r % 2 == 0) null_mean += coeffs[r] * bpow / (r + 1);
      bpow *= b_cap;
    }
    e.baseline = e.mass_share * null_mean;
    if (e.baseline > 0.0) {
      e.relative_drop = (e.baseline - e.amplitude) / e.baseline;
    }
    map.entries.push_back(e);
  }
  return map;
}

struct CompositeSignal {
  int k = 0;
  long long divisor_hint = 0;  // round(n / k)
};

// Largest relative drop above the threshold wins; ties go to the smaller k.
// Returns empty when no non-excluded entry clears the threshold (the likely
// prime outcome).
inline std::optional<CompositeSignal> detect_composite(const ResonanceMap& map,
                                                       double rel_threshold) {
  if (!(rel_threshold > 0.0 && rel_threshold < 1.0)) {
    throw argument_error("rel_threshold must lie in (0, 1)");
  }
  if (map.entries.empty()) throw argument_error("resonance map is empty");
  std::optional<CompositeSignal> best;
  double best_drop = 0.0;
  for (const ResonanceEntry& e : map.entries) {
    if (e.excluded) continue;
    if (e.relative_drop <= rel_threshold) continue;
    if (!best || e.relative_drop > best_drop + 1e-12) {
      best = CompositeSignal{e.k, std::llround(map.n / e.k)};
      best_drop = e.relative_drop;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Moment-based composite estimate.

enum class PsiMode {
  kPeak,        // evaluate at psi = 1
  kMeanSquare,  // replace psi^2 by its mean 3/8 (sine-squared bump)
  kIntegrate,   // integrate psi^2 over t numerically for the configured bump
};

struct GivenConstants {
  std::optional<double> phi_ratio;  // Phi_sigma(d) / integral of Phi_sigma
  std::optional<double> k2;         // K''(0)
};

// Truncated estimate P(n) ~ 1 - phi_ratio * [K(0) + (K''(0)/2)(delta*psi/d)^2]
// for a known divisor d of n. Supplied constants override the computed ones.
inline double moment_estimate(long long n, long long d,
                              const SmoothParams& params,
                              const GivenConstants& given = {},
                              PsiMode mode = PsiMode::kPeak) {
  detail::validate_resonance_params(params);
  if (d < 2 || d >= n) throw argument_error("d must satisfy 2 <= d < n");
  if (n % d != 0) throw argument_error("d must divide n");

  const double k0 = kernel_eval(params.kernel, params.kernel_params, 0.0);
  const double k2 =
      given.k2 ? *given.k2
               : kernel_derivative_at(params.kernel, params.kernel_params,
                                      0.0, 2);
  double phi_ratio;
  if (given.phi_ratio) {
    phi_ratio = *given.phi_ratio;
  } else {
    const double nd = static_cast<double>(n);
    const double z = detail::comb_mass_total(nd, params);
    if (!(z > 1e-12)) {
      throw numerical_error(
          "degenerate localization: bell comb mass on [2, n) is below 1e-12");
    }
    phi_ratio = detail::comb(params, nd, static_cast<double>(d)) / z;
  }

  double psi_sq = 1.0;
  switch (mode) {
    case PsiMode::kPeak:
      psi_sq = 1.0;
      break;
    case PsiMode::kMeanSquare:
      psi_sq = 0.375;
      break;
    case PsiMode::kIntegrate: {
      IntegrationSpec s;
      s.q = 64;
      psi_sq = integrate_1d(
                   [&](double t) {
                     const double p = bump_eval(params.bump, t);
                     return p * p;
                   },
                   s)
                   .value;
      break;
    }
  }
  const double ratio = params.delta / static_cast<double>(d);
  return 1.0 - phi_ratio * (k0 + 0.5 * k2 * ratio * ratio * psi_sq);
}

// ---------------------------------------------------------------------------
// Reordered form of p_smoothed_1d: t outermost, m innermost. Same integral
// by Fubini; an independent code path used as a cross-check.

inline EvalResult p_reordered(double n, const SmoothParams& params,
                              const IntegrationSpec& integ) {
  validate_smooth_params(params);
  validate_integration_spec(integ);
  if (!(n > 2.0)) throw argument_error("n must be > 2");

  const detail::OuterGrid g =
      detail::make_outer_grid(2.0, n, params.bell.sigma, 0);
  std::vector<double> phi(g.q + 1);
  double z_total = 0.0;
  for (int i = 0; i <= g.q; ++i) {
    phi[i] = detail::comb(params, n, g.m[i]);
    z_total += g.w[i] * phi[i];
  }
  if (!(z_total > 1e-12)) {
    throw numerical_error(
        "degenerate localization: bell comb mass on [2, n) is below 1e-12");
  }

  int qt = std::max(4, integ.q);
  qt += (4 - qt % 4) % 4;
  std::vector<double> inner(qt + 1);
  std::uint64_t evals = 0;
  for (int i = 0; i <= qt; ++i) {
    const double t = static_cast<double>(i) / qt;
    const double b = params.delta * detail::psi(params, t);
    double s = 0.0;
    for (int j = 0; j <= g.q; ++j) {
      if (phi[j] == 0.0) continue;
      s += g.w[j] * phi[j] * detail::kval(params, (n + b) / (g.m[j] + b));
      ++evals;
    }
    inner[i] = s;
  }
  const double fine = detail::simpson_of_values(inner, 1.0 / qt) / z_total;
  std::vector<double> coarse(qt / 2 + 1);
  for (int j = 0; j <= qt / 2; ++j) coarse[j] = inner[2 * j];
  const double coarse_val =
      detail::simpson_of_values(coarse, 2.0 / qt) / z_total;

  EvalResult out{n, Variant::kSmoothed1D, fine, std::abs(fine - coarse_val),
                 evals, params};
  return out;
}

// ---------------------------------------------------------------------------
// Documented analysis configurations.
//
// A truncation at R = 4 can only represent kernels whose shape lives in the
// first few derivatives. The sharp screening defaults (p = 8, epsilon = 1e-5)
// have all derivatives of order <= 4 equal to zero at integers (the first
// nonzero order is 2p), which makes every amplitude degenerate. The analysis
// therefore runs on wide p = 1 kernels; both configurations below are
// validated in the test suite.

// Moment-expansion configuration: full-range maps, moment sums, and the CLI
// resonance command. Wide kernel, moderate localization.
inline SmoothParams resonance_moment_params() {
  SmoothParams p;
  p.kernel = KernelFamily::kSine;
  p.kernel_params.epsilon = 400.0;
  p.kernel_params.p = 1;
  p.delta = 0.05;
  p.bell.family = BellFamily::kGaussian;
  p.bell.sigma = 0.05;
  return p;
}

// Detection configuration: the composite scan restricted to k <= sqrt(n),
// where a composite's cofactor bell sits exactly on the resonance and the
// window always covers it. Tight localization, small perturbation.
inline SmoothParams resonance_detection_params() {
  SmoothParams p;
  p.kernel = KernelFamily::kSine;
  p.kernel_params.epsilon = 1.0;
  p.kernel_params.p = 1;
  p.delta = 0.01;
  p.bell.family = BellFamily::kGaussian;
  p.bell.sigma = 0.005;
  return p;
}

// k-range of the detection scan for a given n.
inline MomentSpec detection_moment_spec(double n) {
  MomentSpec spec;
  spec.truncation_order = 4;
  spec.k_min = 2;
  spec.k_max = std::max(2, static_cast<int>(std::floor(std::sqrt(n))));
  return spec;
}

}  // namespace smoothprime
