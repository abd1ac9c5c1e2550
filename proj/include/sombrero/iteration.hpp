#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sombrero/errors.hpp"
#include "sombrero/quadrature.hpp"
#include "sombrero/trial.hpp"

namespace sombrero {

// Both schemes refine a trial phi (solving the problem with V - h, energy gE0)
// towards psi = f phi = exp(-tau) phi, with E = gE0 + Delta.
//
//   f-iteration:    Delta_n = <h f_{n-1}> / <f_{n-1}>
//                   (w f_n')' = 2 w (h - Delta_n) f_{n-1}
//   tau-iteration:  Delta_n = <h - tau'_{n-1}^2 / 2>
//                   tau'_n = (2/w) int_0^r w [(Delta_n - h) + tau'_{n-1}^2 / 2]
//
// where <.> averages over the measure w = r^{2k} phi^2.

enum class Method { f, tau };
enum class Anchor { zero, infinity };  // normalization point r_C of f_n

struct IterationState {
  int order = 0;
  double delta = 0.0;
  std::vector<double> profile;  // f_n (method f) or tau'_n (method tau) at grid nodes
  Method method = Method::tau;

  static IterationState initial(const RadialGrid& grid, Method m) {
    return {0, 0.0, std::vector<double>(grid.size(), m == Method::f ? 1.0 : 0.0), m};
  }
};

namespace detail {

inline void check_len(const RadialGrid& grid, std::span<const double> v, const char* what) {
  if (v.size() != grid.size()) throw ParameterError(std::string(what) + " length does not match grid");
}

inline double checked_ratio(double num, double den) {
  if (std::abs(den) < 1e-300) throw NumericalError("degenerate denominator in energy correction");
  return num / den;
}

// Integral of w * density over [0, r_i]; past the weight peak it is taken as
// -(integral over [r_i, r_max]), valid because the full integral vanishes.
inline std::vector<double> balanced_inner(const RadialGrid& grid, std::span<const double> density) {
  auto pre = cumulative_prefix(grid, density);
  const auto suf = cumulative_suffix(grid, density);
  for (std::size_t i = grid.peak + 1; i < grid.size(); ++i) pre[i] = -suf[i];
  return pre;
}

// 2 * inner / w, i.e. the derivative the inner integral induces; 0 where w = 0.
inline std::vector<double> flux_over_weight(const RadialGrid& grid, std::span<const double> inner) {
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.weight[i] == 0.0) continue;
    out[i] = 2.0 * inner[i] / grid.weight[i];
    if (!std::isfinite(out[i]))
      throw NumericalError("outer integrand overflows at r = " + std::to_string(grid.nodes[i]) +
                           "; reduce r_max or raise the point count");
  }
  return out;
}

}  // namespace detail

inline double delta_f(const RadialGrid& grid, std::span<const double> h, std::span<const double> f_prev) {
  detail::check_len(grid, h, "h");
  detail::check_len(grid, f_prev, "f_prev");
  std::vector<double> hf(grid.size());
  for (std::size_t i = 0; i < hf.size(); ++i) hf[i] = h[i] * f_prev[i];
  return detail::checked_ratio(integrate_scaled(grid, hf), integrate_scaled(grid, f_prev));
}

/// Outer integral of the f-update beyond r_max, for normalization at infinity.
///
/// On the tail the inner integral is dominated by the decay of w, giving
/// 2 (Delta - h) f / (log w)'. It is integrated on y = r_max / t, t in (0, 1].
struct OuterTail {
  std::vector<double> kernel;  // Simpson weight * dy/dt * 2 / (log w)'
  std::vector<double> h;

  double eval(double delta, double f_end) const {
    double s = 0.0;
    for (std::size_t i = 0; i < kernel.size(); ++i) s += kernel[i] * (delta - h[i]);
    return s * f_end;
  }
};

template <TrialFunction T>
OuterTail make_outer_tail(const RadialGrid& grid, const T& trial, std::size_t intervals = 512) {
  const ProblemParams p = trial.params();
  OuterTail tail;
  tail.kernel.assign(intervals + 1, 0.0);
  tail.h.assign(intervals + 1, 0.0);
  const double dt = 1.0 / static_cast<double>(intervals);
  for (std::size_t i = 1; i <= intervals; ++i) {
    const double t = dt * static_cast<double>(i);
    const double y = grid.r_max / t;
    const double dlog_w = 2.0 * p.k / y + 2.0 * trial.dlog_phi(y);
    if (!(dlog_w < 0.0)) throw NumericalError("measure is not decaying beyond r_max");
    const double simpson = (i == intervals ? 1.0 : (i % 2 ? 4.0 : 2.0)) * dt / 3.0;
    tail.kernel[i] = simpson * (grid.r_max / (t * t)) * 2.0 / dlog_w;
    tail.h[i] = trial.h(y);
  }
  return tail;
}

inline std::vector<double> update_f(const RadialGrid& grid, std::span<const double> h,
                                    std::span<const double> f_prev, double delta, Anchor anchor,
                                    const OuterTail* tail = nullptr) {
  detail::check_len(grid, h, "h");
  detail::check_len(grid, f_prev, "f_prev");
  std::vector<double> density(grid.size());
  for (std::size_t i = 0; i < density.size(); ++i) density[i] = (delta - h[i]) * f_prev[i];
  const auto flux = detail::flux_over_weight(grid, detail::balanced_inner(grid, density));

  std::vector<double> f(grid.size());
  if (anchor == Anchor::zero) {
    const auto outer = simpson_prefix(grid.step, flux);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = 1.0 - outer[i];
  } else {
    const auto outer = simpson_suffix(grid.step, flux);
    const double beyond = tail ? tail->eval(delta, f_prev.back()) : 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = 1.0 + outer[i] + beyond;
  }
  return f;
}

/// The denominator is the grid's cached total weight.
inline double delta_tau(const RadialGrid& grid, std::span<const double> h, std::span<const double> tp_prev) {
  detail::check_len(grid, h, "h");
  detail::check_len(grid, tp_prev, "tau'_prev");
  std::vector<double> d(grid.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = h[i] - 0.5 * tp_prev[i] * tp_prev[i];
  return detail::checked_ratio(integrate_scaled(grid, d), grid.total_scaled);
}

inline std::vector<double> update_tau(const RadialGrid& grid, std::span<const double> h,
                                      std::span<const double> tp_prev, double delta) {
  detail::check_len(grid, h, "h");
  detail::check_len(grid, tp_prev, "tau'_prev");
  std::vector<double> density(grid.size());
  for (std::size_t i = 0; i < density.size(); ++i)
    density[i] = (delta - h[i]) + 0.5 * tp_prev[i] * tp_prev[i];
  return detail::flux_over_weight(grid, detail::balanced_inner(grid, density));
}

inline IterationState advance(const RadialGrid& grid, std::span<const double> h, const IterationState& prev,
                              Anchor anchor = Anchor::zero, const OuterTail* tail = nullptr) {
  IterationState next;
  next.order = prev.order + 1;
  next.method = prev.method;
  if (prev.method == Method::f) {
    next.delta = delta_f(grid, h, prev.profile);
    next.profile = update_f(grid, h, prev.profile, next.delta, anchor, tail);
  } else {
    next.delta = delta_tau(grid, h, prev.profile);
    next.profile = update_tau(grid, h, prev.profile, next.delta);
  }
  return next;
}

struct SolveOptions {
  int orders = 12;
  double tol = 1e-4;
  bool stop_at_tolerance = true;  // false: always run `orders` steps
  std::size_t n_points = kDefaultPoints;
  std::optional<double> r_max;
  Anchor anchor = Anchor::zero;
  bool tail_at_infinity = true;  // Anchor::infinity normalizes at true infinity
  TrialOptions trial;
};

struct SolveResult {
  std::vector<double> energies;  // E_0 .. E_n, E_n = gE0 + Delta_n
  bool converged = false;
  int iterations_used = 0;
  std::vector<double> nodes;
  std::vector<double> phi;  // peak-normalized trial function
  std::vector<double> psi;  // peak-normalized refined wave function
  std::variant<std::monostate, TrialOneCoeffs, TrialTwoConfig> trial_meta;
  double r_max = 0.0;
};

namespace detail {

inline std::vector<double> peak_normalized(std::vector<double> v) {
  double peak = 0.0;
  for (double x : v) peak = std::max(peak, std::abs(x));
  if (!(peak > 0.0) || !std::isfinite(peak)) throw NumericalError("wave function vanishes or overflows");
  for (double& x : v) x /= peak;
  return v;
}

}  // namespace detail

template <TrialFunction T>
SolveResult solve_trial(const T& trial, Method method, const SolveOptions& opts = {}) {
  if (opts.orders < 1) throw ParameterError("orders must be >= 1");
  if (!(opts.tol > 0.0)) throw ParameterError("tolerance must be positive");
  const ProblemParams p = trial.params();
  auto log_phi = [&](double r) { return trial.log_phi(r); };
  const RadialGrid grid = build_grid(p, log_phi, {opts.n_points, opts.r_max, trial.kink(), kDecayBudget});

  std::vector<double> h(grid.size());
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = trial.h(grid.nodes[i]);
  for (double v : h)
    if (!std::isfinite(v)) throw NumericalError("potential correction h is not finite on the grid");

  std::optional<OuterTail> tail;
  if (method == Method::f && opts.anchor == Anchor::infinity && opts.tail_at_infinity)
    tail = make_outer_tail(grid, trial);

  SolveResult res;
  res.r_max = grid.r_max;
  res.nodes = grid.nodes;
  res.energies.push_back(trial.base_energy());

  IterationState state = IterationState::initial(grid, method);
  const bool exact = std::all_of(h.begin(), h.end(), [](double v) { return v == 0.0; });
  if (exact) {
    res.converged = true;
  } else {
    for (int n = 1; n <= opts.orders; ++n) {
      state = advance(grid, h, state, opts.anchor, tail ? &*tail : nullptr);
      res.energies.push_back(res.energies.front() + state.delta);
      res.iterations_used = n;
      const double change = std::abs(res.energies[n] - res.energies[n - 1]);
      res.converged = change < opts.tol;
      if (res.converged && opts.stop_at_tolerance) break;
    }
  }

  std::vector<double> lphi(grid.size());
  for (std::size_t i = 0; i < lphi.size(); ++i) lphi[i] = trial.log_phi(grid.nodes[i]);
  const double top = *std::max_element(lphi.begin(), lphi.end());
  res.phi.resize(grid.size());
  for (std::size_t i = 0; i < lphi.size(); ++i) res.phi[i] = std::exp(lphi[i] - top);

  if (method == Method::f) {
    res.psi.resize(grid.size());
    for (std::size_t i = 0; i < lphi.size(); ++i) res.psi[i] = state.profile[i] * res.phi[i];
  } else {
    const auto tau = simpson_prefix(grid.step, state.profile);
    std::vector<double> lpsi(grid.size());
    for (std::size_t i = 0; i < lpsi.size(); ++i) lpsi[i] = lphi[i] - tau[i];
    const double m = *std::max_element(lpsi.begin(), lpsi.end());
    res.psi.resize(grid.size());
    for (std::size_t i = 0; i < lpsi.size(); ++i) res.psi[i] = std::exp(lpsi[i] - m);
  }
  res.psi = detail::peak_normalized(std::move(res.psi));
  return res;
}

inline SolveResult solve(const ProblemParams& p, TrialKind kind, Method method, const SolveOptions& opts = {}) {
  const AnyTrial trial = make_trial(p, kind, opts.trial);
  return std::visit(
      [&](const auto& t) {
        SolveResult r = solve_trial(t, method, opts);
        if constexpr (std::is_same_v<std::decay_t<decltype(t)>, TrialOne>)
          r.trial_meta = t.coeffs();
        else
          r.trial_meta = t.config();
        return r;
      },
      trial);
}

}  // namespace sombrero
