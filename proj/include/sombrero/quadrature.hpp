#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sombrero/errors.hpp"
#include "sombrero/model.hpp"

namespace sombrero {

inline constexpr std::size_t kDefaultPoints = 8193;
/// Truncation point: the measure r^{2k} phi^2 has fallen by e^{-budget} from its peak.
inline constexpr double kDecayBudget = 120.0;

/// Uniform mesh on [0, r_max] carrying the measure w(r) = r^{2k} phi(r)^2.
///
/// Weights are stored relative to their maximum: weight[i] = exp(log_weight[i] - shift),
/// so every integral below is "scaled" (true value = scaled * exp(shift)).
/// Ratios of integrals, which is all the iteration needs, never see the shift.
struct RadialGrid {
  std::vector<double> nodes;
  std::vector<double> log_weight;  // -inf at r = 0 when k > 0
  std::vector<double> weight;
  double step = 0.0;
  double r_max = 0.0;
  double shift = 0.0;
  std::size_t peak = 0;      // argmax of weight
  double total_scaled = 0.0; // Simpson integral of weight, computed once

  std::size_t size() const { return nodes.size(); }
};

struct GridOptions {
  std::size_t n_points = kDefaultPoints;
  std::optional<double> r_max;  // auto when empty
  std::optional<double> kink;   // radius to place on a panel boundary
  double decay_budget = kDecayBudget;
};

inline double log_measure(const ProblemParams& p, double log_phi, double r) {
  if (r > 0.0) return 2.0 * p.k * std::log(r) + 2.0 * log_phi;
  return p.k > 0.0 ? -std::numeric_limits<double>::infinity() : 2.0 * log_phi;
}

/// Radius beyond r0 where the log-measure has dropped `budget` below its peak.
template <class LogPhi>
double auto_r_max(const ProblemParams& p, const LogPhi& log_phi, double budget = kDecayBudget) {
  const double upper = p.r0 + 20.0;
  auto lw = [&](double r) { return log_measure(p, log_phi(r), r); };

  constexpr int kScan = 4000;
  double peak = -std::numeric_limits<double>::infinity(), r_peak = 0.0;
  for (int i = 1; i <= kScan; ++i) {
    const double r = upper * i / kScan;
    const double v = lw(r);
    if (v > peak) peak = v, r_peak = r;
  }
  if (!std::isfinite(peak)) throw NumericalError("measure r^{2k} phi^2 is not finite anywhere");
  if (lw(upper) - peak > -budget)
    throw NumericalError("measure r^{2k} phi^2 does not decay by e^-" + std::to_string(budget) +
                         " within r0 + 20");

  double lo = std::max(p.r0, r_peak), hi = upper;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (lw(mid) - peak > -budget ? lo : hi) = mid;
  }
  return hi;
}

template <class LogPhi>
RadialGrid build_grid(const ProblemParams& p, const LogPhi& log_phi, const GridOptions& opts = {}) {
  if (opts.n_points < 65 || opts.n_points % 2 == 0)
    throw ParameterError("grid needs an odd point count >= 65 (even number of Simpson intervals)");
  const std::size_t intervals = opts.n_points - 1;

  double r_max = opts.r_max ? *opts.r_max : auto_r_max(p, log_phi, opts.decay_budget);
  if (!(r_max > 0.0)) throw ParameterError("r_max must be positive");
  double step = r_max / static_cast<double>(intervals);
  if (opts.kink && *opts.kink > 0.0 && *opts.kink < r_max) {
    // Put the kink on an even node; r_max only grows, by less than two steps.
    const auto j = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(*opts.kink / (2.0 * step))));
    step = *opts.kink / (2.0 * static_cast<double>(j));
    r_max = step * static_cast<double>(intervals);
  }

  RadialGrid grid;
  grid.step = step;
  grid.r_max = r_max;
  grid.nodes.resize(opts.n_points);
  grid.log_weight.resize(opts.n_points);
  grid.weight.resize(opts.n_points);
  for (std::size_t i = 0; i < opts.n_points; ++i) {
    const double r = step * static_cast<double>(i);
    grid.nodes[i] = r;
    grid.log_weight[i] = log_measure(p, log_phi(r), r);
    if (std::isnan(grid.log_weight[i]) || grid.log_weight[i] == std::numeric_limits<double>::infinity())
      throw NumericalError("log measure is not finite at r = " + std::to_string(r));
  }
  const auto it = std::max_element(grid.log_weight.begin(), grid.log_weight.end());
  grid.peak = static_cast<std::size_t>(it - grid.log_weight.begin());
  grid.shift = *it;
  for (std::size_t i = 0; i < opts.n_points; ++i)
    grid.weight[i] = std::exp(grid.log_weight[i] - grid.shift);

  double total = 0.0;
  for (std::size_t i = 0; i + 2 < opts.n_points; i += 2)
    total += step / 3.0 * (grid.weight[i] + 4.0 * grid.weight[i + 1] + grid.weight[i + 2]);
  grid.total_scaled = total;
  return grid;
}

/// Running integral from the first node; odd nodes use the partial integral of
/// the panel's interpolating parabola, so prefix + suffix is exact per panel.
inline std::vector<double> simpson_prefix(double step, std::span<const double> f) {
  const std::size_t n = f.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    if (i % 2 == 0)
      out[i] = out[i - 2] + step / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
    else
      out[i] = out[i - 1] + step / 12.0 * (5.0 * f[i - 1] + 8.0 * f[i] - f[i + 1]);
  }
  return out;
}

/// Running integral to the last node, accumulated backwards.
inline std::vector<double> simpson_suffix(double step, std::span<const double> f) {
  const std::size_t n = f.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = n - 1; i-- > 0;) {
    if (i % 2 == 0)
      out[i] = out[i + 2] + step / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
    else
      out[i] = out[i + 1] + step / 12.0 * (-f[i - 1] + 8.0 * f[i] + 5.0 * f[i + 1]);
  }
  return out;
}

namespace detail {

inline std::vector<double> weighted(const RadialGrid& grid, std::span<const double> density) {
  if (density.size() != grid.size()) throw ParameterError("density length does not match grid");
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = grid.weight[i] == 0.0 ? 0.0 : grid.weight[i] * density[i];
  return v;
}

}  // namespace detail

/// Integral of w * density in units of exp(shift).
inline double integrate_scaled(const RadialGrid& grid, std::span<const double> density) {
  const auto v = detail::weighted(grid, density);
  double total = 0.0;
  for (std::size_t i = 0; i + 2 < v.size(); i += 2)
    total += grid.step / 3.0 * (v[i] + 4.0 * v[i + 1] + v[i + 2]);
  return total;
}

/// Integral of r^{2k} phi^2 * density over [0, r_max].
inline double integrate(const RadialGrid& grid, std::span<const double> density) {
  return integrate_scaled(grid, density) * std::exp(grid.shift);
}

/// prefix[i] = integral over [0, r_i] of w * density, in units of exp(shift).
inline std::vector<double> cumulative_prefix(const RadialGrid& grid, std::span<const double> density) {
  return simpson_prefix(grid.step, detail::weighted(grid, density));
}

/// suffix[i] = integral over [r_i, r_max] of w * density, in units of exp(shift).
inline std::vector<double> cumulative_suffix(const RadialGrid& grid, std::span<const double> density) {
  return simpson_suffix(grid.step, detail::weighted(grid, density));
}

}  // namespace sombrero
