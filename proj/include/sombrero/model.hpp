#pragma once

#include <cmath>
#include <string>

#include "sombrero/errors.hpp"

namespace sombrero {

/// Physical configuration of the N-dimensional Sombrero problem
///
///     V(r) = 1/2 g^2 (r^2 - r0^2)^2 (r^2 + A r0^2),   r0^4 = (2 + N) / 3,
///
/// with radial kinetic operator -1/(2 r^{2k}) d/dr r^{2k} d/dr, k = (N - 1) / 2.
struct ProblemParams {
  int N = 3;
  double k = 1.0;
  double g = 1.0;
  double A = 2.0;
  double r0 = 1.0;
};

inline ProblemParams make_params(int N, double g, double A) {
  if (N < 1) throw ParameterError("dimension N must be >= 1, got " + std::to_string(N));
  if (!(g > 0.0) || !std::isfinite(g))
    throw ParameterError("coupling g must be a positive finite number, got " + std::to_string(g));
  if (!(A > 0.0) || !std::isfinite(A))
    throw ParameterError("shape parameter A must be a positive finite number, got " + std::to_string(A));
  ProblemParams p;
  p.N = N;
  p.k = 0.5 * (N - 1);
  p.g = g;
  p.A = A;
  p.r0 = std::pow((2.0 + N) / 3.0, 0.25);
  return p;
}

inline double potential(const ProblemParams& p, double r) {
  const double r02 = p.r0 * p.r0;
  const double d = r * r - r02;
  return 0.5 * p.g * p.g * d * d * (r * r + p.A * r02);
}

/// First and second derivative of a smooth function by 5-point central stencils.
struct Derivatives {
  double first;
  double second;
};

template <class F>
Derivatives central_derivatives(const F& f, double r, double step) {
  const double fm2 = f(r - 2 * step), fm1 = f(r - step), f0 = f(r), fp1 = f(r + step),
               fp2 = f(r + 2 * step);
  return {(fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * step),
          (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * step * step)};
}

inline constexpr double kDefaultResidualStep = 1e-3;

/// Residual of the trial equation
///
///     -1/2 (phi'' + (2k/r) phi') / phi + V(r) - h(r) - base_energy
///
/// evaluated on s = log phi, using phi''/phi = s'' + s'^2 and phi'/phi = s'.
/// Vanishes (up to stencil error) for an exactly constructed trial function.
template <class LogPhi, class H>
double schroedinger_residual(const ProblemParams& p, const LogPhi& log_phi, const H& h,
                             double base_energy, double r, double step = kDefaultResidualStep) {
  if (!(r > 0.0)) throw ParameterError("residual radius must be positive");
  if (!(step > 0.0) || 2 * step >= r) throw ParameterError("residual step must satisfy 0 < 2*step < r");
  const auto d = central_derivatives(log_phi, r, step);
  const double kinetic = -0.5 * (d.second + d.first * d.first + (2.0 * p.k / r) * d.first);
  return kinetic + potential(p, r) - h(r) - base_energy;
}

}  // namespace sombrero
