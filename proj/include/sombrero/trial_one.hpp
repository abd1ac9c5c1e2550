#pragma once

#include <cmath>
#include <optional>

#include "sombrero/model.hpp"

namespace sombrero {

/// Exponent coefficients of trial function I, phi = exp(-S0) with
/// S0(r) = a4 r^4 + c r^2 + e + m log(alpha r^2 + 1).
struct TrialOneCoeffs {
  double a4 = 0.0;
  double c = 0.0;
  double m = 0.0;
  double e = 0.0;
  double alpha = 1.0;
};

/// a4 cancels r^6 in h; c and m cancel r^4 and r^2.
inline TrialOneCoeffs coeffs_one(const ProblemParams& p) {
  const double r02 = p.r0 * p.r0;
  const double r04 = r02 * r02;
  TrialOneCoeffs c;
  c.a4 = p.g / 4.0;
  c.c = 0.25 * p.g * (p.A - 2.0) * r02;
  c.m = 0.25 * (p.g + 3.0) * r04 - p.g * (p.A + 2.0) * (p.A + 2.0) * r04 / 16.0;
  return c;
}

inline double log_phi_one(const ProblemParams&, const TrialOneCoeffs& c, double r) {
  const double r2 = r * r;
  return -(c.a4 * r2 * r2 + c.c * r2) - c.m * std::log1p(r2);
}
inline double log_phi_one(const ProblemParams& p, double r) { return log_phi_one(p, coeffs_one(p), r); }

inline double dlog_phi_one(const ProblemParams&, const TrialOneCoeffs& c, double r) {
  return -(4.0 * c.a4 * r * r * r + 2.0 * c.c * r) - 2.0 * c.m * r / (r * r + 1.0);
}

inline double h_one(const ProblemParams& p, const TrialOneCoeffs& c, double r) {
  const double u = 1.0 / (r * r + 1.0);
  const double m = c.m;
  const double lin = m * p.g * (p.A - 2.0) * p.r0 * p.r0 - 2 * m * p.g + 2 * m * p.k - 2 * m * m - m;
  return 2 * m * (m + 1) * u * u + lin * u;
}
inline double h_one(const ProblemParams& p, double r) { return h_one(p, coeffs_one(p), r); }

/// g E0 of trial I.
inline double base_energy_one(const ProblemParams& p, const TrialOneCoeffs& c) {
  const double r02 = p.r0 * p.r0;
  return 0.5 * p.A * p.g * p.g * r02 * r02 * r02 + 2 * c.m * p.g +
         (2 * p.k + 1 - 4 * c.m) * 0.25 * p.g * (p.A - 2.0) * r02;
}
inline double base_energy_one(const ProblemParams& p) { return base_energy_one(p, coeffs_one(p)); }

/// Trial function I bundled with its parameters; models `TrialFunction`.
class TrialOne {
 public:
  explicit TrialOne(const ProblemParams& p) : p_(p), c_(coeffs_one(p)) {}

  const ProblemParams& params() const { return p_; }
  const TrialOneCoeffs& coeffs() const { return c_; }

  double log_phi(double r) const { return log_phi_one(p_, c_, r); }
  double dlog_phi(double r) const { return dlog_phi_one(p_, c_, r); }
  double h(double r) const { return h_one(p_, c_, r); }
  double h_at_zero() const { return h_one(p_, c_, 0.0); }
  double base_energy() const { return base_energy_one(p_, c_); }
  std::optional<double> kink() const { return std::nullopt; }

 private:
  ProblemParams p_;
  TrialOneCoeffs c_;
};

}  // namespace sombrero
