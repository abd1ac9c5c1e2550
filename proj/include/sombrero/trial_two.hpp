#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "sombrero/model.hpp"

namespace sombrero {

// Trial function II:
//
//   phi(r) = ((r0 + a) / (r + a))^k exp(-g S0(r) - S1(r))
//
// S0' = sqrt(2 V) / g removes the g^2 terms of the trial equation and S1 the
// growing g^1 terms. The prefactor parameter a is a root of the quadratic that
// makes phi'(0) vanish; when that quadratic has no usable root the revised form
// phi + xi phi_- (r < r0) restores phi'(0) = 0 instead.

enum class RootChoice { larger, smaller };

/// Real roots of  k a^2 + b a + c = 0  that fix the prefactor parameter.
struct ASolution {
  double b = 0.0;
  double c = 0.0;
  double discriminant = 0.0;
  bool feasible = false;      ///< discriminant >= 0
  std::vector<double> roots;  ///< positive real roots, descending
  std::optional<double> selected;
};

inline ASolution solve_a(const ProblemParams& p, RootChoice choice = RootChoice::larger) {
  const double sA = std::sqrt(p.A), s1A = std::sqrt(1.0 + p.A);
  const double r02 = p.r0 * p.r0;
  const double r05 = r02 * r02 * p.r0;
  ASolution s;
  s.b = (p.r0 * s1A - p.g * r05 * p.A) * (sA + s1A);
  s.c = p.k * r02 * (p.A + std::sqrt(p.A * (1.0 + p.A)));
  s.discriminant = s.b * s.b - 4.0 * p.k * s.c;
  s.feasible = s.discriminant >= 0.0;
  if (!s.feasible || p.k == 0.0) return s;
  // Cancellation-free pair: q = -(b + sign(b) sqrt(D)) / 2, roots q/k and c/q.
  const double q = -0.5 * (s.b + std::copysign(std::sqrt(s.discriminant), s.b));
  for (double root : {q / p.k, s.c / q})
    if (root > 0.0 && std::isfinite(root)) s.roots.push_back(root);
  std::sort(s.roots.begin(), s.roots.end(), std::greater<>());
  if (!s.roots.empty())
    s.selected = choice == RootChoice::larger ? s.roots.front() : s.roots.back();
  return s;
}

/// |k a^2 + b a + c| relative to the magnitude of its terms.
inline double a_equation_residual(const ProblemParams& p, const ASolution& s, double a) {
  const double val = p.k * a * a + s.b * a + s.c;
  const double scale = p.k * a * a + std::abs(s.b * a) + std::abs(s.c);
  return std::abs(val) / scale;
}

inline double s0_prime_two(const ProblemParams& p, double r) {
  const double r02 = p.r0 * p.r0;
  return (r * r - r02) * std::sqrt(r * r + p.A * r02);
}

/// Closed-form antiderivative of s0_prime_two; valid for negative r as well.
inline double s0_two(const ProblemParams& p, double r) {
  const double r02 = p.r0 * p.r0;
  const double Ar02 = p.A * r02;
  const double q = std::sqrt(r * r + Ar02);
  // log(r + q) without cancellation for r < 0: (r + q)(q - r) = A r0^2.
  const double log_rq = r >= 0.0 ? std::log(r + q) : std::log(Ar02) - std::log(q - r);
  return 0.125 * r * q * (2 * r * r + Ar02 - 4 * r02) -
         0.125 * (p.A * p.A + 4 * p.A) * r02 * r02 * log_rq;
}

namespace detail {

struct S1Terms {
  double q;   // sqrt(r^2 + A r0^2)
  double t1;  // (r^2 + (1+A) r0^2) / (q (r q + r0^2 sqrt(1+A)))
  double t2;  // r / (2 q^2)
  double t3;  // k a / (q (q + r0 sqrt(1+A)))
};

inline S1Terms s1_terms(const ProblemParams& p, double a, double r) {
  const double r02 = p.r0 * p.r0;
  const double s = std::sqrt(1.0 + p.A);
  const double q2 = r * r + p.A * r02;
  const double q = std::sqrt(q2);
  return {q, (r * r + (1.0 + p.A) * r02) / (q * (r * q + r02 * s)), r / (2.0 * q2),
          p.k * a / (q * (q + p.r0 * s))};
}

}  // namespace detail

inline double s1_prime_two(const ProblemParams& p, double a, double r) {
  const auto t = detail::s1_terms(p, a, r);
  return t.t1 + t.t2 + t.t3;
}

inline double s1_two(const ProblemParams& p, double a, double r) {
  const double r02 = p.r0 * p.r0;
  const double s = std::sqrt(1.0 + p.A);
  const double q = std::sqrt(r * r + p.A * r02);
  const double Ar0 = p.A * p.r0;
  return std::log(r + p.r0) + 0.25 * std::log(r * r + p.A * r02) +
         (0.5 + p.k * a / (2.0 * p.r0)) * std::log((s * q + r + Ar0) / (s * q - r + Ar0));
}

/// 1/2 (S1'^2 - S1'') in closed form.
///
/// The a-independent part is the gamma / (8 q^4 (alpha + beta)) rational
/// expression; the cross term is T3 (T1 + T2) - T3'/2 and the last term T3^2/2.
inline double half_s1_block(const ProblemParams& p, double a, double r) {
  const double A = p.A, r0 = p.r0;
  const double r02 = r0 * r0, r04 = r02 * r02, r06 = r04 * r02, r08 = r04 * r04;
  const double r2 = r * r, r4 = r2 * r2, r6 = r4 * r2, r8 = r4 * r4;
  const double s = std::sqrt(1.0 + A);
  const auto t = detail::s1_terms(p, a, r);
  const double q = t.q, q2 = q * q;

  const double gamma = 225 * r8 + 270 * (1 + 2 * A) * r6 * r02 +
                       3 * (188 * A * A + 216 * A - 5) * r4 * r04 +
                       36 * A * (8 * A * A + 10 * A - 1) * r2 * r06 +
                       4 * A * A * (4 * A + 1) * (4 * A + 1) * r08;
  const double alpha = 15 * r6 + (18 * A - 6) * r4 * r02 + (8 * A * A + 12 * A + 7) * r2 * r04 +
                       (8 * A * A + 2 * A) * r06;
  const double beta = 8 * s * r02 * r * (3 * r2 + (2 * A - 1) * r02) * q;
  const double base = gamma / (8 * q2 * q2 * (alpha + beta));

  const double qs = q + r0 * s;
  const double half_dt3 = p.k * a * r * (2 * q + r0 * s) / (2 * q2 * q * qs * qs);
  return base + t.t3 * (t.t1 + t.t2) + half_dt3 + 0.5 * t.t3 * t.t3;
}

struct EnergyParts {
  double e1 = 0.0;  ///< r0^2 sqrt(1+A)
  double e2 = 0.0;  ///< k a r0 sqrt(1+A)
  double e3 = 0.0;  ///< -k a^2
  double sum() const { return e1 + e2 + e3; }
};

inline EnergyParts energy_parts_two(const ProblemParams& p, double a) {
  const double s = std::sqrt(1.0 + p.A);
  return {p.r0 * p.r0 * s, p.k * a * p.r0 * s, -p.k * a * a};
}

/// Prefactor parameter used when no positive root exists.
inline constexpr double kDefaultRevisedA = 3.0;

struct TrialTwoConfig {
  double a = 0.0;
  std::optional<double> xi;
  bool revised = false;
  EnergyParts e0_parts;
  RootChoice root_choice = RootChoice::larger;
};

namespace detail {

// log of the unrevised trial function, and of phi_- (S0 evaluated at -r).
inline double log_phi_plus(const ProblemParams& p, double a, double r) {
  return p.k * std::log((p.r0 + a) / (r + a)) - p.g * s0_two(p, r) - s1_two(p, a, r);
}
inline double log_phi_minus(const ProblemParams& p, double a, double r) {
  return p.k * std::log((p.r0 + a) / (r + a)) - p.g * s0_two(p, -r) - s1_two(p, a, r);
}
inline double dlog_phi_plus(const ProblemParams& p, double a, double r) {
  return -p.k / (r + a) - p.g * s0_prime_two(p, r) - s1_prime_two(p, a, r);
}
inline double dlog_phi_minus(const ProblemParams& p, double a, double r) {
  return -p.k / (r + a) + p.g * s0_prime_two(p, r) - s1_prime_two(p, a, r);
}

}  // namespace detail

/// Mixing coefficient xi with phi'(0) + xi phi_-'(0) = 0.
inline double fix_xi(const ProblemParams& p, double a) {
  const double dm = detail::dlog_phi_minus(p, a, 0.0);
  if (dm == 0.0 || !std::isfinite(dm)) throw NumericalError("phi_-'(0) vanishes; xi is undetermined");
  const double ratio = std::exp(detail::log_phi_plus(p, a, 0.0) - detail::log_phi_minus(p, a, 0.0));
  return -ratio * detail::dlog_phi_plus(p, a, 0.0) / dm;
}

inline TrialTwoConfig make_trial_two_config(const ProblemParams& p,
                                            RootChoice choice = RootChoice::larger,
                                            double revised_a = kDefaultRevisedA) {
  if (p.N < 2) throw ParameterError("trial function II needs N >= 2 (the a-equation degenerates for k = 0)");
  TrialTwoConfig cfg;
  cfg.root_choice = choice;
  const ASolution sol = solve_a(p, choice);
  if (sol.selected) {
    cfg.a = *sol.selected;
  } else {
    if (!(revised_a > 0.0)) throw ParameterError("revised-mode a must be positive");
    cfg.a = revised_a;
    cfg.revised = true;
    cfg.xi = fix_xi(p, cfg.a);
  }
  cfg.e0_parts = energy_parts_two(p, cfg.a);
  return cfg;
}

namespace detail {

// xi phi_-(r) / phi(r) for the revised form.
inline double minus_ratio(const ProblemParams& p, const TrialTwoConfig& cfg, double r) {
  return *cfg.xi * std::exp(log_phi_minus(p, cfg.a, r) - log_phi_plus(p, cfg.a, r));
}

inline double log1p_checked(double x) {
  if (!(x > -1.0)) throw NumericalError("revised trial function changes sign");
  return std::log1p(x);
}

}  // namespace detail

inline double log_phi_two(const ProblemParams& p, const TrialTwoConfig& cfg, double r) {
  const double base = detail::log_phi_plus(p, cfg.a, r);
  if (!cfg.revised) return base;
  const double at = r < p.r0 ? r : p.r0;
  return base + detail::log1p_checked(detail::minus_ratio(p, cfg, at));
}

inline double dlog_phi_two(const ProblemParams& p, const TrialTwoConfig& cfg, double r) {
  const double dp = detail::dlog_phi_plus(p, cfg.a, r);
  if (!cfg.revised || r >= p.r0) return dp;
  const double x = detail::minus_ratio(p, cfg, r);
  return (dp + x * detail::dlog_phi_minus(p, cfg.a, r)) / (1.0 + x);
}

namespace detail {

inline double h_plus(const ProblemParams& p, double a, double r) {
  const double k = p.k, g = p.g, r02 = p.r0 * p.r0;
  const double q = std::sqrt(r * r + p.A * r02);
  const double rra = r * (r + a);
  const double block = half_s1_block(p, a, r) + 0.5 * k * (k + 1) / ((r + a) * (r + a)) -
                       k * a * s1_prime_two(p, a, r) / rra - k * k / rra +
                       k * a * g * (r02 - a * a) * q / rra +
                       k * a * a * g * p.A * r02 / (r * (q + r));
  return -block;
}

inline double h_revised_inner(const ProblemParams& p, const TrialTwoConfig& cfg, double r) {
  const double k = p.k, g = p.g, a = cfg.a, r02 = p.r0 * p.r0;
  const double q = std::sqrt(r * r + p.A * r02);
  const double x = minus_ratio(p, cfg, r);
  const double bracket = cfg.e0_parts.sum() + k * a * (a * a - r02) * q / (r * (r + a)) -
                         k * a * a * p.A * r02 / (r * (q + r));
  return h_plus(p, a, r) - 2.0 * g * bracket * x / (1.0 + x);
}

}  // namespace detail

/// Potential correction of trial function II at r > 0. In revised mode h
/// jumps at r0; exactly at r0 the mean of the one-sided limits is returned.
inline double h_two(const ProblemParams& p, const TrialTwoConfig& cfg, double r) {
  if (!(r > 0.0)) throw ParameterError("h_two needs r > 0; use h_two_at_zero for the origin");
  if (!cfg.revised || r > p.r0) return detail::h_plus(p, cfg.a, r);
  if (r < p.r0) return detail::h_revised_inner(p, cfg, r);
  return 0.5 * (detail::h_plus(p, cfg.a, r) + detail::h_revised_inner(p, cfg, r));
}

/// r -> 0 limit of h_two by two-level Richardson extrapolation over
/// eps, eps/2, eps/4. Throws when successive differences grow, i.e. a 1/r
/// pole survives because a (or xi) is inconsistent.
inline double h_two_at_zero(const ProblemParams& p, const TrialTwoConfig& cfg, double eps = 1e-3) {
  const double h1 = h_two(p, cfg, eps), h2 = h_two(p, cfg, eps / 2), h3 = h_two(p, cfg, eps / 4);
  const double d1 = h2 - h1, d2 = h3 - h2;
  const double floor = 1e-9 * (1.0 + std::abs(h3));
  if (!std::isfinite(h3) || (std::abs(d2) > floor && std::abs(d2) > 0.75 * std::abs(d1)))
    throw NumericalError("h diverges as r -> 0 (differences " + std::to_string(d1) + ", " +
                         std::to_string(d2) + "); prefactor parameter inconsistent");
  const double a1 = 2 * h2 - h1, a2 = 2 * h3 - h2;
  return (4 * a2 - a1) / 3;
}

inline double base_energy_two(const ProblemParams& p, const TrialTwoConfig& cfg) {
  return p.g * cfg.e0_parts.sum();
}

/// Trial function II bundled with its configuration; models `TrialFunction`.
class TrialTwo {
 public:
  explicit TrialTwo(const ProblemParams& p, RootChoice choice = RootChoice::larger,
                    double revised_a = kDefaultRevisedA)
      : TrialTwo(p, make_trial_two_config(p, choice, revised_a)) {}
  TrialTwo(const ProblemParams& p, const TrialTwoConfig& cfg)
      : p_(p), cfg_(cfg), h0_(h_two_at_zero(p, cfg)) {}

  const ProblemParams& params() const { return p_; }
  const TrialTwoConfig& config() const { return cfg_; }

  double log_phi(double r) const { return log_phi_two(p_, cfg_, r); }
  double dlog_phi(double r) const { return dlog_phi_two(p_, cfg_, r); }
  double h(double r) const { return r > 0.0 ? h_two(p_, cfg_, r) : h0_; }
  double h_at_zero() const { return h0_; }
  double base_energy() const { return base_energy_two(p_, cfg_); }
  std::optional<double> kink() const {
    return cfg_.revised ? std::optional<double>(p_.r0) : std::nullopt;
  }

 private:
  ProblemParams p_;
  TrialTwoConfig cfg_;
  double h0_;
};

}  // namespace sombrero
