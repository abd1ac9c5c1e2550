#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "sombrero/errors.hpp"
#include "sombrero/model.hpp"

namespace sombrero {

// Trial-free check on the ground-state energy. For odd N (integer k) finite
// differences act on u = r^k psi,
//
//   -1/2 u'' + [V + k(k-1) / (2 r^2)] u = E u,   u(0) = u(r_max) = 0,
//
// with psi'(0) = 0 through a mirror node when k = 0. For even N, u ~ r^{1/2}
// near the origin would spoil the h^2 rate, so psi itself is discretized in
// flux form on cells centred at (i + 1/2) dr. The lowest eigenvalue of the
// tridiagonal matrix comes from Sturm-sequence bisection, then two resolutions
// are combined by h^2 Richardson extrapolation.

/// Symmetrizable tridiagonal matrix: diagonal and products of the two
/// off-diagonal entries coupling rows i and i+1.
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off_product;
};

/// Number of eigenvalues strictly below x (LDL^T inertia).
inline std::size_t sturm_count(const Tridiagonal& t, double x) {
  std::size_t count = 0;
  double d = 1.0;
  for (std::size_t i = 0; i < t.diag.size(); ++i) {
    d = t.diag[i] - x - (i == 0 ? 0.0 : t.off_product[i - 1] / d);
    if (d == 0.0) d = -std::numeric_limits<double>::epsilon() * (std::abs(t.diag[i]) + std::abs(x) + 1.0);
    if (d < 0.0) ++count;
  }
  return count;
}

inline double lowest_eigenvalue(const Tridiagonal& t) {
  const std::size_t n = t.diag.size();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    const double rad = (i > 0 ? std::sqrt(t.off_product[i - 1]) : 0.0) +
                       (i + 1 < n ? std::sqrt(t.off_product[i]) : 0.0);
    lo = std::min(lo, t.diag[i] - rad);
    hi = std::max(hi, t.diag[i] + rad);
  }
  if (sturm_count(t, lo) != 0 || sturm_count(t, hi) == 0)
    throw NumericalError("cannot bracket the lowest eigenvalue");
  while (hi - lo > 1e-15 * std::max(1.0, std::abs(lo) + std::abs(hi))) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (sturm_count(t, mid) >= 1 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

inline bool integer_k(const ProblemParams& p) { return p.N % 2 == 1; }

/// Three-point stencil on u = r^k psi (integer k).
inline Tridiagonal radial_fd_matrix(const ProblemParams& p, double r_max, std::size_t n) {
  Tridiagonal t;
  t.diag.resize(n);
  t.off_product.assign(n - 1, 0.0);
  if (p.k > 0.0) {
    const double dr = r_max / static_cast<double>(n + 1);
    const double kin = 1.0 / (dr * dr);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = dr * static_cast<double>(i + 1);
      t.diag[i] = kin + potential(p, r) + p.k * (p.k - 1.0) / (2.0 * r * r);
    }
    std::fill(t.off_product.begin(), t.off_product.end(), 0.25 * kin * kin);
  } else {
    const double dr = r_max / static_cast<double>(n);
    const double kin = 1.0 / (dr * dr);
    for (std::size_t i = 0; i < n; ++i) t.diag[i] = kin + potential(p, dr * static_cast<double>(i));
    std::fill(t.off_product.begin(), t.off_product.end(), 0.25 * kin * kin);
    t.off_product[0] = 0.5 * kin * kin;  // mirror node: row 0 couples with -1/dr^2
  }
  return t;
}

/// Flux form -1/(2 r^{2k}) (r^{2k} psi')' on cell centres; zero flux through
/// r = 0 and psi = 0 on the wall via a mirrored ghost cell.
inline Tridiagonal radial_fv_matrix(const ProblemParams& p, double r_max, std::size_t n) {
  const double dr = r_max / static_cast<double>(n);
  const double c = 1.0 / (2.0 * dr * dr);
  auto measure = [&](double r) { return std::pow(r, 2.0 * p.k); };
  Tridiagonal t;
  t.diag.resize(n);
  t.off_product.resize(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = dr * (static_cast<double>(i) + 0.5);
    const double w = measure(r);
    const double left = i == 0 ? 0.0 : measure(dr * static_cast<double>(i));
    const double right = measure(dr * static_cast<double>(i + 1));
    const double wall = i + 1 == n ? 2.0 : 1.0;
    t.diag[i] = c * (left + wall * right) / w + potential(p, r);
    if (i + 1 < n) t.off_product[i] = c * c * right * right / (w * measure(r + dr));
  }
  return t;
}

/// Lowest eigenvalue at a single resolution.
inline double fd_energy_raw(const ProblemParams& p, double r_max, std::size_t n) {
  return lowest_eigenvalue(integer_k(p) ? radial_fd_matrix(p, r_max, n) : radial_fv_matrix(p, r_max, n));
}

/// Radius where the WKB action from r0 outward reaches `action`, so psi^2 has
/// decayed by about e^{-2 action} at the wall.
inline double oracle_r_max(const ProblemParams& p, double action = 60.0) {
  auto integrand = [&](double r) { return std::sqrt(2.0 * potential(p, r)); };
  auto action_to = [&](double r) {
    constexpr int m = 2000;
    const double dr = (r - p.r0) / m;
    double s = integrand(p.r0) + integrand(r);
    for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * integrand(p.r0 + dr * i);
    return s * dr / 3.0;
  };
  double lo = p.r0, hi = p.r0 + 1.0;
  while (action_to(hi) < action) {
    hi *= 2.0;
    if (hi > 1e4) throw NumericalError("potential too shallow for an oracle wall");
  }
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (action_to(mid) < action ? lo : hi) = mid;
  }
  return hi;
}

/// Richardson-extrapolated ground-state energy from resolutions n and ~2n.
inline double fd_ground_energy(const ProblemParams& p, double r_max, std::size_t n) {
  if (n < 200) throw ParameterError("oracle needs at least 200 nodes");
  if (!(r_max > p.r0)) throw ParameterError("oracle r_max must exceed r0");
  // exact step halving: interior nodes of the u-grid need 2n + 1 when k > 0
  const std::size_t fine = integer_k(p) && p.k > 0.0 ? 2 * n + 1 : 2 * n;
  const double coarse_e = fd_energy_raw(p, r_max, n);
  const double fine_e = fd_energy_raw(p, r_max, fine);
  return (4.0 * fine_e - coarse_e) / 3.0;
}

}  // namespace sombrero
