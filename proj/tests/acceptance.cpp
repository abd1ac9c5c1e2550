// Acceptance run: one PASS/FAIL line per criterion.
//
// A criterion that cannot hold as stated still prints FAIL. When every failing
// check of a criterion is on the documented list (see README), the exit status
// stays zero; any other failure makes it non-zero.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "reference_values.hpp"
#include "sombrero/cli.hpp"

using namespace sombrero;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kTableTol = 2e-4;

struct Verdict {
  bool pass = true;
  bool unexpected = false;  // a failure outside the documented list
  std::string detail;

  void fail(const std::string& why, bool documented = false) {
    if (pass) detail.clear();
    pass = false;
    unexpected = unexpected || !documented;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

const char* trial_name(TrialKind t) { return t == TrialKind::one ? "I" : "II"; }

SolveOptions converged_options(const TableCase& c) {
  SolveOptions o;
  o.anchor = c.anchor;
  o.trial.root_choice = c.root;
  return o;
}

Verdict exact_case() {
  Verdict v;
  const auto t0 = Clock::now();
  const auto p = make_params(3, 1.0, 2.0);
  const double e_exact = std::pow(p.r0, 6);
  for (auto method : {Method::f, Method::tau}) {
    const auto r = solve(p, TrialKind::one, method);
    if (std::abs(r.energies.back() - 2.1517) > 5e-5) v.fail(fmt("E = %.6f", r.energies.back()));
    if (std::abs(r.energies.back() - e_exact) > 1e-12) v.fail("E differs from r0^6");
    double worst = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      const double x = r.nodes[i];
      worst = std::max(worst, std::abs(r.psi[i] - std::exp(-0.25 * x * x * x * x)));
    }
    if (worst > 1e-8) v.fail(fmt("psi deviates by %.2e", worst));

    // drive the update explicitly: every order must leave the energy alone
    const TrialOne t(p);
    const auto grid = build_grid(p, [&](double x) { return t.log_phi(x); });
    std::vector<double> h(grid.size());
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = t.h(grid.nodes[i]);
    auto st = IterationState::initial(grid, method);
    for (int n = 1; n <= 6; ++n) {
      st = advance(grid, h, st, Anchor::zero);
      if (st.delta != 0.0) v.fail(fmt("order %.0f correction %.2e", n, st.delta));
    }
  }
  const double elapsed = seconds_since(t0);
  if (elapsed > 1.0) v.fail(fmt("runtime %.2f s", elapsed));
  if (v.pass) v.detail = fmt("E = %.4f, psi = exp(-r^4/4) to 1e-8, %.3f s", e_exact, elapsed);
  return v;
}

Verdict table_reproduction(int which) {
  Verdict v;
  const auto t0 = Clock::now();
  const auto rows = cli::detail::compute_table(which, kDefaultPoints);
  const double elapsed = seconds_since(t0);
  const auto& published = ref::published(which);
  double worst = 0.0;
  std::size_t cells = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const auto& pub = published[i];
    if (row.c.g != pub.g || row.c.A != pub.A || row.c.trial != pub.trial) {
      v.fail("case list out of order");
      continue;
    }
    if (!row.error.empty()) {
      v.fail(fmt("(%g, %g) ", pub.g, pub.A) + trial_name(pub.trial) + ": " + row.error);
      continue;
    }
    if (row.energies.size() != pub.energies.size())
      v.fail(fmt("(%g, %g) row length %.0f", pub.g, pub.A, static_cast<double>(row.energies.size())));
    for (std::size_t n = 0; n < std::min(row.energies.size(), pub.energies.size()); ++n) {
      const double d = std::abs(row.energies[n] - pub.energies[n]);
      worst = std::max(worst, d);
      ++cells;
      if (d > kTableTol)
        v.fail(fmt("(%g, %g) ", pub.g, pub.A) + trial_name(pub.trial) +
               fmt(" E%.0f = %.5f vs %.4f", static_cast<double>(n), row.energies[n], pub.energies[n]));
    }
  }
  if (which == 1) {
    // revised-mode a is acceptable only if these base energies come out
    if (std::abs(rows[1].energies.at(0) + 0.4300) > 5e-5) v.fail("revised E0 at (0.5, 2) not -0.4300");
    if (std::abs(rows[9].energies.at(0) + 2.3537) > 5e-5) v.fail("revised E0 at (1, 1) not -2.3537");
  }
  if (elapsed > 120.0) v.fail(fmt("runtime %.1f s", elapsed));
  if (v.pass) v.detail = fmt("%.0f cells, worst deviation %.2e, %.2f s", static_cast<double>(cells), worst, elapsed);
  return v;
}

Verdict cross_method() {
  Verdict v;
  double worst_conv = 0.0, worst_first = 0.0;
  for (const auto& c : table_cases(1)) {
    const auto p = make_params(3, c.g, c.A);
    const auto rf = solve(p, c.trial, Method::f, converged_options(c));
    const auto rt = solve(p, c.trial, Method::tau, converged_options(c));
    const std::string tag = fmt("(%g, %g) ", c.g, c.A) + trial_name(c.trial);
    if (!rf.converged || !rt.converged) v.fail(tag + " did not converge");
    const double d = std::abs(rf.energies.back() - rt.energies.back());
    worst_conv = std::max(worst_conv, d);
    if (d >= 2e-4) v.fail(tag + fmt(" converged f %.5f vs tau %.5f", rf.energies.back(), rt.energies.back()));
    if (rf.energies.size() > 1 && rt.energies.size() > 1) {
      const double rel = std::abs(rf.energies[1] - rt.energies[1]) / std::abs(rt.energies[1]);
      worst_first = std::max(worst_first, rel);
      if (rel > 1e-12) v.fail(tag + fmt(" E1 relative gap %.2e", rel));
    }
  }
  if (v.pass) v.detail = fmt("worst converged gap %.2e, worst E1 relative gap %.2e", worst_conv, worst_first);
  return v;
}

Verdict oracle_consistency() {
  Verdict v;
  double worst = 0.0;
  for (const auto& row : ref::parameter_rows()) {
    const auto p = make_params(3, row.g, row.A);
    SolveOptions o;
    o.trial.root_choice = row.root;
    const auto r1 = solve(p, TrialKind::one, Method::tau, o);
    const auto r2 = solve(p, TrialKind::two, Method::tau, o);
    const double e = fd_ground_energy(p, r1.r_max, 4000);
    for (double it : {r1.energies.back(), r2.energies.back()}) {
      const double d = std::abs(e - it);
      worst = std::max(worst, d);
      if (d > 1e-3) v.fail(fmt("(%g, %g) oracle %.5f", row.g, row.A, e) + fmt(" vs iteration %.5f", it));
    }
  }
  if (v.pass) v.detail = fmt("7 parameter pairs, worst gap %.2e", worst);
  return v;
}

template <class T>
double max_residual(const T& t) {
  auto lp = [&](double r) { return t.log_phi(r); };
  auto h = [&](double r) { return t.h(r); };
  double worst = 0.0;
  for (int i = 1; i <= 50; ++i) {
    const double r = 0.06 * i;
    if (t.kink() && std::abs(r - *t.kink()) < 0.01) continue;
    worst = std::max(worst, std::abs(schroedinger_residual(t.params(), lp, h, t.base_energy(), r)));
  }
  return worst;
}

Verdict trial_identities() {
  Verdict v;
  double worst = 0.0;
  int revised = 0;
  for (const auto& row : ref::parameter_rows()) {
    const auto p = make_params(3, row.g, row.A);
    const TrialTwo two(p, row.root);
    revised += two.config().revised;
    for (double res : {max_residual(TrialOne(p)), max_residual(two)}) {
      worst = std::max(worst, res);
      if (res >= 1e-6) v.fail(fmt("(%g, %g) residual %.2e", row.g, row.A, res));
    }
  }
  if (revised != 2) v.fail(fmt("expected 2 revised rows, got %.0f", revised));

  const auto p = make_params(3, 1.0, 2.0);
  const auto s = solve_a(p);
  if (s.roots.size() != 2 || std::abs(s.roots[0] - 4.4267) > 5e-5 || std::abs(s.roots[1] - 1.2976) > 5e-5)
    v.fail("roots at (1, 2) are not {4.4267, 1.2976}");
  for (double a : s.roots)
    if (a_equation_residual(p, s, a) >= 1e-10) v.fail(fmt("root residual %.2e", a_equation_residual(p, s, a)));

  auto feasible = [](double g, double A) { return solve_a(make_params(3, g, A)).selected.has_value(); };
  auto threshold = [&](double lo, double hi, auto feasible_at) {
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (lo + hi);
      (feasible_at(mid) ? hi : lo) = mid;
    }
    return hi;
  };
  const double g_star = threshold(0.5, 1.5, [&](double g) { return feasible(g, 2.0); });
  const double a_star = threshold(1.0, 3.0, [&](double A) { return feasible(1.0, A); });
  if (feasible(0.92, 2.0) || !feasible(0.93, 2.0)) v.fail(fmt("g threshold %.5f not in (0.92, 0.93)", g_star));
  // The discriminant is already positive at A = 1.81 (it changes sign at 1.8056,
  // which rounds to the quoted 1.81), so the stated bracket cannot be met.
  if (feasible(1.0, 1.81) || !feasible(1.0, 1.82))
    v.fail(fmt("A threshold %.5f not in (1.81, 1.82) [documented: unattainable as stated]", a_star), true);
  if (v.pass) v.detail = fmt("worst residual %.2e over 14 trial functions (2 revised)", worst);
  else if (!v.unexpected)
    v.detail += fmt("; residuals < 1e-6 (worst %.2e), root residuals < 1e-10, roots {%.4f, %.4f} hold", worst,
                    s.roots.at(0), s.roots.at(1));
  return v;
}

Verdict shape_transition() {
  Verdict v;
  struct Case { double g, A; bool at_origin; };
  const Case cases[] = {{0.5, 2, true}, {1, 1, true}, {1, 1.9, true}, {1, 2, true}, {2, 2, false}, {1, 3, false}};
  for (const auto& c : cases) {
    for (const auto& tc : table_cases(1)) {
      if (tc.g != c.g || tc.A != c.A) continue;
      const auto r = solve(make_params(3, c.g, c.A), tc.trial, Method::tau, converged_options(tc));
      const auto i = static_cast<std::size_t>(std::max_element(r.psi.begin(), r.psi.end()) - r.psi.begin());
      if ((i == 0) != c.at_origin)
        v.fail(fmt("(%g, %g) ", c.g, c.A) + trial_name(tc.trial) + fmt(" argmax at r = %.3f", r.nodes[i]));
    }
  }
  if (v.pass) v.detail = "argmax at 0 for 4 pairs, at r > 0 for (2, 2) and (1, 3), both trials";
  return v;
}

std::string cli_capture(std::vector<std::string> args) {
  args.insert(args.begin(), "sombrero");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return std::to_string(code) + "\n" + out.str() + err.str();
}

Verdict numerics() {
  Verdict v;
  // normalization invariance of the corrections
  double worst_inv = 0.0;
  for (auto method : {Method::f, Method::tau}) {
    const TrialTwo base(make_params(3, 1.0, 3.0), RootChoice::smaller);
    SolveOptions o;
    o.orders = 5;
    o.stop_at_tolerance = false;
    const auto ref = solve_trial(base, method, o);
    for (double scale : {-200.0, 150.0}) {
      const auto r = solve_trial(RescaledTrial<TrialTwo>(base, scale), method, o);
      for (std::size_t n = 1; n < r.energies.size(); ++n) {
        const double a = ref.energies[n] - ref.energies[0], b = r.energies[n] - r.energies[0];
        worst_inv = std::max(worst_inv, std::abs(a - b) / std::abs(a));
      }
    }
  }
  if (worst_inv > 1e-12) v.fail(fmt("normalization changes Delta by %.2e", worst_inv));

  // Simpson order. The even weight r^2 exp(-r^4/2) (integral 2^{-5/4} Gamma(3/4))
  // comes out to roundoff at any step, so the h^4 rate is measured on r^3 exp(-r^4/2),
  // whose integral is 1/2.
  auto err_at = [&](int N, double exact, std::size_t n) {
    const auto q = make_params(N, 1.0, 2.0);
    const auto g = build_grid(q, [](double r) { return -0.25 * r * r * r * r; }, {n, 6.0, std::nullopt, kDecayBudget});
    return std::abs(integrate(g, std::vector<double>(n, 1.0)) - exact);
  };
  const double even_err = err_at(3, std::pow(2.0, -1.25) * std::tgamma(0.75), 129);
  if (even_err > 1e-12) v.fail(fmt("even-weight integral off by %.2e", even_err));
  const double ratio = err_at(4, 0.5, 129) / err_at(4, 0.5, 257);
  if (ratio < 13.0 || ratio > 19.0) v.fail(fmt("step halving ratio %.2f", ratio));
  const auto p = make_params(3, 1.0, 2.0);

  // prefix + suffix additivity
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto grid = build_grid(p, [](double r) { return -0.25 * r * r * r * r; }, {1025, 6.0, std::nullopt, kDecayBudget});
  std::vector<double> density(grid.size());
  for (double& d : density) d = u(rng);
  const double total = integrate_scaled(grid, density);
  const auto pre = cumulative_prefix(grid, density), suf = cumulative_suffix(grid, density);
  double worst_add = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) worst_add = std::max(worst_add, std::abs(pre[i] + suf[i] - total));
  if (worst_add > 1e-12) v.fail(fmt("prefix + suffix off by %.2e", worst_add));

  // identical output for identical flags
  const std::vector<std::vector<std::string>> runs = {
      {"solve", "--g", "2", "--A", "2", "--trial", "2", "--root", "small", "--method", "f"},
      {"wavefunction", "--g", "1", "--A", "3", "--samples", "64"},
      {"oracle", "--g", "0.5", "--A", "2"},
  };
  for (const auto& args : runs)
    if (cli_capture(args) != cli_capture(args)) v.fail("output of '" + args[0] + "' differs between runs");

  if (v.pass)
    v.detail = fmt("invariance %.1e, Simpson ratio %.2f, additivity %.1e, CLI byte-identical", worst_inv, ratio,
                   worst_add);
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"exact-case reproduction", exact_case},
      {"table 1 reproduction (tau-iteration)", [] { return table_reproduction(1); }},
      {"table 2 reproduction (f-iteration)", [] { return table_reproduction(2); }},
      {"cross-method consistency", cross_method},
      {"oracle consistency", oracle_consistency},
      {"trial-function identities", trial_identities},
      {"shape transition", shape_transition},
      {"numerics properties", numerics},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    failed += v.unexpected;
    std::printf("%s %zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), v.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
