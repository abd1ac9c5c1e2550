#pragma once

#include <vector>

#include "sombrero/iteration.hpp"

namespace sombrero {

/// One (g, A, trial) row of a published eigenvalue table, N = 3.
struct TableCase {
  double g;
  double A;
  TrialKind trial;
  int orders;        // highest order the published row lists
  RootChoice root;   // root of the quadratic for a (trial II)
  Anchor anchor;     // normalization point used by the f-iteration
};

/// Cases of table 1 (tau-iteration) or table 2 (f-iteration), in published row order.
inline std::vector<TableCase> table_cases(int which) {
  if (which != 1 && which != 2) throw ParameterError("table must be 1 or 2");
  struct Row { double g, A; RootChoice root; int orders_t1[2], orders_t2[2]; };
  constexpr auto L = RootChoice::larger, S = RootChoice::smaller;
  static constexpr Row rows[] = {
      {0.5, 2.0, L, {4, 4}, {5, 5}},
      {0.93, 2.0, S, {4, 4}, {4, 5}},
      {1.0, 2.0, L, {0, 4}, {0, 5}},
      {2.0, 2.0, S, {4, 4}, {4, 5}},
      {1.0, 1.0, L, {4, 5}, {4, 5}},
      {1.0, 1.9, L, {4, 4}, {4, 5}},
      {1.0, 3.0, S, {4, 4}, {5, 5}},
  };
  std::vector<TableCase> out;
  for (const Row& r : rows) {
    for (int t = 0; t < 2; ++t) {
      const TrialKind kind = t == 0 ? TrialKind::one : TrialKind::two;
      out.push_back({r.g, r.A, kind, which == 1 ? r.orders_t1[t] : r.orders_t2[t], r.root,
                     kind == TrialKind::one ? Anchor::infinity : Anchor::zero});
    }
  }
  return out;
}

inline Method table_method(int which) { return which == 1 ? Method::tau : Method::f; }

/// Solver options reproducing one table cell sequence; never stops early on tolerance.
inline SolveOptions table_solve_options(const TableCase& c, std::size_t n_points = kDefaultPoints) {
  SolveOptions o;
  o.orders = c.orders < 1 ? 1 : c.orders;
  o.stop_at_tolerance = false;
  o.n_points = n_points;
  o.anchor = c.anchor;
  o.trial.root_choice = c.root;
  return o;
}

inline SolveResult solve_table_case(const TableCase& c, int which, std::size_t n_points = kDefaultPoints) {
  return solve(make_params(3, c.g, c.A), c.trial, table_method(which), table_solve_options(c, n_points));
}

}  // namespace sombrero
