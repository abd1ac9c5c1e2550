// Refines both trial functions at g = 2, A = 2 (a double well whose ground
// state peaks away from the origin) and compares with the finite-difference value.
#include <cstdio>

#include "sombrero/iteration.hpp"
#include "sombrero/oracle.hpp"

int main() {
  using namespace sombrero;
  const ProblemParams p = make_params(3, 2.0, 2.0);

  SolveOptions opts;
  opts.trial.root_choice = RootChoice::smaller;
  for (TrialKind kind : {TrialKind::one, TrialKind::two}) {
    const SolveResult r = solve(p, kind, Method::tau, opts);
    std::printf("trial %s:", kind == TrialKind::one ? "I " : "II");
    for (double e : r.energies) std::printf(" %.4f", e);
    std::printf("\n");
  }
  std::printf("finite differences: %.4f\n", fd_ground_energy(p, oracle_r_max(p), 2000));
}
