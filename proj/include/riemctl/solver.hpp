#ifndef RIEMCTL_SOLVER_HPP
#define RIEMCTL_SOLVER_HPP

#include <string>
#include <vector>

#include "riemctl/control.hpp"

namespace riemctl {

struct SolveConfig {
  int segments = 4;
  int starts = 16;
  std::uint64_t seed = 1;

  double penalty_initial = 10.0;
  double penalty_growth = 10.0;
  int penalty_rounds = 4;

  int simplex_max_iterations = 0;  // 0: scale with the decision dimension
  double simplex_scale = 0.15;     // initial simplex size, fraction of the control span

  double step = 1.0 / 128.0;  // integration step bound
  int refine_rounds = 0;      // segment-doubling rounds run by solve()

  FeasibilityTolerances tolerances;

  void validate() const;
};

struct StartSummary {
  int start = 0;
  double cost = 0.0;
  double endpoint_residual = 0.0;
  double state_violation = 0.0;
  bool feasible = false;
};

struct SolveResult {
  ControlSignal best_signal;
  double best_cost = 0.0;
  FeasibilityReport feasibility;
  bool feasible = false;   // feasible at the configured tolerances
  bool infeasible_flag = false;  // no start reached even 10x the tolerances
  std::vector<double> trace;     // best admissible cost after each completed start/round
  std::vector<StartSummary> start_summaries;
  double wall_time_ms = 0.0;
  int segments = 0;
};

// Direct method: per-segment constant controls optimized by multi-start
// simplex search on the penalized objective
//   J + w (endpoint^2 + state^2 + control-set-distance^2),
// with the weight escalated per round. Deterministic per seed. The reported
// cost always equals evaluate_cost of the reported signal's re-integration.
SolveResult solve(const ControlSystem& system, const SolveConfig& config);

// Doubles the segment count, warm-starts from the previous best signal (whose
// piecewise-constant interpolation integrates identically on the refined
// grid), re-optimizes, and never returns a worse admissible cost.
SolveResult refine(const ControlSystem& system, const SolveResult& previous,
                   const SolveConfig& config);

// Closed-form optima of the two built-in problems, for regression checks:
//   h3-example: T (u*^2 + 1 - sin u*) with 2 u* = cos u*,
//   s2-example: pi^2 / (4 T)  (control-energy cost).
double analytic_optimum(const std::string& problem_id, double horizon);

}  // namespace riemctl

#endif  // RIEMCTL_SOLVER_HPP
