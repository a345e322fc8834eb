#ifndef RIEMCTL_PROBLEMS_HPP
#define RIEMCTL_PROBLEMS_HPP

#include <string>
#include <vector>

#include "riemctl/control.hpp"

namespace riemctl {

// Running-cost choices for the sphere problem (the model leaves f0 abstract;
// the control-energy default is measurable, C^1, bounded below and convex in u).
enum class S2CostChoice { control_energy };

struct ProblemParams {
  double horizon = 1.0;
  double ball_radius = 10.0;  // C for the sphere problem
  S2CostChoice s2_cost = S2CostChoice::control_energy;
};

struct ProblemDescriptor {
  std::string id;
  ProblemParams params;
  ControlSystem system;
};

// Hyperbolic half-space problem:
//   xdot = f1(x) sin u + f2(x) v,  (u, v) in [0, pi] x [0, 1],
//   x(0) = (0,0,1),  e^T <= x3(T) <= 2 e^T,  x3(t) > 0,
//   J = int u^2 |f1(x)|_g^2 + v |f2(x)|_g dt.
ControlSystem build_h3_example(double horizon);

// Sphere problem:
//   xdot = sum_i u_i f_i(x),  |u| <= C,
//   x(0) = N,  |x(T) - N| >= sqrt(2),  x(t) in S^2,
//   J = int f0(t, x, u) dt  (default f0 = |u|^2).
ControlSystem build_s2_example(double horizon, double ball_radius,
                               S2CostChoice cost = S2CostChoice::control_energy);

// Negative control for the convexity checker: 1-D, xdot = u with u in {-1, +1},
// zero cost, free endpoints.
ControlSystem build_nonconvex_synthetic();

// Problems addressable from the CLI.
std::vector<std::string> problem_ids();
ProblemDescriptor build_problem(const std::string& id, const ProblemParams& params);

}  // namespace riemctl

#endif  // RIEMCTL_PROBLEMS_HPP
