#ifndef RIEMCTL_OPTIM_HPP
#define RIEMCTL_OPTIM_HPP

#include <functional>
#include <vector>

#include "riemctl/core.hpp"

namespace riemctl {

struct NelderMeadOptions {
  int max_iterations = 500;
  double f_tolerance = 1e-12;   // stop when the simplex value spread drops below this
  double x_tolerance = 1e-12;   // ... or the simplex diameter does
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
};

struct NelderMeadResult {
  Eigen::VectorXd best;
  double best_value = 0.0;
  int iterations = 0;
  int evaluations = 0;
};

// Downhill simplex minimization. Deterministic for fixed inputs; the returned
// point is the best vertex ever evaluated, so it never regresses below the
// start value.
NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                             const Eigen::VectorXd& start,
                             const Eigen::VectorXd& initial_step,
                             const NelderMeadOptions& options = {});

// Root of f on [lo, hi] by bisection; requires a sign change.
double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double tolerance = 1e-12, int max_iterations = 200);

}  // namespace riemctl

#endif  // RIEMCTL_OPTIM_HPP
