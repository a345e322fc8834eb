#include "riemctl/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace riemctl {

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                             const Eigen::VectorXd& start,
                             const Eigen::VectorXd& initial_step,
                             const NelderMeadOptions& options) {
  const int n = static_cast<int>(start.size());
  if (n < 1) throw ContractViolation("nelder_mead: empty start point");
  if (initial_step.size() != n)
    throw ContractViolation("nelder_mead: step size dimension mismatch");

  NelderMeadResult result;
  result.best = start;

  std::vector<Eigen::VectorXd> x(n + 1, start);
  std::vector<double> fx(n + 1);
  for (int i = 1; i <= n; ++i) x[i][i - 1] += initial_step[i - 1];
  for (int i = 0; i <= n; ++i) fx[i] = objective(x[i]);
  result.evaluations = n + 1;

  result.best_value = fx[0];
  auto track = [&](const Eigen::VectorXd& p, double v) {
    if (v < result.best_value) {
      result.best_value = v;
      result.best = p;
    }
  };
  for (int i = 0; i <= n; ++i) track(x[i], fx[i]);

  std::vector<int> order(n + 1);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return fx[a] < fx[b]; });
    {
      std::vector<Eigen::VectorXd> xs(n + 1);
      std::vector<double> fs(n + 1);
      for (int i = 0; i <= n; ++i) {
        xs[i] = x[order[i]];
        fs[i] = fx[order[i]];
      }
      x.swap(xs);
      fx.swap(fs);
    }
    result.iterations = iter + 1;

    double diameter = 0.0;
    for (int i = 1; i <= n; ++i) diameter = std::max(diameter, (x[i] - x[0]).norm());
    if (std::abs(fx[n] - fx[0]) <= options.f_tolerance && diameter <= options.x_tolerance)
      break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) centroid += x[i];
    centroid /= n;

    const Eigen::VectorXd reflected = centroid + options.reflection * (centroid - x[n]);
    const double fr = objective(reflected);
    ++result.evaluations;
    track(reflected, fr);

    if (fr < fx[0]) {
      const Eigen::VectorXd expanded = centroid + options.expansion * (reflected - centroid);
      const double fe = objective(expanded);
      ++result.evaluations;
      track(expanded, fe);
      if (fe < fr) {
        x[n] = expanded;
        fx[n] = fe;
      } else {
        x[n] = reflected;
        fx[n] = fr;
      }
    } else if (fr < fx[n - 1]) {
      x[n] = reflected;
      fx[n] = fr;
    } else {
      const bool outside = fr < fx[n];
      const Eigen::VectorXd base = outside ? reflected : x[n];
      const Eigen::VectorXd contracted = centroid + options.contraction * (base - centroid);
      const double fc = objective(contracted);
      ++result.evaluations;
      track(contracted, fc);
      if (fc < (outside ? fr : fx[n])) {
        x[n] = contracted;
        fx[n] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          x[i] = x[0] + options.shrink * (x[i] - x[0]);
          fx[i] = objective(x[i]);
          ++result.evaluations;
          track(x[i], fx[i]);
        }
      }
    }
  }
  return result;
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double tolerance, int max_iterations) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) throw ContractViolation("bisect_root: no sign change on interval");
  for (int i = 0; i < max_iterations && (hi - lo) > tolerance; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (flo * fm < 0.0) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace riemctl
