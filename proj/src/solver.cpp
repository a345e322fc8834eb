#include "riemctl/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "riemctl/optim.hpp"

namespace riemctl {

void SolveConfig::validate() const {
  if (segments < 1) throw ConfigError("solve: segment count must be at least 1");
  if (starts < 1) throw ConfigError("solve: need at least one start");
  if (!(penalty_growth > 1.0)) throw ConfigError("solve: penalty growth factor must exceed 1");
  if (penalty_rounds < 1) throw ConfigError("solve: need at least one penalty round");
  if (!(penalty_initial > 0.0)) throw ConfigError("solve: penalty weight must be positive");
  if (!(step > 0.0)) throw ConfigError("solve: integration step must be positive");
  if (!(simplex_scale > 0.0)) throw ConfigError("solve: simplex scale must be positive");
  if (refine_rounds < 0) throw ConfigError("solve: refine rounds must be nonnegative");
}

namespace {

constexpr double kDomainExitBarrier = 1e9;

struct Candidate {
  ControlSignal signal;
  double cost = 0.0;
  FeasibilityReport report;
  bool feasible = false;
};

// (feasible, cost, residual) lexicographic preference.
bool better(const Candidate& a, const Candidate& b) {
  if (a.feasible != b.feasible) return a.feasible;
  if (a.feasible) return a.cost < b.cost;
  return a.report.worst() < b.report.worst();
}

class DirectSolver {
 public:
  DirectSolver(const ControlSystem& system, const SolveConfig& config)
      : system_(system),
        config_(config),
        dim_(config.segments * system.controls.dim()) {}

  Eigen::VectorXd pack(const std::vector<Vec>& values) const {
    const int m = system_.controls.dim();
    Eigen::VectorXd theta(dim_);
    for (int s = 0; s < config_.segments; ++s)
      for (int i = 0; i < m; ++i) theta[s * m + i] = values[s][i];
    return theta;
  }

  std::vector<Vec> unpack_projected(const Eigen::VectorXd& theta) const {
    const int m = system_.controls.dim();
    std::vector<Vec> values(config_.segments);
    for (int s = 0; s < config_.segments; ++s) {
      Vec u(m);
      for (int i = 0; i < m; ++i) u[i] = theta[s * m + i];
      values[s] = system_.controls.project(std::move(u));
    }
    return values;
  }

  double set_distance_sq(const Eigen::VectorXd& theta) const {
    const int m = system_.controls.dim();
    double sum = 0.0;
    for (int s = 0; s < config_.segments; ++s) {
      Vec u(m);
      for (int i = 0; i < m; ++i) u[i] = theta[s * m + i];
      const double d = system_.controls.distance_to(u);
      sum += d * d;
    }
    return sum;
  }

  ControlSignal signal_from(const Eigen::VectorXd& theta) const {
    return ControlSignal::uniform(system_.horizon, unpack_projected(theta));
  }

  double penalized(const Eigen::VectorXd& theta, double weight) const {
    const ControlSignal signal = signal_from(theta);
    Trajectory traj;
    try {
      traj = integrate(system_, signal, system_.initial_state, config_.step);
    } catch (const IntegrationError& err) {
      // push back toward the domain: earlier exits are worse
      return kDomainExitBarrier * (1.0 + (system_.horizon - err.exit_time));
    }
    const double cost = evaluate_cost(system_, signal, traj);
    const FeasibilityReport report =
        check_feasible(system_, signal, traj, config_.tolerances);
    return cost +
           weight * (report.endpoint_residual * report.endpoint_residual +
                     report.state_violation * report.state_violation +
                     set_distance_sq(theta));
  }

  Candidate evaluate(const Eigen::VectorXd& theta) const {
    Candidate c;
    c.signal = signal_from(theta);
    const Trajectory traj = integrate(system_, c.signal, system_.initial_state, config_.step);
    c.cost = evaluate_cost(system_, c.signal, traj);
    c.report = check_feasible(system_, c.signal, traj, config_.tolerances);
    c.feasible = c.report.feasible;
    return c;
  }

  // Penalty-escalated local search from one start point.
  Eigen::VectorXd optimize_start(Eigen::VectorXd theta) const {
    const int iterations = config_.simplex_max_iterations > 0
                               ? config_.simplex_max_iterations
                               : std::max(300, 120 * dim_);
    const double span = 2.0 * system_.controls.bounding_radius();
    double weight = config_.penalty_initial;
    double scale = config_.simplex_scale * std::max(span, 1e-6);
    for (int round = 0; round < config_.penalty_rounds; ++round) {
      NelderMeadOptions nm;
      nm.max_iterations = round == 0 ? iterations : std::max(150, iterations / 2);
      nm.f_tolerance = 1e-14;
      nm.x_tolerance = 1e-12;
      const NelderMeadResult result = nelder_mead(
          [&](const Eigen::VectorXd& t) { return penalized(t, weight); }, theta,
          Eigen::VectorXd::Constant(dim_, scale), nm);
      theta = result.best;
      weight *= config_.penalty_growth;
      scale *= 0.5;
    }
    return theta;
  }

  std::vector<Vec> initial_values(int start, Rng& master) const {
    std::vector<Vec> values(config_.segments);
    if (start == 0) {
      if (system_.reference_signal) {
        // designated start: the attached known-feasible signal, resampled
        const ControlSignal& ref = *system_.reference_signal;
        for (int s = 0; s < config_.segments; ++s) {
          const double mid = system_.horizon * (s + 0.5) / config_.segments;
          values[s] = ref.value_at(mid);
        }
      } else {
        std::fill(values.begin(), values.end(), system_.controls.center());
      }
      return values;
    }
    Rng rng = master.fork(static_cast<std::uint64_t>(start));
    for (int s = 0; s < config_.segments; ++s) values[s] = system_.controls.sample(rng);
    return values;
  }

 private:
  const ControlSystem& system_;
  const SolveConfig& config_;
  int dim_;
};

SolveResult run_solve(const ControlSystem& system, const SolveConfig& config,
                      const std::vector<std::vector<Vec>>& start_values,
                      std::vector<double> carried_trace,
                      const Candidate* warm_incumbent = nullptr) {
  const auto t_begin = std::chrono::steady_clock::now();
  const DirectSolver solver(system, config);

  SolveResult result;
  result.trace = std::move(carried_trace);
  result.segments = config.segments;

  Candidate incumbent;
  bool has_incumbent = false;
  if (warm_incumbent) {
    incumbent = *warm_incumbent;
    has_incumbent = true;
  }
  for (std::size_t s = 0; s < start_values.size(); ++s) {
    const Eigen::VectorXd theta = solver.optimize_start(solver.pack(start_values[s]));
    const Candidate candidate = solver.evaluate(theta);
    if (!has_incumbent || better(candidate, incumbent)) {
      incumbent = candidate;
      has_incumbent = true;
    }
    if (incumbent.feasible) result.trace.push_back(incumbent.cost);
    StartSummary summary;
    summary.start = static_cast<int>(s);
    summary.cost = candidate.cost;
    summary.endpoint_residual = candidate.report.endpoint_residual;
    summary.state_violation = candidate.report.state_violation;
    summary.feasible = candidate.feasible;
    result.start_summaries.push_back(summary);
  }

  result.best_signal = incumbent.signal;
  result.best_cost = incumbent.cost;
  result.feasibility = incumbent.report;
  result.feasible = incumbent.feasible;
  FeasibilityTolerances relaxed = config.tolerances;
  relaxed.control *= 10.0;
  relaxed.state *= 10.0;
  relaxed.endpoint *= 10.0;
  result.infeasible_flag = !incumbent.feasible &&
                           !(incumbent.report.control_violation <= relaxed.control &&
                             incumbent.report.state_violation <= relaxed.state &&
                             incumbent.report.endpoint_residual <= relaxed.endpoint);
  result.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_begin)
          .count();
  return result;
}

}  // namespace

SolveResult solve(const ControlSystem& system, const SolveConfig& config) {
  config.validate();
  if (system.manifold == nullptr || !system.dynamics || !system.running_cost)
    throw ConfigError("solve: control system is incomplete");

  Rng master(config.seed);
  const DirectSolver solver(system, config);
  std::vector<std::vector<Vec>> starts;
  starts.reserve(config.starts);
  for (int s = 0; s < config.starts; ++s) starts.push_back(solver.initial_values(s, master));

  SolveResult result = run_solve(system, config, starts, {});
  for (int r = 0; r < config.refine_rounds; ++r) {
    SolveConfig refined = config;
    refined.refine_rounds = 0;
    refined.segments = result.segments;  // refine() doubles from here
    result = refine(system, result, refined);
  }
  return result;
}

SolveResult refine(const ControlSystem& system, const SolveResult& previous,
                   const SolveConfig& config) {
  SolveConfig doubled = config;
  doubled.segments = previous.segments * 2;
  doubled.refine_rounds = 0;
  doubled.validate();

  // Warm-start dominance: the split signal integrates on the identical grid,
  // so seeding the incumbent with the previous pair guarantees the refined
  // result never regresses.
  const ControlSignal warm = previous.best_signal.split_segments();
  Candidate carried;
  carried.signal = warm;
  carried.cost = previous.best_cost;
  carried.report = previous.feasibility;
  carried.feasible = previous.feasible;
  return run_solve(system, doubled, {warm.values}, previous.trace, &carried);
}

double analytic_optimum(const std::string& problem_id, double horizon) {
  if (!(horizon > 0.0)) throw ConfigError("analytic_optimum: horizon must be positive");
  if (problem_id == "h3-example") {
    const double root = bisect_root([](double u) { return 2.0 * u - std::cos(u); }, 0.0,
                                    1.5707963267948966, 1e-12);
    return horizon * (root * root + 1.0 - std::sin(root));
  }
  if (problem_id == "s2-example") {
    const double pi = 3.14159265358979323846;
    return pi * pi / (4.0 * horizon);
  }
  throw ConfigError("analytic_optimum: unknown problem id '" + problem_id + "'");
}

}  // namespace riemctl
