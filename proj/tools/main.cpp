// Command-line front end: solve the built-in problems, check the orientor
// convexity condition, and run the geometry verification suite. Every command
// emits a machine-readable JSON report (--out) and a short console summary.
//
// Exit codes: 0 pass/feasible, 1 infeasible result, 2 check failed,
// 3 configuration error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "riemctl/json_io.hpp"
#include "riemctl/manifolds.hpp"
#include "riemctl/orientor.hpp"
#include "riemctl/problems.hpp"
#include "riemctl/solver.hpp"
#include "riemctl/verify.hpp"

namespace {

using riemctl::Json;

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitCheckFailed = 2;
constexpr int kExitConfigError = 3;

Json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw riemctl::ConfigError("cannot read config file '" + path + "'");
  Json config;
  try {
    in >> config;
  } catch (const std::exception& err) {
    throw riemctl::ConfigError("config file '" + path + "' is not valid JSON: " + err.what());
  }
  return config;
}

// Config-file values fill in options the command line left untouched; flags
// always win.
template <typename T>
void config_default(const CLI::App& cmd, const std::string& flag, const Json& config,
                    const std::string& key, T& value) {
  if (cmd.count(flag) == 0 && config.contains(key)) value = config.at(key).get<T>();
}

void emit(const Json& report, const std::string& out_path) {
  if (!out_path.empty()) riemctl::write_text_file(out_path, report.dump(2) + "\n");
}

struct SolveArgs {
  std::string problem;
  double horizon = 1.0;
  int segments = 4;
  int starts = 16;
  std::uint64_t seed = 1;
  double step = 1.0 / 128.0;
  int refine_rounds = 2;
  double ball_radius = 10.0;
  double tolerance = 1e-3;
  std::string out, csv, config_path;
};

int run_solve(const SolveArgs& args) {
  riemctl::ProblemParams params;
  params.horizon = args.horizon;
  params.ball_radius = args.ball_radius;
  const riemctl::ProblemDescriptor desc = riemctl::build_problem(args.problem, params);

  riemctl::SolveConfig config;
  config.segments = args.segments;
  config.starts = args.starts;
  config.seed = args.seed;
  config.step = args.step;
  config.refine_rounds = args.refine_rounds;
  config.tolerances.control = args.tolerance;
  config.tolerances.state = args.tolerance;
  config.tolerances.endpoint = args.tolerance;

  const riemctl::SolveResult result = riemctl::solve(desc.system, config);
  const riemctl::Trajectory trajectory =
      riemctl::integrate(desc.system, result.best_signal, desc.system.initial_state, args.step);
  const riemctl::FeasibilityReport feasibility =
      riemctl::check_feasible(desc.system, result.best_signal, trajectory, config.tolerances);

  const Json config_echo{{"problem", args.problem},
                         {"horizon", args.horizon},
                         {"segments", args.segments},
                         {"final_segments", result.segments},
                         {"starts", args.starts},
                         {"seed", args.seed},
                         {"step", args.step},
                         {"refine_rounds", args.refine_rounds},
                         {"ball_radius", args.ball_radius},
                         {"tolerance", args.tolerance}};
  const int exit_status = result.feasible ? kExitOk : kExitInfeasible;
  Json report{{"command", "solve"},
              {"config", config_echo},
              {"solve", riemctl::to_json(result)},
              {"trajectory",
               riemctl::trajectory_to_json(args.problem, config_echo, result.best_signal,
                                           trajectory, result.best_cost, feasibility)},
              {"exit_status", exit_status}};
  emit(report, args.out);
  if (!args.csv.empty())
    riemctl::write_text_file(
        args.csv, riemctl::trajectory_to_csv(desc.system, result.best_signal, trajectory));

  std::cout << "problem " << args.problem << ": cost " << result.best_cost << " ("
            << (result.feasible ? "feasible" : "infeasible") << ", endpoint residual "
            << result.feasibility.endpoint_residual << ", " << result.segments
            << " segments)\n";
  return exit_status;
}

struct CesariArgs {
  std::string problem;
  double horizon = 1.0;
  int samples = 50;
  int resolution = 7;
  int trials = 2000;
  double tolerance = 1e-3;
  std::uint64_t seed = 1;
  double ball_radius = 10.0;
  std::string out, config_path;
};

int run_check_cesari(const CesariArgs& args) {
  riemctl::ProblemParams params;
  params.horizon = args.horizon;
  params.ball_radius = args.ball_radius;
  const riemctl::ProblemDescriptor desc = riemctl::build_problem(args.problem, params);
  const riemctl::ControlSystem& sys = desc.system;

  const riemctl::ControlSignal signal =
      sys.reference_signal
          ? *sys.reference_signal
          : riemctl::ControlSignal::constant(sys.horizon, 1, sys.controls.center());
  const riemctl::Trajectory trajectory =
      riemctl::integrate(sys, signal, sys.initial_state, 1.0 / 128.0);

  Json sites = Json::array();
  bool all_pass = true;
  double worst_gap = 0.0;
  riemctl::Rng seeder(args.seed);
  for (int k = 0; k < args.samples; ++k) {
    const std::size_t node =
        args.samples == 1 ? 0
                          : (k * (trajectory.states.size() - 1)) / (args.samples - 1);
    const double t = trajectory.times[node];
    const riemctl::Point& x = trajectory.states[node];
    const riemctl::OrientorSample sample =
        riemctl::sample_orientor(sys, t, x, args.resolution);
    const riemctl::ConvexityVerdict verdict = riemctl::check_convex(
        sys, sample, args.trials, args.tolerance, seeder.fork(k).next_u64());
    all_pass = all_pass && verdict.passed();
    worst_gap = std::max(worst_gap, verdict.worst_gap);
    Json site{{"problem", args.problem},
              {"t", t},
              {"x", riemctl::to_json(x.rep)},
              {"resolution", args.resolution},
              {"trials", verdict.trials}};
    site.update(riemctl::to_json(verdict));
    sites.push_back(site);
  }

  const int exit_status = all_pass ? kExitOk : kExitCheckFailed;
  Json report{{"command", "check-cesari"},
              {"config", Json{{"problem", args.problem},
                              {"horizon", args.horizon},
                              {"samples", args.samples},
                              {"resolution", args.resolution},
                              {"trials", args.trials},
                              {"tolerance", args.tolerance},
                              {"seed", args.seed},
                              {"ball_radius", args.ball_radius}}},
              {"sites", sites},
              {"all_pass", all_pass},
              {"worst_gap", worst_gap},
              {"exit_status", exit_status}};
  emit(report, args.out);

  std::cout << "problem " << args.problem << ": convexity "
            << (all_pass ? "pass" : "FAIL") << " over " << args.samples
            << " sites (worst gap " << worst_gap << ")\n";
  return exit_status;
}

struct VerifyArgs {
  std::string manifold;
  int trials = 200;
  std::uint64_t seed = 1;
  std::string out, config_path;
};

int run_verify_geometry(const VerifyArgs& args) {
  const riemctl::GeometrySuiteReport report =
      riemctl::run_geometry_suite(args.manifold, args.trials, args.seed);
  const int exit_status = report.pass() ? kExitOk : kExitCheckFailed;
  Json out{{"command", "verify-geometry"},
           {"config",
            Json{{"manifold", args.manifold}, {"trials", args.trials}, {"seed", args.seed}}},
           {"report", riemctl::to_json(report)},
           {"exit_status", exit_status}};
  emit(out, args.out);

  std::cout << "manifold " << args.manifold << ": "
            << (report.pass() ? "pass" : "FAIL") << " (roundtrip "
            << report.worst_explog_roundtrip << ", isometry "
            << report.worst_transport_isometry << ", reference "
            << std::max(report.worst_distance_vs_reference,
                        report.worst_transport_vs_reference)
            << ")\n";
  return exit_status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trajectory optimization and hypothesis checks for control systems on "
               "Riemannian manifolds"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  CLI::App* solve_cmd = app.add_subcommand("solve", "run the direct-method solver");
  solve_cmd->add_option("--problem", solve_args.problem, "problem id")->required();
  solve_cmd->add_option("--horizon", solve_args.horizon, "time horizon T");
  solve_cmd->add_option("--segments", solve_args.segments, "initial control segments");
  solve_cmd->add_option("--starts", solve_args.starts, "multi-start count");
  solve_cmd->add_option("--seed", solve_args.seed, "master seed");
  solve_cmd->add_option("--step", solve_args.step, "integration step bound");
  solve_cmd->add_option("--refine-rounds", solve_args.refine_rounds,
                        "segment-doubling rounds");
  solve_cmd->add_option("--ball-radius", solve_args.ball_radius,
                        "control ball radius (sphere problem)");
  solve_cmd->add_option("--tol", solve_args.tolerance, "feasibility tolerance");
  solve_cmd->add_option("--out", solve_args.out, "JSON report path");
  solve_cmd->add_option("--csv", solve_args.csv, "trajectory CSV path");
  solve_cmd->add_option("--config", solve_args.config_path, "JSON config file");

  CesariArgs cesari_args;
  CLI::App* cesari_cmd =
      app.add_subcommand("check-cesari", "verify orientor-set convexity along a reference");
  cesari_cmd->add_option("--problem", cesari_args.problem, "problem id")->required();
  cesari_cmd->add_option("--horizon", cesari_args.horizon, "time horizon T");
  cesari_cmd->add_option("--samples", cesari_args.samples, "(t, x) sample count");
  cesari_cmd->add_option("--resolution", cesari_args.resolution, "control grid resolution");
  cesari_cmd->add_option("--trials", cesari_args.trials, "combination trials per site");
  cesari_cmd->add_option("--tol", cesari_args.tolerance, "membership tolerance");
  cesari_cmd->add_option("--seed", cesari_args.seed, "master seed");
  cesari_cmd->add_option("--ball-radius", cesari_args.ball_radius,
                         "control ball radius (sphere problem)");
  cesari_cmd->add_option("--out", cesari_args.out, "JSON report path");
  cesari_cmd->add_option("--config", cesari_args.config_path, "JSON config file");

  VerifyArgs verify_args;
  CLI::App* verify_cmd =
      app.add_subcommand("verify-geometry", "run the geometry invariant suite");
  verify_cmd->add_option("--manifold", verify_args.manifold, "manifold id (h3 | s2)")
      ->required();
  verify_cmd->add_option("--trials", verify_args.trials, "random instances");
  verify_cmd->add_option("--seed", verify_args.seed, "master seed");
  verify_cmd->add_option("--out", verify_args.out, "JSON report path");
  verify_cmd->add_option("--config", verify_args.config_path, "JSON config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitConfigError;
  }

  try {
    if (solve_cmd->parsed()) {
      if (!solve_args.config_path.empty()) {
        const Json config = load_config_file(solve_args.config_path);
        config_default(*solve_cmd, "--horizon", config, "horizon", solve_args.horizon);
        config_default(*solve_cmd, "--segments", config, "segments", solve_args.segments);
        config_default(*solve_cmd, "--starts", config, "starts", solve_args.starts);
        config_default(*solve_cmd, "--seed", config, "seed", solve_args.seed);
        config_default(*solve_cmd, "--step", config, "step", solve_args.step);
        config_default(*solve_cmd, "--refine-rounds", config, "refine_rounds",
                       solve_args.refine_rounds);
        config_default(*solve_cmd, "--ball-radius", config, "ball_radius",
                       solve_args.ball_radius);
        config_default(*solve_cmd, "--tol", config, "tolerance", solve_args.tolerance);
      }
      return run_solve(solve_args);
    }
    if (cesari_cmd->parsed()) {
      if (!cesari_args.config_path.empty()) {
        const Json config = load_config_file(cesari_args.config_path);
        config_default(*cesari_cmd, "--horizon", config, "horizon", cesari_args.horizon);
        config_default(*cesari_cmd, "--samples", config, "samples", cesari_args.samples);
        config_default(*cesari_cmd, "--resolution", config, "resolution",
                       cesari_args.resolution);
        config_default(*cesari_cmd, "--trials", config, "trials", cesari_args.trials);
        config_default(*cesari_cmd, "--tol", config, "tolerance", cesari_args.tolerance);
        config_default(*cesari_cmd, "--seed", config, "seed", cesari_args.seed);
        config_default(*cesari_cmd, "--ball-radius", config, "ball_radius",
                       cesari_args.ball_radius);
      }
      return run_check_cesari(cesari_args);
    }
    if (verify_cmd->parsed()) {
      if (!verify_args.config_path.empty()) {
        const Json config = load_config_file(verify_args.config_path);
        config_default(*verify_cmd, "--trials", config, "trials", verify_args.trials);
        config_default(*verify_cmd, "--seed", config, "seed", verify_args.seed);
      }
      return run_verify_geometry(verify_args);
    }
  } catch (const riemctl::ConfigError& err) {
    std::cerr << "configuration error: " << err.what() << "\n";
    return kExitConfigError;
  } catch (const riemctl::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitConfigError;
}
