#include "riemctl/json_io.hpp"

#include <fstream>
#include <sstream>

namespace riemctl {

Json to_json(const Vec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json to_json(const ControlSignal& signal) {
  Json values = Json::array();
  for (const Vec& u : signal.values) values.push_back(to_json(u));
  return Json{{"breakpoints", signal.breakpoints}, {"values", values}};
}

Json to_json(const FeasibilityReport& report) {
  return Json{{"control_violation", report.control_violation},
              {"state_violation", report.state_violation},
              {"endpoint_residual", report.endpoint_residual},
              {"feasible", report.feasible}};
}

Json trajectory_to_json(const std::string& problem, const Json& params,
                        const ControlSignal& signal, const Trajectory& trajectory,
                        double cost, const FeasibilityReport& feasibility) {
  Json states = Json::array();
  Json controls = Json::array();
  for (std::size_t i = 0; i < trajectory.states.size(); ++i) {
    states.push_back(to_json(trajectory.states[i].rep));
    controls.push_back(to_json(signal.value_at(trajectory.times[i])));
  }
  return Json{{"problem", problem},
              {"params", params},
              {"step", trajectory.step},
              {"grid", trajectory.times},
              {"states", states},
              {"controls", controls},
              {"cost", cost},
              {"feasibility", to_json(feasibility)}};
}

std::string trajectory_to_csv(const ControlSystem& system, const ControlSignal& signal,
                              const Trajectory& trajectory) {
  std::ostringstream out;
  out.precision(17);
  const int n = system.manifold->rep_dim();
  const int m = system.controls.dim();
  out << "t";
  for (int i = 0; i < n; ++i) out << ",x" << (i + 1);
  for (int i = 0; i < m; ++i) out << ",u" << (i + 1);
  out << "\n";
  for (std::size_t k = 0; k < trajectory.states.size(); ++k) {
    out << trajectory.times[k];
    for (int i = 0; i < n; ++i) out << "," << trajectory.states[k].rep[i];
    const Vec& u = signal.value_at(trajectory.times[k]);
    for (int i = 0; i < m; ++i) out << "," << u[i];
    out << "\n";
  }
  return out.str();
}

Json to_json(const ConvexityVerdict& verdict) {
  const char* name = verdict.result == ConvexityVerdict::Result::pass ? "pass"
                     : verdict.result == ConvexityVerdict::Result::fail ? "fail"
                                                                        : "inconclusive";
  Json out{{"verdict", name}, {"trials", verdict.trials}, {"worst_gap", verdict.worst_gap}};
  if (verdict.witness) {
    out["witness"] = Json{{"first_index", verdict.witness->first_index},
                          {"second_index", verdict.witness->second_index},
                          {"lambda", verdict.witness->lambda},
                          {"gap", verdict.witness->gap}};
  } else {
    out["witness"] = nullptr;
  }
  return out;
}

Json to_json(const CesariProbeReport& report) {
  return Json{{"deltas", report.deltas},
              {"deviations", report.deviations},
              {"pass", report.pass},
              {"monotone", report.monotone},
              {"tolerance", report.tolerance}};
}

Json to_json(const SolveResult& result) {
  Json summaries = Json::array();
  for (const StartSummary& s : result.start_summaries)
    summaries.push_back(Json{{"start", s.start},
                             {"cost", s.cost},
                             {"endpoint_residual", s.endpoint_residual},
                             {"state_violation", s.state_violation},
                             {"feasible", s.feasible}});
  return Json{{"best_cost", result.best_cost},
              {"feasible", result.feasible},
              {"infeasible_flag", result.infeasible_flag},
              {"residuals", to_json(result.feasibility)},
              {"segments", result.segments},
              {"trace", result.trace},
              {"signal", to_json(result.best_signal)},
              {"starts", summaries},
              {"wall_time_ms", result.wall_time_ms}};
}

Json to_json(const GeometrySuiteReport& report) {
  return Json{{"manifold", report.manifold},
              {"trials", report.trials},
              {"seed", report.seed},
              {"worst_explog_roundtrip", report.worst_explog_roundtrip},
              {"worst_transport_isometry", report.worst_transport_isometry},
              {"worst_distance_vs_reference", report.worst_distance_vs_reference},
              {"worst_transport_vs_reference", report.worst_transport_vs_reference},
              {"worst_speed_drift", report.worst_speed_drift},
              {"limits",
               Json{{"roundtrip", report.roundtrip_limit},
                    {"isometry", report.isometry_limit},
                    {"reference", report.reference_limit}}},
              {"pass", report.pass()},
              {"runtime_ms", report.runtime_ms}};
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output file '" + path + "'");
  out << contents;
}

}  // namespace riemctl
