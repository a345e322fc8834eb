#ifndef RIEMCTL_JSON_IO_HPP
#define RIEMCTL_JSON_IO_HPP

#include <json.hpp>

#include <string>

#include "riemctl/control.hpp"
#include "riemctl/orientor.hpp"
#include "riemctl/solver.hpp"
#include "riemctl/verify.hpp"

namespace riemctl {

using Json = nlohmann::ordered_json;

Json to_json(const Vec& v);
Json to_json(const ControlSignal& signal);
Json to_json(const FeasibilityReport& report);

// Trajectory export: {problem, params, step, grid, states, controls, cost,
// feasibility}. The CSV mirror emits one row per grid node.
Json trajectory_to_json(const std::string& problem, const Json& params,
                        const ControlSignal& signal, const Trajectory& trajectory,
                        double cost, const FeasibilityReport& feasibility);
std::string trajectory_to_csv(const ControlSystem& system, const ControlSignal& signal,
                              const Trajectory& trajectory);

Json to_json(const ConvexityVerdict& verdict);
Json to_json(const CesariProbeReport& report);
Json to_json(const SolveResult& result);
Json to_json(const GeometrySuiteReport& report);

void write_text_file(const std::string& path, const std::string& contents);

}  // namespace riemctl

#endif  // RIEMCTL_JSON_IO_HPP
