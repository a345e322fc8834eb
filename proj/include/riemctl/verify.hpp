#ifndef RIEMCTL_VERIFY_HPP
#define RIEMCTL_VERIFY_HPP

#include <string>

#include "riemctl/geometry.hpp"

namespace riemctl {

// Randomized geometry self-checks: exp/log roundtrips, parallel-transport
// isometry, and cross-checks of the ODE/BVP routes against the closed-form
// references (arccosh distance on the half-space, rotation transport on the
// sphere). Worst deviations over all trials are reported.

struct GeometrySuiteReport {
  std::string manifold;
  int trials = 0;
  std::uint64_t seed = 0;
  double worst_explog_roundtrip = 0.0;
  double worst_transport_isometry = 0.0;
  double worst_distance_vs_reference = 0.0;   // h3 only; 0 otherwise
  double worst_transport_vs_reference = 0.0;  // s2 only; 0 otherwise
  double worst_speed_drift = 0.0;             // geodesic constant-speed residual
  double runtime_ms = 0.0;

  double roundtrip_limit = 1e-6;
  double isometry_limit = 1e-6;
  double reference_limit = 1e-5;

  bool pass() const {
    return worst_explog_roundtrip <= roundtrip_limit &&
           worst_transport_isometry <= isometry_limit &&
           worst_distance_vs_reference <= reference_limit &&
           worst_transport_vs_reference <= reference_limit;
  }
};

// manifold_id: "h3" or "s2". Throws ConfigError on other names or trials < 1.
GeometrySuiteReport run_geometry_suite(const std::string& manifold_id, int trials,
                                       std::uint64_t seed);

}  // namespace riemctl

#endif  // RIEMCTL_VERIFY_HPP
