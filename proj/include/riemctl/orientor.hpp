#ifndef RIEMCTL_ORIENTOR_HPP
#define RIEMCTL_ORIENTOR_HPP

#include <optional>
#include <vector>

#include "riemctl/control.hpp"

namespace riemctl {

// ---------------------------------------------------------------------------
// Finite numerical stand-in for the orientor field
//   E(t, x) = { (z0, f(t,x,u)) : u in Gamma(t,x), z0 >= f0(t,x,u) }.
// Each grid control contributes its graph point (f0(u), f(u)) and a capped
// epigraph point (z0_cap, f(u)).

struct OrientorPoint {
  double z0 = 0.0;
  Vec velocity;  // X in representation coordinates, tangent at the base point
  Vec control;   // generating u
};

struct OrientorSample {
  double t = 0.0;
  Point x;
  int resolution = 0;
  double z0_cap = 0.0;
  std::vector<Vec> grid;
  std::vector<OrientorPoint> points;
};

// Enumerates Gamma(t, x) with `resolution` nodes per control dimension and
// maps the grid through (f0, f). Throws ConfigError for a control descriptor
// declared open/unbounded unless an explicit cap is supplied.
OrientorSample sample_orientor(const ControlSystem& system, double t, const Point& x,
                               int resolution, std::optional<double> z0_cap = {});

// L_{yx} applied to a sample based at y: parallel-transports every velocity
// to `x` and keeps the z0 components. Requires rho(y, x) below the
// injectivity bound.
OrientorSample transported_orientor(const OrientorSample& sample, const Point& x,
                                    const ShootingOptions& options = {});

// ---------------------------------------------------------------------------
// Convexity check (Proposition-style reduction: E(t,x) convex + closed).

struct ConvexityWitness {
  int first_index = 0;
  int second_index = 0;
  double lambda = 0.0;
  double gap = 0.0;
};

struct ConvexityVerdict {
  enum class Result { pass, fail, inconclusive };
  Result result = Result::inconclusive;
  int trials = 0;
  double worst_gap = 0.0;
  std::optional<ConvexityWitness> witness;  // present on failure

  bool passed() const { return result == Result::pass; }
  bool failed() const { return result == Result::fail; }
};

struct MembershipOptions {
  int fine_multiplier = 4;     // fine grid refinement of the sample resolution
  int polish_iterations = 120; // simplex polish budget on continuous control sets
  double skip_polish_below = 0.0;  // coarse gap under this skips the polish
};

// Epigraph-aware distance from (z0, X) to the sampled set
// { (w0, f(t,x,u)) : u in fine grid of Gamma(t,x), w0 >= f0(t,x,u) }:
// sqrt(|X - f(u)|_g^2 + max(0, f0(u) - z0)^2), minimized over u (nearest grid
// control first, lowest index on ties, then a local simplex refinement for
// box/ball sets).
class OrientorMembership {
 public:
  OrientorMembership(const ControlSystem& system, double t, Point x, int resolution,
                     MembershipOptions options = {});

  double gap(double z0, const Vec& velocity) const;
  const Point& base() const { return x_; }

 private:
  const ControlSystem& system_;
  double t_;
  Point x_;
  ControlSet gamma_;
  MembershipOptions options_;
  std::vector<Vec> fine_grid_;
  std::vector<Vec> fine_velocity_;
  std::vector<double> fine_cost_;
};

// Draws random pairs from the sample and random lambda in (0, 1), and tests
// whether the convex combination stays within `tolerance` of the orientor
// set. Deterministic per seed. Verdicts on control sets declared open or
// unbounded are capped at `inconclusive`.
ConvexityVerdict check_convex(const ControlSystem& system, const OrientorSample& sample,
                              int trials, double tolerance, std::uint64_t seed,
                              const MembershipOptions& options = {});

// ---------------------------------------------------------------------------
// Direct finite-delta probe of the Cesari-type property: builds the union of
// parallel-translated nearby orientor samples, probes its convex hull with
// random combinations, and reports the one-sided deviation from E(t, x) per
// delta. The intersection over all delta is not computable; this probe
// documents the trend as delta decreases.

struct CesariProbeOptions {
  int nearby_points = 12;     // y samples per delta
  int combination_trials = 400;
  MembershipOptions membership;
  ShootingOptions shooting;
};

struct CesariProbeReport {
  std::vector<double> deltas;
  std::vector<double> deviations;  // one-sided hull deviation per delta
  bool pass = false;               // deviation at the smallest delta <= tolerance
  bool monotone = false;           // deviations non-increasing as delta decreases
  double tolerance = 0.0;
};

CesariProbeReport check_cesari_local(const ControlSystem& system, double t, const Point& x,
                                     std::vector<double> deltas, int resolution,
                                     double tolerance, std::uint64_t seed,
                                     const CesariProbeOptions& options = {});

}  // namespace riemctl

#endif  // RIEMCTL_ORIENTOR_HPP
