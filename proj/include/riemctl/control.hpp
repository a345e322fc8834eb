#ifndef RIEMCTL_CONTROL_HPP
#define RIEMCTL_CONTROL_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "riemctl/geometry.hpp"

namespace riemctl {

// ---------------------------------------------------------------------------
// Control-value sets: a box in R^m, a Euclidean ball, or a finite list.

class ControlSet {
 public:
  enum class Kind { box, ball, finite };

  // Empty placeholder; assign one of the factory results before use.
  ControlSet() = default;

  static ControlSet box(Vec lo, Vec hi);
  static ControlSet ball(int dim, double radius);
  static ControlSet finite(std::vector<Vec> points);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  bool closed_and_bounded() const { return closed_; }
  // Marks a descriptor as open/unbounded on the user's authority; convexity
  // verdicts on such sets are capped at "inconclusive".
  ControlSet& declare_open() {
    closed_ = false;
    return *this;
  }

  bool contains(const Vec& u, double tolerance = 1e-12) const;
  double distance_to(const Vec& u) const;  // Euclidean distance to the set
  Vec project(Vec u) const;                // clamp / radial rescale / nearest point
  Vec sample(Rng& rng) const;              // uniform over the set
  Vec center() const;

  // Finite enumeration with `resolution` nodes per coordinate (box:
  // resolution^m nodes; ball: box grid restricted to the ball plus the
  // center; finite: the points themselves).
  std::vector<Vec> grid(int resolution) const;

  double bounding_radius() const;
  const std::vector<Vec>& points() const { return points_; }
  const Vec& lower() const { return lo_; }
  const Vec& upper() const { return hi_; }
  double radius() const { return radius_; }

 private:
  Kind kind_ = Kind::box;
  int dim_ = 0;
  bool closed_ = true;
  Vec lo_, hi_;              // box
  double radius_ = 0.0;      // ball
  std::vector<Vec> points_;  // finite
};

// ---------------------------------------------------------------------------
// Piecewise-constant control signal on [0, T].

struct ControlSignal {
  std::vector<double> breakpoints;  // 0 = t_0 < ... < t_N = T
  std::vector<Vec> values;          // one per segment

  static ControlSignal constant(double horizon, int segments, Vec value);
  static ControlSignal uniform(double horizon, std::vector<Vec> segment_values);

  int segments() const { return static_cast<int>(values.size()); }
  double horizon() const { return breakpoints.back(); }
  // Right-continuous lookup; the final instant uses the last segment.
  const Vec& value_at(double t) const;
  int segment_index(double t) const;
  // Same signal on a twice-refined breakpoint grid.
  ControlSignal split_segments() const;
};

// Validates breakpoint ordering and membership of every value in `controls`.
ControlSignal make_signal(const ControlSet& controls, std::vector<double> breakpoints,
                          std::vector<Vec> values);

// ---------------------------------------------------------------------------
// Control system data model (dynamics, constraints, costs).

struct ControlSystem {
  std::string name;
  const Manifold* manifold = nullptr;
  double horizon = 1.0;

  // f(t, x, u): tangent vector at x in representation coordinates.
  std::function<Vec(double, const Point&, const Vec&)> dynamics;
  // f0(t, x, u) and h(x0, xT).
  std::function<double(double, const Point&, const Vec&)> running_cost;
  std::function<double(const Point&, const Point&)> endpoint_cost;

  ControlSet controls;  // U
  // Gamma(t, x); empty means the constant map Gamma = U.
  std::function<ControlSet(double, const Point&)> control_map;
  // Distance-to-Q estimate (0 inside the pointwise state set).
  std::function<double(const Point&)> state_set_distance;
  // Residual of (y(0), y(T)) against the endpoint set S (0 when inside).
  std::function<double(const Point&, const Point&)> endpoint_residual;

  Point initial_state;
  std::optional<ControlSignal> reference_signal;  // known-feasible seed, when available
  // Sampler over the verification region of the state space.
  std::function<Point(Rng&)> state_sampler;

  // Declared lower-bound constant: f0 >= -bound, h >= -bound.
  double cost_lower_bound = 1.0;

  ControlSet gamma(double t, const Point& x) const {
    return control_map ? control_map(t, x) : controls;
  }
};

// ---------------------------------------------------------------------------
// Integrated trajectory on the integrator's grid.

struct Trajectory {
  std::vector<double> times;
  std::vector<Point> states;
  std::vector<Vec> velocities;  // realized f(t, y, u) at each node
  double step = 0.0;            // requested step bound

  const Point& front() const { return states.front(); }
  const Point& back() const { return states.back(); }
};

// Fixed-step RK4 integration of ydot = f(t, y, u(t)) in the representation
// coordinates, with per-step projection back onto the manifold. Substep
// counts per segment are powers of two so refining a signal's breakpoints
// reproduces the identical grid. Throws IntegrationError (with the exit time)
// if the state leaves the manifold domain.
Trajectory integrate(const ControlSystem& system, const ControlSignal& signal,
                     const Point& initial, double step);

// Composite-trapezoid quadrature of the running cost along the trajectory
// plus the endpoint cost. Throws CostError on non-finite integrand values.
double evaluate_cost(const ControlSystem& system, const ControlSignal& signal,
                     const Trajectory& trajectory);

// ---------------------------------------------------------------------------
// Feasibility

struct FeasibilityTolerances {
  double control = 1e-3;
  double state = 1e-3;
  double endpoint = 1e-3;
};

struct FeasibilityReport {
  double control_violation = 0.0;  // max distance of u(t) from Gamma(t, y(t))
  double state_violation = 0.0;    // max distance-to-Q
  double endpoint_residual = 0.0;  // residual against S
  bool feasible = false;
  FeasibilityTolerances tolerances;

  double worst() const {
    return std::max({control_violation, state_violation, endpoint_residual});
  }
};

FeasibilityReport check_feasible(const ControlSystem& system, const ControlSignal& signal,
                                 const Trajectory& trajectory,
                                 const FeasibilityTolerances& tolerances = {});

// ---------------------------------------------------------------------------
// Growth bound  rho(y(s), y(t)) <= rho(y(t), x0)(e^{K(s-t)} - 1)
//                                   + K (int_t^s ell) e^{K(s-t)}

struct GrowthData {
  double lipschitz = 2.0;  // K > 1
  StepFunction dominating = StepFunction::constant(1.0, 1.0);  // ell >= 0
  double exponent = 2.0;   // p > 1 (recorded; the bound itself only needs K, ell)
  Point base_point;        // x0

  void validate() const;
};

struct GrowthCheckOptions {
  int max_nodes = 12;  // evenly subsampled trajectory nodes entering the all-pairs check
  ShootingOptions shooting;
};

struct GrowthReport {
  bool holds = false;
  double min_slack = 0.0;  // min over pairs of (right side - left side)
  double worst_t = 0.0;
  double worst_s = 0.0;
  int pairs_checked = 0;
};

GrowthReport verify_growth_bound(const Trajectory& trajectory, const GrowthData& growth,
                                 double tolerance, const GrowthCheckOptions& options = {});

// ---------------------------------------------------------------------------
// Lipschitz-constant estimation:  max |L_{x1 x2} f(t,x1,u) - f(t,x2,u)| / rho

struct LipschitzEstimate {
  double constant = 0.0;
  int samples_used = 0;
  int samples_skipped = 0;  // pairs violating the injectivity precondition
};

LipschitzEstimate estimate_lipschitz(const ControlSystem& system, int sample_count,
                                     double radius, std::uint64_t seed);

// sup over sampled controls of |f(t, x, u)|_g (feeds the dominating function).
double sup_speed_at(const ControlSystem& system, const Point& x, int control_samples,
                    std::uint64_t seed);

}  // namespace riemctl

#endif  // RIEMCTL_CONTROL_HPP
