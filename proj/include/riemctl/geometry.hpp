#ifndef RIEMCTL_GEOMETRY_HPP
#define RIEMCTL_GEOMETRY_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "riemctl/core.hpp"

namespace riemctl {

// Christoffel symbols Gamma^k_ij of the Levi-Civita connection at one point,
// in a fixed chart. Symmetric in (i, j).
struct ChristoffelTable {
  explicit ChristoffelTable(int dim) : n(dim) { values.fill(0.0); }

  double& at(int k, int i, int j) { return values[(k * n + i) * n + j]; }
  double at(int k, int i, int j) const { return values[(k * n + i) * n + j]; }

  int n;
  std::array<double, kMaxDim * kMaxDim * kMaxDim> values;
};

class Manifold;

// A state on the manifold. `rep` holds the representation coordinates: chart
// coordinates for chart-backed spaces (H^3, R^n) and ambient R^3 coordinates
// for the embedded sphere. `chart` is the active chart used for Christoffel
// based computations. Points do not own the manifold; descriptors are
// long-lived, stateless values.
struct Point {
  const Manifold* manifold = nullptr;
  Vec rep;
  int chart = 0;
};

// An element of the tangent space at `base`, in the same representation
// coordinates as the base point.
struct Tangent {
  Point base;
  Vec comp;
};

// Sampled constant-speed geodesic s -> gamma(s), s in [0, length].
struct GeodesicSegment {
  Point start;
  Tangent initial;       // gamma'(0)
  double length = 0.0;   // arc-length span
  double step = 0.0;     // sampling step actually used
  std::vector<double> params;
  std::vector<Point> points;
  std::vector<Vec> velocities;  // gamma'(s) in representation coordinates
};

// ---------------------------------------------------------------------------
// Manifold descriptor: dimension, atlas, metric, connection and the
// injectivity-radius lower bound. Generic geometry (geodesics, transport,
// distance) is driven entirely through this interface; concrete spaces
// override the closed-form pieces they know.

class Manifold {
 public:
  virtual ~Manifold() = default;

  virtual std::string name() const = 0;
  virtual int dim() const = 0;
  virtual int rep_dim() const = 0;

  virtual int chart_count() const = 0;
  virtual bool chart_contains(int chart, const Vec& rep) const = 0;
  virtual int default_chart(const Vec& rep) const = 0;
  // Chart to continue with mid-integration. The default keeps the current
  // chart while it remains valid; multi-chart spaces add hysteresis.
  virtual int select_chart(int current, const Vec& rep) const;

  virtual Vec to_chart(int chart, const Vec& rep) const = 0;
  virtual Vec from_chart(int chart, const Vec& coords) const = 0;
  virtual Vec tangent_to_chart(int chart, const Vec& rep, const Vec& v) const = 0;
  virtual Vec tangent_from_chart(int chart, const Vec& coords, const Vec& w) const = 0;

  // Metric coefficients g_ij in chart coordinates; symmetric positive definite.
  virtual Mat metric(int chart, const Vec& coords) const = 0;

  // Gamma^k_ij in chart coordinates. The default differentiates the metric
  // with central differences; built-in spaces override with closed forms.
  virtual ChristoffelTable christoffel(int chart, const Vec& coords) const;

  // -Gamma^k_ij q'^i q'^j (second-order geodesic equation right-hand side).
  virtual Vec geodesic_acceleration(int chart, const Vec& coords, const Vec& velocity) const;

  // -Gamma^k_ij q'^i X^j (parallel-transport equation right-hand side).
  virtual Vec transport_derivative(int chart, const Vec& coords, const Vec& velocity,
                                   const Vec& field) const;

  // Lower bound on the injectivity radius at `rep` (kUnboundedRadius if none
  // is needed). Custom manifolds must supply this; there is no generic way to
  // compute it.
  virtual double injectivity_lower_bound(const Vec& rep) const = 0;

  // Representation-domain membership (e.g. x3 > 0, |x| = 1 within tolerance).
  virtual bool in_domain(const Vec& rep) const = 0;

  // Pull a slightly drifted representation back onto the manifold.
  virtual Vec project_point(Vec rep) const { return rep; }
  // Project an ambient/representation vector onto the tangent space at rep.
  virtual Vec project_tangent(const Vec& /*rep*/, Vec v) const { return v; }
  // Residual of the embedded tangency constraint (0 for chart-backed spaces).
  virtual double tangency_residual(const Vec& /*rep*/, const Vec& /*v*/) const { return 0.0; }

  // Riemannian inner product of representation-coordinate tangents at rep.
  // Default routes through the active chart's metric.
  virtual double inner(const Vec& rep, const Vec& u, const Vec& v) const;

  Point point(Vec rep) const;
  Tangent tangent(const Point& base, Vec comp) const;
};

// ---------------------------------------------------------------------------
// Options

struct GeodesicOptions {
  double step = 1e-3;  // arc-length step for the classical RK4 scheme
};

struct ShootingOptions {
  GeodesicOptions geodesic;
  int starts = 8;           // multi-start initial directions
  int max_newton = 40;      // damped Newton iterations per start
  double tolerance = 1e-10; // chart-coordinate residual target
  std::optional<Vec> initial_guess;  // warm start (representation coordinates)
};

// ---------------------------------------------------------------------------
// Operations

double metric_inner(const Point& x, const Tangent& u, const Tangent& v);
double tangent_norm(const Point& x, const Tangent& u);

ChristoffelTable christoffel(const Point& x);

Point exp_map(const Point& x, const Tangent& v, const GeodesicOptions& options = {});

Tangent log_map(const Point& x, const Point& y, const ShootingOptions& options = {});

double distance(const Point& x, const Point& y, const ShootingOptions& options = {});

// Parallel translation of v from x to y along the minimizing geodesic.
Tangent parallel_transport(const Point& x, const Point& y, const Tangent& v,
                           const ShootingOptions& options = {});

// Transport of several vectors along the known geodesic s -> exp_x(s v),
// s in [0, 1]; one integration pass for the whole batch.
std::vector<Tangent> parallel_transport_along(const Point& x, const Tangent& v,
                                              const std::vector<Tangent>& fields,
                                              const GeodesicOptions& options = {});

GeodesicSegment trace_geodesic(const Point& x, const Tangent& v, double sample_step,
                               const GeodesicOptions& options = {});

namespace detail {
// Boundary-value solve shared by log_map / distance: returns every converged
// shooting solution's initial tangent, sorted by Riemannian norm.
struct ShootingSolution {
  Vec tangent_rep;
  double norm;
};
std::vector<ShootingSolution> solve_geodesic_bvp(const Point& x, const Point& y,
                                                 const ShootingOptions& options);
void require_same_base(const Point& x, const Tangent& u, const char* where);
}  // namespace detail

}  // namespace riemctl

#endif  // RIEMCTL_GEOMETRY_HPP
