#ifndef RIEMCTL_MANIFOLDS_HPP
#define RIEMCTL_MANIFOLDS_HPP

#include <array>

#include "riemctl/geometry.hpp"

namespace riemctl {

// ---------------------------------------------------------------------------
// Hyperbolic half-space H^3 = { x in R^3 : x3 > 0 } with g_ij = delta_ij / x3^2.
// Single global chart (the identity restricted to the half-space).

class HyperbolicHalfSpace3 final : public Manifold {
 public:
  std::string name() const override { return "h3"; }
  int dim() const override { return 3; }
  int rep_dim() const override { return 3; }
  int chart_count() const override { return 1; }
  bool chart_contains(int chart, const Vec& rep) const override;
  int default_chart(const Vec&) const override { return 0; }

  Vec to_chart(int, const Vec& rep) const override { return rep; }
  Vec from_chart(int, const Vec& coords) const override { return coords; }
  Vec tangent_to_chart(int, const Vec&, const Vec& v) const override { return v; }
  Vec tangent_from_chart(int, const Vec&, const Vec& w) const override { return w; }

  Mat metric(int chart, const Vec& coords) const override;
  ChristoffelTable christoffel(int chart, const Vec& coords) const override;
  Vec geodesic_acceleration(int chart, const Vec& coords, const Vec& velocity) const override;
  Vec transport_derivative(int chart, const Vec& coords, const Vec& velocity,
                           const Vec& field) const override;

  double injectivity_lower_bound(const Vec&) const override { return kUnboundedRadius; }
  bool in_domain(const Vec& rep) const override { return rep.size() == 3 && rep[2] > 0.0; }
  double inner(const Vec& rep, const Vec& u, const Vec& v) const override {
    return u.dot(v) / (rep[2] * rep[2]);
  }
};

// ---------------------------------------------------------------------------
// Unit sphere S^2, stored in ambient R^3 coordinates, with the two
// stereographic charts
//   phi_plus  : O+ = S^2 \ {(0,0,-1)} -> R^2, xi  = (x1, x2) / (1 + x3)
//   phi_minus : O- = S^2 \ {(0,0, 1)} -> R^2, eta = (x1, x2) / (1 - x3)
// used for Christoffel-based computations. Chart selection keeps the current
// chart inside the hysteresis band |x3| < 0.1 to avoid thrashing while
// integrating across the equator.

enum class S2Chart { plus = 0, minus = 1 };

class Sphere2 final : public Manifold {
 public:
  std::string name() const override { return "s2"; }
  int dim() const override { return 2; }
  int rep_dim() const override { return 3; }
  int chart_count() const override { return 2; }
  bool chart_contains(int chart, const Vec& rep) const override;
  int default_chart(const Vec& rep) const override { return rep[2] >= 0.0 ? 0 : 1; }
  int select_chart(int current, const Vec& rep) const override;

  Vec to_chart(int chart, const Vec& rep) const override;
  Vec from_chart(int chart, const Vec& coords) const override;
  Vec tangent_to_chart(int chart, const Vec& rep, const Vec& v) const override;
  Vec tangent_from_chart(int chart, const Vec& coords, const Vec& w) const override;

  Mat metric(int chart, const Vec& coords) const override;
  ChristoffelTable christoffel(int chart, const Vec& coords) const override;
  Vec geodesic_acceleration(int chart, const Vec& coords, const Vec& velocity) const override;
  Vec transport_derivative(int chart, const Vec& coords, const Vec& velocity,
                           const Vec& field) const override;

  double injectivity_lower_bound(const Vec&) const override { return kPi; }
  bool in_domain(const Vec& rep) const override;
  Vec project_point(Vec rep) const override { return rep / rep.norm(); }
  Vec project_tangent(const Vec& rep, Vec v) const override {
    return v - rep.dot(v) * rep;
  }
  double tangency_residual(const Vec& rep, const Vec& v) const override {
    return std::abs(rep.dot(v));
  }
  double inner(const Vec&, const Vec& u, const Vec& v) const override { return u.dot(v); }

  static constexpr double kPi = 3.14159265358979323846;
  static constexpr double kHysteresisBand = 0.1;
  static constexpr double kPoleGuard = 1e-9;  // distance from the excluded pole
};

// ---------------------------------------------------------------------------
// Flat R^n with the identity chart and g_ij = delta_ij.

class EuclideanSpace final : public Manifold {
 public:
  explicit EuclideanSpace(int n);

  std::string name() const override { return "euclidean" + std::to_string(n_); }
  int dim() const override { return n_; }
  int rep_dim() const override { return n_; }
  int chart_count() const override { return 1; }
  bool chart_contains(int, const Vec&) const override { return true; }
  int default_chart(const Vec&) const override { return 0; }

  Vec to_chart(int, const Vec& rep) const override { return rep; }
  Vec from_chart(int, const Vec& coords) const override { return coords; }
  Vec tangent_to_chart(int, const Vec&, const Vec& v) const override { return v; }
  Vec tangent_from_chart(int, const Vec&, const Vec& w) const override { return w; }

  Mat metric(int, const Vec&) const override { return Mat::Identity(n_, n_); }
  ChristoffelTable christoffel(int, const Vec&) const override { return ChristoffelTable(n_); }
  Vec geodesic_acceleration(int, const Vec&, const Vec&) const override {
    return Vec::Zero(n_);
  }
  Vec transport_derivative(int, const Vec&, const Vec&, const Vec&) const override {
    return Vec::Zero(n_);
  }

  double injectivity_lower_bound(const Vec&) const override { return kUnboundedRadius; }
  bool in_domain(const Vec& rep) const override { return rep.size() == n_; }
  double inner(const Vec&, const Vec& u, const Vec& v) const override { return u.dot(v); }

 private:
  int n_;
};

// Shared long-lived descriptor instances; Points keep non-owning references.
const HyperbolicHalfSpace3& hyperbolic3();
const Sphere2& sphere2();
const EuclideanSpace& euclidean(int n);

// ---------------------------------------------------------------------------
// Chart maps of S^2 as standalone operations (pole_choice picks phi_+/phi_-).

Vec s2_chart_forward(S2Chart chart, const Point& x);
Point s2_chart_inverse(S2Chart chart, const Vec& coords);

// ---------------------------------------------------------------------------
// The control vector fields of the two worked problems.
//
// S^2:  f1 = (x2, -x1, 0),  f2 = (0, x3, -x2),  f3 = (-x3, 0, x1);
//       each is orthogonal to x and the three together span T_x S^2.
std::array<Tangent, 3> s2_vector_fields(const Point& x);

// H^3:  f1 = (0, e^{-x1^2} x1 sin x3, x3),  f2 = (e^{-x2^2} x2 sin x3, 0, x3),
//       with |f_i|_g = sqrt((e^{-2 x_i^2} x_i^2 sin^2 x3 + x3^2) / x3^2).
std::array<Tangent, 2> h3_vector_fields(const Point& x);
double h3_field_norm(const Point& x, int index);  // closed-form |f_i|_g

}  // namespace riemctl

#endif  // RIEMCTL_MANIFOLDS_HPP
