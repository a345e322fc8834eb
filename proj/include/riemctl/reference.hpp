#ifndef RIEMCTL_REFERENCE_HPP
#define RIEMCTL_REFERENCE_HPP

#include "riemctl/core.hpp"

namespace riemctl::reference {

// Closed-form counterparts of the geometric operations on the built-in
// spaces. These are verification references only: the geometry module never
// calls into this header, so cross-checks stay two independent routes.

// Half-space model distance: arccosh(1 + |x - y|^2 / (2 x3 y3)).
double h3_distance(const Vec& x, const Vec& y);

// Great-circle exponential/logarithm on the unit sphere.
Vec s2_exp(const Vec& x, const Vec& v);
Vec s2_log(const Vec& x, const Vec& y);

// Parallel translation along the minimizing great circle, as the rotation
// about x cross y.
Vec s2_transport(const Vec& x, const Vec& y, const Vec& v);

// Rodrigues rotation of p about the axis/angle vector omega*t (flow of the
// constant field xdot = omega x x).
Vec rotate(const Vec& omega, double t, const Vec& p);

}  // namespace riemctl::reference

#endif  // RIEMCTL_REFERENCE_HPP
