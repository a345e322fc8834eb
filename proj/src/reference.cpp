#include "riemctl/reference.hpp"

#include <algorithm>
#include <cmath>

namespace riemctl::reference {

namespace {

Vec cross3(const Vec& a, const Vec& b) {
  Vec c(3);
  c[0] = a[1] * b[2] - a[2] * b[1];
  c[1] = a[2] * b[0] - a[0] * b[2];
  c[2] = a[0] * b[1] - a[1] * b[0];
  return c;
}

}  // namespace

double h3_distance(const Vec& x, const Vec& y) {
  const double d2 = (x - y).squaredNorm();
  return std::acosh(1.0 + d2 / (2.0 * x[2] * y[2]));
}

Vec s2_exp(const Vec& x, const Vec& v) {
  const double angle = v.norm();
  if (angle < 1e-300) return x;
  return std::cos(angle) * x + (std::sin(angle) / angle) * v;
}

Vec s2_log(const Vec& x, const Vec& y) {
  const double c = std::clamp(x.dot(y), -1.0, 1.0);
  Vec tangential = y - c * x;
  const double tn = tangential.norm();
  const double angle = std::atan2(tn, c);
  if (tn < 1e-300) return Vec::Zero(3);
  return (angle / tn) * tangential;
}

Vec s2_transport(const Vec& x, const Vec& y, const Vec& v) {
  const Vec axis = cross3(x, y);
  const double sin_a = axis.norm();
  const double cos_a = std::clamp(x.dot(y), -1.0, 1.0);
  if (sin_a < 1e-300) return v;  // same point (or antipodal: no unique geodesic)
  const Vec n = axis / sin_a;
  // Rodrigues formula with the geodesic's rotation angle.
  return cos_a * v + cross3(n, v) * sin_a + n * (n.dot(v)) * (1.0 - cos_a);
}

Vec rotate(const Vec& omega, double t, const Vec& p) {
  const double rate = omega.norm();
  const double angle = rate * t;
  if (rate < 1e-300) return p;
  const Vec n = omega / rate;
  return std::cos(angle) * p + cross3(n, p) * std::sin(angle) +
         n * (n.dot(p)) * (1.0 - std::cos(angle));
}

}  // namespace riemctl::reference
