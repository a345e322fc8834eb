#include "riemctl/manifolds.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace riemctl {

// ---------------------------------------------------------------------------
// HyperbolicHalfSpace3

bool HyperbolicHalfSpace3::chart_contains(int chart, const Vec& rep) const {
  return chart == 0 && in_domain(rep);
}

Mat HyperbolicHalfSpace3::metric(int, const Vec& coords) const {
  const double s = 1.0 / (coords[2] * coords[2]);
  Mat g = Mat::Zero(3, 3);
  g(0, 0) = g(1, 1) = g(2, 2) = s;
  return g;
}

// Gamma^k_ij = (1/x3) (-delta_jk delta_i3 - delta_ki delta_j3 + delta_ij delta_k3)
ChristoffelTable HyperbolicHalfSpace3::christoffel(int, const Vec& coords) const {
  const double inv_x3 = 1.0 / coords[2];
  ChristoffelTable table(3);
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double delta_jk = (j == k) ? 1.0 : 0.0;
        const double delta_ki = (k == i) ? 1.0 : 0.0;
        const double delta_ij = (i == j) ? 1.0 : 0.0;
        const double delta_i3 = (i == 2) ? 1.0 : 0.0;
        const double delta_j3 = (j == 2) ? 1.0 : 0.0;
        const double delta_k3 = (k == 2) ? 1.0 : 0.0;
        table.at(k, i, j) = inv_x3 * (-delta_jk * delta_i3 - delta_ki * delta_j3 +
                                      delta_ij * delta_k3);
      }
  return table;
}

Vec HyperbolicHalfSpace3::geodesic_acceleration(int, const Vec& coords,
                                                const Vec& velocity) const {
  const double inv_x3 = 1.0 / coords[2];
  const double v3 = velocity[2];
  Vec acc = (2.0 * v3 * inv_x3) * velocity;
  acc[2] -= velocity.squaredNorm() * inv_x3;
  return acc;
}

Vec HyperbolicHalfSpace3::transport_derivative(int, const Vec& coords, const Vec& velocity,
                                               const Vec& field) const {
  const double inv_x3 = 1.0 / coords[2];
  Vec out = velocity[2] * field + field[2] * velocity;
  out[2] -= velocity.dot(field);
  return out * inv_x3;
}

// ---------------------------------------------------------------------------
// Sphere2

bool Sphere2::chart_contains(int chart, const Vec& rep) const {
  if (!in_domain(rep)) return false;
  return chart == 0 ? (1.0 + rep[2] >= kPoleGuard) : (1.0 - rep[2] >= kPoleGuard);
}

int Sphere2::select_chart(int current, const Vec& rep) const {
  if (current == 0) return rep[2] < -kHysteresisBand ? 1 : 0;
  return rep[2] > kHysteresisBand ? 0 : 1;
}

bool Sphere2::in_domain(const Vec& rep) const {
  return rep.size() == 3 && std::abs(rep.squaredNorm() - 1.0) <= 1e-9;
}

Vec Sphere2::to_chart(int chart, const Vec& rep) const {
  const double s = chart == 0 ? 1.0 + rep[2] : 1.0 - rep[2];
  if (s < kPoleGuard)
    throw ChartDomainError(std::string("s2: point at the excluded pole of chart phi_") +
                           (chart == 0 ? "+" : "-"));
  Vec xi(2);
  xi[0] = rep[0] / s;
  xi[1] = rep[1] / s;
  return xi;
}

Vec Sphere2::from_chart(int chart, const Vec& coords) const {
  const double a = 1.0 + coords.squaredNorm();
  Vec x(3);
  x[0] = 2.0 * coords[0] / a;
  x[1] = 2.0 * coords[1] / a;
  x[2] = (chart == 0 ? (1.0 - coords.squaredNorm()) : (coords.squaredNorm() - 1.0)) / a;
  return x;
}

Vec Sphere2::tangent_to_chart(int chart, const Vec& rep, const Vec& v) const {
  const Vec vt = project_tangent(rep, v);
  const double sign = chart == 0 ? 1.0 : -1.0;
  const double s = 1.0 + sign * rep[2];
  if (s < kPoleGuard)
    throw ChartDomainError("s2: tangent pushforward at the excluded pole");
  Vec w(2);
  w[0] = vt[0] / s - sign * rep[0] * vt[2] / (s * s);
  w[1] = vt[1] / s - sign * rep[1] * vt[2] / (s * s);
  return w;
}

Vec Sphere2::tangent_from_chart(int chart, const Vec& coords, const Vec& w) const {
  const double a = 1.0 + coords.squaredNorm();
  const double a2 = a * a;
  const double sign = chart == 0 ? 1.0 : -1.0;
  Vec v(3);
  v[0] = (2.0 * (a - 2.0 * coords[0] * coords[0]) * w[0] -
          4.0 * coords[0] * coords[1] * w[1]) /
         a2;
  v[1] = (-4.0 * coords[0] * coords[1] * w[0] +
          2.0 * (a - 2.0 * coords[1] * coords[1]) * w[1]) /
         a2;
  v[2] = -sign * 4.0 * (coords[0] * w[0] + coords[1] * w[1]) / a2;
  return v;
}

Mat Sphere2::metric(int, const Vec& coords) const {
  const double a = 1.0 + coords.squaredNorm();
  Mat g = Mat::Zero(2, 2);
  g(0, 0) = g(1, 1) = 4.0 / (a * a);
  return g;
}

// Conformal factor 4/a^2 gives Gamma^k_ij = -(2/a)(delta_ki xi_j + delta_kj xi_i
// - delta_ij xi_k) in either stereographic chart.
ChristoffelTable Sphere2::christoffel(int, const Vec& coords) const {
  const double c = -2.0 / (1.0 + coords.squaredNorm());
  ChristoffelTable table(2);
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double value = 0.0;
        if (k == i) value += coords[j];
        if (k == j) value += coords[i];
        if (i == j) value -= coords[k];
        table.at(k, i, j) = c * value;
      }
  return table;
}

Vec Sphere2::geodesic_acceleration(int, const Vec& coords, const Vec& velocity) const {
  const double c = 2.0 / (1.0 + coords.squaredNorm());
  return c * (2.0 * coords.dot(velocity) * velocity - velocity.squaredNorm() * coords);
}

Vec Sphere2::transport_derivative(int, const Vec& coords, const Vec& velocity,
                                  const Vec& field) const {
  const double c = 2.0 / (1.0 + coords.squaredNorm());
  return c * (coords.dot(field) * velocity + coords.dot(velocity) * field -
              velocity.dot(field) * coords);
}

// ---------------------------------------------------------------------------
// EuclideanSpace

EuclideanSpace::EuclideanSpace(int n) : n_(n) {
  if (n < 1 || n > kMaxDim)
    throw ConfigError("EuclideanSpace: dimension must be in [1, " +
                      std::to_string(kMaxDim) + "]");
}

// ---------------------------------------------------------------------------
// Shared descriptors

const HyperbolicHalfSpace3& hyperbolic3() {
  static const HyperbolicHalfSpace3 instance;
  return instance;
}

const Sphere2& sphere2() {
  static const Sphere2 instance;
  return instance;
}

const EuclideanSpace& euclidean(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<EuclideanSpace>> instances;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = instances.find(n);
  if (it == instances.end())
    it = instances.emplace(n, std::make_unique<EuclideanSpace>(n)).first;
  return *it->second;
}

// ---------------------------------------------------------------------------
// S^2 chart operations

Vec s2_chart_forward(S2Chart chart, const Point& x) {
  if (x.manifold != &sphere2())
    throw ContractViolation("s2_chart_forward: point is not on S^2");
  return sphere2().to_chart(static_cast<int>(chart), x.rep);
}

Point s2_chart_inverse(S2Chart chart, const Vec& coords) {
  if (coords.size() != 2)
    throw ContractViolation("s2_chart_inverse: expected a 2-dimensional coordinate tuple");
  Point p = sphere2().point(sphere2().from_chart(static_cast<int>(chart), coords));
  p.chart = static_cast<int>(chart);
  return p;
}

// ---------------------------------------------------------------------------
// Control vector fields

std::array<Tangent, 3> s2_vector_fields(const Point& x) {
  if (x.manifold != &sphere2())
    throw ContractViolation("s2_vector_fields: point is not on S^2");
  const Vec& p = x.rep;
  const Sphere2& m = sphere2();
  return {m.tangent(x, make_vec({p[1], -p[0], 0.0})),
          m.tangent(x, make_vec({0.0, p[2], -p[1]})),
          m.tangent(x, make_vec({-p[2], 0.0, p[0]}))};
}

std::array<Tangent, 2> h3_vector_fields(const Point& x) {
  if (x.manifold != &hyperbolic3())
    throw ContractViolation("h3_vector_fields: point is not on H^3");
  const Vec& p = x.rep;
  const double sin_x3 = std::sin(p[2]);
  const HyperbolicHalfSpace3& m = hyperbolic3();
  return {
      m.tangent(x, make_vec({0.0, std::exp(-p[0] * p[0]) * p[0] * sin_x3, p[2]})),
      m.tangent(x, make_vec({std::exp(-p[1] * p[1]) * p[1] * sin_x3, 0.0, p[2]}))};
}

double h3_field_norm(const Point& x, int index) {
  if (index < 1 || index > 2)
    throw ContractViolation("h3_field_norm: index must be 1 or 2");
  const Vec& p = x.rep;
  const double xi = p[index - 1];
  const double sin_x3 = std::sin(p[2]);
  const double x3_sq = p[2] * p[2];
  return std::sqrt((std::exp(-2.0 * xi * xi) * xi * xi * sin_x3 * sin_x3 + x3_sq) / x3_sq);
}

}  // namespace riemctl
