#include "riemctl/problems.hpp"

#include <cmath>

#include "riemctl/manifolds.hpp"

namespace riemctl {

namespace {
constexpr double kQFloor = 1e-9;  // closed numeric stand-in for the open set x3 > 0
}

ControlSystem build_h3_example(double horizon) {
  if (!(horizon > 0.0)) throw ConfigError("h3-example: horizon must be positive");
  const HyperbolicHalfSpace3& m = hyperbolic3();

  ControlSystem sys;
  sys.name = "h3-example";
  sys.manifold = &m;
  sys.horizon = horizon;
  sys.controls = ControlSet::box(make_vec({0.0, 0.0}), make_vec({3.14159265358979323846, 1.0}));

  sys.dynamics = [](double, const Point& x, const Vec& u) {
    const auto f = h3_vector_fields(x);
    return Vec(std::sin(u[0]) * f[0].comp + u[1] * f[1].comp);
  };
  sys.running_cost = [](double, const Point& x, const Vec& u) {
    const double n1 = h3_field_norm(x, 1);
    const double n2 = h3_field_norm(x, 2);
    return u[0] * u[0] * n1 * n1 + u[1] * n2;
  };
  sys.endpoint_cost = [](const Point&, const Point&) { return 0.0; };
  sys.state_set_distance = [](const Point& x) { return std::max(0.0, kQFloor - x.rep[2]); };

  const double lo = std::exp(horizon);
  const double hi = 2.0 * std::exp(horizon);
  const Vec start = make_vec({0.0, 0.0, 1.0});
  sys.endpoint_residual = [start, lo, hi](const Point& x0, const Point& xT) {
    const double initial = (x0.rep - start).norm();
    const double x3 = xT.rep[2];
    return initial + std::max(0.0, lo - x3) + std::max(0.0, x3 - hi);
  };

  sys.initial_state = m.point(start);
  sys.reference_signal = ControlSignal::constant(horizon, 1, make_vec({0.0, 1.0}));
  sys.state_sampler = [&m](Rng& rng) {
    Vec rep(3);
    rep[0] = rng.uniform(-2.0, 2.0);
    rep[1] = rng.uniform(-2.0, 2.0);
    rep[2] = rng.uniform(0.5, 10.0);
    return m.point(rep);
  };
  sys.cost_lower_bound = 1.0;
  return sys;
}

ControlSystem build_s2_example(double horizon, double ball_radius, S2CostChoice cost) {
  if (!(horizon > 0.0)) throw ConfigError("s2-example: horizon must be positive");
  if (!(ball_radius > 0.0)) throw ConfigError("s2-example: ball radius must be positive");
  const Sphere2& m = sphere2();

  ControlSystem sys;
  sys.name = "s2-example";
  sys.manifold = &m;
  sys.horizon = horizon;
  sys.controls = ControlSet::ball(3, ball_radius);

  sys.dynamics = [](double, const Point& x, const Vec& u) {
    const auto f = s2_vector_fields(x);
    return Vec(u[0] * f[0].comp + u[1] * f[1].comp + u[2] * f[2].comp);
  };
  switch (cost) {
    case S2CostChoice::control_energy:
      sys.running_cost = [](double, const Point&, const Vec& u) { return u.squaredNorm(); };
      break;
  }
  sys.endpoint_cost = [](const Point&, const Point&) { return 0.0; };
  sys.state_set_distance = [](const Point&) { return 0.0; };  // Q = S^2

  const Vec north = make_vec({0.0, 0.0, 1.0});
  const double gap = std::sqrt(2.0);
  sys.endpoint_residual = [north, gap](const Point& x0, const Point& xT) {
    const double initial = (x0.rep - north).norm();
    return initial + std::max(0.0, gap - (xT.rep - north).norm());
  };

  sys.initial_state = m.point(north);
  const double rate = 3.14159265358979323846 / (2.0 * horizon);
  if (ball_radius >= rate)
    sys.reference_signal = ControlSignal::constant(horizon, 1, make_vec({0.0, rate, 0.0}));
  sys.state_sampler = [&m](Rng& rng) { return m.point(rng.unit_vector(3)); };
  sys.cost_lower_bound = 1.0;
  return sys;
}

ControlSystem build_nonconvex_synthetic() {
  const EuclideanSpace& m = euclidean(1);

  ControlSystem sys;
  sys.name = "nonconvex-synthetic";
  sys.manifold = &m;
  sys.horizon = 1.0;
  sys.controls = ControlSet::finite({make_vec({-1.0}), make_vec({1.0})});
  sys.dynamics = [](double, const Point&, const Vec& u) { return u; };
  sys.running_cost = [](double, const Point&, const Vec&) { return 0.0; };
  sys.endpoint_cost = [](const Point&, const Point&) { return 0.0; };
  sys.state_set_distance = [](const Point&) { return 0.0; };
  sys.endpoint_residual = [](const Point&, const Point&) { return 0.0; };
  sys.initial_state = m.point(make_vec({0.0}));
  sys.reference_signal = ControlSignal::constant(1.0, 1, make_vec({1.0}));
  sys.state_sampler = [&m](Rng& rng) { return m.point(make_vec({rng.uniform(-2.0, 2.0)})); };
  sys.cost_lower_bound = 1.0;
  return sys;
}

std::vector<std::string> problem_ids() {
  return {"h3-example", "s2-example", "nonconvex-synthetic"};
}

ProblemDescriptor build_problem(const std::string& id, const ProblemParams& params) {
  ProblemDescriptor desc;
  desc.id = id;
  desc.params = params;
  if (id == "h3-example")
    desc.system = build_h3_example(params.horizon);
  else if (id == "s2-example")
    desc.system = build_s2_example(params.horizon, params.ball_radius, params.s2_cost);
  else if (id == "nonconvex-synthetic")
    desc.system = build_nonconvex_synthetic();
  else
    throw ConfigError("unknown problem id '" + id + "'");
  return desc;
}

}  // namespace riemctl
