#include "riemctl/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace riemctl {

// ---------------------------------------------------------------------------
// ControlSet

ControlSet ControlSet::box(Vec lo, Vec hi) {
  if (lo.size() != hi.size() || lo.size() == 0)
    throw ContractViolation("ControlSet::box: bound dimensions disagree");
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    if (!(lo[i] <= hi[i]))
      throw ContractViolation("ControlSet::box: lower bound exceeds upper bound");
    if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]))
      throw ContractViolation("ControlSet::box: bounds must be finite");
  }
  ControlSet set;
  set.kind_ = Kind::box;
  set.dim_ = static_cast<int>(lo.size());
  set.lo_ = std::move(lo);
  set.hi_ = std::move(hi);
  return set;
}

ControlSet ControlSet::ball(int dim, double radius) {
  if (dim < 1 || !(radius > 0.0) || !std::isfinite(radius))
    throw ContractViolation("ControlSet::ball: need dim >= 1 and a finite positive radius");
  ControlSet set;
  set.kind_ = Kind::ball;
  set.dim_ = dim;
  set.radius_ = radius;
  return set;
}

ControlSet ControlSet::finite(std::vector<Vec> points) {
  if (points.empty()) throw ContractViolation("ControlSet::finite: empty point list");
  const int dim = static_cast<int>(points.front().size());
  for (const Vec& p : points)
    if (static_cast<int>(p.size()) != dim)
      throw ContractViolation("ControlSet::finite: inconsistent point dimensions");
  ControlSet set;
  set.kind_ = Kind::finite;
  set.dim_ = dim;
  set.points_ = std::move(points);
  return set;
}

bool ControlSet::contains(const Vec& u, double tolerance) const {
  return distance_to(u) <= tolerance;
}

double ControlSet::distance_to(const Vec& u) const {
  if (static_cast<int>(u.size()) != dim_)
    throw ContractViolation("ControlSet: control has wrong dimension");
  switch (kind_) {
    case Kind::box: {
      double sq = 0.0;
      for (int i = 0; i < dim_; ++i) {
        const double excess = std::max({lo_[i] - u[i], u[i] - hi_[i], 0.0});
        sq += excess * excess;
      }
      return std::sqrt(sq);
    }
    case Kind::ball:
      return std::max(0.0, u.norm() - radius_);
    case Kind::finite: {
      double best = (u - points_.front()).norm();
      for (const Vec& p : points_) best = std::min(best, (u - p).norm());
      return best;
    }
  }
  return 0.0;
}

Vec ControlSet::project(Vec u) const {
  if (static_cast<int>(u.size()) != dim_)
    throw ContractViolation("ControlSet: control has wrong dimension");
  switch (kind_) {
    case Kind::box:
      for (int i = 0; i < dim_; ++i) u[i] = std::clamp(u[i], lo_[i], hi_[i]);
      return u;
    case Kind::ball: {
      const double n = u.norm();
      if (n > radius_) u *= radius_ / n;
      return u;
    }
    case Kind::finite: {
      // nearest point, lowest index on ties
      std::size_t best = 0;
      double best_d = (u - points_[0]).norm();
      for (std::size_t i = 1; i < points_.size(); ++i) {
        const double d = (u - points_[i]).norm();
        if (d < best_d) {
          best_d = d;
          best = i;
        }
      }
      return points_[best];
    }
  }
  return u;
}

Vec ControlSet::sample(Rng& rng) const {
  switch (kind_) {
    case Kind::box: {
      Vec u(dim_);
      for (int i = 0; i < dim_; ++i) u[i] = rng.uniform(lo_[i], hi_[i]);
      return u;
    }
    case Kind::ball: {
      Vec u(dim_);
      while (true) {
        for (int i = 0; i < dim_; ++i) u[i] = rng.uniform(-radius_, radius_);
        if (u.norm() <= radius_) return u;
      }
    }
    case Kind::finite:
      return points_[rng.below(points_.size())];
  }
  return Vec::Zero(dim_);
}

Vec ControlSet::center() const {
  switch (kind_) {
    case Kind::box:
      return 0.5 * (lo_ + hi_);
    case Kind::ball:
      return Vec::Zero(dim_);
    case Kind::finite:
      return points_.front();
  }
  return Vec::Zero(dim_);
}

std::vector<Vec> ControlSet::grid(int resolution) const {
  if (kind_ == Kind::finite) return points_;
  if (resolution < 2)
    throw ContractViolation("ControlSet::grid: need at least 2 nodes per dimension");
  const Vec lo = kind_ == Kind::box ? lo_ : Vec::Constant(dim_, -radius_);
  const Vec hi = kind_ == Kind::box ? hi_ : Vec::Constant(dim_, radius_);
  std::vector<Vec> nodes;
  std::vector<int> idx(dim_, 0);
  while (true) {
    Vec u(dim_);
    for (int i = 0; i < dim_; ++i)
      u[i] = lo[i] + (hi[i] - lo[i]) * idx[i] / double(resolution - 1);
    if (kind_ == Kind::box || u.norm() <= radius_ + 1e-12) nodes.push_back(u);
    int d = 0;
    while (d < dim_ && ++idx[d] == resolution) idx[d++] = 0;
    if (d == dim_) break;
  }
  if (kind_ == Kind::ball) {
    bool has_center = false;
    for (const Vec& u : nodes)
      if (u.norm() < 1e-12) has_center = true;
    if (!has_center) nodes.push_back(Vec::Zero(dim_));
  }
  return nodes;
}

double ControlSet::bounding_radius() const {
  switch (kind_) {
    case Kind::box: {
      double sq = 0.0;
      for (int i = 0; i < dim_; ++i) sq += std::max(lo_[i] * lo_[i], hi_[i] * hi_[i]);
      return std::sqrt(sq);
    }
    case Kind::ball:
      return radius_;
    case Kind::finite: {
      double best = 0.0;
      for (const Vec& p : points_) best = std::max(best, p.norm());
      return best;
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// ControlSignal

ControlSignal ControlSignal::constant(double horizon, int segments, Vec value) {
  if (segments < 1 || !(horizon > 0.0))
    throw ContractViolation("ControlSignal::constant: need horizon > 0 and segments >= 1");
  ControlSignal s;
  s.breakpoints.resize(segments + 1);
  for (int i = 0; i <= segments; ++i)
    s.breakpoints[i] = horizon * double(i) / double(segments);
  s.values.assign(segments, value);
  return s;
}

ControlSignal ControlSignal::uniform(double horizon, std::vector<Vec> segment_values) {
  const int segments = static_cast<int>(segment_values.size());
  if (segments < 1 || !(horizon > 0.0))
    throw ContractViolation("ControlSignal::uniform: need horizon > 0 and segments >= 1");
  ControlSignal s;
  s.breakpoints.resize(segments + 1);
  for (int i = 0; i <= segments; ++i)
    s.breakpoints[i] = horizon * double(i) / double(segments);
  s.values = std::move(segment_values);
  return s;
}

int ControlSignal::segment_index(double t) const {
  const int n = segments();
  if (t <= breakpoints.front()) return 0;
  if (t >= breakpoints[n - 1]) return n - 1;
  int lo = 0, hi = n - 1;
  while (lo < hi) {
    const int mid = (lo + hi + 1) / 2;
    if (breakpoints[mid] <= t)
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

const Vec& ControlSignal::value_at(double t) const { return values[segment_index(t)]; }

ControlSignal ControlSignal::split_segments() const {
  ControlSignal out;
  out.breakpoints.reserve(breakpoints.size() * 2 - 1);
  out.values.reserve(values.size() * 2);
  for (std::size_t i = 0; i < values.size(); ++i) {
    out.breakpoints.push_back(breakpoints[i]);
    out.breakpoints.push_back(0.5 * (breakpoints[i] + breakpoints[i + 1]));
    out.values.push_back(values[i]);
    out.values.push_back(values[i]);
  }
  out.breakpoints.push_back(breakpoints.back());
  return out;
}

ControlSignal make_signal(const ControlSet& controls, std::vector<double> breakpoints,
                          std::vector<Vec> values) {
  if (breakpoints.size() != values.size() + 1 || values.empty())
    throw ConfigError("make_signal: need one control value per breakpoint interval");
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
    if (!(breakpoints[i] < breakpoints[i + 1]))
      throw ConfigError("make_signal: breakpoints must be strictly increasing");
  for (const Vec& u : values)
    if (!controls.contains(u, 1e-9))
      throw ConfigError("make_signal: control value outside the control set");
  ControlSignal s;
  s.breakpoints = std::move(breakpoints);
  s.values = std::move(values);
  return s;
}

// ---------------------------------------------------------------------------
// Integration

namespace {

// Power-of-two substep count per segment, so halving segments preserves grids.
long substeps_for(double length, double step) {
  const double needed = length / step;
  long n = 1;
  while (static_cast<double>(n) < needed && n < (1L << 30)) n <<= 1;
  return n;
}

Point make_point(const Manifold& m, Vec rep, int chart) {
  Point p;
  p.manifold = &m;
  p.rep = std::move(rep);
  p.chart = chart;
  return p;
}

}  // namespace

Trajectory integrate(const ControlSystem& system, const ControlSignal& signal,
                     const Point& initial, double step) {
  if (!(step > 0.0)) throw ContractViolation("integrate: step must be positive");
  if (initial.manifold != system.manifold)
    throw ContractViolation("integrate: initial state is not on the system manifold");
  if (std::abs(signal.horizon() - system.horizon) > 1e-9 * (1.0 + system.horizon))
    throw ContractViolation("integrate: signal horizon differs from the system horizon");

  const Manifold& m = *system.manifold;
  Trajectory traj;
  traj.step = step;

  Vec x = initial.rep;
  const int chart = initial.chart;
  auto eval = [&](double t, const Vec& rep, const Vec& u) {
    return system.dynamics(t, make_point(m, rep, chart), u);
  };

  traj.times.push_back(signal.breakpoints.front());
  traj.states.push_back(initial);
  traj.velocities.push_back(eval(signal.breakpoints.front(), x, signal.values.front()));

  for (int seg = 0; seg < signal.segments(); ++seg) {
    const double t0 = signal.breakpoints[seg];
    const double t1 = signal.breakpoints[seg + 1];
    const Vec& u = signal.values[seg];
    const long nsub = substeps_for(t1 - t0, step);
    const double h = (t1 - t0) / static_cast<double>(nsub);
    for (long k = 0; k < nsub; ++k) {
      const double t = t0 + h * static_cast<double>(k);
      const Vec k1 = eval(t, x, u);
      const Vec k2 = eval(t + 0.5 * h, x + 0.5 * h * k1, u);
      const Vec k3 = eval(t + 0.5 * h, x + 0.5 * h * k2, u);
      const Vec k4 = eval(t + h, x + h * k3, u);
      x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      x = m.project_point(std::move(x));
      const double t_next = t + h;
      if (!x.allFinite() || !m.in_domain(x)) {
        std::ostringstream msg;
        msg << system.name << ": trajectory left the manifold domain at t=" << t_next;
        throw IntegrationError(msg.str(), t_next);
      }
      traj.times.push_back(t_next);
      traj.states.push_back(make_point(m, x, chart));
      traj.velocities.push_back(eval(t_next, x, u));
    }
  }
  return traj;
}

double evaluate_cost(const ControlSystem& system, const ControlSignal& signal,
                     const Trajectory& trajectory) {
  const auto f0 = [&](double t, const Point& x, const Vec& u) {
    const double v = system.running_cost(t, x, u);
    if (!std::isfinite(v))
      throw CostError(system.name + ": running cost is non-finite at t=" + std::to_string(t),
                      t);
    return v;
  };

  double integral = 0.0;
  std::size_t node = 0;
  for (int seg = 0; seg < signal.segments(); ++seg) {
    const double t0 = signal.breakpoints[seg];
    const double t1 = signal.breakpoints[seg + 1];
    const Vec& u = signal.values[seg];
    const long nsub = substeps_for(t1 - t0, trajectory.step);
    const double h = (t1 - t0) / static_cast<double>(nsub);
    for (long k = 0; k < nsub; ++k, ++node) {
      if (node + 1 >= trajectory.states.size())
        throw ContractViolation("evaluate_cost: trajectory grid does not match the signal");
      const double ta = trajectory.times[node];
      const double tb = trajectory.times[node + 1];
      integral += 0.5 * h * (f0(ta, trajectory.states[node], u) +
                             f0(tb, trajectory.states[node + 1], u));
    }
  }
  double total = integral;
  if (system.endpoint_cost) {
    const double h = system.endpoint_cost(trajectory.front(), trajectory.back());
    if (!std::isfinite(h))
      throw CostError(system.name + ": endpoint cost is non-finite", system.horizon);
    total += h;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Feasibility

FeasibilityReport check_feasible(const ControlSystem& system, const ControlSignal& signal,
                                 const Trajectory& trajectory,
                                 const FeasibilityTolerances& tolerances) {
  FeasibilityReport report;
  report.tolerances = tolerances;
  for (std::size_t i = 0; i < trajectory.states.size(); ++i) {
    const double t = trajectory.times[i];
    const Point& x = trajectory.states[i];
    const Vec& u = signal.value_at(t);
    report.control_violation =
        std::max(report.control_violation, system.gamma(t, x).distance_to(u));
    if (system.state_set_distance)
      report.state_violation = std::max(report.state_violation, system.state_set_distance(x));
  }
  if (system.endpoint_residual)
    report.endpoint_residual = system.endpoint_residual(trajectory.front(), trajectory.back());
  report.feasible = report.control_violation <= tolerances.control &&
                    report.state_violation <= tolerances.state &&
                    report.endpoint_residual <= tolerances.endpoint;
  return report;
}

// ---------------------------------------------------------------------------
// Growth bound

void GrowthData::validate() const {
  if (!(lipschitz > 1.0)) throw ContractViolation("GrowthData: K must exceed 1");
  if (!(exponent > 1.0)) throw ContractViolation("GrowthData: p must exceed 1");
  if (dominating.max_value() < 0.0)
    throw ContractViolation("GrowthData: dominating function must be nonnegative");
  if (base_point.manifold == nullptr)
    throw ContractViolation("GrowthData: base point is unset");
}

GrowthReport verify_growth_bound(const Trajectory& trajectory, const GrowthData& growth,
                                 double tolerance, const GrowthCheckOptions& options) {
  growth.validate();
  if (trajectory.states.empty())
    throw ContractViolation("verify_growth_bound: empty trajectory");

  const std::size_t n = trajectory.states.size();
  const std::size_t count = std::min<std::size_t>(std::max(options.max_nodes, 2), n);
  std::vector<std::size_t> nodes(count);
  for (std::size_t k = 0; k < count; ++k) nodes[k] = (k * (n - 1)) / (count - 1);
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  const double K = growth.lipschitz;

  // Distances from the base point, warm-starting each solve from the last.
  std::vector<double> from_base(nodes.size());
  {
    ShootingOptions shoot = options.shooting;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const auto sols = detail::solve_geodesic_bvp(growth.base_point,
                                                   trajectory.states[nodes[k]], shoot);
      from_base[k] = sols.front().norm;
      shoot.initial_guess = sols.front().tangent_rep;
    }
  }

  GrowthReport report;
  report.holds = true;
  report.min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a + 1 < nodes.size(); ++a) {
    ShootingOptions shoot = options.shooting;
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      const double t = trajectory.times[nodes[a]];
      const double s = trajectory.times[nodes[b]];
      const auto sols = detail::solve_geodesic_bvp(trajectory.states[nodes[a]],
                                                   trajectory.states[nodes[b]], shoot);
      const double lhs = sols.front().norm;
      shoot.initial_guess = sols.front().tangent_rep;
      const double growth_factor = std::exp(K * (s - t));
      const double rhs = from_base[a] * (growth_factor - 1.0) +
                         K * growth.dominating.integral(t, s) * growth_factor;
      const double slack = rhs - lhs;
      ++report.pairs_checked;
      if (slack < report.min_slack) {
        report.min_slack = slack;
        report.worst_t = t;
        report.worst_s = s;
      }
    }
  }
  report.holds = report.min_slack >= -tolerance;
  return report;
}

// ---------------------------------------------------------------------------
// Lipschitz estimation

LipschitzEstimate estimate_lipschitz(const ControlSystem& system, int sample_count,
                                     double radius, std::uint64_t seed) {
  if (sample_count < 1)
    throw ContractViolation("estimate_lipschitz: need at least one sample");
  if (!(radius > 0.0)) throw ContractViolation("estimate_lipschitz: radius must be positive");
  if (!system.state_sampler)
    throw ContractViolation("estimate_lipschitz: system has no state sampler");

  const Manifold& m = *system.manifold;
  Rng rng(seed);
  LipschitzEstimate estimate;
  for (int k = 0; k < sample_count; ++k) {
    const Point x1 = system.state_sampler(rng);
    Vec dir;
    double dn = 0.0;
    do {
      dir = m.project_tangent(x1.rep, rng.unit_vector(m.rep_dim()));
      dn = std::sqrt(m.inner(x1.rep, dir, dir));
    } while (dn < 1e-12);
    dir /= dn;
    const double rho = rng.uniform(0.05 * radius, radius);
    if (rho >= m.injectivity_lower_bound(x1.rep) * (1.0 - 1e-9)) {
      ++estimate.samples_skipped;
      continue;
    }
    const double t = rng.uniform(0.0, system.horizon);
    const Vec u = system.controls.sample(rng);
    const Vec f1 = system.dynamics(t, x1, u);
    const std::vector<Tangent> moved = parallel_transport_along(
        x1, m.tangent(x1, rho * dir), {m.tangent(x1, f1)});
    const Point& x2 = moved.front().base;
    if (rho >= m.injectivity_lower_bound(x2.rep) * (1.0 - 1e-9)) {
      ++estimate.samples_skipped;
      continue;
    }
    const Vec f2 = system.dynamics(t, x2, u);
    const Vec gap = moved.front().comp - f2;
    const double value = std::sqrt(std::max(0.0, m.inner(x2.rep, gap, gap))) / rho;
    estimate.constant = std::max(estimate.constant, value);
    ++estimate.samples_used;
  }
  return estimate;
}

double sup_speed_at(const ControlSystem& system, const Point& x, int control_samples,
                    std::uint64_t seed) {
  const Manifold& m = *system.manifold;
  Rng rng(seed);
  double sup = 0.0;
  auto probe = [&](const Vec& u) {
    const Vec f = system.dynamics(0.5 * system.horizon, x, u);
    sup = std::max(sup, std::sqrt(std::max(0.0, m.inner(x.rep, f, f))));
  };
  for (const Vec& u : system.controls.grid(std::min(5, std::max(2, control_samples))))
    probe(u);
  for (int k = 0; k < control_samples; ++k) probe(system.controls.sample(rng));
  return sup;
}

}  // namespace riemctl
