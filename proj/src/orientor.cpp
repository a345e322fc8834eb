#include "riemctl/orientor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "riemctl/optim.hpp"

namespace riemctl {

OrientorSample sample_orientor(const ControlSystem& system, double t, const Point& x,
                               int resolution, std::optional<double> z0_cap) {
  if (x.manifold != system.manifold)
    throw ContractViolation("sample_orientor: point is not on the system manifold");
  if (resolution < 2)
    throw ContractViolation("sample_orientor: need resolution >= 2 per control dimension");
  const ControlSet gamma = system.gamma(t, x);
  if (!gamma.closed_and_bounded() && !z0_cap)
    throw ConfigError("sample_orientor: open/unbounded control descriptor needs an explicit cap");

  OrientorSample sample;
  sample.t = t;
  sample.x = x;
  sample.resolution = resolution;
  sample.grid = gamma.grid(resolution);

  std::vector<double> costs;
  costs.reserve(sample.grid.size());
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const Vec& u : sample.grid) {
    const double c = system.running_cost(t, x, u);
    costs.push_back(c);
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  sample.z0_cap = z0_cap ? *z0_cap : hi + 10.0 * (hi - lo) + 1.0;

  sample.points.reserve(2 * sample.grid.size());
  for (std::size_t i = 0; i < sample.grid.size(); ++i) {
    OrientorPoint graph;
    graph.z0 = costs[i];
    graph.velocity = system.dynamics(t, x, sample.grid[i]);
    graph.control = sample.grid[i];
    OrientorPoint capped = graph;
    capped.z0 = sample.z0_cap;
    sample.points.push_back(std::move(graph));
    sample.points.push_back(std::move(capped));
  }
  return sample;
}

OrientorSample transported_orientor(const OrientorSample& sample, const Point& x,
                                    const ShootingOptions& options) {
  const Point& y = sample.x;
  if (y.manifold != x.manifold)
    throw ContractViolation("transported_orientor: endpoints on different manifolds");

  OrientorSample out = sample;
  out.x = x;
  if ((y.rep - x.rep).cwiseAbs().maxCoeff() <= 1e-14) return out;

  // The translation needs the separation below the bound at the target as
  // well; log_map itself only enforces the bound at y.
  const Tangent direction = log_map(y, x, options);
  const double length = std::sqrt(
      std::max(0.0, y.manifold->inner(y.rep, direction.comp, direction.comp)));
  if (length >= x.manifold->injectivity_lower_bound(x.rep) * (1.0 - 1e-9))
    throw OutsideInjectivityRadius(
        "transported_orientor: base points farther apart than the bound at the target");
  std::vector<Tangent> fields;
  fields.reserve(sample.points.size());
  const Manifold& m = *y.manifold;
  for (const OrientorPoint& p : sample.points) fields.push_back(m.tangent(y, p.velocity));
  const std::vector<Tangent> moved =
      parallel_transport_along(y, direction, fields, options.geodesic);
  for (std::size_t i = 0; i < moved.size(); ++i)
    out.points[i].velocity = m.project_tangent(x.rep, moved[i].comp);
  return out;
}

// ---------------------------------------------------------------------------
// Membership distance

OrientorMembership::OrientorMembership(const ControlSystem& system, double t, Point x,
                                       int resolution, MembershipOptions options)
    : system_(system),
      t_(t),
      x_(std::move(x)),
      gamma_(system.gamma(t, x_)),
      options_(options) {
  int fine = resolution;
  if (gamma_.kind() != ControlSet::Kind::finite) {
    int multiplier = std::max(1, options_.fine_multiplier);
    // keep the cached scan affordable in higher control dimensions
    auto nodes = [&](int mult) {
      return std::pow(double((resolution - 1) * mult + 1), double(gamma_.dim()));
    };
    while (multiplier > 1 && nodes(multiplier) > 4096.0) --multiplier;
    fine = (resolution - 1) * multiplier + 1;
  }
  fine_grid_ = gamma_.grid(fine);
  fine_velocity_.reserve(fine_grid_.size());
  fine_cost_.reserve(fine_grid_.size());
  for (const Vec& u : fine_grid_) {
    fine_velocity_.push_back(system.dynamics(t_, x_, u));
    fine_cost_.push_back(system.running_cost(t_, x_, u));
  }
}

double OrientorMembership::gap(double z0, const Vec& velocity) const {
  const Manifold& m = *x_.manifold;
  const auto distance_sq = [&](const Vec& f, double cost) {
    const Vec dv = velocity - f;
    const double dx2 = m.inner(x_.rep, dv, dv);
    const double dz = std::max(0.0, cost - z0);  // upward z0 slack is free
    return dx2 + dz * dz;
  };

  std::size_t best = 0;
  std::vector<double> coarse(fine_grid_.size());
  double best_sq = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < fine_grid_.size(); ++i) {
    coarse[i] = distance_sq(fine_velocity_[i], fine_cost_[i]);
    if (coarse[i] < best_sq) {  // strict: lowest index wins ties
      best_sq = coarse[i];
      best = i;
    }
  }
  double result_sq = best_sq;
  if (gamma_.kind() == ControlSet::Kind::finite || options_.polish_iterations <= 0 ||
      std::sqrt(std::max(0.0, result_sq)) <= options_.skip_polish_below)
    return std::sqrt(std::max(0.0, result_sq));

  const int dim = gamma_.dim();
  const double span = 2.0 * gamma_.bounding_radius();
  const double scale =
      std::max(1e-6, span / std::max(1, static_cast<int>(std::round(
                                            std::pow(double(fine_grid_.size()), 1.0 / dim)))));

  // Basin-diverse polish starts: the best node plus runners-up that sit far
  // from the already-chosen starts (the velocity map can fold distinct
  // control regions onto nearby points, with different costs).
  std::vector<std::size_t> starts{best};
  while (starts.size() < 3) {
    std::size_t pick = fine_grid_.size();
    double pick_sq = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < fine_grid_.size(); ++i) {
      if (coarse[i] >= pick_sq) continue;
      bool separated = true;
      for (std::size_t s : starts)
        if ((fine_grid_[i] - fine_grid_[s]).norm() < 2.5 * scale) separated = false;
      if (separated) {
        pick_sq = coarse[i];
        pick = i;
      }
    }
    if (pick == fine_grid_.size()) break;
    starts.push_back(pick);
  }

  NelderMeadOptions nm;
  nm.max_iterations = options_.polish_iterations;
  nm.f_tolerance = 1e-14;
  nm.x_tolerance = 1e-10;
  const auto objective = [&](const Eigen::VectorXd& raw) {
    Vec u(dim);
    for (int i = 0; i < dim; ++i) u[i] = raw[i];
    // Distance-to-set term keeps the simplex off boundary plateaus that the
    // plain projection would create.
    const double outside = gamma_.distance_to(u);
    u = gamma_.project(std::move(u));
    return distance_sq(system_.dynamics(t_, x_, u), system_.running_cost(t_, x_, u)) +
           outside * outside;
  };
  for (std::size_t s : starts) {
    const NelderMeadResult polished = nelder_mead(
        objective, Eigen::VectorXd(fine_grid_[s]), Eigen::VectorXd::Constant(dim, scale), nm);
    Vec u_best(dim);
    for (int i = 0; i < dim; ++i) u_best[i] = polished.best[i];
    u_best = gamma_.project(std::move(u_best));
    result_sq = std::min(result_sq, distance_sq(system_.dynamics(t_, x_, u_best),
                                                system_.running_cost(t_, x_, u_best)));
    if (std::sqrt(std::max(0.0, result_sq)) <= options_.skip_polish_below) break;
  }
  return std::sqrt(std::max(0.0, result_sq));
}

// ---------------------------------------------------------------------------
// Convexity verdict

ConvexityVerdict check_convex(const ControlSystem& system, const OrientorSample& sample,
                              int trials, double tolerance, std::uint64_t seed,
                              const MembershipOptions& options) {
  if (sample.points.empty()) throw ContractViolation("check_convex: empty orientor sample");
  if (trials < 1) throw ContractViolation("check_convex: need at least one trial");

  MembershipOptions opts = options;
  if (opts.skip_polish_below == 0.0) opts.skip_polish_below = 0.25 * tolerance;
  const OrientorMembership membership(system, sample.t, sample.x,
                                      std::max(2, sample.resolution), opts);

  ConvexityVerdict verdict;
  verdict.trials = trials;
  Rng rng(seed);
  const std::size_t n = sample.points.size();
  for (int trial = 0; trial < trials; ++trial) {
    const std::size_t i = rng.below(n);
    const std::size_t j = rng.below(n);
    const double lambda = rng.uniform();
    const OrientorPoint& p = sample.points[i];
    const OrientorPoint& q = sample.points[j];
    const double z0 = lambda * p.z0 + (1.0 - lambda) * q.z0;
    const Vec velocity = lambda * p.velocity + (1.0 - lambda) * q.velocity;
    const double gap = membership.gap(z0, velocity);
    if (gap > verdict.worst_gap) {
      verdict.worst_gap = gap;
      ConvexityWitness witness;
      witness.first_index = static_cast<int>(i);
      witness.second_index = static_cast<int>(j);
      witness.lambda = lambda;
      witness.gap = gap;
      verdict.witness = witness;
    }
  }

  const ControlSet gamma = system.gamma(sample.t, sample.x);
  if (verdict.worst_gap > tolerance) {
    verdict.result = ConvexityVerdict::Result::fail;
  } else {
    verdict.result = gamma.closed_and_bounded() ? ConvexityVerdict::Result::pass
                                                : ConvexityVerdict::Result::inconclusive;
    verdict.witness.reset();
  }
  return verdict;
}

// ---------------------------------------------------------------------------
// Finite-delta Cesari probe

CesariProbeReport check_cesari_local(const ControlSystem& system, double t, const Point& x,
                                     std::vector<double> deltas, int resolution,
                                     double tolerance, std::uint64_t seed,
                                     const CesariProbeOptions& options) {
  if (deltas.empty()) throw ContractViolation("check_cesari_local: empty delta list");
  const Manifold& m = *system.manifold;
  const double bound = m.injectivity_lower_bound(x.rep);
  for (double d : deltas)
    if (!(d > 0.0) || d >= bound)
      throw OutsideInjectivityRadius(
          "check_cesari_local: delta must lie in (0, injectivity bound)");
  std::sort(deltas.begin(), deltas.end(), std::greater<double>());

  MembershipOptions mopts = options.membership;
  if (mopts.skip_polish_below == 0.0) mopts.skip_polish_below = 0.1 * tolerance;
  const OrientorMembership membership(system, t, x, resolution, mopts);

  CesariProbeReport report;
  report.tolerance = tolerance;
  Rng rng(seed);

  for (double delta : deltas) {
    // Union of L_{yx} E(t, y) over sampled y with rho(y, x) < delta; the
    // center sample (y = x) is always a member of the union.
    std::vector<OrientorPoint> cloud = sample_orientor(system, t, x, resolution).points;
    for (int k = 0; k < options.nearby_points; ++k) {
      Vec dir;
      double dn = 0.0;
      do {
        dir = m.project_tangent(x.rep, rng.unit_vector(m.rep_dim()));
        dn = std::sqrt(m.inner(x.rep, dir, dir));
      } while (dn < 1e-12);
      dir /= dn;
      const double radius = delta * rng.uniform(0.25, 0.999);
      const Tangent w = m.tangent(x, radius * dir);

      // Transport w along its own geodesic to obtain y and log_y(x) = -w(1).
      const std::vector<Tangent> arrival =
          parallel_transport_along(x, w, {w}, options.shooting.geodesic);
      const Point y = arrival.front().base;
      const OrientorSample at_y = sample_orientor(system, t, y, resolution);
      std::vector<Tangent> fields;
      fields.reserve(at_y.points.size());
      for (const OrientorPoint& p : at_y.points) fields.push_back(m.tangent(y, p.velocity));
      const Tangent back = m.tangent(y, -arrival.front().comp);
      const std::vector<Tangent> moved =
          parallel_transport_along(y, back, fields, options.shooting.geodesic);
      for (std::size_t i = 0; i < moved.size(); ++i) {
        OrientorPoint p = at_y.points[i];
        p.velocity = m.project_tangent(x.rep, moved[i].comp);
        cloud.push_back(std::move(p));
      }
    }

    // One-sided deviation of the cloud's convex hull from E(t, x): every
    // cloud point plus random convex combinations.
    double deviation = 0.0;
    for (const OrientorPoint& p : cloud)
      deviation = std::max(deviation, membership.gap(p.z0, p.velocity));
    const std::size_t n = cloud.size();
    for (int trial = 0; trial < options.combination_trials; ++trial) {
      const int k = 2 + static_cast<int>(rng.below(3));
      double z0 = 0.0;
      Vec velocity = Vec::Zero(m.rep_dim());
      double total = 0.0;
      std::vector<double> weights(k);
      for (int a = 0; a < k; ++a) {
        weights[a] = -std::log(std::max(1e-300, 1.0 - rng.uniform()));
        total += weights[a];
      }
      for (int a = 0; a < k; ++a) {
        const OrientorPoint& p = cloud[rng.below(n)];
        const double w = weights[a] / total;
        z0 += w * p.z0;
        velocity += w * p.velocity;
      }
      deviation = std::max(deviation, membership.gap(z0, velocity));
    }
    report.deltas.push_back(delta);
    report.deviations.push_back(deviation);
  }

  report.monotone = true;
  for (std::size_t i = 0; i + 1 < report.deviations.size(); ++i)
    if (report.deviations[i + 1] > report.deviations[i] + 1e-12) report.monotone = false;
  report.pass = report.deviations.back() <= tolerance;
  return report;
}

}  // namespace riemctl
