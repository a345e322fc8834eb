#include "riemctl/geometry.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace riemctl {

namespace {

constexpr double kSamePointTolerance = 1e-14;
constexpr std::uint64_t kShootingSeed = 0x5EEDC0FFEEull;

// Joint state of the geodesic flow and any co-transported vectors, in one
// chart's coordinates.
struct FlowState {
  int chart = 0;
  Vec q;
  Vec dq;
  std::vector<Vec> fields;
};

struct FlowDerivative {
  Vec dq;
  Vec ddq;
  std::vector<Vec> dfields;
};

FlowDerivative evaluate(const Manifold& m, const FlowState& s) {
  FlowDerivative d;
  d.dq = s.dq;
  d.ddq = m.geodesic_acceleration(s.chart, s.q, s.dq);
  d.dfields.reserve(s.fields.size());
  for (const Vec& X : s.fields)
    d.dfields.push_back(m.transport_derivative(s.chart, s.q, s.dq, X));
  return d;
}

FlowState advanced(const FlowState& s, const FlowDerivative& d, double h) {
  FlowState out;
  out.chart = s.chart;
  out.q = s.q + h * d.dq;
  out.dq = s.dq + h * d.ddq;
  out.fields.reserve(s.fields.size());
  for (std::size_t i = 0; i < s.fields.size(); ++i)
    out.fields.push_back(s.fields[i] + h * d.dfields[i]);
  return out;
}

void rk4_step(const Manifold& m, FlowState& s, double h) {
  const FlowDerivative k1 = evaluate(m, s);
  const FlowDerivative k2 = evaluate(m, advanced(s, k1, 0.5 * h));
  const FlowDerivative k3 = evaluate(m, advanced(s, k2, 0.5 * h));
  const FlowDerivative k4 = evaluate(m, advanced(s, k3, h));
  s.q += (h / 6.0) * (k1.dq + 2.0 * k2.dq + 2.0 * k3.dq + k4.dq);
  s.dq += (h / 6.0) * (k1.ddq + 2.0 * k2.ddq + 2.0 * k3.ddq + k4.ddq);
  for (std::size_t i = 0; i < s.fields.size(); ++i)
    s.fields[i] += (h / 6.0) * (k1.dfields[i] + 2.0 * k2.dfields[i] +
                                2.0 * k3.dfields[i] + k4.dfields[i]);
}

void switch_chart(const Manifold& m, FlowState& s, const Vec& rep, int next) {
  const Vec v_rep = m.tangent_from_chart(s.chart, s.q, s.dq);
  std::vector<Vec> fields_rep;
  fields_rep.reserve(s.fields.size());
  for (const Vec& X : s.fields) fields_rep.push_back(m.tangent_from_chart(s.chart, s.q, X));
  s.chart = next;
  s.q = m.to_chart(next, rep);
  s.dq = m.tangent_to_chart(next, rep, v_rep);
  for (std::size_t i = 0; i < s.fields.size(); ++i)
    s.fields[i] = m.tangent_to_chart(next, rep, fields_rep[i]);
}

using FlowObserver = std::function<void(double s, const FlowState&, const Vec& rep)>;

// Integrates the geodesic flow for `length` in arc-length parameter starting
// from unit-speed chart data. Throws IntegrationError when the state leaves
// every chart domain.
void run_flow(const Manifold& m, FlowState& s, double length, double step,
              const FlowObserver* observer) {
  if (length <= 0.0) return;
  constexpr long kMaxSteps = 400000;
  const long nsteps = std::max<long>(1, static_cast<long>(std::ceil(length / step)));
  if (nsteps > kMaxSteps)
    throw IntegrationError("geodesic flow exceeds the step budget (length " +
                               std::to_string(length) + ")",
                           0.0);
  const double h = length / static_cast<double>(nsteps);
  const bool multi_chart = m.chart_count() > 1;
  for (long i = 0; i < nsteps; ++i) {
    rk4_step(m, s, h);
    if (!s.q.allFinite())
      throw IntegrationError("geodesic flow produced a non-finite state",
                             static_cast<double>(i + 1) * h);
    if (multi_chart) {
      const Vec rep = m.from_chart(s.chart, s.q);
      const int next = m.select_chart(s.chart, rep);
      if (next != s.chart) switch_chart(m, s, rep, next);
      if (observer) (*observer)(static_cast<double>(i + 1) * h, s, rep);
    } else {
      if (!m.in_domain(s.q))
        throw IntegrationError("geodesic flow left the manifold domain of " + m.name(),
                               static_cast<double>(i + 1) * h);
      if (observer) (*observer)(static_cast<double>(i + 1) * h, s, s.q);
    }
  }
}

FlowState initial_flow_state(const Manifold& m, const Point& x, const Vec& unit_rep,
                             const std::vector<Vec>* fields_rep) {
  FlowState s;
  s.chart = m.chart_contains(x.chart, x.rep) ? x.chart : m.default_chart(x.rep);
  s.q = m.to_chart(s.chart, x.rep);
  s.dq = m.tangent_to_chart(s.chart, x.rep, unit_rep);
  if (fields_rep)
    for (const Vec& X : *fields_rep)
      s.fields.push_back(m.tangent_to_chart(s.chart, x.rep, X));
  return s;
}

double rep_gap(const Vec& a, const Vec& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

// ---------------------------------------------------------------------------
// Manifold defaults

int Manifold::select_chart(int current, const Vec& rep) const {
  if (chart_contains(current, rep)) return current;
  return default_chart(rep);
}

ChristoffelTable Manifold::christoffel(int chart, const Vec& coords) const {
  const int n = dim();
  const double h = 1e-5 * (1.0 + coords.cwiseAbs().maxCoeff());
  std::array<Mat, kMaxDim> dg;
  for (int l = 0; l < n; ++l) {
    Vec plus = coords, minus = coords;
    plus[l] += h;
    minus[l] -= h;
    dg[l] = (metric(chart, plus) - metric(chart, minus)) / (2.0 * h);
  }
  const Mat g_inv = metric(chart, coords).inverse();
  ChristoffelTable table(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double sum = 0.0;
        for (int l = 0; l < n; ++l)
          sum += g_inv(k, l) * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
        table.at(k, i, j) = 0.5 * sum;
        table.at(k, j, i) = table.at(k, i, j);
      }
  return table;
}

Vec Manifold::geodesic_acceleration(int chart, const Vec& coords, const Vec& velocity) const {
  return transport_derivative(chart, coords, velocity, velocity);
}

Vec Manifold::transport_derivative(int chart, const Vec& coords, const Vec& velocity,
                                   const Vec& field) const {
  const ChristoffelTable table = christoffel(chart, coords);
  const int n = table.n;
  Vec out = Vec::Zero(n);
  for (int k = 0; k < n; ++k) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) sum += table.at(k, i, j) * velocity[i] * field[j];
    out[k] = -sum;
  }
  return out;
}

double Manifold::inner(const Vec& rep, const Vec& u, const Vec& v) const {
  const int chart = default_chart(rep);
  const Vec q = to_chart(chart, rep);
  const Vec uc = tangent_to_chart(chart, rep, u);
  const Vec vc = tangent_to_chart(chart, rep, v);
  return uc.dot(metric(chart, q) * vc);
}

Point Manifold::point(Vec rep) const {
  if (rep.size() != rep_dim())
    throw ContractViolation(name() + ": point has representation dimension " +
                            std::to_string(rep.size()) + ", expected " +
                            std::to_string(rep_dim()));
  rep = project_point(std::move(rep));
  if (!in_domain(rep)) throw ContractViolation(name() + ": point outside the manifold domain");
  Point p;
  p.manifold = this;
  p.rep = std::move(rep);
  p.chart = default_chart(p.rep);
  return p;
}

Tangent Manifold::tangent(const Point& base, Vec comp) const {
  if (base.manifold != this)
    throw ContractViolation(name() + ": tangent base belongs to a different manifold");
  if (comp.size() != rep_dim())
    throw ContractViolation(name() + ": tangent has wrong representation dimension");
  Tangent t;
  t.base = base;
  t.comp = std::move(comp);
  return t;
}

// ---------------------------------------------------------------------------
// Pointwise operations

namespace detail {

void require_same_base(const Point& x, const Tangent& u, const char* where) {
  if (u.base.manifold != x.manifold)
    throw ContractViolation(std::string(where) + ": tangent based on a different manifold");
  if (rep_gap(u.base.rep, x.rep) > 1e-9 * (1.0 + x.rep.cwiseAbs().maxCoeff()))
    throw ContractViolation(std::string(where) + ": tangent based at a different point");
}

}  // namespace detail

double metric_inner(const Point& x, const Tangent& u, const Tangent& v) {
  detail::require_same_base(x, u, "metric_inner");
  detail::require_same_base(x, v, "metric_inner");
  return x.manifold->inner(x.rep, u.comp, v.comp);
}

double tangent_norm(const Point& x, const Tangent& u) {
  detail::require_same_base(x, u, "tangent_norm");
  return std::sqrt(std::max(0.0, x.manifold->inner(x.rep, u.comp, u.comp)));
}

ChristoffelTable christoffel(const Point& x) {
  const Manifold& m = *x.manifold;
  const int chart = m.chart_contains(x.chart, x.rep) ? x.chart : m.default_chart(x.rep);
  return m.christoffel(chart, m.to_chart(chart, x.rep));
}

Point exp_map(const Point& x, const Tangent& v, const GeodesicOptions& options) {
  detail::require_same_base(x, v, "exp_map");
  const Manifold& m = *x.manifold;
  const double length = std::sqrt(std::max(0.0, m.inner(x.rep, v.comp, v.comp)));
  if (length < kSamePointTolerance) return x;
  const Vec unit = v.comp / length;
  FlowState s = initial_flow_state(m, x, unit, nullptr);
  run_flow(m, s, length, options.step, nullptr);
  Point out;
  out.manifold = &m;
  out.rep = m.project_point(m.from_chart(s.chart, s.q));
  out.chart = s.chart;
  return out;
}

GeodesicSegment trace_geodesic(const Point& x, const Tangent& v, double sample_step,
                               const GeodesicOptions& options) {
  detail::require_same_base(x, v, "trace_geodesic");
  const Manifold& m = *x.manifold;
  GeodesicSegment segment;
  segment.start = x;
  segment.initial = v;
  segment.length = std::sqrt(std::max(0.0, m.inner(x.rep, v.comp, v.comp)));
  segment.step = sample_step;
  segment.params.push_back(0.0);
  segment.points.push_back(x);
  segment.velocities.push_back(v.comp);
  if (segment.length < kSamePointTolerance) return segment;

  const Vec unit = v.comp / segment.length;
  FlowState s = initial_flow_state(m, x, unit, nullptr);
  double next_sample = sample_step;
  const double speed = segment.length;  // record gamma' for the original parameter
  FlowObserver observer = [&](double param, const FlowState& state, const Vec& rep) {
    if (param + 1e-12 < next_sample) return;
    next_sample += sample_step;
    Point p;
    p.manifold = &m;
    p.rep = m.project_point(rep);
    p.chart = state.chart;
    segment.params.push_back(param);
    segment.velocities.push_back(speed *
                                 m.tangent_from_chart(state.chart, state.q, state.dq));
    segment.points.push_back(std::move(p));
  };
  run_flow(m, s, segment.length, options.step, &observer);
  return segment;
}

std::vector<Tangent> parallel_transport_along(const Point& x, const Tangent& v,
                                              const std::vector<Tangent>& fields,
                                              const GeodesicOptions& options) {
  detail::require_same_base(x, v, "parallel_transport_along");
  const Manifold& m = *x.manifold;
  std::vector<Vec> fields_rep;
  fields_rep.reserve(fields.size());
  for (const Tangent& f : fields) {
    detail::require_same_base(x, f, "parallel_transport_along");
    fields_rep.push_back(f.comp);
  }
  const double length = std::sqrt(std::max(0.0, m.inner(x.rep, v.comp, v.comp)));
  if (length < kSamePointTolerance) return fields;

  const Vec unit = v.comp / length;
  FlowState s = initial_flow_state(m, x, unit, &fields_rep);
  run_flow(m, s, length, options.step, nullptr);

  Point end;
  end.manifold = &m;
  end.rep = m.project_point(m.from_chart(s.chart, s.q));
  end.chart = s.chart;
  std::vector<Tangent> out;
  out.reserve(fields.size());
  for (const Vec& X : s.fields) {
    Tangent t;
    t.base = end;
    t.comp = m.project_tangent(end.rep, m.tangent_from_chart(s.chart, s.q, X));
    out.push_back(std::move(t));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Shooting boundary-value solve

namespace detail {

std::vector<ShootingSolution> solve_geodesic_bvp(const Point& x, const Point& y,
                                                 const ShootingOptions& options) {
  if (x.manifold != y.manifold)
    throw ContractViolation("geodesic solve: endpoints on different manifolds");
  const Manifold& m = *x.manifold;
  const int n = m.dim();

  std::vector<ShootingSolution> solutions;
  if (rep_gap(x.rep, y.rep) <= kSamePointTolerance * (1.0 + x.rep.cwiseAbs().maxCoeff())) {
    solutions.push_back({Vec::Zero(m.rep_dim()), 0.0});
    return solutions;
  }

  const int chart_x = m.chart_contains(x.chart, x.rep) ? x.chart : m.default_chart(x.rep);
  const Vec qx = m.to_chart(chart_x, x.rep);
  const Mat gx = m.metric(chart_x, qx);
  const int chart_y = m.default_chart(y.rep);
  const Vec eta = m.to_chart(chart_y, y.rep);
  const double tol = options.tolerance * (1.0 + eta.cwiseAbs().maxCoeff());

  const double bound = m.injectivity_lower_bound(x.rep);

  auto gnorm = [&](const Vec& w) { return std::sqrt(std::max(0.0, w.dot(gx * w))); };

  // Chord heuristic: the projected representation difference, in chart basis.
  const Vec chord_rep = m.project_tangent(x.rep, y.rep - x.rep);
  const Vec chord = m.tangent_to_chart(chart_x, x.rep, chord_rep);
  const double chord_norm = gnorm(chord);
  const double base_mag =
      chord_norm > 1e-12 ? chord_norm : std::min(1.0, 0.5 * std::min(bound, 2.0));
  const double max_length = std::max(50.0, 4.0 * base_mag);

  // Residual of exp_x(v) against y in chart_y coordinates.
  auto residual = [&](const Vec& w) -> std::optional<Vec> {
    const double len = gnorm(w);
    if (!std::isfinite(len) || len > max_length) return std::nullopt;
    if (len < kSamePointTolerance) {
      if (!m.chart_contains(chart_y, x.rep)) return std::nullopt;
      return Vec(m.to_chart(chart_y, x.rep) - eta);
    }
    FlowState s;
    s.chart = chart_x;
    s.q = qx;
    s.dq = w / len;
    try {
      run_flow(m, s, len, options.geodesic.step, nullptr);
    } catch (const IntegrationError&) {
      return std::nullopt;
    }
    const Vec rep = m.project_point(m.from_chart(s.chart, s.q));
    if (!m.chart_contains(chart_y, rep)) return std::nullopt;
    return Vec(m.to_chart(chart_y, rep) - eta);
  };

  // Multi-start list in chart-basis coordinates. The chord direction is the
  // leading guess, but its length can badly misestimate the arc (by up to
  // e^rho on the half-space, by 1/sinc on the sphere), so sweep magnitudes
  // along it: bound-scaled lengths when the injectivity bound is finite and a
  // geometric continuation ladder otherwise.
  std::vector<Vec> starts;
  if (options.initial_guess && options.initial_guess->size() == m.rep_dim())
    starts.push_back(m.tangent_to_chart(chart_x, x.rep, *options.initial_guess));
  if (chord_norm > 1e-12) {
    starts.push_back(chord);
    if (bound < kUnboundedRadius)
      for (double scale : {0.45, 0.7, 0.9})
        starts.push_back((scale * bound / chord_norm) * chord);
    else
      for (double scale : {0.3, 0.1, 0.04, 1.8, 3.0})
        starts.push_back(scale * chord);
  }
  Rng rng(kShootingSeed);
  while (static_cast<int>(starts.size()) < options.starts) {
    Vec dir_rep = m.project_tangent(x.rep, rng.unit_vector(m.rep_dim()));
    Vec dir = m.tangent_to_chart(chart_x, x.rep, dir_rep);
    const double dn = gnorm(dir);
    if (dn < 1e-12) continue;
    dir /= dn;
    double mag = base_mag * rng.uniform(0.4, 1.6);
    if (bound < kUnboundedRadius && starts.size() % 3 == 2)
      mag = bound * rng.uniform(0.3, 0.95);
    starts.push_back(mag * dir);
  }

  double best_residual = std::numeric_limits<double>::infinity();
  int tried = 0;
  for (const Vec& start : starts) {
    ++tried;
    Vec v = start;
    std::optional<Vec> r = residual(v);
    if (!r) continue;
    bool converged = false;
    for (int it = 0; it < options.max_newton; ++it) {
      const double rnorm = r->norm();
      best_residual = std::min(best_residual, rnorm);
      if (rnorm <= tol) {
        converged = true;
        break;
      }
      Mat jac(n, n);
      bool jac_ok = true;
      const double fd = 1e-7 * (1.0 + v.cwiseAbs().maxCoeff());
      for (int j = 0; j < n && jac_ok; ++j) {
        Vec vj = v;
        vj[j] += fd;
        const std::optional<Vec> rj = residual(vj);
        if (!rj) {
          jac_ok = false;
          break;
        }
        jac.col(j) = (*rj - *r) / fd;
      }
      if (!jac_ok) break;
      const Vec delta = jac.partialPivLu().solve(-*r);
      if (!delta.allFinite()) break;
      bool accepted = false;
      double alpha = 1.0;
      for (int bt = 0; bt < 7; ++bt, alpha *= 0.5) {
        const Vec vc = v + alpha * delta;
        const std::optional<Vec> rc = residual(vc);
        if (rc && rc->norm() < rnorm * (1.0 - 1e-4 * alpha)) {
          v = vc;
          r = rc;
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
    }
    if (converged && r->norm() <= tol) {
      ShootingSolution sol;
      sol.norm = gnorm(v);
      sol.tangent_rep = m.project_tangent(x.rep, m.tangent_from_chart(chart_x, qx, v));
      // Below the injectivity bound the connecting geodesic is unique and
      // minimizing; accept immediately.
      if (sol.norm < bound * (1.0 - 1e-9)) return {sol};
      bool duplicate = false;
      for (const ShootingSolution& other : solutions)
        if (std::abs(other.norm - sol.norm) < 1e-8 &&
            rep_gap(other.tangent_rep, sol.tangent_rep) < 1e-6)
          duplicate = true;
      if (!duplicate) solutions.push_back(std::move(sol));
    }
  }

  if (solutions.empty()) {
    std::ostringstream msg;
    msg << "geodesic boundary-value solve did not converge on " << m.name() << " ("
        << tried << " starts, best residual " << best_residual << ")";
    throw GeodesicSolveError(msg.str(), tried, best_residual);
  }
  std::stable_sort(solutions.begin(), solutions.end(),
                   [](const ShootingSolution& a, const ShootingSolution& b) {
                     return a.norm < b.norm;
                   });
  return solutions;
}

}  // namespace detail

Tangent log_map(const Point& x, const Point& y, const ShootingOptions& options) {
  const auto solutions = detail::solve_geodesic_bvp(x, y, options);
  const auto& best = solutions.front();
  if (best.norm >= x.manifold->injectivity_lower_bound(x.rep) * (1.0 - 1e-9))
    throw OutsideInjectivityRadius("log_map: target beyond the injectivity bound at x (rho=" +
                                   std::to_string(best.norm) + ")");
  Tangent t;
  t.base = x;
  t.comp = best.tangent_rep;
  return t;
}

double distance(const Point& x, const Point& y, const ShootingOptions& options) {
  return detail::solve_geodesic_bvp(x, y, options).front().norm;
}

Tangent parallel_transport(const Point& x, const Point& y, const Tangent& v,
                           const ShootingOptions& options) {
  detail::require_same_base(x, v, "parallel_transport");
  const auto solutions = detail::solve_geodesic_bvp(x, y, options);
  const auto& best = solutions.front();
  const double bound =
      std::min(x.manifold->injectivity_lower_bound(x.rep),
               y.manifold ? y.manifold->injectivity_lower_bound(y.rep) : kUnboundedRadius);
  if (best.norm >= bound * (1.0 - 1e-9))
    throw OutsideInjectivityRadius(
        "parallel_transport: endpoints farther apart than the injectivity bound (rho=" +
        std::to_string(best.norm) + ")");
  if (best.norm == 0.0) {
    Tangent t = v;
    return t;
  }
  Tangent direction;
  direction.base = x;
  direction.comp = best.tangent_rep;
  std::vector<Tangent> moved = parallel_transport_along(x, direction, {v}, options.geodesic);
  Tangent out;
  out.base = y;
  out.comp = x.manifold->project_tangent(y.rep, moved.front().comp);
  return out;
}

}  // namespace riemctl
