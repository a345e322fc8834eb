#include "riemctl/verify.hpp"

#include <chrono>
#include <cmath>

#include "riemctl/manifolds.hpp"
#include "riemctl/reference.hpp"

namespace riemctl {

namespace {

constexpr double kPi = 3.14159265358979323846;

Point sample_point(const Manifold& m, Rng& rng) {
  if (m.name() == "s2") return m.point(rng.unit_vector(3));
  Vec rep(3);
  rep[0] = rng.uniform(-2.0, 2.0);
  rep[1] = rng.uniform(-2.0, 2.0);
  rep[2] = std::exp(rng.uniform(std::log(0.3), std::log(5.0)));
  return m.point(rep);
}

Tangent unit_tangent(const Point& x, Rng& rng) {
  const Manifold& m = *x.manifold;
  Vec v;
  double n = 0.0;
  do {
    v = m.project_tangent(x.rep, rng.unit_vector(m.rep_dim()));
    n = std::sqrt(m.inner(x.rep, v, v));
  } while (n < 1e-12);
  return m.tangent(x, v / n);
}

}  // namespace

GeometrySuiteReport run_geometry_suite(const std::string& manifold_id, int trials,
                                       std::uint64_t seed) {
  if (trials < 1) throw ConfigError("verify-geometry: need at least one trial");
  const Manifold* manifold = nullptr;
  if (manifold_id == "h3")
    manifold = &hyperbolic3();
  else if (manifold_id == "s2")
    manifold = &sphere2();
  else
    throw ConfigError("verify-geometry: unknown manifold '" + manifold_id + "'");
  const Manifold& m = *manifold;
  const bool is_sphere = manifold_id == "s2";

  const auto t_begin = std::chrono::steady_clock::now();
  GeometrySuiteReport report;
  report.manifold = manifold_id;
  report.trials = trials;
  report.seed = seed;

  Rng rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    const Point x = sample_point(m, rng);
    const double reach = is_sphere ? 0.9 * kPi : 3.0;

    // exp/log roundtrip within the injectivity bound
    const double r = rng.uniform(0.01, reach);
    const Tangent v = m.tangent(x, r * unit_tangent(x, rng).comp);
    const Point y = exp_map(x, v);
    const Tangent w = log_map(x, y);
    {
      const Vec gap = w.comp - v.comp;
      report.worst_explog_roundtrip = std::max(
          report.worst_explog_roundtrip, std::sqrt(std::max(0.0, m.inner(x.rep, gap, gap))));
    }

    // transport isometry for a co-transported pair
    const Tangent a = m.tangent(x, rng.uniform(0.25, 2.0) * unit_tangent(x, rng).comp);
    const Tangent b = m.tangent(x, rng.uniform(0.25, 2.0) * unit_tangent(x, rng).comp);
    const std::vector<Tangent> moved = parallel_transport_along(x, v, {a, b});
    const Point& z = moved.front().base;
    report.worst_transport_isometry =
        std::max(report.worst_transport_isometry,
                 std::abs(m.inner(z.rep, moved[0].comp, moved[1].comp) -
                          m.inner(x.rep, a.comp, b.comp)));

    if (is_sphere) {
      const Vec expected = reference::s2_transport(x.rep, y.rep, a.comp);
      report.worst_transport_vs_reference =
          std::max(report.worst_transport_vs_reference, (moved[0].comp - expected).norm());
    } else {
      const double bvp = distance(x, y);
      report.worst_distance_vs_reference =
          std::max(report.worst_distance_vs_reference,
                   std::abs(bvp - reference::h3_distance(x.rep, y.rep)));
    }

    // constant-speed residual along a sampled geodesic
    if (trial % 16 == 0) {
      const GeodesicSegment segment = trace_geodesic(x, v, std::max(0.05, r / 16.0));
      for (std::size_t i = 0; i < segment.points.size(); ++i) {
        const double s = std::sqrt(m.inner(segment.points[i].rep, segment.velocities[i],
                                           segment.velocities[i]));
        report.worst_speed_drift =
            std::max(report.worst_speed_drift, std::abs(s - r) / std::max(r, 1e-12));
      }
    }
  }

  report.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_begin)
          .count();
  return report;
}

}  // namespace riemctl
