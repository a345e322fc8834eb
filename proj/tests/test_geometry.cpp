#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>

#include "riemctl/geometry.hpp"
#include "riemctl/manifolds.hpp"
#include "riemctl/reference.hpp"
#include "support/oracles.hpp"

using namespace riemctl;

namespace {
const double kE = std::exp(1.0);
}

TEST_CASE("metric inner product on the half-space") {
  const auto& h3 = hyperbolic3();
  const Point origin = h3.point(make_vec({0.0, 0.0, 1.0}));
  const Tangent e3 = h3.tangent(origin, make_vec({0.0, 0.0, 1.0}));
  CHECK(metric_inner(origin, e3, e3) == doctest::Approx(1.0).epsilon(1e-14));

  const Point lifted = h3.point(make_vec({0.0, 0.0, 2.0}));
  const Tangent v2 = h3.tangent(lifted, make_vec({0.0, 0.0, 2.0}));
  CHECK(metric_inner(lifted, v2, v2) == doctest::Approx(1.0).epsilon(1e-14));

  const Tangent zero = h3.tangent(lifted, make_vec({0.0, 0.0, 0.0}));
  const Tangent any = h3.tangent(lifted, make_vec({0.3, -1.2, 0.7}));
  CHECK(metric_inner(lifted, any, zero) == 0.0);

  // symmetry and bilinearity on random data
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const Point x = oracles::random_h3_point(rng);
    const Tangent a = h3.tangent(x, rng.unit_vector(3));
    const Tangent b = h3.tangent(x, rng.unit_vector(3));
    CHECK(metric_inner(x, a, b) == doctest::Approx(metric_inner(x, b, a)).epsilon(1e-14));
    const Tangent sum = h3.tangent(x, a.comp + 2.0 * b.comp);
    CHECK(metric_inner(x, sum, b) ==
          doctest::Approx(metric_inner(x, a, b) + 2.0 * metric_inner(x, b, b)).epsilon(1e-12));
  }
}

TEST_CASE("tangent norms") {
  const auto& h3 = hyperbolic3();
  const Point x = h3.point(make_vec({0.0, 0.0, 2.0}));
  CHECK(tangent_norm(x, h3.tangent(x, make_vec({2.0, 0.0, 0.0}))) ==
        doctest::Approx(1.0).epsilon(1e-14));

  const auto& s2 = sphere2();
  const Point n = s2.point(make_vec({0.0, 0.0, 1.0}));
  CHECK(tangent_norm(n, s2.tangent(n, make_vec({1.0, 0.0, 0.0}))) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(tangent_norm(n, s2.tangent(n, make_vec({0.0, 0.0, 0.0}))) == 0.0);
}

TEST_CASE("mismatched tangent bases are rejected") {
  const auto& h3 = hyperbolic3();
  const Point a = h3.point(make_vec({0.0, 0.0, 1.0}));
  const Point b = h3.point(make_vec({0.0, 0.0, 2.0}));
  const Tangent u = h3.tangent(a, make_vec({1.0, 0.0, 0.0}));
  const Tangent v = h3.tangent(b, make_vec({1.0, 0.0, 0.0}));
  CHECK_THROWS_AS((void)metric_inner(a, u, v), ContractViolation);
}

TEST_CASE("hyperbolic Christoffel symbols match the closed form") {
  const auto& h3 = hyperbolic3();
  const Point x = h3.point(make_vec({0.0, 0.0, 2.0}));
  const ChristoffelTable table = christoffel(x);
  CHECK(table.at(2, 0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(table.at(0, 0, 2) == doctest::Approx(-0.5).epsilon(1e-15));

  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Point p = oracles::random_h3_point(rng);
    const ChristoffelTable t = christoffel(p);
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(t.at(k, i, j) == t.at(k, j, i));
  }
}

TEST_CASE("generic finite-difference Christoffel agrees with the closed forms") {
  // Exercises the default metric-derivative route on both curved backends
  // (metric compatibility of the analytic tables).
  oracles::GenericFallback h3(hyperbolic3());
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Point p = oracles::random_h3_point(rng);
    const ChristoffelTable analytic = hyperbolic3().christoffel(0, p.rep);
    const ChristoffelTable generic = h3.christoffel(0, p.rep);
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          CHECK(generic.at(k, i, j) == doctest::Approx(analytic.at(k, i, j)).epsilon(1e-4));
  }

  oracles::GenericFallback s2(sphere2());
  for (int trial = 0; trial < 10; ++trial) {
    const Point p = oracles::random_s2_point(rng);
    const int chart = sphere2().default_chart(p.rep);
    const Vec q = sphere2().to_chart(chart, p.rep);
    const ChristoffelTable analytic = sphere2().christoffel(chart, q);
    const ChristoffelTable generic = s2.christoffel(chart, q);
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          CHECK(generic.at(k, i, j) ==
                doctest::Approx(analytic.at(k, i, j)).epsilon(1e-4).scale(1.0));
  }
}

TEST_CASE("exponential map") {
  const auto& h3 = hyperbolic3();
  const auto& s2 = sphere2();

  SUBCASE("zero vector is a fixed point") {
    const Point x = h3.point(make_vec({0.4, -1.0, 3.0}));
    const Point y = exp_map(x, h3.tangent(x, make_vec({0.0, 0.0, 0.0})));
    CHECK((y.rep - x.rep).norm() == 0.0);
  }

  SUBCASE("sphere quarter great circle") {
    const Point n = s2.point(make_vec({0.0, 0.0, 1.0}));
    const Tangent v = s2.tangent(n, make_vec({oracles::kPi / 2.0, 0.0, 0.0}));
    const Point y = exp_map(n, v);
    const Vec expected = reference::s2_exp(n.rep, v.comp);
    CHECK((y.rep - expected).norm() < 1e-9);
    CHECK((y.rep - make_vec({1.0, 0.0, 0.0})).norm() < 1e-9);
  }

  SUBCASE("vertical hyperbolic geodesic") {
    const Point x = h3.point(make_vec({0.0, 0.0, 1.0}));
    const Point y = exp_map(x, h3.tangent(x, make_vec({0.0, 0.0, 1.0})));
    CHECK((y.rep - make_vec({0.0, 0.0, kE})).norm() < 1e-9);
  }
}

TEST_CASE("logarithmic map") {
  const auto& h3 = hyperbolic3();
  const auto& s2 = sphere2();

  SUBCASE("log of the base point is zero") {
    const Point x = h3.point(make_vec({0.2, 0.1, 0.9}));
    const Tangent v = log_map(x, x);
    CHECK(v.comp.norm() == 0.0);
  }

  SUBCASE("sphere quarter great circle") {
    const Point n = s2.point(make_vec({0.0, 0.0, 1.0}));
    const Point e1 = s2.point(make_vec({1.0, 0.0, 0.0}));
    const Tangent v = log_map(n, e1);
    CHECK((v.comp - make_vec({oracles::kPi / 2.0, 0.0, 0.0})).norm() < 1e-7);
  }

  SUBCASE("vertical hyperbolic geodesic") {
    const Point x = h3.point(make_vec({0.0, 0.0, 1.0}));
    const Point y = h3.point(make_vec({0.0, 0.0, kE}));
    const Tangent v = log_map(x, y);
    CHECK((v.comp - make_vec({0.0, 0.0, 1.0})).norm() < 1e-7);
  }

  SUBCASE("targets beyond the injectivity bound are rejected") {
    const Point n = s2.point(make_vec({0.0, 0.0, 1.0}));
    const Point s = s2.point(make_vec({0.0, 0.0, -1.0}));
    CHECK_THROWS_AS((void)log_map(n, s), OutsideInjectivityRadius);
  }

  SUBCASE("non-convergence carries diagnostics") {
    const Point x = h3.point(make_vec({0.0, 0.0, 1.0}));
    const Point y = h3.point(make_vec({1.5, -0.7, 2.5}));
    ShootingOptions opts;
    opts.max_newton = 0;
    bool thrown = false;
    try {
      (void)log_map(x, y, opts);
    } catch (const GeodesicSolveError& err) {
      thrown = true;
      CHECK(err.starts_tried > 0);
      CHECK(err.best_residual > 0.0);
    }
    CHECK(thrown);
  }

  SUBCASE("absurd geodesic lengths exhaust the step budget") {
    const Point x = h3.point(make_vec({0.0, 0.0, 1.0}));
    const Tangent v = h3.tangent(x, make_vec({0.0, 0.0, 1e6}));
    CHECK_THROWS_AS((void)exp_map(x, v), IntegrationError);
  }
}

TEST_CASE("distance") {
  const auto& h3 = hyperbolic3();
  const auto& s2 = sphere2();

  const Point a = h3.point(make_vec({0.0, 0.0, 1.0}));
  const Point b = h3.point(make_vec({0.0, 0.0, kE}));
  CHECK(distance(a, b) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(distance(a, a) == 0.0);

  const Point n = s2.point(make_vec({0.0, 0.0, 1.0}));
  const Point e1 = s2.point(make_vec({1.0, 0.0, 0.0}));
  CHECK(distance(n, e1) == doctest::Approx(oracles::kPi / 2.0).epsilon(1e-8));

  SUBCASE("symmetry and triangle inequality on sampled triples") {
    Rng rng(23);
    for (int trial = 0; trial < 10; ++trial) {
      const Point x = oracles::random_h3_point(rng);
      const Point y = exp_map(x, h3.tangent(
                                     x, rng.uniform(0.1, 1.5) *
                                            oracles::random_unit_tangent(x, rng).comp));
      const Point z = exp_map(x, h3.tangent(
                                     x, rng.uniform(0.1, 1.5) *
                                            oracles::random_unit_tangent(x, rng).comp));
      const double dxy = distance(x, y);
      const double dyx = distance(y, x);
      CHECK(dxy == doctest::Approx(dyx).epsilon(1e-6));
      CHECK(distance(x, z) <= dxy + distance(y, z) + 1e-6);
    }
  }
}

TEST_CASE("hyperbolic distance matches the arccosh oracle on 100 random pairs") {
  const auto& h3 = hyperbolic3();
  Rng rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Point x = oracles::random_h3_point(rng);
    const double rho = rng.uniform(0.05, 3.0);
    const Point y =
        exp_map(x, h3.tangent(x, rho * oracles::random_unit_tangent(x, rng).comp));
    const double bvp = distance(x, y);
    const double closed = reference::h3_distance(x.rep, y.rep);
    worst = std::max(worst, std::abs(bvp - closed));
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("parallel transport") {
  const auto& h3 = hyperbolic3();
  const auto& s2 = sphere2();

  SUBCASE("transport to the same point is the identity") {
    const Point x = h3.point(make_vec({0.3, 0.4, 2.0}));
    const Tangent v = h3.tangent(x, make_vec({0.5, -0.2, 0.9}));
    const Tangent moved = parallel_transport(x, x, v);
    CHECK((moved.comp - v.comp).norm() == 0.0);
  }

  SUBCASE("sphere: transport along the x-z great circle") {
    const Point n = s2.point(make_vec({0.0, 0.0, 1.0}));
    const Point e1 = s2.point(make_vec({1.0, 0.0, 0.0}));
    const Tangent v = s2.tangent(n, make_vec({0.0, 1.0, 0.0}));
    const Tangent moved = parallel_transport(n, e1, v);
    CHECK((moved.comp - make_vec({0.0, 1.0, 0.0})).norm() < 1e-8);
  }

  SUBCASE("half-space: transport up the vertical geodesic") {
    const Point x = h3.point(make_vec({0.0, 0.0, 1.0}));
    const Point y = h3.point(make_vec({0.0, 0.0, kE}));
    const Tangent v = h3.tangent(x, make_vec({1.0, 0.0, 0.0}));
    const Tangent moved = parallel_transport(x, y, v);
    CHECK((moved.comp - make_vec({kE, 0.0, 0.0})).norm() < 1e-7);
  }
}

TEST_CASE("transport isometry property") {
  Rng rng(31);
  const auto& s2 = sphere2();
  const auto& h3 = hyperbolic3();
  double worst = 0.0;
  for (int trial = 0; trial < 25; ++trial) {
    const bool on_sphere = trial % 2 == 0;
    const Point x = on_sphere ? oracles::random_s2_point(rng) : oracles::random_h3_point(rng);
    const Manifold& m = on_sphere ? static_cast<const Manifold&>(s2)
                                  : static_cast<const Manifold&>(h3);
    const double max_r = on_sphere ? 0.9 * oracles::kPi : 2.5;
    const Point y = exp_map(
        x, m.tangent(x, rng.uniform(0.05, max_r) * oracles::random_unit_tangent(x, rng).comp));
    const Tangent u = m.tangent(x, rng.uniform(0.2, 2.0) *
                                       oracles::random_unit_tangent(x, rng).comp);
    const Tangent v = m.tangent(x, rng.uniform(0.2, 2.0) *
                                       oracles::random_unit_tangent(x, rng).comp);
    const Tangent lu = parallel_transport(x, y, u);
    const Tangent lv = parallel_transport(x, y, v);
    worst = std::max(worst,
                     std::abs(metric_inner(y, lu, lv) - metric_inner(x, u, v)));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("sphere transport matches the rotation oracle") {
  Rng rng(37);
  const auto& s2 = sphere2();
  double worst = 0.0;
  for (int trial = 0; trial < 40; ++trial) {
    const Point x = oracles::random_s2_point(rng);
    const Point y = exp_map(
        x, s2.tangent(x, rng.uniform(0.05, 0.9 * oracles::kPi) *
                             oracles::random_unit_tangent(x, rng).comp));
    const Tangent u = s2.tangent(x, rng.uniform(0.2, 2.0) *
                                        oracles::random_unit_tangent(x, rng).comp);
    const Tangent moved = parallel_transport(x, y, u);
    const Vec expected = reference::s2_transport(x.rep, y.rep, u.comp);
    worst = std::max(worst, (moved.comp - expected).norm());
    CHECK(std::abs(y.rep.dot(moved.comp)) < 1e-10);  // tangency of the result
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("exp/log inversion within the injectivity bound") {
  Rng rng(41);
  double worst = 0.0;
  for (int trial = 0; trial < 30; ++trial) {
    const bool on_sphere = trial % 2 == 0;
    const Point x = on_sphere ? oracles::random_s2_point(rng) : oracles::random_h3_point(rng);
    const Manifold& m = *x.manifold;
    const double max_r = on_sphere ? 0.9 * oracles::kPi : 3.0;
    const Tangent v = m.tangent(x, rng.uniform(0.01, max_r) *
                                       oracles::random_unit_tangent(x, rng).comp);
    const Point y = exp_map(x, v);
    const Tangent w = log_map(x, y);
    const Vec gap = w.comp - v.comp;
    worst = std::max(worst, std::sqrt(m.inner(x.rep, gap, gap)));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("geodesic segments keep constant speed") {
  Rng rng(43);
  for (int trial = 0; trial < 6; ++trial) {
    const Point x = trial % 2 == 0 ? oracles::random_s2_point(rng)
                                   : oracles::random_h3_point(rng);
    const Manifold& m = *x.manifold;
    const double speed = rng.uniform(0.5, 2.0);
    const Tangent v = m.tangent(x, speed * oracles::random_unit_tangent(x, rng).comp);
    const GeodesicSegment segment = trace_geodesic(x, v, 0.05);
    REQUIRE(segment.points.size() > 5);
    for (std::size_t i = 0; i < segment.points.size(); ++i) {
      const double s = std::sqrt(m.inner(segment.points[i].rep, segment.velocities[i],
                                         segment.velocities[i]));
      CHECK(std::abs(s - speed) / speed < 1e-6);
    }
  }
}

TEST_CASE("chart roundtrip reproduces points to 1e-12") {
  Rng rng(47);
  const auto& s2 = sphere2();
  for (int trial = 0; trial < 200; ++trial) {
    const Point x = oracles::random_s2_point(rng);
    for (int chart = 0; chart < 2; ++chart) {
      if (!s2.chart_contains(chart, x.rep)) continue;
      const Vec back = s2.from_chart(chart, s2.to_chart(chart, x.rep));
      CHECK((back - x.rep).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  const auto& h3 = hyperbolic3();
  const Point p = oracles::random_h3_point(rng);
  CHECK((h3.from_chart(0, h3.to_chart(0, p.rep)) - p.rep).norm() == 0.0);
}

TEST_CASE("chart tangent maps are mutually inverse") {
  Rng rng(53);
  const auto& s2 = sphere2();
  for (int trial = 0; trial < 100; ++trial) {
    const Point x = oracles::random_s2_point(rng);
    const int chart = s2.default_chart(x.rep);
    const Vec v = s2.project_tangent(x.rep, rng.unit_vector(3));
    const Vec w = s2.tangent_to_chart(chart, x.rep, v);
    const Vec back = s2.tangent_from_chart(chart, s2.to_chart(chart, x.rep), w);
    CHECK((back - v).norm() < 1e-12);
  }
}

TEST_CASE("metric is symmetric positive definite at sampled points") {
  Rng rng(59);
  for (int trial = 0; trial < 50; ++trial) {
    const Point x = trial % 2 == 0 ? oracles::random_s2_point(rng)
                                   : oracles::random_h3_point(rng);
    const Manifold& m = *x.manifold;
    const int chart = m.default_chart(x.rep);
    const Mat g = m.metric(chart, m.to_chart(chart, x.rep));
    CHECK((g - g.transpose()).cwiseAbs().maxCoeff() == 0.0);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig{Eigen::MatrixXd(g)};
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
  }
}

namespace {

// User-style manifold defined through the metric alone: the Poincare upper
// half-plane. Everything else (Christoffel symbols, geodesic acceleration,
// transport, inner products) comes from the Manifold base-class defaults.
class HalfPlane final : public Manifold {
 public:
  std::string name() const override { return "half-plane"; }
  int dim() const override { return 2; }
  int rep_dim() const override { return 2; }
  int chart_count() const override { return 1; }
  bool chart_contains(int, const Vec& rep) const override { return in_domain(rep); }
  int default_chart(const Vec&) const override { return 0; }
  Vec to_chart(int, const Vec& rep) const override { return rep; }
  Vec from_chart(int, const Vec& q) const override { return q; }
  Vec tangent_to_chart(int, const Vec&, const Vec& v) const override { return v; }
  Vec tangent_from_chart(int, const Vec&, const Vec& w) const override { return w; }
  Mat metric(int, const Vec& q) const override {
    Mat g = Mat::Zero(2, 2);
    g(0, 0) = g(1, 1) = 1.0 / (q[1] * q[1]);
    return g;
  }
  double injectivity_lower_bound(const Vec&) const override { return kUnboundedRadius; }
  bool in_domain(const Vec& rep) const override { return rep.size() == 2 && rep[1] > 0.0; }
};

double half_plane_distance(const Vec& a, const Vec& b) {
  return std::acosh(1.0 + (a - b).squaredNorm() / (2.0 * a[1] * b[1]));
}

}  // namespace

TEST_CASE("metric-only manifolds run through the finite-difference defaults") {
  const HalfPlane plane;
  Rng rng(61);
  for (int trial = 0; trial < 8; ++trial) {
    Vec rep(2);
    rep[0] = rng.uniform(-2.0, 2.0);
    rep[1] = std::exp(rng.uniform(std::log(0.5), std::log(3.0)));
    const Point x = plane.point(rep);

    const Tangent v = plane.tangent(
        x, rng.uniform(0.1, 2.0) * oracles::random_unit_tangent(x, rng).comp);
    const Point y = exp_map(x, v);
    CHECK(distance(x, y) ==
          doctest::Approx(half_plane_distance(x.rep, y.rep)).epsilon(1e-6));

    const Tangent w = log_map(x, y);
    CHECK((w.comp - v.comp).norm() < 1e-6);

    const Tangent u = plane.tangent(x, oracles::random_unit_tangent(x, rng).comp);
    const Tangent moved = parallel_transport(x, y, u);
    CHECK(metric_inner(y, moved, moved) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("euclidean backend: flat-space identities through the generic machinery") {
  const auto& en = euclidean(3);
  const Point x = en.point(make_vec({0.5, -1.0, 2.0}));
  const Point y = en.point(make_vec({-0.5, 0.25, 1.0}));
  CHECK(distance(x, y) == doctest::Approx((x.rep - y.rep).norm()).epsilon(1e-10));
  const Tangent v = en.tangent(x, make_vec({1.0, 2.0, -0.5}));
  const Point z = exp_map(x, v);
  CHECK((z.rep - (x.rep + v.comp)).norm() < 1e-10);
  const Tangent moved = parallel_transport(x, y, v);
  CHECK((moved.comp - v.comp).norm() < 1e-10);
}
